// Automorphism groups and orbit partitions, cross-checked against brute-force
// enumeration of all permutations.
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "aritylab/generators.hpp"
#include "aritylab/symmetry.hpp"
#include "oracle.hpp"

using namespace aritylab;

namespace {

std::vector<FiniteStructure> small_corpus() {
  return {pure_set(1), pure_set(2),        pure_set(3),       successor_cycle(3),
          successor_cycle(4), cyclic_order(3), cyclic_order(4), cyclic_order(5),
          tetra4()};
}

}  // namespace

TEST_CASE("group sizes match the documented examples", "[symmetry]") {
  REQUIRE(automorphisms(pure_set(3)).size() == 6);
  REQUIRE(automorphisms(cyclic_order(5)).size() == 5);
  REQUIRE(automorphisms(tetra4()).size() == 12);
  REQUIRE(automorphisms(successor_cycle(4)).size() == 4);
  REQUIRE(automorphisms(pure_set(6)).size() == 720);  // sampled closure check path
}

TEST_CASE("search agrees with filtering all permutations", "[symmetry]") {
  for (const FiniteStructure& s : small_corpus()) {
    AutomorphismGroup g = automorphisms(s);
    std::vector<Permutation> brute = oracle::automorphisms_brute(s);
    std::sort(brute.begin(), brute.end());
    std::vector<Permutation> mine = g.elements;
    std::sort(mine.begin(), mine.end());
    INFO(s.name);
    REQUIRE(mine == brute);
    REQUIRE(g.elements.front() == identity_permutation(s.universe));  // lex order: identity first
    REQUIRE(verify_group(g));
  }
}

TEST_CASE("universe cap on automorphism search", "[symmetry]") {
  REQUIRE_THROWS_AS(automorphisms(pure_set(9)), CapError);
}

TEST_CASE("orbit partitions match the documented examples", "[symmetry]") {
  REQUIRE(orbit_partition(pure_set(3), 2).count == 2);  // diagonal and off-diagonal
  const FiniteStructure t4 = tetra4();
  REQUIRE(orbit_partition(t4, 1).count == 1);
  REQUIRE(orbit_partition(t4, 2).count == 2);

  const OrbitPartition k3 = orbit_partition(t4, 3);
  REQUIRE(k3.count == 6);
  std::vector<Tuple> reps;
  for (std::size_t rep : k3.representatives) reps.push_back(decode_tuple(rep, 4, 3));
  REQUIRE(reps == std::vector<Tuple>{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 1, 2}, {0, 1, 3}});
  std::vector<int> sizes(6, 0);
  for (std::int32_t id : k3.orbit_of) sizes[static_cast<std::size_t>(id)]++;
  REQUIRE(sizes == std::vector<int>{4, 12, 12, 12, 12, 12});
}

TEST_CASE("orbit ids are invariant and representatives minimal", "[symmetry]") {
  for (const FiniteStructure& s : small_corpus()) {
    if (s.universe > 4) continue;
    AutomorphismGroup g = automorphisms(s);
    for (int k = 1; k <= 3; ++k) {
      OrbitPartition p = orbit_partition(g, k);
      // id(t) = id(g t) for every element and tuple.
      for (const Permutation& perm : g.elements)
        for (std::size_t idx = 0; idx < p.orbit_of.size(); ++idx)
          REQUIRE(p.orbit_of[apply_to_index(perm, idx, s.universe, k)] == p.orbit_of[idx]);
      // Representatives are the lexicographically least members, ids ordered by them.
      for (std::size_t id = 0; id < p.representatives.size(); ++id) {
        for (std::size_t idx = 0; idx < p.orbit_of.size(); ++idx)
          if (p.orbit_of[idx] == static_cast<std::int32_t>(id)) {
            REQUIRE(p.representatives[id] <= idx);
            break;
          }
        if (id) REQUIRE(p.representatives[id] > p.representatives[id - 1]);
      }
      // Distinct orbits are really unrelated by every group element.
      for (std::size_t a = 0; a < p.representatives.size(); ++a)
        for (std::size_t b = a + 1; b < p.representatives.size(); ++b)
          for (const Permutation& perm : g.elements)
            REQUIRE(apply_to_index(perm, p.representatives[a], s.universe, k) != p.representatives[b]);
    }
  }
}

TEST_CASE("definability is orbit-union membership", "[symmetry]") {
  const FiniteStructure pure3 = pure_set(3);
  Relation diag(3, 2);
  for (int i = 0; i < 3; ++i) diag.set(Tuple{i, i});
  REQUIRE(is_definable(pure3, diag));

  Relation singleton(3, 1);
  singleton.set(Tuple{0});
  REQUIRE_FALSE(is_definable(pure3, singleton));  // S_3 moves 0

  const FiniteStructure t4 = tetra4();
  REQUIRE(is_definable(t4, t4.relation("R")));

  REQUIRE_THROWS_AS(is_definable(pure3, Relation(4, 1)), InputError);  // wrong universe
}

TEST_CASE("orbit member relations partition the tuple space", "[symmetry]") {
  const FiniteStructure c4 = cyclic_order(4);
  const OrbitPartition p = orbit_partition(c4, 2);
  Relation acc(4, 2);
  std::size_t total = 0;
  for (std::int32_t id = 0; id < p.count; ++id) {
    const Relation member = orbit_member_relation(p, id);
    REQUIRE((acc & member).is_empty());
    acc = acc | member;
    total += member.count();
  }
  REQUIRE(acc.is_full());
  REQUIRE(total == acc.domain_size());
}
