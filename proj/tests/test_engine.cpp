// The arity engine: fingerprint saturation, relation and theory arities,
// transitivity, quantifier elimination, BA atom counts, and agreement with
// the independent Boolean-closure oracles.
#include <catch2/catch_amalgamated.hpp>

#include "aritylab/engine.hpp"
#include "aritylab/generators.hpp"
#include "oracle.hpp"

using namespace aritylab;

namespace {

// Every invariant relation of arity k is a union of orbits; enumerate all.
template <typename Fn>
void for_each_invariant(const FiniteStructure& s, int k, Fn&& fn) {
  const OrbitPartition p = orbit_partition(s, k);
  REQUIRE(p.count <= 12);  // keeps the enumeration tiny
  std::vector<Relation> orbit_sets;
  for (std::int32_t id = 0; id < p.count; ++id)
    orbit_sets.push_back(orbit_member_relation(p, id));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p.count); ++mask) {
    Relation x(s.universe, k);
    for (int id = 0; id < p.count; ++id)
      if ((mask >> id) & 1) x = x | orbit_sets[static_cast<std::size_t>(id)];
    fn(x);
  }
}

}  // namespace

TEST_CASE("oriented tetrahedron arity report", "[engine]") {
  const FiniteStructure t4 = tetra4();
  const ArityReport report = theory_arity(t4);
  REQUIRE(report.arity == 3);
  REQUIRE(report.structure == "tetra4");
  REQUIRE(report.max_k == 4);

  // Exact per-k diagnostics: orbit counts 1,2,6,22 and fingerprint class
  // counts below saturation at levels 1 and 2.
  REQUIRE(report.per_k.size() == 4);
  const std::vector<int> orbit_counts = {1, 2, 6, 22};
  for (int k = 1; k <= 4; ++k) {
    REQUIRE(report.per_k[k - 1].k == k);
    REQUIRE(report.per_k[k - 1].orbits == orbit_counts[k - 1]);
  }
  REQUIRE(report.per_k[1].fingerprint_classes.size() == 1);
  REQUIRE(report.per_k[1].fingerprint_classes[0].classes == 2);   // k=2, n=1
  REQUIRE(report.per_k[2].fingerprint_classes.size() == 2);
  REQUIRE(report.per_k[2].fingerprint_classes[0].classes == 5);   // k=3, n=1
  REQUIRE(report.per_k[2].fingerprint_classes[1].classes == 5);   // k=3, n=2
  REQUIRE(report.per_k[3].fingerprint_classes.size() == 3);
  REQUIRE(report.per_k[3].fingerprint_classes[0].classes == 15);  // k=4, n=1
  REQUIRE(report.per_k[3].fingerprint_classes[1].classes == 15);  // k=4, n=2
  REQUIRE(report.per_k[3].fingerprint_classes[2].classes == 22);  // k=4, n=3 saturates

  // Levels 1 and 2 are rejected, both first failing at k=3 on the pair
  // (0,1,2)/(0,1,3): same fingerprint, opposite orientation.
  REQUIRE(report.rejected.size() == 2);
  REQUIRE(report.rejected[0].level == 1);
  REQUIRE(report.rejected[0].k == 3);
  REQUIRE(report.rejected[0].pair.first == Tuple{0, 1, 2});
  REQUIRE(report.rejected[0].pair.second == Tuple{0, 1, 3});
  REQUIRE(report.rejected[1].level == 2);
  REQUIRE(report.rejected[1].k == 3);
  REQUIRE(report.rejected[1].pair.first == Tuple{0, 1, 2});
  REQUIRE(report.rejected[1].pair.second == Tuple{0, 1, 3});
}

TEST_CASE("rejection witnesses really witness", "[engine]") {
  for (const FiniteStructure& s : {tetra4(), cyclic_order(4), successor_cycle(5)}) {
    const AutomorphismGroup g = automorphisms(s);
    const ArityReport report = theory_arity(s);
    REQUIRE(report.rejected.empty() == (report.arity == 1));
    for (const RejectedLevel& r : report.rejected) {
      const FingerprintPartition fp = fingerprint_partition(g, r.k, r.level);
      const OrbitPartition orb = orbit_partition(g, r.k);
      const std::size_t a = encode_tuple(r.pair.first, s.universe);
      const std::size_t b = encode_tuple(r.pair.second, s.universe);
      REQUIRE(fp.class_of[a] == fp.class_of[b]);
      REQUIRE(orb.orbit_of[a] != orb.orbit_of[b]);
    }
  }
}

TEST_CASE("theory arity across the families", "[engine]") {
  for (int m = 1; m <= 5; ++m) REQUIRE(theory_arity_value(pure_set(m)) == 1);
  for (int m = 3; m <= 6; ++m) {
    REQUIRE(theory_arity_value(successor_cycle(m)) == 2);
    REQUIRE(theory_arity_value(cyclic_order(m)) == 2);
  }
  REQUIRE(theory_arity_value(tetra4()) == 3);
  // Window smaller than the universe: a level passes vacuously at max_k.
  REQUIRE(theory_arity_value(tetra4(), 1) == 1);
  REQUIRE(theory_arity_value(tetra4(), 3) == 3);
  REQUIRE_THROWS_AS(theory_arity(tetra4(), -2), InputError);
}

TEST_CASE("is_nary pins and witnesses", "[engine]") {
  const FiniteStructure t4 = tetra4();
  const NaryResult two = is_nary(t4, t4.relation("R"), 2);
  REQUIRE_FALSE(two.value);
  REQUIRE(two.witness->first == Tuple{0, 1, 2});
  REQUIRE(two.witness->second == Tuple{0, 1, 3});
  REQUIRE(t4.relation("R").test(two.witness->first) != t4.relation("R").test(two.witness->second));
  REQUIRE(is_nary(t4, t4.relation("R"), 3).value);
  REQUIRE(is_nary(t4, t4.relation("R"), 7).value);  // n beyond k is trivially true

  const FiniteStructure c5 = cyclic_order(5);
  REQUIRE_FALSE(is_nary(c5, c5.relation("K3"), 1).value);
  REQUIRE(is_nary(c5, c5.relation("K3"), 2).value);

  // Equality diagonal is unary thanks to the n=1 equality clause.
  Relation diag(5, 2);
  for (int i = 0; i < 5; ++i) diag.set(Tuple{i, i});
  REQUIRE(is_nary(c5, diag, 1).value);

  REQUIRE_THROWS_AS(is_nary(c5, c5.relation("K3"), 0), InputError);
  Relation not_invariant(5, 1);
  not_invariant.set(Tuple{0});
  REQUIRE_THROWS_AS(is_nary(c5, not_invariant, 1), InputError);
}

TEST_CASE("formula arity", "[engine]") {
  const FiniteStructure t4 = tetra4();
  REQUIRE(formula_arity(t4, Relation::full(4, 3)) == 0);   // sentence case
  REQUIRE(formula_arity(t4, Relation::empty(4, 3)) == 0);
  REQUIRE(formula_arity(t4, t4.relation("R")) == 3);

  for (int m = 3; m <= 5; ++m) {
    const FiniteStructure c = cyclic_order(m);
    REQUIRE(formula_arity(c, c.relation("K3")) == 2);
  }
  const FiniteStructure s4 = successor_cycle(4);
  REQUIRE(formula_arity(s4, s4.relation("R")) == 2);
  const FiniteStructure c5 = cyclic_order(5);
  Relation diag(5, 2);
  for (int i = 0; i < 5; ++i) diag.set(Tuple{i, i});
  REQUIRE(formula_arity(c5, diag) == 1);
}

TEST_CASE("transitivity levels and profiles", "[engine]") {
  const FiniteStructure t4 = tetra4();
  REQUIRE(n_transitive(t4, 1));
  REQUIRE(n_transitive(t4, 2));
  REQUIRE_FALSE(n_transitive(t4, 3));
  REQUIRE_FALSE(n_transitive(t4, 4));
  const TransitivityProfile tp = transitivity_profile(t4);
  REQUIRE(tp.transitive == std::vector<bool>{true, true, false, false});
  REQUIRE(tp.largest == 2);

  const TransitivityProfile pure = transitivity_profile(pure_set(3));
  REQUIRE(pure.transitive == std::vector<bool>{true, true, true});
  REQUIRE(pure.largest == 3);

  REQUIRE(transitivity_profile(cyclic_order(4)).transitive ==
          std::vector<bool>{true, false, false, false});
  REQUIRE(transitivity_profile(successor_cycle(4)).largest == 1);

  // Monotone: (n+1)-transitive implies n-transitive.
  for (const FiniteStructure& s : {tetra4(), cyclic_order(5), pure_set(4), successor_cycle(5)}) {
    const TransitivityProfile p = transitivity_profile(s);
    for (std::size_t i = 1; i < p.transitive.size(); ++i)
      if (p.transitive[i]) REQUIRE(p.transitive[i - 1]);
  }
}

TEST_CASE("quantifier elimination check", "[engine]") {
  REQUIRE(qe_check(tetra4()).value);
  REQUIRE(qe_check(successor_cycle(3)).value);
  REQUIRE(qe_check(successor_cycle(4)).value);
  REQUIRE(qe_check(pure_set(5)).value);

  const QeResult s5 = qe_check(successor_cycle(5));
  REQUIRE_FALSE(s5.value);
  const QeResult s6 = qe_check(successor_cycle(6));
  REQUIRE_FALSE(s6.value);
  // Distance 2 and distance 3 pairs share the atomic type but not the orbit.
  REQUIRE(s6.failing_k == 2);
  REQUIRE(s6.witness->first == Tuple{0, 2});
  REQUIRE(s6.witness->second == Tuple{0, 3});

  for (int m = 3; m <= 6; ++m) REQUIRE_FALSE(qe_check(cyclic_order(m)).value);
}

TEST_CASE("boolean algebra atom counts", "[engine]") {
  const BaAtoms b32 = ba_atoms(tetra4(), 3, 2);
  REQUIRE(b32.atom_count == 5);
  REQUIRE(b32.orbit_count == 6);
  const BaAtoms b43 = ba_atoms(tetra4(), 4, 3);
  REQUIRE(b43.atom_count == 22);
  REQUIRE(b43.orbit_count == 22);
  REQUIRE(ba_atoms(pure_set(3), 2, 1).atom_count == 2);

  // Saturation is monotone in the level: once atoms = orbits, higher levels stay saturated.
  const FiniteStructure c4 = cyclic_order(4);
  for (int k = 2; k <= 4; ++k)
    for (int n = 2; n < k; ++n)
      REQUIRE(ba_atoms(c4, k, n).atom_count == ba_atoms(c4, k, k - 1).orbit_count);
}

TEST_CASE("fingerprint partition is refined by orbits", "[engine]") {
  for (const FiniteStructure& s : {tetra4(), cyclic_order(4), successor_cycle(4)}) {
    const AutomorphismGroup g = automorphisms(s);
    for (int k = 1; k <= 3; ++k)
      for (int n = 1; n <= 2; ++n) {
        const FingerprintPartition fp = fingerprint_partition(g, k, n);
        const OrbitPartition orb = orbit_partition(g, k);
        REQUIRE(fp.count <= orb.count);
        // Same orbit implies same fingerprint.
        std::vector<std::int32_t> class_of_orbit(static_cast<std::size_t>(orb.count), -1);
        for (std::size_t idx = 0; idx < fp.class_of.size(); ++idx) {
          auto& slot = class_of_orbit[static_cast<std::size_t>(orb.orbit_of[idx])];
          if (slot < 0) slot = fp.class_of[idx];
          REQUIRE(slot == fp.class_of[idx]);
        }
      }
  }
}

TEST_CASE("fingerprint criterion agrees with the closure oracle exhaustively", "[engine]") {
  // All invariant relations of the m <= 3 corpus, k <= 3, n in {1,2}.
  int checks = 0;
  for (const FiniteStructure& s :
       {pure_set(1), pure_set(2), pure_set(3), successor_cycle(3), cyclic_order(3)}) {
    for (int k = 1; k <= 3; ++k)
      for_each_invariant(s, k, [&](const Relation& x) {
        for (int n = 1; n <= 2; ++n) {
          INFO(s.name << " k=" << k << " n=" << n);
          REQUIRE(is_nary(s, x, n).value == closure_oracle(s, x, n));
          ++checks;
        }
      });
  }
  REQUIRE(checks == 2220);
}

TEST_CASE("both criteria agree with literal breadth-first closure", "[engine]") {
  // On instances small enough to materialize the whole generated algebra.
  for (const FiniteStructure& s : {pure_set(2), pure_set(3), successor_cycle(3), cyclic_order(3)}) {
    for (int k = 1; k <= 2; ++k)
      for (int n = 1; n <= 2; ++n) {
        const std::vector<Relation> gens = oracle::nary_generators(s, k, n);
        for_each_invariant(s, k, [&](const Relation& x) {
          const auto bfs = oracle::boolean_closure_contains(gens, x);
          REQUIRE(bfs.has_value());
          INFO(s.name << " k=" << k << " n=" << n);
          REQUIRE(*bfs == is_nary(s, x, n).value);
          REQUIRE(*bfs == closure_oracle(s, x, n));
        });
      }
  }
}

TEST_CASE("constant-distance proxy", "[engine]") {
  const FiniteStructure c5 = cyclic_order(5);
  const ConstantizableResult tight = constantizable_within(c5, c5.relation("K3"), 3);
  REQUIRE_FALSE(tight.value);
  REQUIRE(tight.min_symmetric_difference == 30);
  REQUIRE(constantizable_within(c5, c5.relation("K3"), 30).value);

  Relation diag(5, 2);
  for (int i = 0; i < 5; ++i) diag.set(Tuple{i, i});
  const ConstantizableResult exact = constantizable_within(c5, diag, 0);
  REQUIRE(exact.value);
  REQUIRE(exact.min_symmetric_difference == 0);

  Relation skew(5, 1);
  skew.set(Tuple{0});
  REQUIRE_THROWS_AS(constantizable_within(c5, skew, 10), InputError);
}
