// Cylinders, projections, products/sums, disjoint unions, compositions, and
// expansion operators — checked against formula evaluation and known laws.
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "aritylab/combinators.hpp"
#include "aritylab/engine.hpp"
#include "aritylab/formula.hpp"
#include "aritylab/generators.hpp"
#include "oracle.hpp"

using namespace aritylab;

namespace {

Relation random_relation(int m, int k, std::mt19937_64& rng) {
  Relation r(m, k);
  for (std::size_t idx = 0; idx < r.domain_size(); ++idx)
    if (rng() & 1) r.set(idx);
  return r;
}

}  // namespace

TEST_CASE("cylindrify places coordinates through the map", "[combinators]") {
  Relation x = Relation::from_tuples(2, 2, {{0, 1}});
  Relation lifted = cylindrify(x, CoordinateMap{3, {0, 2}});
  REQUIRE(lifted.tuples() == std::vector<Tuple>{{0, 0, 1}, {0, 1, 1}});
  // Reordering coordinates: source 0 -> target 1, source 1 -> target 0.
  Relation swapped = cylindrify(x, CoordinateMap{2, {1, 0}});
  REQUIRE(swapped.tuples() == std::vector<Tuple>{{1, 0}});

  REQUIRE_THROWS_AS(cylindrify(x, CoordinateMap{3, {0, 0}}), InputError);  // not injective
  REQUIRE_THROWS_AS(cylindrify(x, CoordinateMap{3, {0, 3}}), InputError);  // out of range
  REQUIRE_THROWS_AS(cylindrify(x, CoordinateMap{3, {0}}), InputError);     // wrong length
}

TEST_CASE("projection is existential quantification", "[combinators]") {
  const FiniteStructure t4 = tetra4();
  REQUIRE(project(t4.relation("R"), {0, 1}) == evaluate(t4, "exists z . R(x, y, z)", {"x", "y"}));
  REQUIRE(project(t4.relation("R"), {0, 1, 2}) == t4.relation("R"));
  REQUIRE(project(t4.relation("R"), {}).is_full());  // nonempty relation projects to true
  REQUIRE_THROWS_AS(project(t4.relation("R"), {1, 0}), InputError);  // must increase
  REQUIRE_THROWS_AS(project(t4.relation("R"), {0, 5}), InputError);
}

TEST_CASE("project after cylindrify is the identity", "[combinators]") {
  std::mt19937_64 rng(321);
  for (int trial = 0; trial < 120; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 2);
    const int k = 1 + static_cast<int>(rng() % 3);
    const int target = k + static_cast<int>(rng() % 2);
    // Random strictly increasing position set of size k inside target.
    std::vector<int> positions;
    for (int i = 0; i < target && static_cast<int>(positions.size()) < k; ++i)
      if (target - i <= k - static_cast<int>(positions.size()) || rng() % 2) positions.push_back(i);
    const Relation x = random_relation(m, k, rng);
    REQUIRE(project(cylindrify(x, CoordinateMap{target, positions}), positions) == x);
  }
}

TEST_CASE("cartesian product and sum", "[combinators]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 2);
    const Relation a = random_relation(m, 1 + static_cast<int>(rng() % 2), rng);
    const Relation b = random_relation(m, 1 + static_cast<int>(rng() % 2), rng);
    const Relation prod = cartesian_product(a, b);
    REQUIRE(prod.count() == a.count() * b.count());
    // De Morgan duality between sum and product.
    REQUIRE(cartesian_sum(a, b) == cartesian_product(a.complement(), b.complement()).complement());
  }
  // Against the formula evaluator.
  FiniteStructure s("two_rels", 3);
  std::mt19937_64 rng2(12);
  s.add_relation("R", random_relation(3, 2, rng2));
  s.add_relation("S", random_relation(3, 1, rng2));
  REQUIRE(cartesian_product(s.relation("R"), s.relation("S")) ==
          evaluate(s, "R(x, y) & S(z)", {"x", "y", "z"}));
  REQUIRE(cartesian_sum(s.relation("R"), s.relation("S")) ==
          evaluate(s, "R(x, y) | S(z)", {"x", "y", "z"}));
  REQUIRE_THROWS_AS(cartesian_product(Relation(2, 1), Relation(3, 1)), InputError);
}

TEST_CASE("mixed product and sum match formula evaluation", "[combinators]") {
  std::mt19937_64 rng(2718);
  int cases = 0;
  const std::vector<std::string> vars = {"v0", "v1", "v2", "v3"};
  for (int trial = 0; trial < 120; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 2);
    const int target = 2 + static_cast<int>(rng() % 3);
    const int ra = 1 + static_cast<int>(rng() % 2);
    const int rb = 1 + static_cast<int>(rng() % 2);
    auto random_map = [&](int source) {
      std::vector<int> pool;
      for (int i = 0; i < target; ++i) pool.push_back(i);
      std::shuffle(pool.begin(), pool.end(), rng);
      return CoordinateMap{target, std::vector<int>(pool.begin(), pool.begin() + source)};
    };
    const CoordinateMap ma = random_map(ra);
    const CoordinateMap mb = random_map(rb);
    FiniteStructure s("mixed", m);
    s.add_relation("A", random_relation(m, ra, rng));
    s.add_relation("B", random_relation(m, rb, rng));
    auto atom_text = [&](const std::string& name, const CoordinateMap& map) {
      std::string out = name + "(";
      for (std::size_t i = 0; i < map.positions.size(); ++i) {
        if (i) out += ", ";
        out += vars[static_cast<std::size_t>(map.positions[i])];
      }
      return out + ")";
    };
    const std::vector<std::string> ctx(vars.begin(), vars.begin() + target);
    REQUIRE(mixed_product(s.relation("A"), ma, s.relation("B"), mb) ==
            evaluate(s, atom_text("A", ma) + " & " + atom_text("B", mb), ctx));
    REQUIRE(mixed_sum(s.relation("A"), ma, s.relation("B"), mb) ==
            evaluate(s, atom_text("A", ma) + " | " + atom_text("B", mb), ctx));
    cases += 2;
  }
  REQUIRE(cases >= 200);
  REQUIRE_THROWS_AS(mixed_product(Relation(2, 1), CoordinateMap{2, {0}},
                                  Relation(2, 1), CoordinateMap{3, {0}}),
                    InputError);
}

TEST_CASE("disjoint union assembles parts with marks", "[combinators]") {
  const DisjointUnionResult u = disjoint_union({pure_set(2), cyclic_order(3)});
  REQUIRE(u.structure.name == "pure2_u_c3");
  REQUIRE(u.structure.universe == 5);
  REQUIRE(u.offsets == std::vector<int>{0, 2});
  REQUIRE(u.renames.empty());
  REQUIRE(u.structure.relation("P1").tuples() == std::vector<Tuple>{{0}, {1}});
  REQUIRE(u.structure.relation("P2").tuples() == std::vector<Tuple>{{2}, {3}, {4}});
  REQUIRE(u.structure.relation("K3").count() == cyclic_order(3).relation("K3").count());
  REQUIRE(u.structure.relation("K3").test(Tuple{2, 3, 4}));  // shifted by offset 2
  REQUIRE(automorphisms(u.structure).size() == 6);

  REQUIRE_THROWS_AS(disjoint_union({}), InputError);
}

TEST_CASE("disjoint union renames colliding relations", "[combinators]") {
  const FiniteStructure s4 = successor_cycle(4);
  const DisjointUnionResult u = disjoint_union({s4, s4});
  REQUIRE(u.structure.universe == 8);
  REQUIRE(u.renames.size() == 2);
  REQUIRE(u.renames[0].part == 1);
  REQUIRE(u.renames[0].from == "R");
  REQUIRE(u.renames[0].to == "u1_R");
  REQUIRE(u.renames[1].to == "u2_R");
  REQUIRE(u.structure.has_relation("u1_R"));
  REQUIRE(u.structure.has_relation("u2_R"));
  REQUIRE(u.structure.relation("u1_R").count() == 4);
  REQUIRE(u.structure.relation("u2_R").count() == 4);
  // Two independent 4-cycles fixing the parts: 4 x 4 automorphisms.
  REQUIRE(automorphisms(u.structure).size() == 16);
  REQUIRE(theory_arity_value(u.structure, 3) == 2);

  // A literal P1 in a part is reserved and gets prefixed.
  FiniteStructure odd("odd", 2);
  Relation p(2, 1);
  p.set(Tuple{0});
  odd.add_relation("P1", p);
  const DisjointUnionResult v = disjoint_union({odd});
  REQUIRE(v.renames.size() == 1);
  REQUIRE(v.renames[0].to == "u1_P1");
  REQUIRE(v.structure.relation("P1").count() == 2);  // the part mark
}

TEST_CASE("disjoint union arity law on corpus pairs", "[combinators]") {
  const auto check = [](const FiniteStructure& a, const FiniteStructure& b, int expect_max) {
    const int ar_a = theory_arity_value(a);
    const int ar_b = theory_arity_value(b);
    REQUIRE(std::max(ar_a, ar_b) == expect_max);
    const DisjointUnionResult u = disjoint_union({a, b});
    INFO(u.structure.name);
    REQUIRE(theory_arity_value(u.structure) == expect_max);
  };
  check(pure_set(2), pure_set(3), 1);
  check(pure_set(2), cyclic_order(3), 2);
  check(pure_set(1), pure_set(2), 1);
  check(cyclic_order(3), cyclic_order(3), 2);
  check(cyclic_order(3), successor_cycle(3), 2);
  check(pure_set(2), successor_cycle(4), 2);
  check(pure_set(2), pure_set(2), 1);
}

TEST_CASE("composition builds the fibered structure", "[combinators]") {
  const CompositionResult c = compose(successor_cycle(2), successor_cycle(2));
  REQUIRE(c.structure.name == "s2_of_s2");
  REQUIRE(c.structure.universe == 4);
  REQUIRE(c.outer_size == 2);
  REQUIRE(c.inner_size == 2);
  // Outer arcs relate whole fibers; inner arcs run inside each fiber.
  const Relation& r = c.structure.relation("R");
  REQUIRE(r.count() == 12);
  for (int x = 0; x < 2; ++x)
    for (int y = 2; y < 4; ++y) {
      REQUIRE(r.test(Tuple{x, y}));
      REQUIRE(r.test(Tuple{y, x}));
    }
  REQUIRE(r.test(Tuple{0, 1}));
  REQUIRE(r.test(Tuple{1, 0}));
  REQUIRE(r.test(Tuple{2, 3}));
  REQUIRE(r.test(Tuple{3, 2}));
  REQUIRE_FALSE(r.test(Tuple{0, 0}));

  // Composing with the one-point structure is the identity up to naming.
  const CompositionResult ci = compose(cyclic_order(3), pure_set(1));
  REQUIRE(ci.structure.universe == 3);
  REQUIRE(ci.structure.relation("K3") == cyclic_order(3).relation("K3"));

  // Shared symbols must agree in arity.
  FiniteStructure bad("bad", 2);
  bad.add_relation("R", Relation(2, 3));
  REQUIRE_THROWS_AS(compose(successor_cycle(2), bad), InputError);
}

TEST_CASE("composition law instances", "[combinators]") {
  const CompositionResult a = compose(cyclic_order(3), pure_set(2));
  REQUIRE(a.structure.universe == 6);
  REQUIRE(e_definable_check(a.structure, a.inner_size));
  REQUIRE(theory_arity_value(a.structure) == 2);

  const CompositionResult b = compose(pure_set(2), pure_set(2));
  REQUIRE_FALSE(e_definable_check(b.structure, b.inner_size));
  REQUIRE(theory_arity_value(b.structure) == 1);

  const CompositionResult c = compose(successor_cycle(3), pure_set(2));
  REQUIRE(automorphisms(c.structure).size() == 24);
  REQUIRE(e_definable_check(c.structure, c.inner_size));
  REQUIRE(theory_arity_value(c.structure) == 2);

  const CompositionResult d = compose(pure_set(2), successor_cycle(3));
  REQUIRE(automorphisms(d.structure).size() == 18);
  REQUIRE(e_definable_check(d.structure, d.inner_size));
  REQUIRE(theory_arity_value(d.structure) == 2);

  REQUIRE_THROWS_AS(e_definable_check(a.structure, 0), InputError);
  REQUIRE_THROWS_AS(e_definable_check(a.structure, 4), InputError);  // does not divide 6
}

TEST_CASE("unarize and binarize pin every element", "[combinators]") {
  const FiniteStructure t4 = tetra4();
  const FiniteStructure un = unarize(t4);
  REQUIRE(un.name == "tetra4_un");
  REQUIRE(un.relations.size() == 1 + 4);
  REQUIRE(un.relation("U_2").tuples() == std::vector<Tuple>{{2}});
  REQUIRE(un.relation("R") == t4.relation("R"));  // original kept
  REQUIRE(automorphisms(un).size() == 1);
  REQUIRE(theory_arity_value(un) == 1);

  const FiniteStructure bin = binarize(pure_set(3));
  REQUIRE(bin.relations.size() == 9);
  REQUIRE(bin.relation("B_1_2").tuples() == std::vector<Tuple>{{1, 2}});
  REQUIRE(automorphisms(bin).size() == 1);
  REQUIRE(theory_arity_value(bin) == 1);

  // Name clash with an existing relation is rejected.
  FiniteStructure clash("clash", 2);
  clash.add_relation("U_0", Relation(2, 1));
  REQUIRE_THROWS_AS(unarize(clash), InputError);
}

TEST_CASE("expand_with adds a relation under a fresh name", "[combinators]") {
  const FiniteStructure p4 = pure_set(4);
  const FiniteStructure grown = expand_with(p4, "K3", cyclic_order(4).relation("K3"));
  REQUIRE(grown.name == "pure4_K3");
  REQUIRE(grown.has_relation("K3"));
  REQUIRE(theory_arity_value(p4) == 1);
  REQUIRE(theory_arity_value(grown) == 2);

  // Expanding by a non-invariant relation is allowed and may break symmetry.
  Relation point(4, 1);
  point.set(Tuple{0});
  const FiniteStructure pinned = expand_with(p4, "C", point);
  REQUIRE(automorphisms(pinned).size() == 6);  // stabilizer of one point in S_4

  const FiniteStructure t4 = tetra4();
  REQUIRE_THROWS_AS(expand_with(t4, "R", Relation(4, 1)), InputError);  // name taken
}
