// Generators for the bundled structure families, sentence-level axiom
// checking for circular and ball order relations, seeded invariant test
// relations, and a search for projection-saturated non-n-ary witnesses.
//
// The gap-sum order candidates use gap(x, y) = (y - x) mod m and keep ties
// (total gap exactly m stays inside the relation); whether a candidate
// satisfies its axiom list is decided by check_axioms, never assumed.
#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "aritylab/core.hpp"
#include "aritylab/engine.hpp"
#include "aritylab/formula.hpp"
#include "aritylab/structure.hpp"
#include "aritylab/symmetry.hpp"

namespace aritylab {

// ── structure families ──────────────────────────────────────────────────────

// Bare universe of size m; no relations, full symmetric group.
inline FiniteStructure pure_set(int m) {
  if (m < 1) throw InputError("pure_set needs m >= 1");
  return FiniteStructure("pure" + std::to_string(m), m);
}

// Directed cycle successor: R = {(i, i+1 mod m)}.
inline FiniteStructure successor_cycle(int m) {
  if (m < 1) throw InputError("successor_cycle needs m >= 1");
  FiniteStructure s("s" + std::to_string(m), m);
  Relation r(m, 2);
  for (int i = 0; i < m; ++i) r.set(Tuple{i, (i + 1) % m});
  s.add_relation("R", std::move(r));
  return s;
}

namespace detail {

inline int cyclic_gap(int x, int y, int m) { return ((y - x) % m + m) % m; }

// Gap-sum membership shared by the circular and ball order candidates:
// consecutive gaps around the cycle sum to at most m (ties included).
inline bool gap_sum_member(const Tuple& t, int m) {
  int sum = 0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) sum += cyclic_gap(t[i], t[i + 1], m);
  return sum <= m;
}

}  // namespace detail

// Circular order candidate on the standard m-cycle: K3(a,b,c) iff walking
// a -> b -> c clockwise uses at most one full turn.
inline FiniteStructure cyclic_order(int m) {
  if (m < 1) throw InputError("cyclic_order needs m >= 1");
  FiniteStructure s("c" + std::to_string(m), m);
  Relation k3(m, 3);
  const std::size_t total = k3.domain_size();
  for (std::size_t idx = 0; idx < total; ++idx)
    if (detail::gap_sum_member(decode_tuple(idx, m, 3), m)) k3.set(idx);
  s.add_relation("K3", std::move(k3));
  return s;
}

// ── axiom checking ──────────────────────────────────────────────────────────

enum class AxiomFamily { circular, ball };

struct AxiomCheck {
  std::string name;     // e.g. "co2", "nbo4[i=2]"
  std::string formula;  // the checked sentence, printable/parsable
  bool pass = false;
  std::vector<std::pair<std::string, int>> counterexample;  // falsifying assignment
};

struct AxiomReport {
  std::string structure;
  AxiomFamily family = AxiomFamily::circular;
  bool all_pass = false;
  std::vector<AxiomCheck> checks;
};

namespace detail {

// Evaluate a universally quantified sentence by stripping its leading
// forall-prefix, tabulating the matrix, and reporting the lexicographically
// least falsifying assignment if any.
inline AxiomCheck run_axiom(const FiniteStructure& s, std::string name, const std::string& text) {
  AxiomCheck check;
  check.name = std::move(name);
  check.formula = text;
  Formula f = parse_formula(text);
  std::vector<std::string> prefix;
  while (f->kind == FormulaKind::forall) {
    prefix.push_back(f->name);
    f = f->child;
  }
  const Relation matrix = evaluate(s, f, prefix);
  const Relation failures = matrix.complement();
  if (failures.is_empty()) {
    check.pass = true;
    return check;
  }
  std::size_t least = SIZE_MAX;
  failures.for_each_member([&](std::size_t idx) {
    if (least == SIZE_MAX) least = idx;
  });
  const Tuple t = decode_tuple(least, s.universe, static_cast<int>(prefix.size()));
  for (std::size_t i = 0; i < prefix.size(); ++i)
    check.counterexample.emplace_back(prefix[i], t[i]);
  if (matrix.test(least))
    throw std::logic_error("axiom counterexample failed re-verification");
  return check;
}

inline std::string var_list(int n) {
  std::string out;
  for (int i = 1; i <= n; ++i) {
    if (i > 1) out += ", ";
    out += "x" + std::to_string(i);
  }
  return out;
}

inline std::string var_list_swapped(int n, int i) {
  std::string out;
  for (int j = 1; j <= n; ++j) {
    if (j > 1) out += ", ";
    int v = j;
    if (j == i) v = i + 1;
    else if (j == i + 1) v = i;
    out += "x" + std::to_string(v);
  }
  return out;
}

inline std::string forall_prefix(int n) {
  std::string out;
  for (int i = 1; i <= n; ++i) out += "forall x" + std::to_string(i) + " . ";
  return out;
}

}  // namespace detail

// The four circular order axioms over relation K3:
//   co1: forall x,y,z: K3(x,y,z) -> K3(y,z,x)
//   co2: forall x,y,z: K3(x,y,z) & K3(y,x,z) <-> x=y | y=z | z=x
//   co3: forall x,y,z: K3(x,y,z) -> forall t: K3(x,y,t) | K3(t,y,z)
//   co4: forall x,y,z: K3(x,y,z) | K3(y,x,z)
// and the n-ary ball order axioms over K<n>:
//   nbo1: K(x1..xn) -> K(x2..xn,x1)
//   nbo2[i]: K(..xi,xi+1..) & K(..xi+1,xi..) <-> x1=x2 | ... | x(n-1)=xn
//   nbo3: K(x1..xn) -> forall t: K(x1..x(n-1),t) | K(t,x2..xn)
//   nbo4[i]: K(..xi,xi+1..) | K(..xi+1,xi..)
// The index i in nbo2/nbo4 is checked per fixed i = 1..n-1 (the literal
// reading of the displayed schema); each instance reports separately.
inline AxiomReport check_axioms(const FiniteStructure& s, AxiomFamily family) {
  s.validate();
  AxiomReport report;
  report.structure = s.name;
  report.family = family;

  if (family == AxiomFamily::circular) {
    if (!s.has_relation("K3") || s.relation("K3").arity() != 3)
      throw InputError("circular order axioms need a ternary relation named K3");
    const std::string q = "forall x . forall y . forall z . ";
    report.checks.push_back(detail::run_axiom(s, "co1", q + "(K3(x, y, z) -> K3(y, z, x))"));
    report.checks.push_back(detail::run_axiom(
        s, "co2", q + "(K3(x, y, z) & K3(y, x, z) <-> x = y | y = z | z = x)"));
    report.checks.push_back(detail::run_axiom(
        s, "co3", q + "(K3(x, y, z) -> forall t . (K3(x, y, t) | K3(t, y, z)))"));
    report.checks.push_back(detail::run_axiom(s, "co4", q + "(K3(x, y, z) | K3(y, x, z))"));
  } else {
    // Locate the unique K<n> relation of matching arity.
    std::string kname;
    int n = 0;
    for (const auto& [rel_name, rel] : s.relations) {
      if (rel_name.size() < 2 || rel_name[0] != 'K') continue;
      int parsed = 0;
      bool numeric = true;
      for (std::size_t i = 1; i < rel_name.size(); ++i) {
        if (rel_name[i] < '0' || rel_name[i] > '9') { numeric = false; break; }
        parsed = parsed * 10 + (rel_name[i] - '0');
      }
      if (!numeric || parsed != rel.arity() || parsed < 2) continue;
      if (!kname.empty()) throw InputError("multiple K<n> relations; ball order axioms are ambiguous");
      kname = rel_name;
      n = parsed;
    }
    if (kname.empty())
      throw InputError("ball order axioms need a relation K<n> of arity n >= 2");

    const std::string q = detail::forall_prefix(n);
    const std::string xs = detail::var_list(n);
    {
      std::string rotated;
      for (int j = 2; j <= n; ++j) rotated += "x" + std::to_string(j) + ", ";
      rotated += "x1";
      report.checks.push_back(detail::run_axiom(
          s, "nbo1", q + "(" + kname + "(" + xs + ") -> " + kname + "(" + rotated + "))"));
    }
    std::string consecutive_eqs;
    for (int j = 1; j < n; ++j) {
      if (j > 1) consecutive_eqs += " | ";
      consecutive_eqs += "x" + std::to_string(j) + " = x" + std::to_string(j + 1);
    }
    for (int i = 1; i < n; ++i)
      report.checks.push_back(detail::run_axiom(
          s, "nbo2[i=" + std::to_string(i) + "]",
          q + "(" + kname + "(" + xs + ") & " + kname + "(" + detail::var_list_swapped(n, i) +
              ") <-> " + consecutive_eqs + ")"));
    {
      std::string head;  // x1..x(n-1), t
      for (int j = 1; j < n; ++j) head += "x" + std::to_string(j) + ", ";
      head += "t";
      std::string tail = "t";  // t, x2..xn
      for (int j = 2; j <= n; ++j) tail += ", x" + std::to_string(j);
      report.checks.push_back(detail::run_axiom(
          s, "nbo3", q + "(" + kname + "(" + xs + ") -> forall t . (" + kname + "(" + head +
                         ") | " + kname + "(" + tail + ")))"));
    }
    for (int i = 1; i < n; ++i)
      report.checks.push_back(detail::run_axiom(
          s, "nbo4[i=" + std::to_string(i) + "]",
          q + "(" + kname + "(" + xs + ") | " + kname + "(" + detail::var_list_swapped(n, i) + "))"));
  }

  report.all_pass = true;
  for (const AxiomCheck& c : report.checks)
    if (!c.pass) report.all_pass = false;
  return report;
}

// Ball order candidate: K<n>(a_1..a_n) iff the consecutive gaps sum to at
// most m. The construction is only a candidate — the returned report is the
// ground truth on which axioms it satisfies.
struct BallOrderResult {
  FiniteStructure structure;
  AxiomReport report;
};

inline BallOrderResult n_ball_order(int m, int n) {
  if (m < 1) throw InputError("n_ball_order needs m >= 1");
  if (n < 2) throw InputError("n_ball_order needs n >= 2");
  FiniteStructure s("b" + std::to_string(m) + "_" + std::to_string(n), m);
  Relation kn(m, n);
  const std::size_t total = kn.domain_size();
  for (std::size_t idx = 0; idx < total; ++idx)
    if (detail::gap_sum_member(decode_tuple(idx, m, n), m)) kn.set(idx);
  s.add_relation("K" + std::to_string(n), std::move(kn));
  BallOrderResult result;
  result.report = check_axioms(s, AxiomFamily::ball);
  result.structure = std::move(s);
  return result;
}

// Oriented tetrahedron faces: the orbit of the triple (0,1,2) under even
// permutations of four points. 12 triples; the automorphism group is the
// alternating group on the universe.
inline FiniteStructure tetra4() {
  FiniteStructure s("tetra4", 4);
  s.element_names = {"a", "b", "c", "d"};
  Relation r(4, 3);
  Permutation p = identity_permutation(4);
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j)
        if (p[i] > p[j]) ++inversions;
    if (inversions % 2 == 0) r.set(Tuple{p[0], p[1], p[2]});
  } while (std::next_permutation(p.begin(), p.end()));
  s.add_relation("R", std::move(r));
  return s;
}

// ── randomized and searched witnesses ───────────────────────────────────────

// Union of a seeded random subset of the orbits of M^k: invariant by
// construction, deterministic for a fixed seed (one mt19937_64 draw per
// orbit in representative order).
inline Relation random_invariant_relation(const FiniteStructure& s, int k, std::uint64_t seed) {
  const OrbitPartition orbits = orbit_partition(s, k);
  std::mt19937_64 rng(seed);
  std::vector<bool> pick(static_cast<std::size_t>(orbits.count));
  for (int i = 0; i < orbits.count; ++i) pick[static_cast<std::size_t>(i)] = (rng() & 1) != 0;
  Relation x(s.universe, k);
  for (std::size_t idx = 0; idx < orbits.orbit_of.size(); ++idx)
    if (pick[static_cast<std::size_t>(orbits.orbit_of[idx])]) x.set(idx);
  return x;
}

// Smallest (by orbit-subset rank) invariant X ⊆ M^k whose projections onto
// every increasing n-subset of coordinates are all full, yet X is not n-ary
// — the shape of relation that forces arity above n. Returns nullopt when no
// orbit union qualifies.
inline std::optional<Relation> full_projection_witness(const FiniteStructure& s, int k, int n) {
  if (n < 1 || n > k) throw InputError("need 1 <= n <= k");
  const AutomorphismGroup g = automorphisms(s);
  const OrbitPartition orbits = orbit_partition(g, k);
  if (orbits.count > kMaxWitnessOrbits)
    throw CapError("orbit count " + std::to_string(orbits.count) + " exceeds witness search cap " +
                   std::to_string(kMaxWitnessOrbits));
  std::vector<Relation> orbit_sets;
  orbit_sets.reserve(static_cast<std::size_t>(orbits.count));
  for (std::int32_t id = 0; id < orbits.count; ++id)
    orbit_sets.push_back(orbit_member_relation(orbits, id));
  const std::vector<std::vector<int>> subsets = detail::increasing_subsets(k, n);

  const std::uint64_t limit = std::uint64_t{1} << orbits.count;
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    Relation x(s.universe, k);
    for (int id = 0; id < orbits.count; ++id)
      if ((mask >> id) & 1) x = x | orbit_sets[static_cast<std::size_t>(id)];
    bool all_full = true;
    for (const auto& subset : subsets)
      if (!project(x, subset).is_full()) { all_full = false; break; }
    if (!all_full) continue;
    if (!is_nary(g, x, n).value) return x;
  }
  return std::nullopt;
}

}  // namespace aritylab
