// Automorphism groups of finite structures and the orbit machinery built on
// them: orbit partitions of tuple spaces and invariance (= definability)
// checks.
//
// Automorphism search is an exhaustive backtracking scan, feasible for
// universes up to kMaxGroupUniverse. Elements are emitted in lexicographic
// order (identity first), and orbit ids are assigned in order of each orbit's
// lex-least representative, so every downstream id is deterministic.
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "aritylab/core.hpp"
#include "aritylab/structure.hpp"

namespace aritylab {

using Permutation = std::vector<int>;  // images: g[i] = image of element i

inline Permutation identity_permutation(int m) {
  Permutation p(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) p[static_cast<std::size_t>(i)] = i;
  return p;
}

inline Permutation inverse_permutation(const Permutation& g) {
  Permutation inv(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) inv[static_cast<std::size_t>(g[i])] = static_cast<int>(i);
  return inv;
}

inline Permutation compose_permutations(const Permutation& g, const Permutation& h) {
  // (g*h)(x) = g(h(x))
  Permutation out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[static_cast<std::size_t>(h[i])];
  return out;
}

// Pointwise action on an encoded tuple index.
inline std::size_t apply_to_index(const Permutation& g, std::size_t idx, int m, int k) {
  std::size_t out = 0;
  // Decode from the least significant (last) coordinate, accumulate with
  // positional weights so no temporary tuple is allocated.
  std::size_t weight = 1;
  for (int pos = k - 1; pos >= 0; --pos) {
    int digit = static_cast<int>(idx % static_cast<std::size_t>(m));
    idx /= static_cast<std::size_t>(m);
    out += static_cast<std::size_t>(g[static_cast<std::size_t>(digit)]) * weight;
    weight *= static_cast<std::size_t>(m);
  }
  return out;
}

struct AutomorphismGroup {
  int universe = 1;
  std::vector<Permutation> elements;  // lex order, identity first

  int size() const { return static_cast<int>(elements.size()); }
};

namespace detail {

// True iff the partial map (images of elements 0..depth) respects every
// relation on all tuples whose coordinates are assigned and mention `depth`.
inline bool partial_map_consistent(const FiniteStructure& s, const std::vector<int>& image, int depth) {
  const int filled = depth + 1;
  for (const auto& [rel_name, rel] : s.relations) {
    (void)rel_name;
    const int r = rel.arity();
    const std::size_t total = checked_power(filled, r);
    Tuple t(static_cast<std::size_t>(r));
    Tuple gt(static_cast<std::size_t>(r));
    for (std::size_t raw = 0; raw < total; ++raw) {
      std::size_t rest = raw;
      bool mentions_depth = false;
      for (int pos = r - 1; pos >= 0; --pos) {
        int digit = static_cast<int>(rest % static_cast<std::size_t>(filled));
        rest /= static_cast<std::size_t>(filled);
        t[static_cast<std::size_t>(pos)] = digit;
        if (digit == depth) mentions_depth = true;
      }
      if (!mentions_depth) continue;  // already checked at an earlier depth
      for (int pos = 0; pos < r; ++pos)
        gt[static_cast<std::size_t>(pos)] = image[static_cast<std::size_t>(t[static_cast<std::size_t>(pos)])];
      if (rel.test(t) != rel.test(gt)) return false;
    }
  }
  return true;
}

inline void automorphism_search(const FiniteStructure& s, std::vector<int>& image,
                                std::vector<bool>& used, int depth,
                                std::vector<Permutation>& out) {
  const int m = s.universe;
  if (depth == m) {
    out.push_back(image);
    return;
  }
  for (int candidate = 0; candidate < m; ++candidate) {
    if (used[static_cast<std::size_t>(candidate)]) continue;
    image[static_cast<std::size_t>(depth)] = candidate;
    used[static_cast<std::size_t>(candidate)] = true;
    if (partial_map_consistent(s, image, depth))
      automorphism_search(s, image, used, depth + 1, out);
    used[static_cast<std::size_t>(candidate)] = false;
  }
}

}  // namespace detail

// Sanity-check group axioms on an enumerated element list. Identity and
// inverses are always checked; the closure table is checked fully for small
// groups and on a deterministic sample beyond that.
inline bool verify_group(const AutomorphismGroup& g) {
  const int n = g.size();
  if (n == 0) return false;
  std::vector<Permutation> sorted = g.elements;
  std::sort(sorted.begin(), sorted.end());
  auto contains = [&](const Permutation& p) {
    return std::binary_search(sorted.begin(), sorted.end(), p);
  };
  if (!contains(identity_permutation(g.universe))) return false;
  for (const Permutation& p : g.elements)
    if (!contains(inverse_permutation(p))) return false;
  const bool full = n <= 512;
  const int stride = full ? 1 : std::max(1, n / 64);
  for (int i = 0; i < n; i += stride)
    for (int j = 0; j < n; j += stride)
      if (!contains(compose_permutations(g.elements[static_cast<std::size_t>(i)],
                                         g.elements[static_cast<std::size_t>(j)])))
        return false;
  return true;
}

inline AutomorphismGroup automorphisms(const FiniteStructure& s) {
  s.validate();
  if (s.universe > kMaxGroupUniverse)
    throw CapError("universe size " + std::to_string(s.universe) +
                   " exceeds automorphism search cap " + std::to_string(kMaxGroupUniverse));
  AutomorphismGroup g;
  g.universe = s.universe;
  std::vector<int> image(static_cast<std::size_t>(s.universe), -1);
  std::vector<bool> used(static_cast<std::size_t>(s.universe), false);
  detail::automorphism_search(s, image, used, 0, g.elements);
  if (!verify_group(g))
    throw std::logic_error("automorphism enumeration produced a non-group");
  return g;
}

// ── orbit partitions ────────────────────────────────────────────────────────

struct OrbitPartition {
  int universe = 1;
  int arity = 0;
  int count = 0;
  std::vector<std::int32_t> orbit_of;           // tuple index -> orbit id
  std::vector<std::size_t> representatives;     // orbit id -> lex-least member
};

inline OrbitPartition orbit_partition(const AutomorphismGroup& g, int k) {
  if (k < 0) throw InputError("tuple arity must be nonnegative");
  OrbitPartition p;
  p.universe = g.universe;
  p.arity = k;
  const std::size_t total = checked_power(g.universe, k);
  p.orbit_of.assign(total, -1);
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (p.orbit_of[idx] >= 0) continue;
    const auto id = static_cast<std::int32_t>(p.representatives.size());
    p.representatives.push_back(idx);
    for (const Permutation& perm : g.elements)
      p.orbit_of[apply_to_index(perm, idx, g.universe, k)] = id;
  }
  p.count = static_cast<int>(p.representatives.size());
  return p;
}

inline OrbitPartition orbit_partition(const FiniteStructure& s, int k) {
  return orbit_partition(automorphisms(s), k);
}

inline Relation orbit_member_relation(const OrbitPartition& p, std::int32_t orbit_id) {
  Relation r(p.universe, p.arity);
  for (std::size_t idx = 0; idx < p.orbit_of.size(); ++idx)
    if (p.orbit_of[idx] == orbit_id) r.set(idx);
  return r;
}

// Invariance under every automorphism. Over a finite structure this is
// exactly first-order definability with parameters excluded.
inline bool is_definable(const AutomorphismGroup& g, const Relation& x) {
  if (x.universe() != g.universe)
    throw InputError("relation universe does not match the group's universe");
  for (const Permutation& perm : g.elements) {
    bool mismatch = false;
    x.for_each_member([&](std::size_t idx) {
      if (!x.test(apply_to_index(perm, idx, x.universe(), x.arity()))) mismatch = true;
    });
    if (mismatch) return false;
  }
  return true;
}

inline bool is_definable(const FiniteStructure& s, const Relation& x) {
  return is_definable(automorphisms(s), x);
}

}  // namespace aritylab
