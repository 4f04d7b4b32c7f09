// Arity engine: level-n fingerprints of tuples, the n-ary test for definable
// relations, arity of the full theory of a structure, transitivity and
// quantifier-elimination checks, and an independent Boolean-closure oracle.
//
// The level-n fingerprint of a k-tuple t is the sequence of orbit ids of the
// projections of t onto every increasing coordinate subset of size min(n, k);
// at n = 1 the equality pattern of t is appended (the unary case admits
// variable equalities). A definable relation is n-ary iff it is a union of
// fingerprint classes; the theory of the structure has arity n iff level-n
// fingerprints separate orbits on every tuple length in the scan window.
//
// All ids, witnesses, and class numbers follow lexicographic tuple order.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aritylab/combinators.hpp"
#include "aritylab/core.hpp"
#include "aritylab/structure.hpp"
#include "aritylab/symmetry.hpp"

namespace aritylab {

struct Witness {
  Tuple first, second;
};

struct NaryResult {
  bool value = false;
  std::optional<Witness> witness;  // equal fingerprints, differing membership
};

struct FingerprintPartition {
  int universe = 1;
  int arity = 0;   // k
  int level = 0;   // n
  int count = 0;
  std::vector<std::int32_t> class_of;  // tuple index -> class id (first-seen order)
};

namespace detail {

inline std::vector<std::vector<int>> increasing_subsets(int k, int size) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  // Standard lexicographic combination enumeration.
  auto rec = [&](auto&& self, int next) -> void {
    if (static_cast<int>(current.size()) == size) {
      out.push_back(current);
      return;
    }
    for (int i = next; i < k; ++i) {
      current.push_back(i);
      self(self, i + 1);
      current.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace detail

inline FingerprintPartition fingerprint_partition(const AutomorphismGroup& g, int k, int n) {
  if (n < 1) throw InputError("fingerprint level must be at least 1");
  if (k < 0) throw InputError("tuple arity must be nonnegative");
  const int m = g.universe;
  const int ne = std::min(n, k);
  FingerprintPartition fp;
  fp.universe = m;
  fp.arity = k;
  fp.level = n;

  const OrbitPartition sub = orbit_partition(g, ne);
  const std::vector<std::vector<int>> subsets = detail::increasing_subsets(k, ne);

  const std::size_t total = checked_power(m, k);
  fp.class_of.assign(total, -1);
  std::map<std::vector<std::int32_t>, std::int32_t> ids;
  Tuple t(static_cast<std::size_t>(k));
  Tuple proj(static_cast<std::size_t>(ne));
  std::vector<std::int32_t> key;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int pos = k - 1; pos >= 0; --pos) {
      t[static_cast<std::size_t>(pos)] = static_cast<int>(rest % static_cast<std::size_t>(m));
      rest /= static_cast<std::size_t>(m);
    }
    key.clear();
    for (const auto& subset : subsets) {
      for (std::size_t i = 0; i < subset.size(); ++i)
        proj[i] = t[static_cast<std::size_t>(subset[i])];
      key.push_back(sub.orbit_of[encode_tuple(proj, m)]);
    }
    if (n == 1)
      for (int label : equality_pattern(t)) key.push_back(label);
    auto [it, inserted] = ids.emplace(key, static_cast<std::int32_t>(ids.size()));
    fp.class_of[idx] = it->second;
    (void)inserted;
  }
  fp.count = static_cast<int>(ids.size());
  return fp;
}

inline FingerprintPartition fingerprint_partition(const FiniteStructure& s, int k, int n) {
  return fingerprint_partition(automorphisms(s), k, n);
}

// ── n-ary test for a definable relation ─────────────────────────────────────

inline NaryResult is_nary(const AutomorphismGroup& g, const Relation& x, int n) {
  if (n < 1) throw InputError("n must be at least 1 (arity 0 is the sentence case)");
  if (x.universe() != g.universe)
    throw InputError("relation universe does not match the structure");
  if (!is_definable(g, x))
    throw InputError("relation is not invariant under the automorphism group; "
                     "only definable relations have an arity");
  const FingerprintPartition fp = fingerprint_partition(g, x.arity(), n);
  // x is a union of classes iff no class mixes members and non-members.
  std::vector<std::size_t> first_in(static_cast<std::size_t>(fp.count), SIZE_MAX);
  std::vector<std::size_t> first_out(static_cast<std::size_t>(fp.count), SIZE_MAX);
  for (std::size_t idx = 0; idx < fp.class_of.size(); ++idx) {
    const auto cls = static_cast<std::size_t>(fp.class_of[idx]);
    const bool in = x.test(idx);
    auto& same = in ? first_in[cls] : first_out[cls];
    const auto& other = in ? first_out[cls] : first_in[cls];
    if (same == SIZE_MAX) same = idx;
    if (other != SIZE_MAX) {
      // First conflicting class in lexicographic order; report its
      // lexicographically least member/non-member pair.
      NaryResult r;
      r.value = false;
      r.witness = Witness{decode_tuple(std::min(first_in[cls], first_out[cls]), x.universe(), x.arity()),
                          decode_tuple(std::max(first_in[cls], first_out[cls]), x.universe(), x.arity())};
      return r;
    }
  }
  return NaryResult{true, std::nullopt};
}

inline NaryResult is_nary(const FiniteStructure& s, const Relation& x, int n) {
  return is_nary(automorphisms(s), x, n);
}

// Least n with is_nary(x, n); 0 for the empty and the full relation
// (sentence-equivalent cases). Always at most x.arity().
inline int formula_arity(const FiniteStructure& s, const Relation& x) {
  const AutomorphismGroup g = automorphisms(s);
  if (x.universe() != s.universe) throw InputError("relation universe does not match the structure");
  if (!is_definable(g, x))
    throw InputError("relation is not invariant under the automorphism group; "
                     "only definable relations have an arity");
  if (x.is_empty() || x.is_full()) return 0;
  for (int n = 1; n < x.arity(); ++n)
    if (is_nary(g, x, n).value) return n;
  return x.arity();
}

// ── theory arity ────────────────────────────────────────────────────────────

struct LevelDiagnostic {
  int level = 0;    // n
  int classes = 0;  // fingerprint class count at this level
};

struct KDiagnostic {
  int k = 0;
  int orbits = 0;
  std::vector<LevelDiagnostic> fingerprint_classes;
};

struct RejectedLevel {
  int level = 0;      // candidate n that failed
  int k = 0;          // smallest k exhibiting the failure
  Witness pair;       // equal level-n fingerprints, different orbits
};

struct ArityReport {
  std::string structure;
  int arity = 1;
  int max_k = 1;
  std::vector<KDiagnostic> per_k;
  std::vector<RejectedLevel> rejected;  // one entry per rejected candidate level
};

namespace detail {

// Two tuples in the same fingerprint class but different orbits, preferring
// the lexicographically earliest conflict.
inline Witness saturation_witness(const FingerprintPartition& fp, const OrbitPartition& orbits) {
  std::vector<std::size_t> first_member(static_cast<std::size_t>(fp.count), SIZE_MAX);
  for (std::size_t idx = 0; idx < fp.class_of.size(); ++idx) {
    const auto cls = static_cast<std::size_t>(fp.class_of[idx]);
    if (first_member[cls] == SIZE_MAX) {
      first_member[cls] = idx;
      continue;
    }
    if (orbits.orbit_of[idx] != orbits.orbit_of[first_member[cls]])
      return Witness{decode_tuple(first_member[cls], fp.universe, fp.arity),
                     decode_tuple(idx, fp.universe, fp.arity)};
  }
  throw std::logic_error("saturation witness requested for a saturated partition");
}

}  // namespace detail

// Least n such that for every k with n < k ≤ max_k the level-n fingerprint
// partition of M^k equals the orbit partition of M^k. With max_k = m this is
// the arity of the full first-order theory of the structure.
inline ArityReport theory_arity(const FiniteStructure& s, int max_k = 0) {
  s.validate();
  if (max_k == 0) max_k = s.universe;
  if (max_k < 1) throw InputError("max_k must be at least 1");
  checked_power(s.universe, max_k);
  const AutomorphismGroup g = automorphisms(s);

  ArityReport report;
  report.structure = s.name;
  report.max_k = max_k;

  std::map<int, OrbitPartition> orbit_cache;
  auto orbits_at = [&](int k) -> const OrbitPartition& {
    auto it = orbit_cache.find(k);
    if (it == orbit_cache.end()) it = orbit_cache.emplace(k, orbit_partition(g, k)).first;
    return it->second;
  };

  int arity = max_k;
  for (int n = 1; n <= max_k; ++n) {
    bool saturated = true;
    for (int k = n + 1; k <= max_k; ++k) {
      const FingerprintPartition fp = fingerprint_partition(g, k, n);
      const OrbitPartition& orb = orbits_at(k);
      if (fp.count != orb.count) {
        report.rejected.push_back({n, k, detail::saturation_witness(fp, orb)});
        saturated = false;
        break;
      }
    }
    if (saturated) {
      arity = n;
      break;
    }
  }
  report.arity = arity;

  for (int k = 1; k <= max_k; ++k) {
    KDiagnostic diag;
    diag.k = k;
    diag.orbits = orbits_at(k).count;
    for (int n = 1; n <= std::min(arity, k - 1); ++n)
      diag.fingerprint_classes.push_back({n, fingerprint_partition(g, k, n).count});
    report.per_k.push_back(std::move(diag));
  }
  return report;
}

inline int theory_arity_value(const FiniteStructure& s, int max_k = 0) {
  return theory_arity(s, max_k).arity;
}

// ── transitivity ────────────────────────────────────────────────────────────

// True iff every orbit of n-tuples is exactly an equality-pattern class,
// i.e. the automorphism group acts transitively on injective n-tuples of
// every pattern.
inline bool n_transitive(const AutomorphismGroup& g, int n) {
  if (n < 1) throw InputError("transitivity level must be at least 1");
  const OrbitPartition orb = orbit_partition(g, n);
  std::map<Tuple, int> patterns;
  const std::size_t total = orb.orbit_of.size();
  for (std::size_t idx = 0; idx < total; ++idx)
    patterns.emplace(equality_pattern(decode_tuple(idx, g.universe, n)), 0);
  return static_cast<int>(patterns.size()) == orb.count;
}

inline bool n_transitive(const FiniteStructure& s, int n) {
  return n_transitive(automorphisms(s), n);
}

struct TransitivityProfile {
  std::vector<bool> transitive;  // index n-1 holds the n-transitivity flag
  int largest = 0;               // largest n with the flag set (0 if none)
};

inline TransitivityProfile transitivity_profile(const FiniteStructure& s) {
  const AutomorphismGroup g = automorphisms(s);
  TransitivityProfile profile;
  for (int n = 1; n <= s.universe; ++n) {
    profile.transitive.push_back(n_transitive(g, n));
    if (profile.transitive.back()) profile.largest = n;
  }
  return profile;
}

// ── quantifier elimination ──────────────────────────────────────────────────

struct QeResult {
  bool value = false;
  int failing_k = 0;               // smallest k where atomic types under-split
  std::optional<Witness> witness;  // same atomic type, different orbits
};

// True iff on every tuple length k ≤ m the partition by quantifier-free
// atomic type (equality pattern plus membership of every coordinate
// selection in every base relation) equals the orbit partition.
inline QeResult qe_check(const FiniteStructure& s) {
  s.validate();
  const AutomorphismGroup g = automorphisms(s);
  const int m = s.universe;
  for (int k = 1; k <= m; ++k) {
    const OrbitPartition orb = orbit_partition(g, k);
    const std::size_t total = orb.orbit_of.size();
    std::map<std::vector<std::int32_t>, std::size_t> first_of_type;
    Tuple t(static_cast<std::size_t>(k));
    std::vector<std::int32_t> key;
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (int pos = k - 1; pos >= 0; --pos) {
        t[static_cast<std::size_t>(pos)] = static_cast<int>(rest % static_cast<std::size_t>(m));
        rest /= static_cast<std::size_t>(m);
      }
      key.clear();
      for (int label : equality_pattern(t)) key.push_back(label);
      for (const auto& [rel_name, rel] : s.relations) {
        (void)rel_name;
        const int r = rel.arity();
        // Every selection of k coordinates with repetition, in lex order.
        const std::size_t selections = checked_power(k, r);
        Tuple sel(static_cast<std::size_t>(r));
        for (std::size_t sraw = 0; sraw < selections; ++sraw) {
          std::size_t srest = sraw;
          for (int pos = r - 1; pos >= 0; --pos) {
            sel[static_cast<std::size_t>(pos)] =
                t[srest % static_cast<std::size_t>(k)];
            srest /= static_cast<std::size_t>(k);
          }
          key.push_back(rel.test(sel) ? 1 : 0);
        }
      }
      auto [it, inserted] = first_of_type.emplace(key, idx);
      if (!inserted && orb.orbit_of[idx] != orb.orbit_of[it->second])
        return QeResult{false, k,
                        Witness{decode_tuple(it->second, m, k), decode_tuple(idx, m, k)}};
    }
  }
  return QeResult{true, 0, std::nullopt};
}

// ── Boolean-algebra atom counts ─────────────────────────────────────────────

struct BaAtoms {
  int k = 0;
  int level = 0;
  int atom_count = 0;
  int orbit_count = 0;
  FingerprintPartition partition;  // atom membership: partition.class_of
};

// Atoms of the Boolean algebra generated on M^k by all pullbacks of
// invariant sets of arity ≤ n (equalities included at n = 1): exactly the
// level-n fingerprint classes. The theory is n-ary iff atoms = orbits at
// every k in the scan window.
inline BaAtoms ba_atoms(const FiniteStructure& s, int k, int n) {
  s.validate();
  const AutomorphismGroup g = automorphisms(s);
  BaAtoms result;
  result.k = k;
  result.level = n;
  result.partition = fingerprint_partition(g, k, n);
  result.atom_count = result.partition.count;
  result.orbit_count = orbit_partition(g, k).count;
  return result;
}

// ── independent closure oracle ──────────────────────────────────────────────

// Decides the same question as is_nary by a different route: materialize the
// generator sets (cylinders over every orbit of M^min(n,k) on every
// increasing coordinate subset, plus the coordinate-equality diagonals when
// n = 1), split M^k into the atoms of the algebra they generate by literal
// set refinement, and test whether x is a union of atoms.
inline bool closure_oracle(const FiniteStructure& s, const Relation& x, int n) {
  if (n < 1) throw InputError("n must be at least 1");
  s.validate();
  if (x.universe() != s.universe) throw InputError("relation universe does not match the structure");
  const AutomorphismGroup g = automorphisms(s);
  if (!is_definable(g, x))
    throw InputError("relation is not invariant under the automorphism group");

  const int k = x.arity();
  const int m = s.universe;
  const int ne = std::min(n, k);

  std::vector<Relation> generators;
  const OrbitPartition sub = orbit_partition(g, ne);
  for (const auto& subset : detail::increasing_subsets(k, ne)) {
    CoordinateMap map{k, subset};
    for (std::int32_t orbit_id = 0; orbit_id < sub.count; ++orbit_id)
      generators.push_back(cylindrify(orbit_member_relation(sub, orbit_id), map));
  }
  if (n == 1) {
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        Relation diag(m, k);
        const std::size_t total = diag.domain_size();
        for (std::size_t idx = 0; idx < total; ++idx) {
          Tuple t = decode_tuple(idx, m, k);
          if (t[static_cast<std::size_t>(i)] == t[static_cast<std::size_t>(j)]) diag.set(idx);
        }
        generators.push_back(std::move(diag));
      }
  }

  std::vector<Relation> blocks{Relation::full(m, k)};
  for (const Relation& gen : generators) {
    std::vector<Relation> next;
    for (const Relation& block : blocks) {
      Relation inside = block & gen;
      Relation outside = block - gen;
      if (!inside.is_empty()) next.push_back(std::move(inside));
      if (!outside.is_empty()) next.push_back(std::move(outside));
    }
    blocks = std::move(next);
  }

  for (const Relation& block : blocks) {
    const Relation overlap = block & x;
    if (!overlap.is_empty() && overlap != block) return false;
  }
  return true;
}

// ── constant-distance proxy ─────────────────────────────────────────────────

struct ConstantizableResult {
  bool value = false;
  std::size_t min_symmetric_difference = 0;
};

// Distance of x from the algebra of pure-equality combinations: for each
// equality-pattern class independently, keeping or dropping the whole class
// costs the smaller of (members of x missed) and (non-members included).
// The relation is "within budget" iff the total optimal cost is ≤ budget.
inline ConstantizableResult constantizable_within(const FiniteStructure& s, const Relation& x,
                                                  std::size_t budget) {
  s.validate();
  if (x.universe() != s.universe) throw InputError("relation universe does not match the structure");
  if (!is_definable(s, x))
    throw InputError("relation is not invariant under the automorphism group");
  const int k = x.arity();
  const int m = s.universe;
  std::map<Tuple, std::pair<std::size_t, std::size_t>> per_class;  // pattern -> (in, out)
  const std::size_t total = x.domain_size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    auto& [in, out] = per_class[equality_pattern(decode_tuple(idx, m, k))];
    if (x.test(idx)) ++in;
    else ++out;
  }
  std::size_t cost = 0;
  for (const auto& [pattern, counts] : per_class) {
    (void)pattern;
    cost += std::min(counts.first, counts.second);
  }
  return ConstantizableResult{cost <= budget, cost};
}

}  // namespace aritylab
