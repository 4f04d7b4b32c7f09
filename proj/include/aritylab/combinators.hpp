// Relation- and structure-level constructions: cylinders, projections,
// Cartesian/mixed products and sums, disjoint unions with part marks,
// composition of structures along a fiber, and expansion helpers.
//
// Coordinate maps are 0-based and injective; projections quantify away the
// dropped coordinates existentially.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "aritylab/core.hpp"
#include "aritylab/structure.hpp"
#include "aritylab/symmetry.hpp"

namespace aritylab {

// Sends source coordinate i to target coordinate positions[i].
struct CoordinateMap {
  int target_arity = 0;
  std::vector<int> positions;

  void validate(int source_arity) const {
    if (static_cast<int>(positions.size()) != source_arity)
      throw InputError("coordinate map must assign every source coordinate");
    std::vector<bool> hit(static_cast<std::size_t>(target_arity), false);
    for (int p : positions) {
      if (p < 0 || p >= target_arity)
        throw InputError("coordinate map position " + std::to_string(p) + " outside target arity " +
                         std::to_string(target_arity));
      if (hit[static_cast<std::size_t>(p)])
        throw InputError("coordinate map must be injective");
      hit[static_cast<std::size_t>(p)] = true;
    }
  }
};

// Lift x to target arity: t is in the result iff the selected coordinates of
// t (read through the map) form a member of x. Unmapped coordinates are free.
inline Relation cylindrify(const Relation& x, const CoordinateMap& map) {
  map.validate(x.arity());
  const int m = x.universe();
  Relation out(m, map.target_arity);
  const std::size_t total = out.domain_size();
  Tuple t(static_cast<std::size_t>(map.target_arity));
  Tuple sel(static_cast<std::size_t>(x.arity()));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int pos = map.target_arity - 1; pos >= 0; --pos) {
      t[static_cast<std::size_t>(pos)] = static_cast<int>(rest % static_cast<std::size_t>(m));
      rest /= static_cast<std::size_t>(m);
    }
    for (std::size_t i = 0; i < sel.size(); ++i)
      sel[i] = t[static_cast<std::size_t>(map.positions[i])];
    if (x.test(sel)) out.set(idx);
  }
  return out;
}

// Existential projection onto the strictly increasing coordinate subset
// `keep`: u is in the result iff some member of x restricts to u on `keep`.
inline Relation project(const Relation& x, const std::vector<int>& keep) {
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= x.arity())
      throw InputError("projection coordinate " + std::to_string(keep[i]) + " outside arity " +
                       std::to_string(x.arity()));
    if (i > 0 && keep[i] <= keep[i - 1])
      throw InputError("projection coordinates must be strictly increasing");
  }
  const int m = x.universe();
  Relation out(m, static_cast<int>(keep.size()));
  Tuple u(keep.size());
  x.for_each_member([&](std::size_t idx) {
    Tuple t = decode_tuple(idx, m, x.arity());
    for (std::size_t i = 0; i < keep.size(); ++i) u[i] = t[static_cast<std::size_t>(keep[i])];
    out.set(u);
  });
  return out;
}

// A-block in x AND B-block in y, over arity x.arity + y.arity.
inline Relation cartesian_product(const Relation& x, const Relation& y) {
  if (x.universe() != y.universe()) throw InputError("operands must share a universe size");
  Relation out(x.universe(), x.arity() + y.arity());
  const std::size_t ysize = y.domain_size();
  const std::size_t total = out.domain_size();
  for (std::size_t idx = 0; idx < total; ++idx)
    if (x.test(idx / ysize) && y.test(idx % ysize)) out.set(idx);
  return out;
}

// A-block in x OR B-block in y — the dual of the Cartesian product.
inline Relation cartesian_sum(const Relation& x, const Relation& y) {
  if (x.universe() != y.universe()) throw InputError("operands must share a universe size");
  Relation out(x.universe(), x.arity() + y.arity());
  const std::size_t ysize = y.domain_size();
  const std::size_t total = out.domain_size();
  for (std::size_t idx = 0; idx < total; ++idx)
    if (x.test(idx / ysize) || y.test(idx % ysize)) out.set(idx);
  return out;
}

// Conjunction of x and y over a shared target context (coordinates may be
// shared between the two maps).
inline Relation mixed_product(const Relation& x, const CoordinateMap& mx,
                              const Relation& y, const CoordinateMap& my) {
  if (x.universe() != y.universe()) throw InputError("operands must share a universe size");
  if (mx.target_arity != my.target_arity)
    throw InputError("mixed operands must target the same arity");
  return cylindrify(x, mx) & cylindrify(y, my);
}

// Disjunction over a shared target context.
inline Relation mixed_sum(const Relation& x, const CoordinateMap& mx,
                          const Relation& y, const CoordinateMap& my) {
  if (x.universe() != y.universe()) throw InputError("operands must share a universe size");
  if (mx.target_arity != my.target_arity)
    throw InputError("mixed operands must target the same arity");
  return cylindrify(x, mx) | cylindrify(y, my);
}

// ── disjoint union ──────────────────────────────────────────────────────────

struct RelationRename {
  int part = 0;  // 1-based part index
  std::string from, to;
};

struct DisjointUnionResult {
  FiniteStructure structure;
  std::vector<int> offsets;             // element offset of each part
  std::vector<RelationRename> renames;  // applied collision renames
};

// Union of the parts on a shared universe. Each part i gets a fresh unary
// mark P<i>; relation names that collide across parts (or with a mark) are
// prefixed with u<i>_ until unique. Elements of part i are shifted by
// offsets[i].
inline DisjointUnionResult disjoint_union(const std::vector<FiniteStructure>& parts) {
  if (parts.empty()) throw InputError("disjoint union needs at least one part");
  int total = 0;
  for (const FiniteStructure& p : parts) {
    p.validate();
    total += p.universe;
  }

  DisjointUnionResult result;
  std::string name;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) name += "_u_";
    name += parts[i].name;
  }
  result.structure = FiniteStructure(name, total);

  result.offsets.resize(parts.size());
  int offset = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    result.offsets[i] = offset;
    offset += parts[i].universe;
  }

  // Reserved mark names, then per-part final names in deterministic order.
  std::vector<std::string> used;
  for (std::size_t i = 0; i < parts.size(); ++i) used.push_back("P" + std::to_string(i + 1));
  std::vector<std::pair<std::string, int>> occurrences;  // name -> #parts containing it
  for (const FiniteStructure& p : parts)
    for (const auto& [rel_name, rel] : p.relations) {
      (void)rel;
      bool found = false;
      for (auto& [n, c] : occurrences)
        if (n == rel_name) { c++; found = true; break; }
      if (!found) occurrences.emplace_back(rel_name, 1);
    }
  auto occurrence_count = [&](const std::string& n) {
    for (const auto& [nm, c] : occurrences)
      if (nm == n) return c;
    return 0;
  };
  auto in_use = [&](const std::string& n) {
    return std::find(used.begin(), used.end(), n) != used.end();
  };

  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string prefix = "u" + std::to_string(i + 1) + "_";
    for (const auto& [rel_name, rel] : parts[i].relations) {
      std::string final_name = rel_name;
      if (occurrence_count(rel_name) > 1 || in_use(final_name)) final_name = prefix + final_name;
      while (in_use(final_name)) final_name = prefix + final_name;
      used.push_back(final_name);
      if (final_name != rel_name)
        result.renames.push_back({static_cast<int>(i) + 1, rel_name, final_name});

      Relation shifted(total, rel.arity());
      rel.for_each_member([&](std::size_t idx) {
        Tuple t = decode_tuple(idx, parts[i].universe, rel.arity());
        for (int& v : t) v += result.offsets[i];
        shifted.set(t);
      });
      result.structure.add_relation(final_name, std::move(shifted));
    }
    Relation mark(total, 1);
    for (int v = 0; v < parts[i].universe; ++v)
      mark.set(Tuple{v + result.offsets[i]});
    result.structure.add_relation("P" + std::to_string(i + 1), std::move(mark));
  }
  return result;
}

// ── composition ─────────────────────────────────────────────────────────────

struct CompositionResult {
  FiniteStructure structure;
  int outer_size = 1;  // |M|
  int inner_size = 1;  // |N|, the fiber size; element (a, b) encodes as a*|N| + b
};

// Composition outer[inner]: the universe is the set of pairs (a, b) with
// a from the outer and b from the inner structure. A shared-signature symbol
// R holds on a tuple iff the outer projections satisfy R in the outer
// structure, or all outer projections agree (the tuple lies in one fiber)
// and the inner projections satisfy R in the inner structure.
inline CompositionResult compose(const FiniteStructure& outer, const FiniteStructure& inner) {
  outer.validate();
  inner.validate();
  CompositionResult result;
  result.outer_size = outer.universe;
  result.inner_size = inner.universe;
  const int m = outer.universe * inner.universe;
  result.structure = FiniteStructure(outer.name + "_of_" + inner.name, m);

  std::vector<std::string> symbols;
  for (const auto& [rel_name, rel] : outer.relations) {
    (void)rel;
    symbols.push_back(rel_name);
  }
  for (const auto& [rel_name, rel] : inner.relations) {
    (void)rel;
    if (std::find(symbols.begin(), symbols.end(), rel_name) == symbols.end())
      symbols.push_back(rel_name);
  }
  std::sort(symbols.begin(), symbols.end());

  for (const std::string& sym : symbols) {
    const bool in_outer = outer.has_relation(sym);
    const bool in_inner = inner.has_relation(sym);
    int arity = in_outer ? outer.relation(sym).arity() : inner.relation(sym).arity();
    if (in_outer && in_inner && outer.relation(sym).arity() != inner.relation(sym).arity())
      throw InputError("shared symbol '" + sym + "' has conflicting arities");

    Relation out(m, arity);
    const std::size_t total = out.domain_size();
    Tuple t(static_cast<std::size_t>(arity));
    Tuple outer_part(static_cast<std::size_t>(arity));
    Tuple inner_part(static_cast<std::size_t>(arity));
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (int pos = arity - 1; pos >= 0; --pos) {
        t[static_cast<std::size_t>(pos)] = static_cast<int>(rest % static_cast<std::size_t>(m));
        rest /= static_cast<std::size_t>(m);
      }
      bool same_fiber = true;
      for (int pos = 0; pos < arity; ++pos) {
        outer_part[static_cast<std::size_t>(pos)] = t[static_cast<std::size_t>(pos)] / inner.universe;
        inner_part[static_cast<std::size_t>(pos)] = t[static_cast<std::size_t>(pos)] % inner.universe;
        if (pos > 0 && outer_part[static_cast<std::size_t>(pos)] != outer_part[0]) same_fiber = false;
      }
      bool holds = false;
      if (in_outer && outer.relation(sym).test(outer_part)) holds = true;
      if (!holds && in_inner && same_fiber && inner.relation(sym).test(inner_part)) holds = true;
      if (holds) out.set(idx);
    }
    result.structure.add_relation(sym, std::move(out));
  }
  return result;
}

// Whether the same-fiber equivalence (x, y agree on their outer component)
// is invariant under all automorphisms of the composed structure — the
// precondition for the composition to behave like a fibered product at the
// theory level.
inline bool e_definable_check(const FiniteStructure& composed, int fiber_size) {
  composed.validate();
  if (fiber_size < 1) throw InputError("fiber size must be at least 1");
  if (composed.universe % fiber_size != 0)
    throw InputError("fiber size must divide the universe size");
  Relation e(composed.universe, 2);
  for (int x = 0; x < composed.universe; ++x)
    for (int y = 0; y < composed.universe; ++y)
      if (x / fiber_size == y / fiber_size) e.set(Tuple{x, y});
  return is_definable(composed, e);
}

// ── expansions ──────────────────────────────────────────────────────────────

// Expansion naming every ordered pair with a fresh binary singleton B_i_j.
// The result is rigid, so its theory collapses to low arity by construction.
inline FiniteStructure binarize(const FiniteStructure& s) {
  s.validate();
  FiniteStructure out = s;
  out.name = s.name + "_bin";
  for (int i = 0; i < s.universe; ++i)
    for (int j = 0; j < s.universe; ++j) {
      Relation pin(s.universe, 2);
      pin.set(Tuple{i, j});
      out.add_relation("B_" + std::to_string(i) + "_" + std::to_string(j), std::move(pin));
    }
  return out;
}

// Expansion naming every element with a fresh unary singleton U_i.
inline FiniteStructure unarize(const FiniteStructure& s) {
  s.validate();
  FiniteStructure out = s;
  out.name = s.name + "_un";
  for (int i = 0; i < s.universe; ++i) {
    Relation pin(s.universe, 1);
    pin.set(Tuple{i});
    out.add_relation("U_" + std::to_string(i), std::move(pin));
  }
  return out;
}

// Expansion by an arbitrary relation under a fresh name. The relation need
// not be invariant — expanding by a non-invariant set is exactly how arity
// can drop.
inline FiniteStructure expand_with(const FiniteStructure& s, const std::string& rel_name,
                                   const Relation& x) {
  s.validate();
  FiniteStructure out = s;
  out.name = s.name + "_" + rel_name;
  out.add_relation(rel_name, x);
  return out;
}

}  // namespace aritylab
