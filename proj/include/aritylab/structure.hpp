// Dense k-ary relations over a finite universe, and finite relational
// structures (a universe plus named relations).
//
// A Relation is a bitset over all m^k tuples; set membership, Boolean
// algebra, and tuple enumeration are all index-order (= lex-order)
// deterministic. Value semantics throughout.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aritylab/core.hpp"

namespace aritylab {

class Relation {
 public:
  Relation() = default;

  Relation(int universe, int arity)
      : universe_(universe), arity_(arity), size_(checked_power(universe, arity)),
        words_((size_ + 63) / 64, 0) {}

  static Relation empty(int universe, int arity) { return Relation(universe, arity); }

  static Relation full(int universe, int arity) {
    Relation r(universe, arity);
    std::fill(r.words_.begin(), r.words_.end(), ~std::uint64_t{0});
    r.mask_tail();
    return r;
  }

  static Relation from_tuples(int universe, int arity, const std::vector<Tuple>& tuples) {
    Relation r(universe, arity);
    for (const Tuple& t : tuples) r.set(t);
    return r;
  }

  int universe() const { return universe_; }
  int arity() const { return arity_; }
  std::size_t domain_size() const { return size_; }

  bool test(std::size_t idx) const {
    check_index(idx);
    return (words_[idx >> 6] >> (idx & 63)) & 1;
  }
  bool test(const Tuple& t) const { return test(index_of(t)); }

  void set(std::size_t idx, bool value = true) {
    check_index(idx);
    std::uint64_t bit = std::uint64_t{1} << (idx & 63);
    if (value) words_[idx >> 6] |= bit;
    else words_[idx >> 6] &= ~bit;
  }
  void set(const Tuple& t, bool value = true) { set(index_of(t), value); }

  std::size_t count() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool is_empty() const {
    for (std::uint64_t w : words_)
      if (w != 0) return false;
    return true;
  }
  bool is_full() const { return count() == size_; }

  bool subset_of(const Relation& other) const {
    check_compatible(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.universe_ == b.universe_ && a.arity_ == b.arity_ && a.words_ == b.words_;
  }
  friend bool operator!=(const Relation& a, const Relation& b) { return !(a == b); }

  friend Relation operator&(Relation a, const Relation& b) {
    a.check_compatible(b);
    for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] &= b.words_[i];
    return a;
  }
  friend Relation operator|(Relation a, const Relation& b) {
    a.check_compatible(b);
    for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] |= b.words_[i];
    return a;
  }
  friend Relation operator^(Relation a, const Relation& b) {
    a.check_compatible(b);
    for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] ^= b.words_[i];
    return a;
  }
  friend Relation operator-(Relation a, const Relation& b) {
    a.check_compatible(b);
    for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] &= ~b.words_[i];
    return a;
  }
  Relation complement() const {
    Relation r(*this);
    for (std::uint64_t& w : r.words_) w = ~w;
    r.mask_tail();
    return r;
  }

  // Set tuple indices in ascending (= lex) order.
  template <typename Fn>
  void for_each_member(Fn&& fn) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        int b = std::countr_zero(w);
        fn((wi << 6) + static_cast<std::size_t>(b));
        w &= w - 1;
      }
    }
  }

  std::vector<Tuple> tuples() const {
    std::vector<Tuple> out;
    out.reserve(count());
    for_each_member([&](std::size_t idx) { out.push_back(decode_tuple(idx, universe_, arity_)); });
    return out;
  }

  std::size_t index_of(const Tuple& t) const {
    if (static_cast<int>(t.size()) != arity_)
      throw InputError("tuple length " + std::to_string(t.size()) +
                       " does not match relation arity " + std::to_string(arity_));
    for (int v : t)
      if (v < 0 || v >= universe_)
        throw InputError("tuple entry " + std::to_string(v) + " outside universe of size " +
                         std::to_string(universe_));
    return encode_tuple(t, universe_);
  }

 private:
  void check_index(std::size_t idx) const {
    if (idx >= size_) throw InputError("tuple index out of range");
  }
  void check_compatible(const Relation& other) const {
    if (universe_ != other.universe_ || arity_ != other.arity_)
      throw InputError("relation operands differ in universe or arity");
  }
  void mask_tail() {
    if (size_ % 64 != 0 && !words_.empty())
      words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  int universe_ = 1;
  int arity_ = 0;
  std::size_t size_ = 1;
  std::vector<std::uint64_t> words_ = {0};
};

// ── finite structures ───────────────────────────────────────────────────────

struct FiniteStructure {
  std::string name;
  int universe = 0;
  std::vector<std::string> element_names;  // optional; empty or size == universe
  std::map<std::string, Relation> relations;

  FiniteStructure() = default;
  FiniteStructure(std::string name_, int universe_) : name(std::move(name_)), universe(universe_) {
    if (universe < 1) throw InputError("universe size must be at least 1");
    if (!is_identifier(name)) throw InputError("structure name must be an identifier: '" + name + "'");
  }

  void add_relation(const std::string& rel_name, Relation rel) {
    if (!is_identifier(rel_name))
      throw InputError("relation name must be an identifier: '" + rel_name + "'");
    if (relations.count(rel_name))
      throw InputError("duplicate relation name '" + rel_name + "'");
    if (rel.universe() != universe)
      throw InputError("relation '" + rel_name + "' is over a different universe size");
    if (rel.arity() < 1)
      throw InputError("relation '" + rel_name + "' must have arity at least 1");
    relations.emplace(rel_name, std::move(rel));
  }

  bool has_relation(const std::string& rel_name) const { return relations.count(rel_name) > 0; }

  const Relation& relation(const std::string& rel_name) const {
    auto it = relations.find(rel_name);
    if (it == relations.end())
      throw InputError("unknown relation '" + rel_name + "' in structure '" + name + "'");
    return it->second;
  }

  void validate() const {
    if (universe < 1) throw InputError("universe size must be at least 1");
    if (!is_identifier(name)) throw InputError("structure name must be an identifier: '" + name + "'");
    if (!element_names.empty() && static_cast<int>(element_names.size()) != universe)
      throw InputError("element_names must list exactly one name per element");
    for (const auto& [rel_name, rel] : relations) {
      if (!is_identifier(rel_name))
        throw InputError("relation name must be an identifier: '" + rel_name + "'");
      if (rel.universe() != universe)
        throw InputError("relation '" + rel_name + "' is over a different universe size");
      if (rel.arity() < 1)
        throw InputError("relation '" + rel_name + "' must have arity at least 1");
    }
  }

  friend bool operator==(const FiniteStructure& a, const FiniteStructure& b) {
    return a.name == b.name && a.universe == b.universe && a.element_names == b.element_names &&
           a.relations == b.relations;
  }
  friend bool operator!=(const FiniteStructure& a, const FiniteStructure& b) { return !(a == b); }
};

}  // namespace aritylab
