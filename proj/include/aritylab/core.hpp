// Shared primitives: error types, resource caps, dense tuple codec.
//
// Tuples over the universe {0..m-1} are encoded big-endian (first coordinate
// most significant), so ascending index order equals lexicographic tuple
// order. Every deterministic-ordering guarantee in this library rests on that.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aritylab {

// Malformed or out-of-contract input (files, formulas, argument ranges).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Instance exceeds a hard resource cap; callers may retry with smaller input.
struct CapError : std::runtime_error {
  explicit CapError(const std::string& what) : std::runtime_error(what) {}
};

// ── resource caps ───────────────────────────────────────────────────────────

inline constexpr std::size_t kMaxRelationBits = std::size_t{1} << 27;
inline constexpr int kMaxGroupUniverse = 8;    // exhaustive permutation search
inline constexpr int kMaxWitnessOrbits = 20;   // 2^orbits subsets enumerated

using Tuple = std::vector<int>;

// ── tuple codec ─────────────────────────────────────────────────────────────

// m^k, guarded by kMaxRelationBits.
inline std::size_t checked_power(int m, int k) {
  if (m < 1) throw InputError("universe size must be at least 1");
  if (k < 0) throw InputError("arity must be nonnegative");
  std::size_t size = 1;
  for (int i = 0; i < k; ++i) {
    if (size > kMaxRelationBits / static_cast<std::size_t>(m))
      throw CapError("tuple space exceeds cap: " + std::to_string(m) + "^" +
                     std::to_string(k) + " > 2^27");
    size *= static_cast<std::size_t>(m);
  }
  return size;
}

inline std::size_t encode_tuple(const Tuple& t, int m) {
  std::size_t idx = 0;
  for (int v : t) idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(v);
  return idx;
}

inline Tuple decode_tuple(std::size_t idx, int m, int k) {
  Tuple t(static_cast<std::size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    t[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(m));
    idx /= static_cast<std::size_t>(m);
  }
  return t;
}

// Canonical equality pattern: coordinates renamed by first occurrence,
// e.g. (5,2,5,1) -> (0,1,0,2). Two tuples are isomorphic as pure tuples
// iff their patterns coincide.
inline Tuple equality_pattern(const Tuple& t) {
  Tuple pat(t.size());
  std::vector<int> seen;
  for (std::size_t i = 0; i < t.size(); ++i) {
    int label = -1;
    for (std::size_t j = 0; j < seen.size(); ++j)
      if (seen[j] == t[i]) { label = static_cast<int>(j); break; }
    if (label < 0) {
      label = static_cast<int>(seen.size());
      seen.push_back(t[i]);
    }
    pat[i] = label;
  }
  return pat;
}

// ── names and hashing ───────────────────────────────────────────────────────

// Identifier shape shared by relation names, structure names and formula
// variables: [A-Za-z_][A-Za-z0-9_]*.
inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto body = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  if (!head(s[0])) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!body(s[i])) return false;
  return true;
}

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace aritylab
