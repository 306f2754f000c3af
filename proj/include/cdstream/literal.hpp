// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cdstream/errors.hpp"

namespace cdstream {

using Atom = std::uint32_t;

// A literal is an atom (>= 1) with a polarity. Encoded as 2*atom for the
// positive literal and 2*atom+1 for the negative one, so the code doubles as
// an index into literal-indexed arrays and orders literals by (atom, polarity)
// with the positive literal first.
class Literal {
public:
  constexpr Literal() = default;
  constexpr Literal(Atom atom, bool positive) : code_((atom << 1) | (positive ? 0u : 1u)) {}

  static constexpr Literal from_code(std::uint32_t code) {
    Literal l;
    l.code_ = code;
    return l;
  }

  [[nodiscard]] constexpr Atom atom() const { return code_ >> 1; }
  [[nodiscard]] constexpr bool positive() const { return (code_ & 1u) == 0; }
  [[nodiscard]] constexpr std::uint32_t code() const { return code_; }
  [[nodiscard]] constexpr Literal complement() const { return from_code(code_ ^ 1u); }

  friend constexpr auto operator<=>(Literal a, Literal b) = default;

  [[nodiscard]] std::string str() const {
    return positive() ? std::to_string(atom()) : "-" + std::to_string(atom());
  }

private:
  std::uint32_t code_ = 0;
};

constexpr Literal pos(Atom a) { return Literal(a, true); }
constexpr Literal neg(Atom a) { return Literal(a, false); }

// A canonical clause: literals sorted by (atom, polarity), no duplicates,
// never both l and its complement. Construct through canonicalize().
class Clause {
public:
  Clause() = default;

  [[nodiscard]] std::size_t size() const { return lits_.size(); }
  [[nodiscard]] bool empty() const { return lits_.empty(); }
  [[nodiscard]] Literal operator[](std::size_t i) const { return lits_[i]; }
  [[nodiscard]] auto begin() const { return lits_.begin(); }
  [[nodiscard]] auto end() const { return lits_.end(); }
  [[nodiscard]] const std::vector<Literal>& literals() const { return lits_; }
  [[nodiscard]] Atom max_atom() const { return lits_.empty() ? 0 : lits_.back().atom(); }

  friend auto operator<=>(const Clause&, const Clause&) = default;

  [[nodiscard]] std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < lits_.size(); ++i) {
      if (i) s += " ";
      s += lits_[i].str();
    }
    return s + ")";
  }

  // Internal factory: lits must already be canonical.
  static Clause from_canonical(std::vector<Literal> lits) {
    Clause c;
    c.lits_ = std::move(lits);
    return c;
  }

private:
  std::vector<Literal> lits_;
};

// Marker result for a clause containing l and its complement.
struct Tautology {
  friend bool operator==(Tautology, Tautology) { return true; }
};

using CanonicalizeResult = std::variant<Clause, Tautology>;

// Sorts, deduplicates, and rejects complementary pairs. Throws
// EmptyClauseError on an empty input sequence.
inline CanonicalizeResult canonicalize(std::span<const Literal> lits) {
  if (lits.empty()) throw EmptyClauseError("canonicalize: empty literal sequence");
  std::vector<Literal> sorted(lits.begin(), lits.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i].atom() == sorted[i + 1].atom()) return Tautology{};
  }
  return Clause::from_canonical(std::move(sorted));
}

inline CanonicalizeResult canonicalize(std::initializer_list<Literal> lits) {
  return canonicalize(std::span<const Literal>(lits.begin(), lits.size()));
}

// Convenience for inputs known to be tautology-free (encoders, tests).
inline Clause make_clause(std::span<const Literal> lits) {
  return std::get<Clause>(canonicalize(lits));
}

inline Clause make_clause(std::initializer_list<Literal> lits) {
  return std::get<Clause>(canonicalize(lits));
}

// 128-bit content digest of a canonical clause. Equal canonical clauses yield
// equal keys; key equality is the identity used for rediscovery detection, so
// the digest is wide enough that collisions are not a practical concern.
struct ClauseKey {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend constexpr auto operator<=>(const ClauseKey&, const ClauseKey&) = default;

  [[nodiscard]] std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s(32, '0');
    std::uint64_t h = hi, l = lo;
    for (int i = 15; i >= 0; --i, h >>= 4) s[i] = digits[h & 0xf];
    for (int i = 31; i >= 16; --i, l >>= 4) s[i] = digits[l & 0xf];
    return s;
  }
};

namespace detail {
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Deterministic across runs and platforms: a pure function of the canonical
// literal codes.
inline ClauseKey clause_key(const Clause& c) {
  std::uint64_t h1 = 0x2545f4914f6cdd1dULL;
  std::uint64_t h2 = 0x9e3779b97f4a7c15ULL;
  for (Literal l : c) {
    h1 = detail::mix64(h1 ^ l.code());
    h2 = detail::mix64(h2 + (static_cast<std::uint64_t>(l.code()) << 17));
  }
  h1 = detail::mix64(h1 ^ c.size());
  h2 = detail::mix64(h2 + c.size());
  return ClauseKey{h1, h2};
}

struct ClauseKeyHash {
  std::size_t operator()(const ClauseKey& k) const noexcept {
    return static_cast<std::size_t>(k.hi ^ (k.lo * 0x9e3779b97f4a7c15ULL));
  }
};

}  // namespace cdstream
