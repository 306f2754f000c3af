// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT
//
// Test-only enumeration oracles, independent of the engine implementation.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cdstream/literal.hpp"

namespace cdstream::test {

struct MaskClause {
  std::uint32_t pos = 0;  // bit a-1 set if atom a occurs positively
  std::uint32_t neg = 0;
};

inline MaskClause to_mask(const Clause& c) {
  MaskClause m;
  for (Literal l : c) {
    const std::uint32_t bit = 1u << (l.atom() - 1);
    if (l.positive()) m.pos |= bit;
    else m.neg |= bit;
  }
  return m;
}

inline bool satisfies(std::uint32_t assignment, const MaskClause& m) {
  return (assignment & m.pos) != 0 || (~assignment & m.neg) != 0;
}

// One bit per assignment: true if it satisfies every clause.
inline std::vector<bool> satisfying_table(const std::vector<Clause>& program, Atom atoms) {
  std::vector<MaskClause> masks;
  masks.reserve(program.size());
  for (const Clause& c : program) masks.push_back(to_mask(c));
  const std::uint64_t total = std::uint64_t{1} << atoms;
  std::vector<bool> table(total, true);
  for (std::uint64_t a = 0; a < total; ++a) {
    for (const MaskClause& m : masks) {
      if (!satisfies(static_cast<std::uint32_t>(a), m)) {
        table[a] = false;
        break;
      }
    }
  }
  return table;
}

inline std::uint32_t literal_mask(const std::vector<Literal>& lits) {
  std::uint32_t m = 0;
  for (Literal l : lits) m |= 1u << (l.atom() - 1);
  return m;
}

inline std::uint32_t positive_mask(const std::vector<Literal>& lits) {
  std::uint32_t m = 0;
  for (Literal l : lits)
    if (l.positive()) m |= 1u << (l.atom() - 1);
  return m;
}

// Exists a model of program (given by its satisfying table) that agrees with
// all assumption literals.
inline bool brute_force_satisfiable(const std::vector<bool>& table, Atom atoms,
                                    const std::vector<Literal>& assumptions) {
  const std::uint32_t care = literal_mask(assumptions);
  const std::uint32_t want = positive_mask(assumptions);
  const std::uint64_t total = std::uint64_t{1} << atoms;
  for (std::uint64_t a = 0; a < total; ++a)
    if (table[a] && (static_cast<std::uint32_t>(a) & care) == want) return true;
  return false;
}

// program (under the given assumptions) logically implies c: no assignment
// satisfies program + assumptions + the negation of c.
inline bool brute_force_implied(const std::vector<bool>& table, Atom atoms,
                                const std::vector<Literal>& assumptions, const Clause& c) {
  const std::uint32_t care = literal_mask(assumptions);
  const std::uint32_t want = positive_mask(assumptions);
  const MaskClause m = to_mask(c);
  const std::uint64_t total = std::uint64_t{1} << atoms;
  for (std::uint64_t a = 0; a < total; ++a) {
    if (!table[a]) continue;
    const auto assignment = static_cast<std::uint32_t>(a);
    if ((assignment & care) != want) continue;
    if (!satisfies(assignment, m)) return false;  // countermodel of c
  }
  return true;
}

inline bool model_satisfies(const std::vector<bool>& model, const Clause& c) {
  for (Literal l : c)
    if (model[l.atom()] == l.positive()) return true;
  return false;
}

// Random k-clause programs for property tests.
inline std::vector<Clause> random_program(std::mt19937_64& rng, Atom atoms, std::size_t clauses) {
  std::vector<Clause> program;
  while (program.size() < clauses) {
    const std::size_t len = 2 + rng() % 3;
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < len; ++i)
      lits.emplace_back(1 + static_cast<Atom>(rng() % atoms), (rng() & 1) == 0);
    const auto r = canonicalize(std::span<const Literal>(lits));
    if (const Clause* c = std::get_if<Clause>(&r)) program.push_back(*c);
  }
  return program;
}

inline std::vector<Literal> random_assumptions(std::mt19937_64& rng, Atom atoms,
                                               std::size_t count) {
  std::vector<Literal> lits;
  std::vector<bool> used(atoms + 1, false);
  for (std::size_t i = 0; i < count; ++i) {
    const Atom a = 1 + static_cast<Atom>(rng() % atoms);
    if (used[a]) continue;
    used[a] = true;
    lits.emplace_back(a, (rng() & 1) == 0);
  }
  return lits;
}

}  // namespace cdstream::test
