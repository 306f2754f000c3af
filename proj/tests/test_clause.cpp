// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "cdstream/literal.hpp"

using namespace cdstream;

TEST_CASE("literal complement is an involution", "[clause]") {
  const Literal l = pos(7);
  REQUIRE(l.complement().complement() == l);
  REQUIRE(neg(3).complement() == pos(3));
  REQUIRE(pos(1).atom() == 1);
  REQUIRE_FALSE(neg(1).positive());
}

TEST_CASE("canonicalize removes duplicates", "[clause]") {
  const auto r = canonicalize({pos(1), neg(2), pos(1)});
  const auto& c = std::get<Clause>(r);
  REQUIRE(c.size() == 2);
  REQUIRE(c[0] == pos(1));
  REQUIRE(c[1] == neg(2));
}

TEST_CASE("canonicalize detects complementary pairs", "[clause]") {
  const auto r = canonicalize({pos(1), neg(1)});
  REQUIRE(std::holds_alternative<Tautology>(r));
}

TEST_CASE("canonicalize sorts by atom", "[clause]") {
  const auto c = make_clause({neg(3), pos(2)});
  REQUIRE(c[0] == pos(2));
  REQUIRE(c[1] == neg(3));
}

TEST_CASE("canonicalize rejects empty input", "[clause]") {
  REQUIRE_THROWS_AS(canonicalize(std::span<const Literal>{}), EmptyClauseError);
}

TEST_CASE("canonicalize is idempotent on tautology-free inputs", "[clause]") {
  std::mt19937_64 rng(42);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<Literal> lits;
    std::set<Atom> used;
    const int len = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < len; ++i) {
      const Atom a = 1 + static_cast<Atom>(rng() % 20);
      if (used.contains(a)) continue;
      used.insert(a);
      lits.emplace_back(a, (rng() & 1) == 0);
    }
    if (lits.empty()) continue;
    // duplicate some literals to exercise dedup
    lits.push_back(lits[rng() % lits.size()]);
    const Clause once = make_clause(std::span<const Literal>(lits));
    const Clause twice = make_clause(std::span<const Literal>(once.literals()));
    REQUIRE(once == twice);
  }
}

TEST_CASE("clause_key is order and duplication invariant", "[clause]") {
  const Clause a = make_clause({pos(1), neg(2)});
  const Clause b = make_clause({neg(2), pos(1), pos(1)});
  REQUIRE(clause_key(a) == clause_key(b));
}

TEST_CASE("clause_key distinguishes polarity", "[clause]") {
  REQUIRE(clause_key(make_clause({pos(1)})) != clause_key(make_clause({neg(1)})));
}

TEST_CASE("clause_key has no collisions across 1e5 random clauses", "[clause]") {
  std::mt19937_64 rng(2026);
  std::set<Clause> clauses;
  while (clauses.size() < 100000) {
    std::set<Atom> atoms;
    while (atoms.size() < 5) atoms.insert(1 + static_cast<Atom>(rng() % 100));
    std::vector<Literal> lits;
    for (Atom a : atoms) lits.emplace_back(a, (rng() & 1) == 0);
    clauses.insert(make_clause(std::span<const Literal>(lits)));
  }
  // distinct canonical clauses must map to distinct keys
  std::set<ClauseKey> keys;
  for (const Clause& c : clauses) keys.insert(clause_key(c));
  REQUIRE(keys.size() == clauses.size());
}

TEST_CASE("clause_key hex digest is stable", "[clause]") {
  const ClauseKey k = clause_key(make_clause({pos(1), neg(2)}));
  REQUIRE(k.hex().size() == 32);
  REQUIRE(k.hex() == clause_key(make_clause({neg(2), pos(1)})).hex());
}
