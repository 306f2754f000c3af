// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdstream/errors.hpp"
#include "cdstream/literal.hpp"

namespace cdstream {

// Allocates dense atom ids and keeps the id -> ground-atom-name symbol table.
class VarPool {
public:
  Atom fresh(const std::string& name) {
    names_.push_back(name);
    return static_cast<Atom>(names_.size() - 1);
  }

  [[nodiscard]] Atom count() const { return static_cast<Atom>(names_.size() - 1); }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
  [[nodiscard]] const std::string& name(Atom a) const { return names_[a]; }

private:
  std::vector<std::string> names_{""};  // index 0 unused
};

// Binds stream delta atom names to solver selector atoms. add_value is the
// truth the selector takes when the delta atom appears in L+; removing the
// atom (L-) sets the complement. defaults hold the initial truth of every
// selector, so the assumption vector is total from the first tick.
struct SelectorMap {
  struct Binding {
    Atom selector = 0;
    bool add_value = true;
  };

  std::map<std::string, Binding> bindings;
  std::map<Atom, bool> defaults;

  [[nodiscard]] const Binding& at(const std::string& name) const {
    const auto it = bindings.find(name);
    if (it == bindings.end()) throw UnknownAtomError("unknown delta atom: " + name);
    return it->second;
  }
};

// at-most-one, pairwise.
inline void at_most_one_pairwise(std::vector<Clause>& out, std::span<const Atom> vars) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = i + 1; j < vars.size(); ++j)
      out.push_back(make_clause({neg(vars[i]), neg(vars[j])}));
}

// at-most-k via the sequential-counter encoding (registers s_{i,j} counting
// true inputs among x_1..x_i). Registers that are constant false are folded
// away. For bound 1 the pairwise encoding is used instead.
inline void at_most_k(std::vector<Clause>& out, VarPool& pool, std::span<const Atom> vars,
                      std::size_t bound, const std::string& tag) {
  const std::size_t m = vars.size();
  if (m <= bound) return;
  if (bound == 1) {
    at_most_one_pairwise(out, vars);
    return;
  }
  // reg[i][j]: s_{i+1, j+1} for i in 0..m-2, defined only for j+1 <= min(i+1, bound)
  std::vector<std::vector<Atom>> reg(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const std::size_t width = std::min(i + 1, bound);
    reg[i].resize(width);
    for (std::size_t j = 0; j < width; ++j)
      reg[i][j] = pool.fresh(tag + "_s_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  }
  out.push_back(make_clause({neg(vars[0]), pos(reg[0][0])}));
  for (std::size_t i = 1; i + 1 < m; ++i) {
    out.push_back(make_clause({neg(vars[i]), pos(reg[i][0])}));
    out.push_back(make_clause({neg(reg[i - 1][0]), pos(reg[i][0])}));
    for (std::size_t j = 1; j < reg[i].size(); ++j) {
      if (j < reg[i - 1].size())
        out.push_back(make_clause({neg(reg[i - 1][j]), pos(reg[i][j])}));
      out.push_back(make_clause({neg(vars[i]), neg(reg[i - 1][j - 1]), pos(reg[i][j])}));
    }
    if (reg[i - 1].size() == bound)
      out.push_back(make_clause({neg(vars[i]), neg(reg[i - 1][bound - 1])}));
  }
  if (reg[m - 2].size() == bound)
    out.push_back(make_clause({neg(vars[m - 1]), neg(reg[m - 2][bound - 1])}));
}

// guard -> exactly-one over vars; !guard -> all vars false. The at-most-one
// part is unconditional.
inline void guarded_exactly_one(std::vector<Clause>& out, Atom guard, std::span<const Atom> vars) {
  std::vector<Literal> big;
  big.push_back(neg(guard));
  for (Atom v : vars) {
    big.push_back(pos(v));
    out.push_back(make_clause({pos(guard), neg(v)}));
  }
  out.push_back(make_clause(std::span<const Literal>(big)));
  at_most_one_pairwise(out, vars);
}

}  // namespace cdstream
