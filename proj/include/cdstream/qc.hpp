// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cdstream/encoding.hpp"
#include "cdstream/errors.hpp"
#include "cdstream/literal.hpp"

namespace cdstream {

// n-Queens Completion: extend a partial non-attacking placement to a full
// n-queens solution. placed coordinates are (row, col), 1-based.
struct QcInstance {
  int n = 0;
  std::vector<std::pair<int, int>> placed;
};

struct QcEncoding {
  std::vector<Clause> clauses;
  SelectorMap selectors;
  std::vector<std::string> symbols;
  Atom atom_count = 0;
  std::map<std::pair<int, int>, Atom> q;  // board variables
};

// Board clauses: exactly one queen per row, at most one per column and per
// (anti)diagonal, pairwise. Selector queen_r_c forces q_r_c when assumed.
inline QcEncoding encode_qc(int n) {
  if (n < 4) throw ConfigError("encode_qc requires n >= 4");
  QcEncoding enc;
  VarPool pool;
  for (int r = 1; r <= n; ++r)
    for (int c = 1; c <= n; ++c)
      enc.q[{r, c}] = pool.fresh("q_" + std::to_string(r) + "_" + std::to_string(c));

  auto& cls = enc.clauses;
  for (int r = 1; r <= n; ++r) {
    std::vector<Literal> row;
    std::vector<Atom> row_vars;
    for (int c = 1; c <= n; ++c) {
      row.push_back(pos(enc.q.at({r, c})));
      row_vars.push_back(enc.q.at({r, c}));
    }
    cls.push_back(make_clause(std::span<const Literal>(row)));
    at_most_one_pairwise(cls, row_vars);
  }
  for (int c = 1; c <= n; ++c) {
    std::vector<Atom> col;
    for (int r = 1; r <= n; ++r) col.push_back(enc.q.at({r, c}));
    at_most_one_pairwise(cls, col);
  }
  for (int d = -(n - 1); d <= n - 1; ++d) {  // r - c = d
    std::vector<Atom> diag;
    for (int r = 1; r <= n; ++r) {
      const int c = r - d;
      if (c >= 1 && c <= n) diag.push_back(enc.q.at({r, c}));
    }
    at_most_one_pairwise(cls, diag);
  }
  for (int d = 2; d <= 2 * n; ++d) {  // r + c = d
    std::vector<Atom> diag;
    for (int r = 1; r <= n; ++r) {
      const int c = d - r;
      if (c >= 1 && c <= n) diag.push_back(enc.q.at({r, c}));
    }
    at_most_one_pairwise(cls, diag);
  }

  for (int r = 1; r <= n; ++r) {
    for (int c = 1; c <= n; ++c) {
      const std::string name = "queen_" + std::to_string(r) + "_" + std::to_string(c);
      const Atom sel = pool.fresh(name);
      cls.push_back(make_clause({neg(sel), pos(enc.q.at({r, c}))}));
      enc.selectors.bindings[name] = {sel, true};
      enc.selectors.defaults[sel] = false;
    }
  }

  enc.symbols = pool.names();
  enc.atom_count = pool.count();
  return enc;
}

inline std::vector<std::pair<int, int>> decode_qc(const std::vector<bool>& model,
                                                  const QcEncoding& enc) {
  std::vector<std::pair<int, int>> queens;
  for (const auto& [rc, atom] : enc.q)
    if (model[atom]) queens.push_back(rc);
  return queens;
}

// Independent re-check: exactly n queens, all on the board, pairwise
// non-attacking on rows, columns, and both diagonals.
inline bool check_qc(int n, const std::vector<std::pair<int, int>>& queens) {
  if (static_cast<int>(queens.size()) != n) return false;
  for (const auto& [r, c] : queens)
    if (r < 1 || r > n || c < 1 || c > n) return false;
  for (std::size_t i = 0; i < queens.size(); ++i) {
    for (std::size_t j = i + 1; j < queens.size(); ++j) {
      const auto [r1, c1] = queens[i];
      const auto [r2, c2] = queens[j];
      if (r1 == r2 || c1 == c2 || std::abs(r1 - r2) == std::abs(c1 - c2)) return false;
    }
  }
  return true;
}

inline nlohmann::json qc_to_json(const QcInstance& inst) {
  nlohmann::json placed = nlohmann::json::array();
  for (const auto& [r, c] : inst.placed) placed.push_back({r, c});
  return nlohmann::json{{"n", inst.n}, {"placed", placed}};
}

inline QcInstance qc_from_json(const nlohmann::json& j) {
  QcInstance inst;
  inst.n = j.at("n");
  for (const auto& p : j.at("placed")) inst.placed.emplace_back(p.at(0), p.at(1));
  return inst;
}

}  // namespace cdstream
