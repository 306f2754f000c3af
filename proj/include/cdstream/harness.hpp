// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cdstream/errors.hpp"
#include "cdstream/session.hpp"
#include "cdstream/stream_gen.hpp"

namespace cdstream {

// Linear-interpolation quantile (type 7) over a sorted sample.
inline double quantile_type7(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw EmptyInputError("quantile of empty sample");
  if (sorted.size() == 1) return sorted[0];
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

struct SummaryRow {
  std::string strategy;
  double lambda = 0.0;
  std::size_t count = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<double> outliers;  // beyond 1.5 * IQR
  double first_tick_ms = 0.0;    // the tick that carries the build/overground cost
  double mean_encode_ms = 0.0;   // from the .meta.json sidecar when present
};

inline SummaryRow summarize_values(std::vector<double> values) {
  if (values.empty()) throw EmptyInputError("summarize: no values");
  SummaryRow row;
  row.count = values.size();
  std::sort(values.begin(), values.end());
  row.min = values.front();
  row.max = values.back();
  row.q1 = quantile_type7(values, 0.25);
  row.median = quantile_type7(values, 0.5);
  row.q3 = quantile_type7(values, 0.75);
  const double iqr = row.q3 - row.q1;
  const double lo = row.q1 - 1.5 * iqr;
  const double hi = row.q3 + 1.5 * iqr;
  for (double v : values)
    if (v < lo || v > hi) row.outliers.push_back(v);
  return row;
}

// Parses a results CSV (schema pinned by kCsvHeader) and summarizes wall_ms
// per (strategy, lambda) group. meta, when given, supplies per-group
// encoding/build times.
inline std::vector<SummaryRow> summarize_csv(std::istream& is,
                                             const nlohmann::json* meta = nullptr) {
  std::string header;
  if (!std::getline(is, header) || header != kCsvHeader)
    throw IoError("unexpected CSV header: " + header);
  struct Group {
    std::vector<double> wall;
    std::uint64_t first_tick = ~std::uint64_t{0};
    double first_tick_ms = 0.0;
  };
  std::map<std::pair<std::string, double>, Group> groups;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 11) throw IoError("malformed CSV row: " + line);
    const std::uint64_t tick = std::stoull(fields[0]);
    const std::string& strategy = fields[1];
    const double lambda = std::stod(fields[2]);
    const double wall = std::stod(fields[4]);
    Group& g = groups[{strategy, lambda}];
    g.wall.push_back(wall);
    if (tick < g.first_tick) {
      g.first_tick = tick;
      g.first_tick_ms = wall;
    }
  }
  if (groups.empty()) throw EmptyInputError("summarize: CSV has no data rows");

  std::vector<SummaryRow> rows;
  for (auto& [key, g] : groups) {
    SummaryRow row = summarize_values(std::move(g.wall));
    row.strategy = key.first;
    row.lambda = key.second;
    row.first_tick_ms = g.first_tick_ms;
    if (meta != nullptr && meta->contains("cells")) {
      for (const auto& cell : meta->at("cells")) {
        if (cell.at("strategy") == key.first && cell.at("lambda").get<double>() == key.second)
          row.mean_encode_ms = cell.at("encode_ms");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json summary_to_json(const std::vector<SummaryRow>& rows) {
  nlohmann::json groups = nlohmann::json::array();
  for (const SummaryRow& r : rows) {
    groups.push_back({{"strategy", r.strategy},
                      {"lambda", r.lambda},
                      {"count", r.count},
                      {"median", r.median},
                      {"q1", r.q1},
                      {"q3", r.q3},
                      {"min", r.min},
                      {"max", r.max},
                      {"outliers", r.outliers},
                      {"first_tick_ms", r.first_tick_ms},
                      {"mean_encode_ms", r.mean_encode_ms}});
  }
  return nlohmann::json{{"groups", std::move(groups)}};
}

struct ExperimentConfig {
  StreamSpec::Problem problem = StreamSpec::Problem::Pup;
  std::vector<int> sizes;
  std::vector<std::string> strategies;  // subset of {mrestart, rl, ps, c}
  std::vector<double> lambdas = {0.01, 0.1, 0.5, 1.0};
  int ticks = 256;
  double alpha = 2.2;
  double p_restore = 0.8;
  std::vector<Mutation> schema = {Mutation::M1, Mutation::M3, Mutation::M2, Mutation::M3};
  std::vector<std::uint64_t> seeds = {1};
  std::size_t k = 3000;
  std::size_t n_store = 6000;
  double a = 20.0;
  double w1 = 40.0;
  std::optional<double> timeout_ms;
  std::string out = "results";  // directory, or a .csv path for a single (size, seed)
  int jobs = 1;

  void validate() const {
    if (sizes.empty()) throw ConfigError("experiment needs at least one size");
    if (strategies.empty()) throw ConfigError("experiment needs at least one strategy");
    if (lambdas.empty()) throw ConfigError("experiment needs at least one lambda");
    if (seeds.empty()) throw ConfigError("experiment needs at least one seed");
    if (ticks < 1) throw ConfigError("experiment needs at least one tick");
  }
};

namespace harness_detail {

struct Cell {
  std::string strategy;
  double lambda;
};

// mrestart ignores lambda; ps uses it only for cache bookkeeping. Both run
// once per stream; rl and c sweep the grid.
inline std::vector<Cell> cells_for(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (const std::string& s : cfg.strategies) {
    if (s == "mrestart") {
      cells.push_back({s, 0.0});
    } else if (s == "ps") {
      cells.push_back({s, cfg.lambdas.front()});
    } else if (s == "rl" || s == "c") {
      for (double l : cfg.lambdas) cells.push_back({s, l});
    } else {
      throw ConfigError("unknown strategy: " + s);
    }
  }
  return cells;
}

inline Strategy make_strategy(const std::string& name, double lambda, const ExperimentConfig& cfg) {
  BanditPolicy policy;
  policy.lambda = lambda > 0.0 ? lambda : cfg.lambdas.front();
  policy.k = cfg.k;
  policy.n_store = cfg.n_store;
  policy.a = cfg.a;
  policy.w1 = cfg.w1;
  switch (strategy_from_string(name)) {
    case StrategyKind::MRestart: return Strategy::mrestart();
    case StrategyKind::RL: return Strategy::rl(policy);
    case StrategyKind::PSOnly: return Strategy::ps_only(policy);
    case StrategyKind::COnly: return Strategy::c_only(policy);
  }
  throw ConfigError("unknown strategy: " + name);
}

}  // namespace harness_detail

// Builds the session program for one instance.
inline SessionProgram program_for_pup(const PupInstance& inst) {
  PupEncoding enc = encode_pup(inst);
  return SessionProgram{std::move(enc.clauses), enc.atom_count, std::move(enc.symbols),
                        std::move(enc.selectors)};
}

inline SessionProgram program_for_qc(int n) {
  QcEncoding enc = encode_qc(n);
  return SessionProgram{std::move(enc.clauses), enc.atom_count, std::move(enc.symbols),
                        std::move(enc.selectors)};
}

struct ExperimentResult {
  std::vector<std::string> csv_paths;
};

// Runs the strategy x lambda grid over generated streams. Every strategy
// replays the byte-identical delta sequence for a given (size, seed); one CSV
// (plus a .meta.json sidecar with encode/build times) is written per stream.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  cfg.validate();
  ExperimentResult result;
  const bool single = cfg.sizes.size() == 1 && cfg.seeds.size() == 1 &&
                      cfg.out.size() > 4 && cfg.out.ends_with(".csv");
  if (!single) fs::create_directories(cfg.out);

  const auto cells = harness_detail::cells_for(cfg);

  for (int size : cfg.sizes) {
    for (std::uint64_t seed : cfg.seeds) {
      // Generate once so all strategies consume the same stream.
      std::vector<Delta> deltas;
      SessionProgram program;
      const auto enc_start = std::chrono::steady_clock::now();
      if (cfg.problem == StreamSpec::Problem::Pup) {
        const PupInstance inst = gen_double_pup(size);
        deltas = gen_pup_stream(inst, cfg.ticks, seed, cfg.alpha, cfg.p_restore, cfg.schema);
        program = program_for_pup(inst);
      } else {
        const QcStream qs = gen_qc_stream(size, cfg.ticks, seed, cfg.alpha, cfg.p_restore,
                                          cfg.schema);
        deltas = qs.deltas;
        program = program_for_qc(size);
      }
      const double encode_ms = std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - enc_start)
                                   .count();

      struct CellRun {
        std::string rows;
        double encode_ms = 0.0;
      };
      std::vector<CellRun> runs(cells.size());
      std::atomic<std::size_t> next{0};
      const int jobs = std::max(1, cfg.jobs);
      const auto worker = [&]() {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cells.size()) return;
          const auto& cell = cells[i];
          const auto build_start = std::chrono::steady_clock::now();
          Session session(program, harness_detail::make_strategy(cell.strategy, cell.lambda, cfg),
                          seed, cfg.timeout_ms);
          runs[i].encode_ms = encode_ms + std::chrono::duration<double, std::milli>(
                                              std::chrono::steady_clock::now() - build_start)
                                              .count();
          std::ostringstream rows;
          for (const Delta& d : deltas) {
            const TickResult r = session.process_tick(d);
            write_csv_row(rows, cell.strategy, cell.lambda, r);
          }
          runs[i].rows = rows.str();
        }
      };
      if (jobs == 1) {
        worker();
      } else {
        std::vector<std::thread> threads;
        for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
      }

      const std::string path =
          single ? cfg.out
                 : (fs::path(cfg.out) /
                    ((cfg.problem == StreamSpec::Problem::Pup ? "pup_" : "qc_") +
                     std::to_string(size) + "_s" + std::to_string(seed) + ".csv"))
                       .string();
      std::ofstream csv(path);
      if (!csv) throw IoError("cannot write " + path);
      write_csv_header(csv);
      nlohmann::json meta_cells = nlohmann::json::array();
      for (std::size_t i = 0; i < cells.size(); ++i) {
        csv << runs[i].rows;
        meta_cells.push_back({{"strategy", cells[i].strategy},
                              {"lambda", cells[i].lambda},
                              {"encode_ms", runs[i].encode_ms}});
      }
      csv.close();
      std::ofstream meta(path + ".meta.json");
      meta << nlohmann::json{{"cells", std::move(meta_cells)}}.dump(2) << '\n';
      result.csv_paths.push_back(path);
    }
  }
  return result;
}

}  // namespace cdstream
