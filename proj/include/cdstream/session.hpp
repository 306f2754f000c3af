// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cdstream/cache.hpp"
#include "cdstream/encoding.hpp"
#include "cdstream/engine.hpp"
#include "cdstream/errors.hpp"
#include "cdstream/literal.hpp"
#include "cdstream/stream.hpp"

namespace cdstream {

// Persistent truth of every selector atom; deltas overwrite, everything else
// keeps its value.
struct AssumptionState {
  std::map<Atom, bool> truth;

  [[nodiscard]] std::vector<Literal> to_literals() const {
    std::vector<Literal> lits;
    lits.reserve(truth.size());
    for (const auto& [atom, value] : truth) lits.emplace_back(atom, value);
    return lits;
  }
};

// Applies one delta: atoms in add take their binding's add_value, atoms in
// remove take the complement. Throws UnknownAtomError on unmapped names.
inline AssumptionState& update_assumptions(const Delta& delta, const SelectorMap& selectors,
                                           AssumptionState& state) {
  for (const std::string& name : delta.add) {
    const auto& b = selectors.at(name);
    state.truth[b.selector] = b.add_value;
  }
  for (const std::string& name : delta.remove) {
    const auto& b = selectors.at(name);
    state.truth[b.selector] = !b.add_value;
  }
  return state;
}

enum class StrategyKind : std::uint8_t { MRestart, RL, PSOnly, COnly };

inline const char* to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::MRestart: return "mrestart";
    case StrategyKind::RL: return "rl";
    case StrategyKind::PSOnly: return "ps";
    case StrategyKind::COnly: return "c";
  }
  return "?";
}

inline StrategyKind strategy_from_string(const std::string& s) {
  if (s == "mrestart") return StrategyKind::MRestart;
  if (s == "rl") return StrategyKind::RL;
  if (s == "ps") return StrategyKind::PSOnly;
  if (s == "c") return StrategyKind::COnly;
  throw ConfigError("unknown strategy: " + s);
}

// The four §-style variants: mrestart rebuilds the solver every tick with no
// cache; rl runs the full managed cache with phase saving; ps forces k = 0 so
// the solver relies on progress saving alone; c keeps the cache but disables
// phase saving.
struct Strategy {
  StrategyKind kind = StrategyKind::RL;
  BanditPolicy policy;

  static Strategy mrestart() { return {StrategyKind::MRestart, {}}; }
  static Strategy rl(BanditPolicy p) { return {StrategyKind::RL, p}; }
  static Strategy ps_only(BanditPolicy p) {
    p.k = 0;
    return {StrategyKind::PSOnly, p};
  }
  static Strategy c_only(BanditPolicy p) { return {StrategyKind::COnly, p}; }
};

struct TickResult {
  std::uint64_t tick = 0;
  SolveStatus status = SolveStatus::Incoherent;
  std::vector<bool> model;  // valid when status == Model
  double wall_ms = 0.0;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::size_t active = 0;
  std::size_t frozen = 0;
  std::size_t deleted_this_tick = 0;
  std::size_t new_learned_count = 0;
};

struct SessionProgram {
  std::vector<Clause> clauses;
  Atom atom_count = 0;
  std::vector<std::string> symbols;
  SelectorMap selectors;
};

// One stream: the encoding is built once up front (the overgrounding
// analogue), ticks update the persistent assumption vector, partition the
// cache, solve, and feed rewards back. Strictly sequential.
class Session {
public:
  Session(SessionProgram program, Strategy strategy, std::uint64_t seed,
          std::optional<double> tick_timeout_ms = std::nullopt)
      : program_(std::move(program)),
        strategy_(strategy),
        seed_(seed),
        timeout_ms_(tick_timeout_ms) {
    for (const auto& [atom, value] : program_.selectors.defaults) state_.truth[atom] = value;
    if (strategy_.kind != StrategyKind::MRestart) {
      cache_.emplace(strategy_.policy);
      engine_ = std::make_unique<Engine>(program_.clauses, program_.atom_count, engine_config());
    }
  }

  [[nodiscard]] const Strategy& strategy() const { return strategy_; }
  [[nodiscard]] const AssumptionState& assumptions() const { return state_; }
  [[nodiscard]] const SessionProgram& program() const { return program_; }

  // Null for mrestart: that strategy has no solver state between ticks.
  [[nodiscard]] const Engine* persistent_engine() const { return engine_.get(); }
  [[nodiscard]] const ConstraintCache* cache() const { return cache_ ? &*cache_ : nullptr; }

  [[nodiscard]] nlohmann::json cache_snapshot() const {
    return cache_ ? cache_->snapshot() : nlohmann::json{{"entries", nlohmann::json::array()}};
  }

  TickResult process_tick(const Delta& delta) {
    update_assumptions(delta, program_.selectors, state_);
    const std::vector<Literal> assumptions = state_.to_literals();

    TickResult res;
    res.tick = delta.tick;

    if (strategy_.kind == StrategyKind::MRestart) {
      const auto t0 = std::chrono::steady_clock::now();
      Engine fresh(program_.clauses, program_.atom_count, engine_config());
      SolveOutcome out = fresh.solve(assumptions, {}, {}, timeout_ms_);
      res.wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      fill(res, out);
      return res;
    }

    ConstraintCache::Partition part = cache_->select_for_tick();
    const auto t0 = std::chrono::steady_clock::now();
    SolveOutcome out = engine_->solve(assumptions, part.active, part.frozen_keys, timeout_ms_);
    res.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    res.active = part.active_count;
    res.frozen = part.frozen_count;
    res.deleted_this_tick = part.deleted_count;
    if (out.status != SolveStatus::Timeout) {
      const auto update = cache_->update_weights(out, delta.tick);
      res.deleted_this_tick += update.overflow_deleted;
    }
    fill(res, out);
    return res;
  }

private:
  [[nodiscard]] EngineConfig engine_config() const {
    EngineConfig cfg;
    cfg.phase_saving = strategy_.kind != StrategyKind::COnly;
    cfg.seed = seed_;
    return cfg;
  }

  static void fill(TickResult& res, SolveOutcome& out) {
    res.status = out.status;
    if (out.is_model()) res.model = std::move(out.model);
    res.conflicts = out.stats.conflicts;
    res.decisions = out.stats.decisions;
    res.new_learned_count = out.new_learned.size();
  }

  SessionProgram program_;
  Strategy strategy_;
  std::uint64_t seed_;
  std::optional<double> timeout_ms_;
  AssumptionState state_;
  std::optional<ConstraintCache> cache_;
  std::unique_ptr<Engine> engine_;
};

inline constexpr const char* kCsvHeader =
    "tick,strategy,lambda,status,wall_ms,conflicts,decisions,active,frozen,deleted,new_learned";

inline void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

inline void write_csv_row(std::ostream& os, const std::string& strategy, double lambda,
                          const TickResult& r) {
  os << r.tick << ',' << strategy << ',' << lambda << ',' << to_string(r.status) << ','
     << r.wall_ms << ',' << r.conflicts << ',' << r.decisions << ',' << r.active << ','
     << r.frozen << ',' << r.deleted_this_tick << ',' << r.new_learned_count << '\n';
}

}  // namespace cdstream
