// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cdstream/errors.hpp"
#include "cdstream/heap.hpp"
#include "cdstream/literal.hpp"

namespace cdstream {

struct EngineConfig {
  struct Luby {
    std::uint64_t unit = 64;  // conflicts per Luby step
  };
  struct Geometric {
    std::uint64_t base = 100;
    double factor = 1.5;
  };
  struct NoRestart {};
  using RestartPolicy = std::variant<Luby, Geometric, NoRestart>;

  struct LbdHalving {
    std::uint64_t interval = 2000;  // in-call conflicts between reductions
  };
  struct NoDeletion {};
  using DeletionPolicy = std::variant<LbdHalving, NoDeletion>;

  RestartPolicy restart = Luby{};
  DeletionPolicy deletion = LbdHalving{};
  bool phase_saving = true;
  double var_decay = 0.95;
  // seed != 0 assigns tiny random initial activities, which randomizes the
  // branching order until the first conflicts; seed == 0 keeps all activities
  // at zero so ties fall back to the lowest atom id.
  std::uint64_t seed = 0;

  void validate() const {
    if (auto* g = std::get_if<Geometric>(&restart)) {
      if (g->base < 1) throw ConfigError("geometric restart base must be >= 1");
      if (g->factor < 1.0) throw ConfigError("geometric restart factor must be >= 1");
    }
    if (auto* l = std::get_if<Luby>(&restart)) {
      if (l->unit < 1) throw ConfigError("luby restart unit must be >= 1");
    }
    if (auto* d = std::get_if<LbdHalving>(&deletion)) {
      if (d->interval < 1) throw ConfigError("deletion interval must be >= 1");
    }
    if (!(var_decay > 0.0 && var_decay < 1.0)) throw ConfigError("var_decay must be in (0,1)");
  }
};

enum class SolveStatus : std::uint8_t { Model, Incoherent, Timeout };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Model: return "sat";
    case SolveStatus::Incoherent: return "unsat";
    case SolveStatus::Timeout: return "timeout";
  }
  return "?";
}

struct SolveOutcome {
  struct ConstraintUsage {
    bool used = false;                 // propagation reason or conflicting clause
    std::optional<int> updated_lbd;    // recomputed only if it took part in a conflict
  };
  struct Stats {
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
    double wall_ms = 0.0;
  };

  SolveStatus status = SolveStatus::Incoherent;
  std::vector<bool> model;  // indexed by atom, valid when status == Model
  std::vector<std::pair<Clause, int>> new_learned;  // surviving learned clauses + learning-time LBD
  std::vector<ConstraintUsage> usage_report;        // parallel to the supplied active constraints
  std::set<ClauseKey> rediscovery_report;           // learned keys that were in the frozen set
  Stats stats;

  [[nodiscard]] bool is_model() const { return status == SolveStatus::Model; }
  [[nodiscard]] bool value(Atom a) const { return model[a]; }
};

// CDCL engine over a fixed program: watched-literal unit propagation,
// first-UIP conflict analysis with LBD, backjumping, restarts, in-call
// deletion of learned clauses, VSIDS branching with phase saving, and
// assumption handling at dedicated decision levels.
//
// The engine keeps no learned clauses between solve calls; callers own them
// through the new_learned report and pass the chosen subset back in as active
// constraints. Branching activities and the phase cache do persist.
class Engine {
public:
  Engine(const std::vector<Clause>& program, Atom atom_count, EngineConfig cfg = {})
      : cfg_(cfg),
        atom_count_(atom_count),
        heap_(activity_) {
    cfg_.validate();
    const std::size_t n = static_cast<std::size_t>(atom_count) + 1;
    assign_.assign(n, kUndef);
    level_.assign(n, 0);
    reason_.assign(n, kNoReason);
    seen_.assign(n, 0);
    phase_.assign(n, kPhaseUnset);
    activity_.assign(n, 0.0);
    // Assumption levels may be empty, so decision levels can exceed the atom
    // count; size the stamp array for the worst case.
    level_stamp_.assign(2 * n + 2, 0);
    if (cfg_.seed != 0) {
      std::mt19937_64 rng(cfg_.seed);
      for (Atom a = 1; a <= atom_count_; ++a)
        activity_[a] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
    heap_.reserve_atoms(atom_count_);
    watches_.assign(2 * n, {});
    for (const Clause& c : program) {
      if (c.max_atom() > atom_count_)
        throw OutOfRangeError("program clause references atom " + std::to_string(c.max_atom()) +
                              " > atom_count " + std::to_string(atom_count_));
      if (c.size() == 1) {
        program_units_.push_back(c[0]);
      } else {
        const std::uint32_t idx = static_cast<std::uint32_t>(arena_.size());
        arena_.push_back(Cls{c.literals(), 0, Role::Program, -1, false, false, false, ClauseKey{}});
        attach(idx);
      }
    }
    program_clause_count_ = arena_.size();
    program_unit_count_ = program_units_.size();
  }

  [[nodiscard]] Atom atom_count() const { return atom_count_; }
  [[nodiscard]] const EngineConfig& config() const { return cfg_; }

  [[nodiscard]] std::optional<bool> saved_phase(Atom a) const {
    if (phase_[a] == kPhaseUnset) return std::nullopt;
    return phase_[a] == 1;
  }
  [[nodiscard]] bool phase_cache_empty() const {
    for (Atom a = 1; a <= atom_count_; ++a)
      if (phase_[a] != kPhaseUnset) return false;
    return true;
  }
  [[nodiscard]] double activity(Atom a) const { return activity_[a]; }

  SolveOutcome solve(const std::vector<Literal>& assumptions,
                     const std::vector<std::pair<ClauseKey, Clause>>& active_constraints = {},
                     const std::set<ClauseKey>& frozen_keys = {},
                     std::optional<double> time_budget_ms = std::nullopt) {
    const auto t0 = std::chrono::steady_clock::now();
    reset_call_state();
    SolveOutcome out;
    out.usage_report.assign(active_constraints.size(), {});

    for (const Literal& l : assumptions)
      if (l.atom() == 0 || l.atom() > atom_count_)
        throw OutOfRangeError("assumption references atom outside the program");

    // Level 0: program facts, then supplied unit constraints.
    bool root_conflict = false;
    for (Literal u : program_units_) {
      if (value(u) == kFalse) { root_conflict = true; break; }
      if (value(u) == kUndef) enqueue(u, kNoReason);
    }
    if (!root_conflict) {
      for (std::size_t i = 0; i < active_constraints.size(); ++i) {
        const Clause& c = active_constraints[i].second;
        if (c.max_atom() > atom_count_)
          throw OutOfRangeError("constraint references atom outside the program");
        const std::uint32_t idx = static_cast<std::uint32_t>(arena_.size());
        arena_.push_back(Cls{c.literals(), 0, Role::Constraint, static_cast<int>(i), false, false,
                             false, active_constraints[i].first});
        if (c.size() == 1) {
          if (value(c[0]) == kFalse) {
            arena_[idx].used = true;  // it is the conflicting clause
            root_conflict = true;
            break;
          }
          if (value(c[0]) == kUndef) {
            enqueue(c[0], static_cast<int>(idx));
            arena_[idx].used = true;
          }
        } else {
          attach(idx);
        }
      }
    }
    if (root_conflict) return finish(out, SolveStatus::Incoherent, t0);

    std::uint64_t restart_budget = next_restart_budget();
    std::uint64_t conflicts_since_restart = 0;
    std::uint64_t conflicts_since_reduce = 0;
    std::uint64_t budget_check_tick = 0;

    for (;;) {
      if (time_budget_ms && (++budget_check_tick & 0xff) == 0) {
        const double el =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (el > *time_budget_ms) return finish(out, SolveStatus::Timeout, t0);
      }
      const int confl = propagate(out.stats);
      if (confl >= 0) {
        ++out.stats.conflicts;
        if (arena_[static_cast<std::size_t>(confl)].role == Role::Constraint)
          arena_[static_cast<std::size_t>(confl)].used = true;
        if (current_level() == 0) return finish(out, SolveStatus::Incoherent, t0);
        ++conflicts_since_restart;
        ++conflicts_since_reduce;
        handle_conflict(confl, frozen_keys);
      } else {
        if (static_cast<std::size_t>(current_level()) < assumptions.size()) {
          const Literal p = assumptions[static_cast<std::size_t>(current_level())];
          if (value(p) == kTrue) {
            new_decision_level();  // already implied; the level stays empty
          } else if (value(p) == kFalse) {
            return finish(out, SolveStatus::Incoherent, t0);
          } else {
            new_decision_level();
            enqueue(p, kNoReason);
          }
        } else if (num_assigned_ == atom_count_) {
          out.model.assign(static_cast<std::size_t>(atom_count_) + 1, false);
          for (Atom a = 1; a <= atom_count_; ++a) {
            out.model[a] = assign_[a] == kTrue;
            phase_[a] = assign_[a] == kTrue ? 1 : 0;
          }
          return finish(out, SolveStatus::Model, t0);
        } else {
          if (conflicts_since_restart >= restart_budget) {
            ++out.stats.restarts;
            conflicts_since_restart = 0;
            restart_budget = next_restart_budget();
            cancel_until(0);
            continue;
          }
          if (auto* d = std::get_if<EngineConfig::LbdHalving>(&cfg_.deletion)) {
            if (conflicts_since_reduce >= d->interval) {
              conflicts_since_reduce = 0;
              reduce_learned();
            }
          }
          ++out.stats.decisions;
          decide();
        }
      }
    }
  }

  // Debug export of the loaded program in DIMACS CNF ("p cnf <vars> <clauses>",
  // one zero-terminated clause per line). Unit facts are emitted first.
  void export_dimacs(std::ostream& os) const {
    os << "p cnf " << atom_count_ << ' ' << (program_unit_count_ + program_clause_count_) << '\n';
    for (std::size_t i = 0; i < program_unit_count_; ++i)
      os << dimacs_lit(program_units_[i]) << " 0\n";
    for (std::size_t i = 0; i < program_clause_count_; ++i) {
      std::vector<Literal> lits = arena_[i].lits;
      std::sort(lits.begin(), lits.end());
      for (Literal l : lits) os << dimacs_lit(l) << ' ';
      os << "0\n";
    }
  }

private:
  static constexpr std::int8_t kFalse = 0;
  static constexpr std::int8_t kTrue = 1;
  static constexpr std::int8_t kUndef = 2;
  static constexpr std::int8_t kPhaseUnset = -1;
  static constexpr int kNoReason = -1;

  enum class Role : std::uint8_t { Program, Constraint, Learned };

  struct Cls {
    std::vector<Literal> lits;  // lits[0], lits[1] are the watched pair
    int lbd = 0;
    Role role = Role::Program;
    int slot = -1;  // index into the supplied constraint list
    bool used = false;
    bool lbd_updated = false;
    bool deleted = false;
    ClauseKey key{};
  };

  struct Watcher {
    std::uint32_t cls;
    Literal blocker;
  };

  static std::int64_t dimacs_lit(Literal l) {
    const auto a = static_cast<std::int64_t>(l.atom());
    return l.positive() ? a : -a;
  }

  [[nodiscard]] std::int8_t value(Literal l) const {
    const std::int8_t v = assign_[l.atom()];
    if (v == kUndef) return kUndef;
    return static_cast<std::int8_t>(l.positive() ? v : 1 - v);
  }

  [[nodiscard]] int current_level() const { return static_cast<int>(trail_lim_.size()); }

  void attach(std::uint32_t idx) {
    const Cls& c = arena_[idx];
    watches_[c.lits[0].code()].push_back({idx, c.lits[1]});
    watches_[c.lits[1].code()].push_back({idx, c.lits[0]});
  }

  void detach(std::uint32_t idx) {
    for (int w = 0; w < 2; ++w) {
      auto& ws = watches_[arena_[idx].lits[w].code()];
      for (std::size_t i = 0; i < ws.size(); ++i) {
        if (ws[i].cls == idx) {
          ws[i] = ws.back();
          ws.pop_back();
          break;
        }
      }
    }
  }

  void enqueue(Literal p, int reason) {
    const Atom a = p.atom();
    assign_[a] = p.positive() ? kTrue : kFalse;
    level_[a] = current_level();
    reason_[a] = reason;
    trail_.push_back(p);
    ++num_assigned_;
    if (reason >= 0 && arena_[static_cast<std::size_t>(reason)].role == Role::Constraint)
      arena_[static_cast<std::size_t>(reason)].used = true;
  }

  void new_decision_level() { trail_lim_.push_back(trail_.size()); }

  void cancel_until(int lvl) {
    if (current_level() <= lvl) return;
    const std::size_t limit = trail_lim_[static_cast<std::size_t>(lvl)];
    for (std::size_t i = trail_.size(); i-- > limit;) {
      const Atom a = trail_[i].atom();
      phase_[a] = assign_[a];  // progress saving on backjump/restart
      assign_[a] = kUndef;
      reason_[a] = kNoReason;
      heap_.insert(a);
      --num_assigned_;
    }
    trail_.resize(limit);
    trail_lim_.resize(static_cast<std::size_t>(lvl));
    qhead_ = std::min(qhead_, trail_.size());
  }

  // Returns the index of a conflicting clause, or -1.
  int propagate(SolveOutcome::Stats& stats) {
    while (qhead_ < trail_.size()) {
      const Literal p = trail_[qhead_++];
      const Literal false_lit = p.complement();
      auto& ws = watches_[false_lit.code()];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        const Watcher w = ws[i];
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        Cls& c = arena_[w.cls];
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        const Literal first = c.lits[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.cls, first};
          ++i;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.lits.size(); ++k) {
          if (value(c.lits[k]) != kFalse) {
            std::swap(c.lits[1], c.lits[k]);
            watches_[c.lits[1].code()].push_back({w.cls, first});
            moved = true;
            break;
          }
        }
        if (moved) {
          ++i;  // watcher migrated to another list
          continue;
        }
        ws[j++] = {w.cls, first};
        ++i;
        if (value(first) == kFalse) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = trail_.size();
          return static_cast<int>(w.cls);
        }
        enqueue(first, static_cast<int>(w.cls));
        ++stats.propagations;
      }
      ws.resize(j);
    }
    return -1;
  }

  void bump(Atom a) {
    activity_[a] += var_inc_;
    if (activity_[a] > 1e100) {
      for (Atom v = 1; v <= atom_count_; ++v) activity_[v] *= 1e-100;
      var_inc_ *= 1e-100;
    }
    heap_.increased(a);
  }

  [[nodiscard]] int compute_lbd(std::span<const Literal> lits) {
    ++stamp_tick_;
    int distinct = 0;
    for (Literal l : lits) {
      const int lvl = level_[l.atom()];
      if (level_stamp_[static_cast<std::size_t>(lvl)] != stamp_tick_) {
        level_stamp_[static_cast<std::size_t>(lvl)] = stamp_tick_;
        ++distinct;
      }
    }
    return distinct;
  }

  void refresh_constraint_lbd(Cls& c) {
    if (c.role != Role::Constraint) return;
    c.used = true;
    c.lbd = compute_lbd(c.lits);
    c.lbd_updated = true;
  }

  // First-UIP resolution, minisat style. Fills learnt (learnt[0] = asserting
  // literal), the backjump level, and the learning-time LBD.
  void analyze(int confl, std::vector<Literal>& learnt, int& bt_level, int& lbd) {
    learnt.clear();
    learnt.push_back(Literal());  // slot for the asserting literal
    int path = 0;
    std::size_t index = trail_.size();
    const int cur = current_level();
    Literal p;
    bool have_p = false;

    for (;;) {
      Cls& c = arena_[static_cast<std::size_t>(confl)];
      refresh_constraint_lbd(c);
      for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
        const Atom v = c.lits[k].atom();
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          bump(v);
          if (level_[v] >= cur) {
            ++path;
          } else {
            learnt.push_back(c.lits[k]);
          }
        }
      }
      while (!seen_[trail_[index - 1].atom()]) --index;
      --index;
      p = trail_[index];
      have_p = true;
      seen_[p.atom()] = 0;
      --path;
      if (path <= 0) break;
      confl = reason_[p.atom()];
      assert(confl >= 0 && "resolved literal must have a reason");
    }
    learnt[0] = p.complement();

    lbd = compute_lbd(learnt);

    if (learnt.size() == 1) {
      bt_level = 0;
    } else {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level_[learnt[i].atom()] > level_[learnt[max_i].atom()]) max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      bt_level = level_[learnt[1].atom()];
    }
    for (std::size_t i = 1; i < learnt.size(); ++i) seen_[learnt[i].atom()] = 0;

    var_inc_ /= cfg_.var_decay;  // exponential decay, applied per conflict
  }

  void handle_conflict(int confl, const std::set<ClauseKey>& frozen_keys) {
    std::vector<Literal> learnt;
    int bt_level = 0;
    int lbd = 0;
    analyze(confl, learnt, bt_level, lbd);
    cancel_until(bt_level);

    const Clause canonical = std::get<Clause>(canonicalize(learnt));
    const ClauseKey key = clause_key(canonical);
    if (frozen_keys.contains(key)) rediscovered_.insert(key);

    const std::uint32_t idx = static_cast<std::uint32_t>(arena_.size());
    arena_.push_back(Cls{learnt, lbd, Role::Learned, -1, false, false, false, key});
    learned_list_.push_back(idx);
    if (learnt.size() >= 2) attach(idx);
    enqueue(learnt[0], static_cast<int>(idx));
  }

  void decide() {
    Atom a = 0;
    for (;;) {
      a = heap_.pop_max();
      if (assign_[a] == kUndef) break;
    }
    bool polarity = false;  // default: negative
    if (cfg_.phase_saving && phase_[a] != kPhaseUnset) polarity = phase_[a] == 1;
    new_decision_level();
    enqueue(Literal(a, polarity), kNoReason);
  }

  [[nodiscard]] bool locked(std::uint32_t idx) const {
    const Cls& c = arena_[idx];
    const Atom a = c.lits[0].atom();
    return assign_[a] != kUndef && reason_[a] == static_cast<int>(idx);
  }

  // Drop the half of the in-call learned clauses with the highest LBD
  // (ties: longer clause first). Reasons, program clauses, and supplied
  // constraints are never touched.
  void reduce_learned() {
    std::vector<std::uint32_t> candidates;
    candidates.reserve(learned_list_.size());
    for (std::uint32_t idx : learned_list_) {
      const Cls& c = arena_[idx];
      if (!c.deleted && c.lits.size() >= 2 && !locked(idx)) candidates.push_back(idx);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [this](std::uint32_t x, std::uint32_t y) {
      const Cls& a = arena_[x];
      const Cls& b = arena_[y];
      if (a.lbd != b.lbd) return a.lbd > b.lbd;
      return a.lits.size() > b.lits.size();
    });
    const std::size_t drop = candidates.size() / 2;
    for (std::size_t i = 0; i < drop; ++i) {
      const std::uint32_t idx = candidates[i];
      detach(idx);
      arena_[idx].deleted = true;
      arena_[idx].lits.clear();
      arena_[idx].lits.shrink_to_fit();
    }
  }

  [[nodiscard]] std::uint64_t next_restart_budget() {
    if (auto* l = std::get_if<EngineConfig::Luby>(&cfg_.restart))
      return l->unit * luby(restart_seq_++);
    if (auto* g = std::get_if<EngineConfig::Geometric>(&cfg_.restart)) {
      double v = static_cast<double>(g->base);
      for (std::uint64_t i = 0; i < restart_seq_; ++i) v *= g->factor;
      ++restart_seq_;
      return static_cast<std::uint64_t>(v);
    }
    return std::numeric_limits<std::uint64_t>::max();
  }

  // Luby sequence 1,1,2,1,1,2,4,... (0-indexed argument).
  static std::uint64_t luby(std::uint64_t i) {
    std::uint64_t size = 1, seq = 0;
    while (size < i + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != i) {
      size = (size - 1) >> 1;
      --seq;
      i %= size;
    }
    return std::uint64_t{1} << seq;
  }

  // Drop all state from the previous call except phases and activities.
  void reset_call_state() {
    for (Literal l : trail_) {
      const Atom a = l.atom();
      phase_[a] = assign_[a];
      assign_[a] = kUndef;
      reason_[a] = kNoReason;
    }
    trail_.clear();
    trail_lim_.clear();
    qhead_ = 0;
    num_assigned_ = 0;
    if (arena_.size() > program_clause_count_) {
      for (auto& ws : watches_) {
        std::erase_if(ws, [this](const Watcher& w) { return w.cls >= program_clause_count_; });
      }
      arena_.resize(program_clause_count_);
    }
    learned_list_.clear();
    rediscovered_.clear();
    heap_.clear();
    for (Atom a = 1; a <= atom_count_; ++a) heap_.insert(a);
    restart_seq_ = 0;
  }

  SolveOutcome& finish(SolveOutcome& out, SolveStatus status,
                       std::chrono::steady_clock::time_point t0) {
    out.status = status;
    for (std::uint32_t idx : learned_list_) {
      const Cls& c = arena_[idx];
      if (c.deleted) continue;
      out.new_learned.emplace_back(std::get<Clause>(canonicalize(c.lits)), c.lbd);
    }
    for (std::size_t i = program_clause_count_; i < arena_.size(); ++i) {
      const Cls& c = arena_[i];
      if (c.role != Role::Constraint) continue;
      auto& u = out.usage_report[static_cast<std::size_t>(c.slot)];
      u.used = c.used;
      if (c.lbd_updated) u.updated_lbd = c.lbd;
    }
    out.rediscovery_report = rediscovered_;
    out.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

  EngineConfig cfg_;
  Atom atom_count_ = 0;

  std::vector<Cls> arena_;
  std::size_t program_clause_count_ = 0;
  std::vector<Literal> program_units_;
  std::size_t program_unit_count_ = 0;
  std::vector<std::vector<Watcher>> watches_;

  std::vector<Literal> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  Atom num_assigned_ = 0;

  std::vector<std::int8_t> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<char> seen_;
  std::vector<std::int8_t> phase_;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  ActivityHeap heap_;

  std::vector<int> level_stamp_;
  int stamp_tick_ = 0;

  std::vector<std::uint32_t> learned_list_;
  std::set<ClauseKey> rediscovered_;
  std::uint64_t restart_seq_ = 0;
};

// Sidecar symbol table: "<atom-id> <atom-name>" per line. names is indexed by
// atom id; index 0 is ignored.
inline void write_symbol_table(std::ostream& os, const std::vector<std::string>& names) {
  for (std::size_t a = 1; a < names.size(); ++a) os << a << ' ' << names[a] << '\n';
}

}  // namespace cdstream
