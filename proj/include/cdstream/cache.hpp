// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cdstream/engine.hpp"
#include "cdstream/errors.hpp"
#include "cdstream/literal.hpp"

namespace cdstream {

// Parameters of the learned-constraint bandit: each cached constraint is an
// arm, the per-call reward estimates its utility, and the top-k arms by
// weight are activated before every solve.
struct BanditPolicy {
  double lambda = 0.1;      // learning rate, in (0,1]
  double w1 = 40.0;         // optimistic initial weight (2a; max reward is 0)
  double a = 20.0;          // reward scale coefficient
  std::size_t k = 3000;     // constraints to activate
  std::size_t n_store = 6000;  // total cache capacity

  void validate() const {
    if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("lambda must be in (0,1]");
    if (k > n_store) throw ConfigError("k must be <= n_store");
    if (!(w1 > 0.0)) throw ConfigError("w1 must be positive");
  }
};

enum class CacheStatus : std::uint8_t { Active, Frozen };

struct CacheEntry {
  ClauseKey key;
  Clause clause;
  int lbd = 0;          // most recent LBD charged to this constraint
  double weight = 0.0;  // bandit estimate w_t
  CacheStatus status = CacheStatus::Frozen;
  std::uint64_t birth_tick = 0;
  std::uint64_t last_reward_tick = 0;
};

// Per-call evidence for one cache entry. The flags are mutually exclusive;
// an active-but-unused constraint has all three at zero.
struct CallEvidence {
  bool ua = false;  // active and used
  bool uf = false;  // frozen but rediscovered
  bool nf = false;  // frozen and not rediscovered
  int lbd_now = 0;  // the LBD charged this tick
};

// R = a * (1 - 2*LBD + ua - uf - 0.25*nf)
inline double reward(const CallEvidence& e, const BanditPolicy& p) {
  if (e.lbd_now < 1) throw InvalidLbdError("reward: LBD must be >= 1");
  return p.a * (1.0 - 2.0 * e.lbd_now + (e.ua ? 1.0 : 0.0) - (e.uf ? 1.0 : 0.0) -
                (e.nf ? 1.0 : 0.0) * 0.25);
}

// Selection order: weight descending, ties by lower LBD, then older birth
// tick, then key order. Fully deterministic.
inline bool cache_order_before(const CacheEntry& a, const CacheEntry& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.lbd != b.lbd) return a.lbd < b.lbd;
  if (a.birth_tick != b.birth_tick) return a.birth_tick < b.birth_tick;
  return a.key < b.key;
}

struct CachePartition {
  std::vector<std::pair<ClauseKey, Clause>> active;  // C_use, in selection order
  std::set<ClauseKey> frozen_keys;                   // C_frozen keys for rediscovery detection
  std::size_t active_count = 0;
  std::size_t frozen_count = 0;
  std::size_t deleted_count = 0;
  std::vector<ClauseKey> deleted_keys;
};

// The Alg. 2 prologue as a pure step over an entry list: order by weight,
// activate the first k, freeze up to n_store, drop the remainder (entries is
// truncated in place).
inline CachePartition partition_for_tick(std::vector<CacheEntry>& entries,
                                         const BanditPolicy& policy) {
  std::sort(entries.begin(), entries.end(), cache_order_before);
  CachePartition part;
  const std::size_t n = entries.size();
  const std::size_t active_end = std::min(policy.k, n);
  const std::size_t frozen_end = std::min(policy.n_store, n);
  for (std::size_t i = 0; i < active_end; ++i) {
    entries[i].status = CacheStatus::Active;
    part.active.emplace_back(entries[i].key, entries[i].clause);
  }
  for (std::size_t i = active_end; i < frozen_end; ++i) {
    entries[i].status = CacheStatus::Frozen;
    part.frozen_keys.insert(entries[i].key);
  }
  for (std::size_t i = frozen_end; i < n; ++i) part.deleted_keys.push_back(entries[i].key);
  part.active_count = active_end;
  part.frozen_count = frozen_end - active_end;
  part.deleted_count = n - frozen_end;
  entries.resize(frozen_end);
  return part;
}

class ConstraintCache {
public:
  using Partition = CachePartition;

  explicit ConstraintCache(BanditPolicy policy) : policy_(policy) { policy_.validate(); }

  [[nodiscard]] const BanditPolicy& policy() const { return policy_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const std::vector<CacheEntry>& entries() const { return entries_; }

  Partition select_for_tick() { return partition_for_tick(entries_, policy_); }

  // Derives the per-entry evidence flags from a solve outcome produced for
  // the partition chosen by the latest select_for_tick().
  [[nodiscard]] std::map<ClauseKey, CallEvidence> ingest_evidence(const SolveOutcome& out) const {
    std::map<ClauseKey, CallEvidence> ev;
    std::map<ClauseKey, int> rediscovery_lbd;
    for (const auto& [clause, lbd] : out.new_learned) {
      const ClauseKey k = clause_key(clause);
      if (out.rediscovery_report.contains(k)) rediscovery_lbd.emplace(k, lbd);
    }
    std::size_t slot = 0;
    for (const CacheEntry& e : entries_) {
      CallEvidence ce;
      if (e.status == CacheStatus::Active) {
        const auto& usage = out.usage_report[slot++];
        ce.ua = usage.used;
        ce.lbd_now = usage.updated_lbd.value_or(e.lbd);
      } else if (out.rediscovery_report.contains(e.key)) {
        ce.uf = true;
        const auto it = rediscovery_lbd.find(e.key);
        ce.lbd_now = it != rediscovery_lbd.end() ? it->second : e.lbd;
      } else {
        ce.nf = true;
        ce.lbd_now = e.lbd;
      }
      ev.emplace(e.key, ce);
    }
    return ev;
  }

  struct UpdateSummary {
    std::size_t inserted = 0;
    std::size_t overflow_deleted = 0;
  };

  // The Alg. 2 reward loop: existing entries move toward their reward,
  // newly learned clauses enter optimistically at w1 + lambda * R. A
  // rediscovered frozen entry keeps its single slot; its LBD is refreshed to
  // the rediscovery LBD. If insertions push the cache above n_store, the
  // lowest-ranked entries are dropped so the capacity bound holds after
  // every tick.
  UpdateSummary update_weights(const SolveOutcome& out, std::uint64_t tick) {
    UpdateSummary summary;
    const auto ev = ingest_evidence(out);
    for (CacheEntry& e : entries_) {
      const CallEvidence& ce = ev.at(e.key);
      const double r = reward(ce, policy_);
      e.weight += policy_.lambda * (r - e.weight);
      e.last_reward_tick = tick;
      if (ce.lbd_now != e.lbd) e.lbd = ce.lbd_now;
    }
    std::set<ClauseKey> known;
    for (const CacheEntry& e : entries_) known.insert(e.key);
    for (const auto& [clause, lbd] : out.new_learned) {
      const ClauseKey key = clause_key(clause);
      if (known.contains(key)) continue;  // rediscovery or duplicate: keep the single slot
      known.insert(key);
      CallEvidence ce;
      ce.lbd_now = lbd;
      const double r = reward(ce, policy_);
      entries_.push_back(CacheEntry{key, clause, lbd, policy_.w1 + policy_.lambda * r,
                                    CacheStatus::Frozen, tick, tick});
      ++summary.inserted;
    }
    if (entries_.size() > policy_.n_store) {
      std::sort(entries_.begin(), entries_.end(), cache_order_before);
      summary.overflow_deleted = entries_.size() - policy_.n_store;
      entries_.resize(policy_.n_store);
    }
    return summary;
  }

  [[nodiscard]] std::size_t active_count() const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(),
                      [](const CacheEntry& e) { return e.status == CacheStatus::Active; }));
  }

  [[nodiscard]] nlohmann::json snapshot() const {
    nlohmann::json entries = nlohmann::json::array();
    for (const CacheEntry& e : entries_) {
      entries.push_back({{"key", e.key.hex()},
                         {"lbd", e.lbd},
                         {"weight", e.weight},
                         {"status", e.status == CacheStatus::Active ? "active" : "frozen"},
                         {"birth_tick", e.birth_tick}});
    }
    return nlohmann::json{{"entries", std::move(entries)}};
  }

private:
  BanditPolicy policy_;
  std::vector<CacheEntry> entries_;
};

}  // namespace cdstream
