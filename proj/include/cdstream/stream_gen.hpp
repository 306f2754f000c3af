// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cdstream/engine.hpp"
#include "cdstream/errors.hpp"
#include "cdstream/pup.hpp"
#include "cdstream/qc.hpp"
#include "cdstream/stream.hpp"
#include "cdstream/zipf.hpp"

namespace cdstream {

enum class Mutation : std::uint8_t { M1, M2, M3 };

inline std::vector<Mutation> parse_schema(const std::string& csv) {
  std::vector<Mutation> schema;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "m1") schema.push_back(Mutation::M1);
    else if (item == "m2") schema.push_back(Mutation::M2);
    else if (item == "m3") schema.push_back(Mutation::M3);
    else throw ConfigError("unknown mutation in schema: " + item);
  }
  if (schema.empty()) throw ConfigError("empty mutation schema");
  return schema;
}

inline std::string schema_to_string(const std::vector<Mutation>& schema) {
  std::string s;
  for (Mutation m : schema) {
    if (!s.empty()) s += ",";
    s += m == Mutation::M1 ? "m1" : m == Mutation::M2 ? "m2" : "m3";
  }
  return s;
}

struct StreamSpec {
  enum class Problem : std::uint8_t { Pup, Qc };
  Problem problem = Problem::Pup;
  int size = 6;  // PUP row length or QC board size
  int ticks = 256;
  double alpha = 2.2;
  double p_restore = 0.8;
  std::vector<Mutation> schema = {Mutation::M1, Mutation::M3, Mutation::M2, Mutation::M3};
  std::uint64_t seed = 1;
};

// Double-row grid instance measured by row length n: 2n room zones and 3n-2
// door sensors (n-1 doors inside each row plus n doors between the rows),
// each zone covering the doors of its room. ucap = iucap = 2; the unit count
// ceil((|Z|+|S|)/ucap)+1 keeps the base instance satisfiable with slack.
//
// Naming: zones z1..zn are the bottom row, z(n+1)..z(2n) the top row;
// sensors s1..s(n-1) sit between bottom rooms, s(n)..s(2n-2) between top
// rooms, and s(2n-1)..s(3n-2) between the rows (column 1..n).
inline PupInstance gen_double_pup(int row_length) {
  if (row_length < 2) throw ConfigError("gen_double_pup requires row_length >= 2");
  const int n = row_length;
  PupInstance inst;
  for (int i = 1; i <= 2 * n; ++i) inst.zones.push_back("z" + std::to_string(i));
  for (int j = 1; j <= 3 * n - 2; ++j) inst.sensors.push_back("s" + std::to_string(j));

  const auto bottom_zone = [&](int i) { return "z" + std::to_string(i); };
  const auto top_zone = [&](int i) { return "z" + std::to_string(n + i); };
  const auto bottom_door = [&](int i) { return "s" + std::to_string(i); };           // i in 1..n-1
  const auto top_door = [&](int i) { return "s" + std::to_string(n - 1 + i); };      // i in 1..n-1
  const auto row_door = [&](int i) { return "s" + std::to_string(2 * n - 2 + i); };  // i in 1..n

  for (int i = 1; i <= n; ++i) {
    if (i > 1) inst.edges.emplace_back(bottom_zone(i), bottom_door(i - 1));
    if (i < n) inst.edges.emplace_back(bottom_zone(i), bottom_door(i));
    inst.edges.emplace_back(bottom_zone(i), row_door(i));
    if (i > 1) inst.edges.emplace_back(top_zone(i), top_door(i - 1));
    if (i < n) inst.edges.emplace_back(top_zone(i), top_door(i));
    inst.edges.emplace_back(top_zone(i), row_door(i));
  }
  inst.ucap = 2;
  inst.iucap = 2;
  const int components = 2 * n + 3 * n - 2;
  inst.units = (components + inst.ucap - 1) / inst.ucap + 1;
  return inst;
}

// Streaming mutations over a PUP instance: m1 disables a Zipf-sampled zone,
// m2 a sensor, m3 restores the original instance when its Bernoulli draw
// succeeds. A failed draw or an exhausted resample budget yields an empty
// delta, so tick counts stay equal across strategies.
class PupStreamGen {
public:
  PupStreamGen(PupInstance base, double alpha, double p_restore, std::vector<Mutation> schema,
               std::uint64_t seed)
      : base_(std::move(base)),
        current_(base_),
        p_restore_(p_restore),
        schema_(std::move(schema)),
        zone_sampler_(alpha, base_.zones.size(), detail::mix64(seed ^ 0x5a5a5a5aULL)),
        sensor_sampler_(alpha, base_.sensors.size(), detail::mix64(seed ^ 0xc3c3c3c3ULL)),
        rng_(detail::mix64(seed ^ 0x0f0f0f0fULL)) {}

  // Tick 0 is the unmodified base instance; mutations start at tick 1.
  Delta next() {
    Delta d;
    d.tick = tick_;
    if (tick_ > 0) {
      const Mutation m = schema_[(tick_ - 1) % schema_.size()];
      apply(m, d);
    }
    ++tick_;
    d.normalize();
    return d;
  }

  [[nodiscard]] const PupInstance& current_instance() const { return current_; }
  [[nodiscard]] std::size_t active_modifications() const {
    return current_.disabled_zones.size() + current_.disabled_sensors.size();
  }

private:
  void apply(Mutation m, Delta& d) {
    switch (m) {
      case Mutation::M1: {
        const auto z = pick_enabled(base_.zones, current_.disabled_zones, zone_sampler_);
        if (z) {
          current_.disabled_zones.insert(*z);
          d.add.push_back("zone_off_" + *z);
        }
        break;
      }
      case Mutation::M2: {
        const auto s = pick_enabled(base_.sensors, current_.disabled_sensors, sensor_sampler_);
        if (s) {
          current_.disabled_sensors.insert(*s);
          d.add.push_back("sensor_off_" + *s);
        }
        break;
      }
      case Mutation::M3: {
        if (detail::unit_double(rng_) < p_restore_) {
          for (const auto& z : current_.disabled_zones) d.remove.push_back("zone_off_" + z);
          for (const auto& s : current_.disabled_sensors) d.remove.push_back("sensor_off_" + s);
          current_.disabled_zones.clear();
          current_.disabled_sensors.clear();
        }
        break;
      }
    }
  }

  static std::optional<std::string> pick_enabled(const std::vector<std::string>& items,
                                                 const std::set<std::string>& disabled,
                                                 ZipfSampler& sampler) {
    for (std::size_t attempt = 0; attempt < items.size(); ++attempt) {
      const std::string& candidate = items[sampler.sample()];
      if (!disabled.contains(candidate)) return candidate;
    }
    return std::nullopt;
  }

  PupInstance base_;
  PupInstance current_;
  double p_restore_;
  std::vector<Mutation> schema_;
  ZipfSampler zone_sampler_;
  ZipfSampler sensor_sampler_;
  std::mt19937_64 rng_;
  std::uint64_t tick_ = 0;
};

inline std::vector<Delta> gen_pup_stream(const PupInstance& base, int ticks, std::uint64_t seed,
                                         double alpha, double p_restore,
                                         const std::vector<Mutation>& schema) {
  PupStreamGen gen(base, alpha, p_restore, schema, seed);
  std::vector<Delta> deltas;
  deltas.reserve(static_cast<std::size_t>(ticks));
  for (int t = 0; t < ticks; ++t) deltas.push_back(gen.next());
  return deltas;
}

struct QcStream {
  QcInstance instance;            // initial revealed placement
  std::vector<Delta> deltas;      // tick 0 reveals the initial queens
  std::vector<std::pair<int, int>> hidden_solution;  // witness for the base orientation
};

namespace detail {

inline std::vector<std::pair<int, int>> rotate_ccw(const std::vector<std::pair<int, int>>& qs,
                                                   int n) {
  std::vector<std::pair<int, int>> out;
  out.reserve(qs.size());
  for (const auto& [r, c] : qs) out.emplace_back(n + 1 - c, r);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string queen_atom(int r, int c) {
  return "queen_" + std::to_string(r) + "_" + std::to_string(c);
}

inline Delta placement_diff(std::uint64_t tick, const std::vector<std::pair<int, int>>& from,
                            const std::vector<std::pair<int, int>>& to) {
  Delta d;
  d.tick = tick;
  const std::set<std::pair<int, int>> old_set(from.begin(), from.end());
  const std::set<std::pair<int, int>> new_set(to.begin(), to.end());
  for (const auto& q : new_set)
    if (!old_set.contains(q)) d.add.push_back(queen_atom(q.first, q.second));
  for (const auto& q : old_set)
    if (!new_set.contains(q)) d.remove.push_back(queen_atom(q.first, q.second));
  d.normalize();
  return d;
}

}  // namespace detail

// Builds a complete hidden n-queens solution with a randomized branching
// seed, reveals floor(0.4*n) of its queens, and mutates by counterclockwise
// rotation (m1), revealing one more hidden queen in a Zipf-chosen column
// (m2), and restoring the initial placement and orientation (m3, p = 0.95).
// Every tick stays satisfiable: the rotated hidden solution is a witness.
inline QcStream gen_qc_stream(int n, int ticks, std::uint64_t seed, double alpha = 1.35,
                              double p_restore = 0.95,
                              const std::vector<Mutation>& schema = {Mutation::M1, Mutation::M2,
                                                                     Mutation::M1, Mutation::M3}) {
  if (n < 8) throw ConfigError("gen_qc_stream requires n >= 8");
  QcStream out;
  out.instance.n = n;

  const QcEncoding enc = encode_qc(n);
  EngineConfig cfg;
  cfg.seed = detail::mix64(seed ^ 0x9155ab5d01c2ee11ULL) | 1;  // nonzero: randomized branching
  Engine engine(enc.clauses, enc.atom_count, cfg);
  const SolveOutcome solved = engine.solve({});
  if (!solved.is_model()) throw ConfigError("n-queens board unexpectedly unsatisfiable");
  std::vector<std::pair<int, int>> hidden = decode_qc(solved.model, enc);
  std::sort(hidden.begin(), hidden.end());
  out.hidden_solution = hidden;

  std::mt19937_64 rng(detail::mix64(seed ^ 0x77aa11bb33cc55ddULL));
  std::vector<std::size_t> reveal_order(hidden.size());
  for (std::size_t i = 0; i < reveal_order.size(); ++i) reveal_order[i] = i;
  detail::seeded_shuffle(reveal_order, rng);
  const std::size_t reveal_count = static_cast<std::size_t>(0.4 * n);
  std::vector<std::pair<int, int>> initial;
  for (std::size_t i = 0; i < reveal_count; ++i) initial.push_back(hidden[reveal_order[i]]);
  std::sort(initial.begin(), initial.end());
  out.instance.placed = initial;

  ZipfSampler column_sampler(alpha, static_cast<std::size_t>(n),
                             detail::mix64(seed ^ 0x1122334455667788ULL));

  std::vector<std::pair<int, int>> placed = initial;
  std::vector<std::pair<int, int>> cur_hidden = hidden;

  Delta init;
  init.tick = 0;
  for (const auto& [r, c] : initial) init.add.push_back(detail::queen_atom(r, c));
  init.normalize();
  out.deltas.push_back(std::move(init));

  for (int t = 1; t < ticks; ++t) {
    const Mutation m = schema[static_cast<std::size_t>(t - 1) % schema.size()];
    Delta d;
    d.tick = static_cast<std::uint64_t>(t);
    switch (m) {
      case Mutation::M1: {
        const auto new_placed = detail::rotate_ccw(placed, n);
        d = detail::placement_diff(static_cast<std::uint64_t>(t), placed, new_placed);
        placed = new_placed;
        cur_hidden = detail::rotate_ccw(cur_hidden, n);
        break;
      }
      case Mutation::M2: {
        const std::set<std::pair<int, int>> revealed(placed.begin(), placed.end());
        if (revealed.size() < cur_hidden.size()) {
          for (int attempt = 0; attempt < n; ++attempt) {
            const int col = static_cast<int>(column_sampler.sample()) + 1;
            const auto it = std::find_if(cur_hidden.begin(), cur_hidden.end(),
                                         [col](const auto& q) { return q.second == col; });
            if (it != cur_hidden.end() && !revealed.contains(*it)) {
              placed.push_back(*it);
              std::sort(placed.begin(), placed.end());
              d.add.push_back(detail::queen_atom(it->first, it->second));
              break;
            }
          }
        }
        break;
      }
      case Mutation::M3: {
        if (detail::unit_double(rng) < p_restore) {
          d = detail::placement_diff(static_cast<std::uint64_t>(t), placed, initial);
          placed = initial;
          cur_hidden = hidden;
        }
        break;
      }
    }
    d.normalize();
    out.deltas.push_back(std::move(d));
  }
  return out;
}

}  // namespace cdstream
