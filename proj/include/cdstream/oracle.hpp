// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cdstream/errors.hpp"
#include "cdstream/pup.hpp"
#include "cdstream/qc.hpp"
#include "cdstream/stream.hpp"

namespace cdstream {

// Brute-force satisfiability references for small instances. These searches
// work on the problem structures directly and share no code with the
// propositional encodings or the CDCL engine.

namespace oracle_detail {

struct PupSearch {
  const PupInstance& inst;
  std::vector<std::string> elements;  // enabled zones first, then enabled sensors
  std::size_t zone_count = 0;
  std::map<std::string, int> unit_of;
  std::vector<int> unit_zones, unit_sensors, unit_degree;
  std::map<std::pair<int, int>, int> edge_refs;
  std::multimap<std::string, std::string> zones_of_sensor;  // enabled relations only
  int max_used = 0;

  explicit PupSearch(const PupInstance& instance) : inst(instance) {
    for (const auto& z : inst.zones)
      if (!inst.disabled_zones.contains(z)) elements.push_back(z);
    zone_count = elements.size();
    for (const auto& s : inst.sensors)
      if (!inst.disabled_sensors.contains(s)) elements.push_back(s);
    for (const auto& [z, s] : inst.edges)
      if (!inst.disabled_zones.contains(z) && !inst.disabled_sensors.contains(s))
        zones_of_sensor.emplace(s, z);
    unit_zones.assign(static_cast<std::size_t>(inst.units) + 1, 0);
    unit_sensors.assign(static_cast<std::size_t>(inst.units) + 1, 0);
    unit_degree.assign(static_cast<std::size_t>(inst.units) + 1, 0);
  }

  bool add_partner_edges(const std::string& sensor, int u, std::vector<std::pair<int, int>>& added) {
    const auto range = zones_of_sensor.equal_range(sensor);
    for (auto it = range.first; it != range.second; ++it) {
      const auto z_it = unit_of.find(it->second);
      if (z_it == unit_of.end() || z_it->second == u) continue;
      const std::pair<int, int> e{std::min(u, z_it->second), std::max(u, z_it->second)};
      auto& refs = edge_refs[e];
      if (refs == 0) {
        if (unit_degree[static_cast<std::size_t>(e.first)] >= inst.iucap ||
            unit_degree[static_cast<std::size_t>(e.second)] >= inst.iucap) {
          return false;
        }
        ++unit_degree[static_cast<std::size_t>(e.first)];
        ++unit_degree[static_cast<std::size_t>(e.second)];
      }
      ++refs;
      added.push_back(e);
    }
    return true;
  }

  void undo_partner_edges(const std::vector<std::pair<int, int>>& added) {
    for (const auto& e : added) {
      auto& refs = edge_refs[e];
      if (--refs == 0) {
        --unit_degree[static_cast<std::size_t>(e.first)];
        --unit_degree[static_cast<std::size_t>(e.second)];
      }
    }
  }

  bool search(std::size_t idx) {
    if (idx == elements.size()) return true;
    const bool is_zone = idx < zone_count;
    const std::string& el = elements[idx];
    // Units are interchangeable: only allow opening one fresh unit.
    const int limit = std::min(inst.units, max_used + 1);
    for (int u = 1; u <= limit; ++u) {
      auto& count = is_zone ? unit_zones[static_cast<std::size_t>(u)]
                            : unit_sensors[static_cast<std::size_t>(u)];
      if (count >= inst.ucap) continue;
      std::vector<std::pair<int, int>> added;
      if (!is_zone && !add_partner_edges(el, u, added)) {
        undo_partner_edges(added);
        continue;
      }
      ++count;
      unit_of[el] = u;
      const int prev_max = max_used;
      max_used = std::max(max_used, u);
      if (search(idx + 1)) return true;
      max_used = prev_max;
      unit_of.erase(el);
      --count;
      undo_partner_edges(added);
    }
    return false;
  }
};

}  // namespace oracle_detail

// Backtracking assignment search over the enabled zones and sensors with
// first-fit unit symmetry breaking (valid because all units are identical).
inline bool pup_oracle_satisfiable(const PupInstance& inst) {
  oracle_detail::PupSearch search(inst);
  return search.search(0);
}

// Row-by-row completion search; forced queens fix their row's column.
inline bool qc_oracle_satisfiable(int n, const std::vector<std::pair<int, int>>& forced) {
  std::vector<int> forced_col(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& [r, c] : forced) {
    if (r < 1 || r > n || c < 1 || c > n) return false;
    if (forced_col[static_cast<std::size_t>(r)] != 0 &&
        forced_col[static_cast<std::size_t>(r)] != c)
      return false;
    forced_col[static_cast<std::size_t>(r)] = c;
  }
  std::uint64_t cols = 0, diag = 0, anti = 0;
  const auto attack_free = [&](int r, int c) {
    return !(cols >> c & 1) && !(diag >> (r - c + n) & 1) && !(anti >> (r + c) & 1);
  };
  const auto place = [&](int r, int c) {
    cols ^= std::uint64_t{1} << c;
    diag ^= std::uint64_t{1} << (r - c + n);
    anti ^= std::uint64_t{1} << (r + c);
  };
  const auto rec = [&](auto&& self, int r) -> bool {
    if (r > n) return true;
    if (const int fc = forced_col[static_cast<std::size_t>(r)]; fc != 0) {
      if (!attack_free(r, fc)) return false;
      place(r, fc);
      if (self(self, r + 1)) return true;
      place(r, fc);
      return false;
    }
    for (int c = 1; c <= n; ++c) {
      if (!attack_free(r, c)) continue;
      place(r, c);
      if (self(self, r + 1)) return true;
      place(r, c);
    }
    return false;
  };
  return rec(rec, 1);
}

// Replays a PUP stream independently of the session machinery: *_off atoms
// toggle the disabled sets, and every tick's state is checked by the
// backtracking search.
inline std::vector<bool> pup_oracle_stream_status(const PupInstance& base,
                                                  const std::vector<Delta>& deltas) {
  PupInstance state = base;
  std::vector<bool> statuses;
  const auto apply = [&](const std::string& atom, bool added) {
    if (atom.starts_with("zone_off_")) {
      const std::string z = atom.substr(9);
      if (added) state.disabled_zones.insert(z);
      else state.disabled_zones.erase(z);
    } else if (atom.starts_with("sensor_off_")) {
      const std::string s = atom.substr(11);
      if (added) state.disabled_sensors.insert(s);
      else state.disabled_sensors.erase(s);
    } else {
      throw UnknownAtomError("pup oracle: unexpected atom " + atom);
    }
  };
  for (const Delta& d : deltas) {
    for (const auto& a : d.add) apply(a, true);
    for (const auto& a : d.remove) apply(a, false);
    statuses.push_back(pup_oracle_satisfiable(state));
  }
  return statuses;
}

inline std::pair<int, int> parse_queen_atom(const std::string& atom) {
  if (!atom.starts_with("queen_")) throw UnknownAtomError("qc oracle: unexpected atom " + atom);
  const std::size_t sep = atom.find('_', 6);
  if (sep == std::string::npos) throw UnknownAtomError("qc oracle: malformed atom " + atom);
  return {std::stoi(atom.substr(6, sep - 6)), std::stoi(atom.substr(sep + 1))};
}

inline std::vector<bool> qc_oracle_stream_status(int n, const std::vector<Delta>& deltas) {
  std::set<std::pair<int, int>> forced;
  std::vector<bool> statuses;
  for (const Delta& d : deltas) {
    for (const auto& a : d.add) forced.insert(parse_queen_atom(a));
    for (const auto& a : d.remove) forced.erase(parse_queen_atom(a));
    statuses.push_back(
        qc_oracle_satisfiable(n, {forced.begin(), forced.end()}));
  }
  return statuses;
}

}  // namespace cdstream
