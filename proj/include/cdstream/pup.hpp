// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cdstream/encoding.hpp"
#include "cdstream/errors.hpp"
#include "cdstream/literal.hpp"

namespace cdstream {

// Partner Unit Problem instance: connect every enabled zone and sensor to
// exactly one unit, with at most ucap zones and ucap sensors per unit and at
// most iucap partner units, such that related zones and sensors sit on the
// same or directly partnered units.
struct PupInstance {
  std::vector<std::string> zones;
  std::vector<std::string> sensors;
  std::vector<std::pair<std::string, std::string>> edges;  // (zone, sensor)
  int units = 0;
  int ucap = 2;
  int iucap = 2;
  std::set<std::string> disabled_zones;
  std::set<std::string> disabled_sensors;
};

struct PupSolution {
  std::vector<std::pair<std::string, int>> zone_unit;    // unit ids are 1-based
  std::vector<std::pair<std::string, int>> sensor_unit;
  std::vector<std::pair<int, int>> unit_unit;            // normalized u < v
};

struct PupEncoding {
  std::vector<Clause> clauses;
  SelectorMap selectors;
  std::vector<std::string> symbols;  // atom id -> name
  Atom atom_count = 0;
  std::map<std::pair<std::string, int>, Atom> zu;  // (zone, unit)
  std::map<std::pair<std::string, int>, Atom> su;  // (sensor, unit)
  std::map<std::pair<int, int>, Atom> uu;          // (u, v), u < v
};

// Builds the propositional encoding with one enablement selector per zone and
// sensor; stream deltas toggle those selectors, the clause set is fixed.
inline PupEncoding encode_pup(const PupInstance& inst) {
  PupEncoding enc;
  VarPool pool;
  const int units = inst.units;

  for (const auto& z : inst.zones)
    for (int u = 1; u <= units; ++u)
      enc.zu[{z, u}] = pool.fresh("zu_" + z + "_" + std::to_string(u));
  for (const auto& s : inst.sensors)
    for (int u = 1; u <= units; ++u)
      enc.su[{s, u}] = pool.fresh("su_" + s + "_" + std::to_string(u));
  for (int u = 1; u <= units; ++u)
    for (int v = u + 1; v <= units; ++v)
      enc.uu[{u, v}] = pool.fresh("uu_" + std::to_string(u) + "_" + std::to_string(v));

  std::map<std::string, Atom> on_zone, on_sensor;
  for (const auto& z : inst.zones) on_zone[z] = pool.fresh("on_" + z);
  for (const auto& s : inst.sensors) on_sensor[s] = pool.fresh("on_" + s);

  auto& cls = enc.clauses;

  // (1) enabled -> exactly one unit; disabled -> no unit.
  for (const auto& z : inst.zones) {
    std::vector<Atom> vars;
    for (int u = 1; u <= units; ++u) vars.push_back(enc.zu.at({z, u}));
    guarded_exactly_one(cls, on_zone.at(z), vars);
  }
  for (const auto& s : inst.sensors) {
    std::vector<Atom> vars;
    for (int u = 1; u <= units; ++u) vars.push_back(enc.su.at({s, u}));
    guarded_exactly_one(cls, on_sensor.at(s), vars);
  }

  // (2) per-unit capacities.
  for (int u = 1; u <= units; ++u) {
    std::vector<Atom> zvars, svars, pvars;
    for (const auto& z : inst.zones) zvars.push_back(enc.zu.at({z, u}));
    for (const auto& s : inst.sensors) svars.push_back(enc.su.at({s, u}));
    for (int v = 1; v <= units; ++v) {
      if (v == u) continue;
      pvars.push_back(enc.uu.at({std::min(u, v), std::max(u, v)}));
    }
    const std::string tag = "cap_u" + std::to_string(u);
    at_most_k(cls, pool, zvars, static_cast<std::size_t>(inst.ucap), tag + "_z");
    at_most_k(cls, pool, svars, static_cast<std::size_t>(inst.ucap), tag + "_s");
    at_most_k(cls, pool, pvars, static_cast<std::size_t>(inst.iucap), tag + "_p");
  }

  // (3) related zone/sensor on different units -> partner edge.
  for (const auto& [z, s] : inst.edges) {
    for (int u = 1; u <= units; ++u) {
      for (int v = 1; v <= units; ++v) {
        if (u == v) continue;
        cls.push_back(make_clause({neg(enc.zu.at({z, u})), neg(enc.su.at({s, v})),
                                   pos(enc.uu.at({std::min(u, v), std::max(u, v)}))}));
      }
    }
  }

  for (const auto& z : inst.zones) {
    enc.selectors.bindings["zone_off_" + z] = {on_zone.at(z), false};
    enc.selectors.defaults[on_zone.at(z)] = true;
  }
  for (const auto& s : inst.sensors) {
    enc.selectors.bindings["sensor_off_" + s] = {on_sensor.at(s), false};
    enc.selectors.defaults[on_sensor.at(s)] = true;
  }

  enc.symbols = pool.names();
  enc.atom_count = pool.count();
  return enc;
}

// H contains exactly the edges whose variables are true in the model.
inline PupSolution decode_pup(const std::vector<bool>& model, const PupEncoding& enc) {
  PupSolution sol;
  for (const auto& [key, atom] : enc.zu)
    if (model[atom]) sol.zone_unit.push_back(key);
  for (const auto& [key, atom] : enc.su)
    if (model[atom]) sol.sensor_unit.push_back(key);
  for (const auto& [key, atom] : enc.uu)
    if (model[atom]) sol.unit_unit.push_back(key);
  return sol;
}

// Independent solution checker: direct graph checks against the instance,
// sharing nothing with the encoder. Conditions are enforced for non-disabled
// zones and sensors; every listed edge still counts toward the capacities.
inline bool check_pup(const PupInstance& inst, const PupSolution& sol) {
  std::map<std::string, std::vector<int>> zone_units, sensor_units;
  std::map<int, int> unit_zones, unit_sensors;
  for (const auto& [z, u] : sol.zone_unit) {
    if (u < 1 || u > inst.units) return false;
    zone_units[z].push_back(u);
    ++unit_zones[u];
  }
  for (const auto& [s, u] : sol.sensor_unit) {
    if (u < 1 || u > inst.units) return false;
    sensor_units[s].push_back(u);
    ++unit_sensors[u];
  }

  // 1. each enabled zone/sensor on exactly one unit
  for (const auto& z : inst.zones) {
    if (inst.disabled_zones.contains(z)) continue;
    const auto it = zone_units.find(z);
    if (it == zone_units.end() || it->second.size() != 1) return false;
  }
  for (const auto& s : inst.sensors) {
    if (inst.disabled_sensors.contains(s)) continue;
    const auto it = sensor_units.find(s);
    if (it == sensor_units.end() || it->second.size() != 1) return false;
  }

  // 2. capacities
  std::map<int, std::set<int>> partners;
  for (const auto& [u, v] : sol.unit_unit) {
    if (u == v || u < 1 || v < 1 || u > inst.units || v > inst.units) return false;
    partners[u].insert(v);
    partners[v].insert(u);
  }
  for (const auto& [u, cnt] : unit_zones)
    if (cnt > inst.ucap) return false;
  for (const auto& [u, cnt] : unit_sensors)
    if (cnt > inst.ucap) return false;
  for (const auto& [u, ps] : partners)
    if (static_cast<int>(ps.size()) > inst.iucap) return false;

  // 3. related zone and sensor on different units must be partnered
  for (const auto& [z, s] : inst.edges) {
    if (inst.disabled_zones.contains(z) || inst.disabled_sensors.contains(s)) continue;
    const int zu = zone_units.at(z).front();
    const int su = sensor_units.at(s).front();
    if (zu != su && !partners[zu].contains(su)) return false;
  }
  return true;
}

inline nlohmann::json pup_to_json(const PupInstance& inst) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [z, s] : inst.edges) edges.push_back({z, s});
  return nlohmann::json{{"zones", inst.zones},   {"sensors", inst.sensors}, {"edges", edges},
                        {"ucap", inst.ucap},     {"iucap", inst.iucap},     {"units", inst.units}};
}

inline PupInstance pup_from_json(const nlohmann::json& j) {
  PupInstance inst;
  inst.zones = j.at("zones").get<std::vector<std::string>>();
  inst.sensors = j.at("sensors").get<std::vector<std::string>>();
  for (const auto& e : j.at("edges")) inst.edges.emplace_back(e.at(0), e.at(1));
  inst.ucap = j.at("ucap");
  inst.iucap = j.at("iucap");
  inst.units = j.at("units");
  return inst;
}

}  // namespace cdstream
