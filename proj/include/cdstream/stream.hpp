// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdstream/errors.hpp"

namespace cdstream {

// One stream tick: ground atoms that appeared (L+) and disappeared (L-).
struct Delta {
  std::uint64_t tick = 0;
  std::vector<std::string> add;
  std::vector<std::string> remove;

  void normalize() {
    std::sort(add.begin(), add.end());
    std::sort(remove.begin(), remove.end());
  }

  [[nodiscard]] bool well_formed() const {
    std::vector<std::string> inter;
    std::set_intersection(add.begin(), add.end(), remove.begin(), remove.end(),
                          std::back_inserter(inter));
    return inter.empty();
  }

  friend bool operator==(const Delta&, const Delta&) = default;
};

// JSON Lines, one object per tick: {"tick": int, "add": [...], "remove": [...]}
inline void write_stream_jsonl(std::ostream& os, const std::vector<Delta>& deltas) {
  for (const Delta& d : deltas) {
    nlohmann::json j{{"tick", d.tick}, {"add", d.add}, {"remove", d.remove}};
    os << j.dump() << '\n';
  }
}

inline std::vector<Delta> read_stream_jsonl(std::istream& is) {
  std::vector<Delta> deltas;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    Delta d;
    d.tick = j.at("tick");
    d.add = j.at("add").get<std::vector<std::string>>();
    d.remove = j.at("remove").get<std::vector<std::string>>();
    d.normalize();
    if (!d.well_formed())
      throw IoError("stream tick " + std::to_string(d.tick) + ": add and remove overlap");
    deltas.push_back(std::move(d));
  }
  return deltas;
}

}  // namespace cdstream
