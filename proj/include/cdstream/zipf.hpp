// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cdstream/errors.hpp"

namespace cdstream {

namespace detail {
// Implementation-defined std distributions would break determinism across
// platforms, so draws are derived from raw engine output.
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

template <typename T>
void seeded_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = 0; i + 1 < items.size(); ++i) {
    const std::size_t j = i + bounded(rng, items.size() - i);
    std::swap(items[i], items[j]);
  }
}
}  // namespace detail

// Samples item indices with P(rank i) = i^-alpha / sum_j j^-alpha over a
// fixed random permutation of the items (the ranking), so rank 1 is the most
// frequent component. Deterministic under the seed.
class ZipfSampler {
public:
  ZipfSampler(double alpha, std::size_t item_count, std::uint64_t seed)
      : alpha_(alpha), rng_(seed) {
    if (item_count == 0) throw ConfigError("ZipfSampler requires at least one item");
    if (!(alpha > 0.0)) throw ConfigError("ZipfSampler requires alpha > 0");
    ranking_.resize(item_count);
    for (std::size_t i = 0; i < item_count; ++i) ranking_[i] = i;
    detail::seeded_shuffle(ranking_, rng_);
    cumulative_.resize(item_count);
    double total = 0.0;
    for (std::size_t i = 0; i < item_count; ++i) {
      total += std::pow(static_cast<double>(i + 1), -alpha);
      cumulative_[i] = total;
    }
    for (double& c : cumulative_) c /= total;
  }

  // 1-based rank of the next draw.
  std::size_t sample_rank() {
    const double u = detail::unit_double(rng_);
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    const std::size_t idx =
        it == cumulative_.end() ? cumulative_.size() - 1
                                : static_cast<std::size_t>(it - cumulative_.begin());
    return idx + 1;
  }

  // Item index behind the next draw's rank.
  std::size_t sample() { return ranking_[sample_rank() - 1]; }

  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] std::size_t item_count() const { return ranking_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& ranking() const { return ranking_; }

private:
  double alpha_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> ranking_;
  std::vector<double> cumulative_;
};

}  // namespace cdstream
