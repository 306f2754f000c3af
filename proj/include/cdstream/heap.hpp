// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <vector>

#include "cdstream/literal.hpp"

namespace cdstream {

// Indexed binary max-heap over atoms, ordered by activity with ties broken by
// the lower atom id. Activities live outside the heap; callers must call
// increased() after bumping an atom that is in the heap.
class ActivityHeap {
public:
  explicit ActivityHeap(const std::vector<double>& activity) : activity_(activity) {}

  void reserve_atoms(Atom max_atom) { pos_.resize(static_cast<std::size_t>(max_atom) + 1, -1); }

  [[nodiscard]] bool empty() const { return heap_.empty(); }
  [[nodiscard]] bool contains(Atom a) const {
    return a < pos_.size() && pos_[a] >= 0;
  }

  void clear() {
    for (Atom a : heap_) pos_[a] = -1;
    heap_.clear();
  }

  void insert(Atom a) {
    if (contains(a)) return;
    pos_[a] = static_cast<int>(heap_.size());
    heap_.push_back(a);
    sift_up(heap_.size() - 1);
  }

  // Re-establish order after activity_[a] grew.
  void increased(Atom a) {
    if (contains(a)) sift_up(static_cast<std::size_t>(pos_[a]));
  }

  Atom pop_max() {
    Atom top = heap_[0];
    pos_[top] = -1;
    if (heap_.size() > 1) {
      heap_[0] = heap_.back();
      pos_[heap_[0]] = 0;
      heap_.pop_back();
      sift_down(0);
    } else {
      heap_.pop_back();
    }
    return top;
  }

private:
  [[nodiscard]] bool before(Atom a, Atom b) const {
    if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
    return a < b;
  }

  void sift_up(std::size_t i) {
    Atom a = heap_[i];
    while (i > 0) {
      std::size_t parent = (i - 1) >> 1;
      if (!before(a, heap_[parent])) break;
      heap_[i] = heap_[parent];
      pos_[heap_[i]] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = a;
    pos_[a] = static_cast<int>(i);
  }

  void sift_down(std::size_t i) {
    Atom a = heap_[i];
    const std::size_t n = heap_.size();
    while (true) {
      std::size_t child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], a)) break;
      heap_[i] = heap_[child];
      pos_[heap_[i]] = static_cast<int>(i);
      i = child;
    }
    heap_[i] = a;
    pos_[a] = static_cast<int>(i);
  }

  const std::vector<double>& activity_;
  std::vector<Atom> heap_;
  std::vector<int> pos_;
};

}  // namespace cdstream
