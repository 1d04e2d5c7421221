// Copyright 2026 The esep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ESEP_NODE_SET_H_
#define ESEP_NODE_SET_H_

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

namespace esep {

// Hard cap on the number of nodes of a base graph. Lifted graphs have twice
// as many nodes, which still fits the 32-bit mask of NodeSet.
inline constexpr int kMaxNodes = 16;
inline constexpr int kMaxMaskNodes = 32;

// Error raised for malformed graphs, out-of-range nodes and violated
// preconditions. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A set of node indices in [0, 32), stored as a bit mask.
class NodeSet {
 public:
  using Mask = std::uint32_t;

  class Iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = int;
    using difference_type = std::ptrdiff_t;
    using pointer = const int*;
    using reference = int;

    constexpr Iterator() = default;
    constexpr explicit Iterator(Mask rest) : rest_(rest) {}
    constexpr int operator*() const { return std::countr_zero(rest_); }
    constexpr Iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr Iterator operator++(int) {
      Iterator copy = *this;
      ++*this;
      return copy;
    }
    constexpr bool operator==(const Iterator&) const = default;

   private:
    Mask rest_ = 0;
  };

  constexpr NodeSet() = default;
  constexpr explicit NodeSet(Mask mask) : mask_(mask) {}
  NodeSet(std::initializer_list<int> nodes) {
    for (int v : nodes) mask_ |= checked_bit(v);
  }

  static NodeSet from(const std::vector<int>& nodes) {
    NodeSet s;
    for (int v : nodes) s.mask_ |= checked_bit(v);
    return s;
  }
  // {0, ..., n-1}
  static constexpr NodeSet range(int n) {
    return NodeSet(n >= kMaxMaskNodes ? ~Mask{0} : (Mask{1} << n) - 1);
  }
  static constexpr NodeSet single(int v) { return NodeSet(Mask{1} << v); }

  constexpr Mask mask() const { return mask_; }
  constexpr bool contains(int v) const { return (mask_ >> v) & 1U; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr int first() const { return std::countr_zero(mask_); }
  constexpr bool is_subset_of(NodeSet other) const {
    return (mask_ & ~other.mask_) == 0;
  }
  constexpr bool intersects(NodeSet other) const {
    return (mask_ & other.mask_) != 0;
  }
  constexpr NodeSet with(int v) const { return NodeSet(mask_ | bit(v)); }
  constexpr NodeSet without(int v) const { return NodeSet(mask_ & ~bit(v)); }

  constexpr Iterator begin() const { return Iterator(mask_); }
  constexpr Iterator end() const { return Iterator(0); }

  std::vector<int> to_vector() const { return {begin(), end()}; }

  // Renders as "{1,2,3}" with the given index offset (1 for human output).
  std::string to_string(int offset = 0) const {
    std::string out = "{";
    bool first_item = true;
    for (int v : *this) {
      if (!first_item) out += ',';
      out += std::to_string(v + offset);
      first_item = false;
    }
    return out + "}";
  }

  friend constexpr NodeSet operator|(NodeSet a, NodeSet b) {
    return NodeSet(a.mask_ | b.mask_);
  }
  friend constexpr NodeSet operator&(NodeSet a, NodeSet b) {
    return NodeSet(a.mask_ & b.mask_);
  }
  // Set difference.
  friend constexpr NodeSet operator-(NodeSet a, NodeSet b) {
    return NodeSet(a.mask_ & ~b.mask_);
  }
  NodeSet& operator|=(NodeSet o) {
    mask_ |= o.mask_;
    return *this;
  }
  NodeSet& operator&=(NodeSet o) {
    mask_ &= o.mask_;
    return *this;
  }
  NodeSet& operator-=(NodeSet o) {
    mask_ &= ~o.mask_;
    return *this;
  }
  friend constexpr bool operator==(NodeSet, NodeSet) = default;
  friend constexpr auto operator<=>(NodeSet a, NodeSet b) {
    return a.mask_ <=> b.mask_;
  }

 private:
  static constexpr Mask bit(int v) { return Mask{1} << v; }
  static Mask checked_bit(int v) {
    if (v < 0 || v >= kMaxMaskNodes) {
      throw Error("node index " + std::to_string(v) + " out of range");
    }
    return bit(v);
  }

  Mask mask_ = 0;
};

}  // namespace esep

#endif  // ESEP_NODE_SET_H_
