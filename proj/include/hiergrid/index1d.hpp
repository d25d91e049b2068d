// Copyright 2026 The hiergrid Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Arithmetic on 1-based flat indices i in [1, 2^l - 1] of a single axis with
// level l. Point i sits at coordinate i * 2^-l. Viewed as a binary tree, the
// root is i = 2^(l-1) and the finest level holds the odd indices.

#include <bit>
#include <cassert>
#include <cstdint>
#include <optional>

#include "level_vector.hpp"

namespace hiergrid {

inline int trailing_zeros(index_t i) {
  assert(i > 0);
  return std::countr_zero(static_cast<std::uint64_t>(i));
}

/// Hierarchical level of flat index i on an axis of level `axis_level`;
/// 1 for the root, `axis_level` for odd i.
inline int hierarchical_level(int axis_level, index_t i) { return axis_level - trailing_zeros(i); }

/// Position of i among the points of its own level, counted from the left.
inline index_t level_index(index_t i) { return ((i >> trailing_zeros(i)) - 1) / 2; }

/// Flat index of the j-th point on hierarchical level `level`.
inline index_t flat_index(int axis_level, int level, index_t j) {
  return (2 * j + 1) << (axis_level - level);
}

struct Predecessors {
  std::optional<index_t> left;
  std::optional<index_t> right;

  friend bool operator==(const Predecessors&, const Predecessors&) = default;
};

/// Nearest coarser points to the left and right of i. Both are absent only
/// for the root; one is absent for the outermost points of every level.
inline Predecessors hierarchical_predecessors(int axis_level, index_t i) {
  const index_t n = (index_t{1} << axis_level) - 1;
  assert(i >= 1 && i <= n);
  const index_t step = index_t{1} << trailing_zeros(i);
  Predecessors p;
  if (i - step >= 1) p.left = i - step;
  if (i + step <= n) p.right = i + step;
  return p;
}

/// Offset of i within a pole stored in level order, root first.
inline index_t bfs_position(int axis_level, index_t i) {
  const int lvl = hierarchical_level(axis_level, i);
  return ((index_t{1} << (lvl - 1)) - 1) + level_index(i);
}

/// Offset of i within a pole stored finest level first, root last.
inline index_t rev_bfs_position(int axis_level, index_t i) {
  const int lvl = hierarchical_level(axis_level, i);
  return ((index_t{1} << axis_level) - (index_t{1} << lvl)) + level_index(i);
}

/// Inverse of bfs_position.
inline index_t index_from_bfs_position(int axis_level, index_t pos) {
  const int lvl = std::bit_width(static_cast<std::uint64_t>(pos + 1));
  const index_t j = pos - ((index_t{1} << (lvl - 1)) - 1);
  return flat_index(axis_level, lvl, j);
}

/// Inverse of rev_bfs_position.
inline index_t index_from_rev_bfs_position(int axis_level, index_t pos) {
  // Levels occupy [2^l - 2^lvl, 2^l - 2^(lvl-1)); count down from the finest.
  const index_t from_end = (index_t{1} << axis_level) - 1 - pos;  // in [0, 2^l - 2]
  const int lvl = std::bit_width(static_cast<std::uint64_t>(from_end));
  const index_t base = (index_t{1} << axis_level) - (index_t{1} << lvl);
  return flat_index(axis_level, lvl, pos - base);
}

}  // namespace hiergrid
