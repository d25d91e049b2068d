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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "index1d.hpp"
#include "level_vector.hpp"

namespace hiergrid {

enum class LayoutKind : std::uint8_t {
  RowMajor,  // natural order along every axis
  Bfs1,      // axis-0 lines stored in level order, root first
  RevBfs1,   // axis-0 lines stored finest level first, root last
};

/// Maps logical multi-indices to buffer offsets. Axis 0 varies fastest; only
/// the ordering inside an axis-0 line depends on the kind. When padded, each
/// axis-0 line gets one trailing zero slot so that its length is 2^l0.
struct LayoutDescriptor {
  LayoutKind kind = LayoutKind::RowMajor;
  bool padded = false;

  static constexpr LayoutDescriptor row_major() { return {LayoutKind::RowMajor, false}; }
  static constexpr LayoutDescriptor row_major_padded() { return {LayoutKind::RowMajor, true}; }
  static constexpr LayoutDescriptor bfs1(bool padded = false) { return {LayoutKind::Bfs1, padded}; }
  static constexpr LayoutDescriptor rev_bfs1(bool padded = false) {
    return {LayoutKind::RevBfs1, padded};
  }

  /// Slots per axis-0 line (p1).
  index_t line_length(const LevelVector& lv) const {
    return padded ? (index_t{1} << lv[0]) : lv.points(0);
  }

  index_t buffer_size(const LevelVector& lv) const {
    index_t n = line_length(lv);
    for (int a = 1; a < lv.dim(); ++a) n = detail::checked_mul(n, lv.points(a));
    detail::checked_mul(n, 2);
    return n;
  }

  /// Slot of flat axis-0 index i within its line.
  index_t line_position(int axis_level, index_t i) const {
    switch (kind) {
      case LayoutKind::Bfs1: return bfs_position(axis_level, i);
      case LayoutKind::RevBfs1: return rev_bfs_position(axis_level, i);
      case LayoutKind::RowMajor: break;
    }
    return i - 1;
  }

  /// Flat axis-0 index stored at live slot `pos` of a line.
  index_t line_index(int axis_level, index_t pos) const {
    switch (kind) {
      case LayoutKind::Bfs1: return index_from_bfs_position(axis_level, pos);
      case LayoutKind::RevBfs1: return index_from_rev_bfs_position(axis_level, pos);
      case LayoutKind::RowMajor: break;
    }
    return pos + 1;
  }

  std::string name() const {
    std::string s;
    switch (kind) {
      case LayoutKind::RowMajor: s = "RowMajor"; break;
      case LayoutKind::Bfs1: s = "Bfs1"; break;
      case LayoutKind::RevBfs1: s = "RevBfs1"; break;
    }
    return padded ? s + "Padded" : s;
  }

  friend bool operator==(const LayoutDescriptor&, const LayoutDescriptor&) = default;
};

/// Buffer stride of each axis: 1 for axis 0, p1 * prod(n_1..n_{a-1}) above.
inline std::vector<index_t> axis_strides(const LayoutDescriptor& layout, const LevelVector& lv) {
  std::vector<index_t> s(static_cast<std::size_t>(lv.dim()));
  s[0] = 1;
  index_t stride = layout.line_length(lv);
  for (int a = 1; a < lv.dim(); ++a) {
    s[static_cast<std::size_t>(a)] = stride;
    stride = detail::checked_mul(stride, lv.points(a));
  }
  return s;
}

/// Offset of a logical multi-index (1-based flat index per axis).
inline index_t buffer_offset(const LayoutDescriptor& layout, const LevelVector& lv,
                             std::span<const index_t> multi_index) {
  if (static_cast<int>(multi_index.size()) != lv.dim())
    throw IndexError("multi-index has " + std::to_string(multi_index.size()) +
                     " components, grid has " + std::to_string(lv.dim()));
  for (int a = 0; a < lv.dim(); ++a) {
    const index_t i = multi_index[static_cast<std::size_t>(a)];
    if (i < 1 || i > lv.points(a))
      throw IndexError("index " + std::to_string(i) + " out of range on axis " + std::to_string(a));
  }
  index_t offset = layout.line_position(lv[0], multi_index[0]);
  index_t stride = layout.line_length(lv);
  for (int a = 1; a < lv.dim(); ++a) {
    offset += (multi_index[static_cast<std::size_t>(a)] - 1) * stride;
    stride *= lv.points(a);
  }
  return offset;
}

}  // namespace hiergrid
