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
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace hiergrid {

using index_t = std::int64_t;

namespace detail {

inline index_t checked_mul(index_t a, index_t b) {
  index_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw CapacityError("index arithmetic overflow");
  return r;
}

inline index_t checked_add(index_t a, index_t b) {
  index_t r;
  if (__builtin_add_overflow(a, b, &r)) throw CapacityError("index arithmetic overflow");
  return r;
}

}  // namespace detail

/// Refinement level per dimension of a combination grid. Level 1 is a single
/// point; level l has 2^l - 1 interior points (no boundary points).
class LevelVector {
 public:
  /// Largest per-axis level; keeps 2^l representable with room for 2*N.
  static constexpr int kMaxLevel = 61;

  LevelVector() = default;
  LevelVector(std::initializer_list<int> levels) : LevelVector(std::vector<int>(levels)) {}
  explicit LevelVector(std::vector<int> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw ParameterError("level vector must have at least one dimension");
    for (int l : levels_) {
      if (l < 1) throw ParameterError("levels must be >= 1, got " + std::to_string(l));
      if (l > kMaxLevel) throw CapacityError("level " + std::to_string(l) + " exceeds index range");
    }
  }

  int dim() const { return static_cast<int>(levels_.size()); }
  int operator[](int axis) const { return levels_[static_cast<std::size_t>(axis)]; }
  std::span<const int> levels() const { return levels_; }

  /// Points on one axis: 2^l - 1.
  index_t points(int axis) const { return (index_t{1} << (*this)[axis]) - 1; }

  int level_sum() const { return std::accumulate(levels_.begin(), levels_.end(), 0); }

  /// "5x5x3"
  std::string to_string(char sep = 'x') const {
    std::string s;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      if (i) s += sep;
      s += std::to_string(levels_[i]);
    }
    return s;
  }

  friend bool operator==(const LevelVector&, const LevelVector&) = default;
  friend auto operator<=>(const LevelVector&, const LevelVector&) = default;

 private:
  std::vector<int> levels_;
};

/// Total number of grid points, prod(2^l_i - 1). Throws CapacityError if
/// 2*N does not fit the index type.
inline index_t num_points(const LevelVector& lv) {
  index_t n = 1;
  for (int a = 0; a < lv.dim(); ++a) n = detail::checked_mul(n, lv.points(a));
  detail::checked_mul(n, 2);
  return n;
}

}  // namespace hiergrid
