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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

#include "errors.hpp"
#include "layout.hpp"
#include "level_vector.hpp"

namespace hiergrid {

/// Allocator returning 64-byte aligned storage so that padded axis-0 lines
/// start on vector-register boundaries.
template <class T, std::size_t Alignment = 64>
struct AlignedAllocator {
  using value_type = T;
  template <class U>
  struct rebind {
    using other = AlignedAllocator<U, Alignment>;
  };

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U, Alignment>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{Alignment}));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, std::align_val_t{Alignment}); }

  template <class U>
  friend bool operator==(const AlignedAllocator&, const AlignedAllocator<U, Alignment>&) {
    return true;
  }
};

using AlignedBuffer = std::vector<double, AlignedAllocator<double>>;

/// Coordinate of flat index i on an axis of the given level.
inline double coordinate(int axis_level, index_t i) { return std::ldexp(static_cast<double>(i), -axis_level); }

/// A combination grid: values of all interior points in a given layout.
/// Padding slots are zero on construction.
class Grid {
 public:
  explicit Grid(LevelVector levels, LayoutDescriptor layout = LayoutDescriptor::row_major())
      : levels_(std::move(levels)),
        layout_(layout),
        values_(static_cast<std::size_t>(layout_.buffer_size(levels_)), 0.0) {}

  const LevelVector& levels() const { return levels_; }
  const LayoutDescriptor& layout() const { return layout_; }
  int dim() const { return levels_.dim(); }

  std::span<double> data() { return values_; }
  std::span<const double> data() const { return values_; }

  /// Buffer length including padding.
  index_t buffer_size() const { return static_cast<index_t>(values_.size()); }
  index_t num_points() const { return hiergrid::num_points(levels_); }

  double& at(std::span<const index_t> multi_index) {
    return values_[static_cast<std::size_t>(buffer_offset(layout_, levels_, multi_index))];
  }
  double at(std::span<const index_t> multi_index) const {
    return values_[static_cast<std::size_t>(buffer_offset(layout_, levels_, multi_index))];
  }

  /// Visits every live point in logical row-major order (axis 0 fastest),
  /// calling f(multi_index, offset).
  template <class F>
  void for_each_point(F&& f) const {
    const int d = dim();
    const index_t n0 = levels_.points(0);
    const index_t line = layout_.line_length(levels_);
    std::vector<index_t> slot(static_cast<std::size_t>(n0));
    for (index_t i = 1; i <= n0; ++i) slot[static_cast<std::size_t>(i - 1)] = layout_.line_position(levels_[0], i);

    std::vector<index_t> mi(static_cast<std::size_t>(d), 1);
    const index_t lines = buffer_size() / line;
    for (index_t l = 0; l < lines; ++l) {
      const index_t base = l * line;
      for (index_t i = 1; i <= n0; ++i) {
        mi[0] = i;
        f(std::span<const index_t>(mi), base + slot[static_cast<std::size_t>(i - 1)]);
      }
      for (int a = 1; a < d; ++a) {
        auto& c = mi[static_cast<std::size_t>(a)];
        if (++c <= levels_.points(a)) break;
        c = 1;
      }
    }
  }

  /// Live values in logical row-major order.
  std::vector<double> live_values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(num_points()));
    for_each_point([&](std::span<const index_t>, index_t off) { out.push_back(values_[static_cast<std::size_t>(off)]); });
    return out;
  }

  /// Assigns live values given in logical row-major order.
  void set_live_values(std::span<const double> v) {
    if (static_cast<index_t>(v.size()) != num_points()) throw ParameterError("live value count mismatch");
    std::size_t k = 0;
    for_each_point([&](std::span<const index_t>, index_t off) { values_[static_cast<std::size_t>(off)] = v[k++]; });
  }

  /// Fills live values with f(coordinates) sampled at grid points.
  template <class F>
  void sample(F&& f) {
    std::vector<double> x(static_cast<std::size_t>(dim()));
    for_each_point([&](std::span<const index_t> mi, index_t off) {
      for (int a = 0; a < dim(); ++a)
        x[static_cast<std::size_t>(a)] = coordinate(levels_[a], mi[static_cast<std::size_t>(a)]);
      values_[static_cast<std::size_t>(off)] = f(std::span<const double>(x));
    });
  }

  /// Sets every padding slot (non-live) to v.
  void fill_padding(double v) {
    if (!layout_.padded) return;
    const index_t line = layout_.line_length(levels_);
    const index_t n0 = levels_.points(0);
    for (index_t base = 0; base < buffer_size(); base += line)
      for (index_t p = n0; p < line; ++p) values_[static_cast<std::size_t>(base + p)] = v;
  }

 private:
  LevelVector levels_;
  LayoutDescriptor layout_;
  AlignedBuffer values_;
};

/// Same logical values in another layout; padding in the result is zero.
inline Grid convert_layout(const Grid& g, LayoutDescriptor target) {
  Grid out(g.levels(), target);
  if (target == g.layout()) {
    std::copy(g.data().begin(), g.data().end(), out.data().begin());
    out.fill_padding(0.0);
    return out;
  }
  out.set_live_values(g.live_values());
  return out;
}

}  // namespace hiergrid
