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

// Hierarchization and dehierarchization of combination grids, one axis at a
// time. Every variant applies the same updates
//
//   x[i] += w * left(i);  x[i] += w * right(i)      (w = -1/2 or +1/2)
//
// to every point, level by level, so all non-reduced variants agree bit for
// bit. They differ only in navigation and in how many poles share one pass
// over the level structure.
//
// Build with -ffp-contract=off; fused multiply-adds would break the bitwise
// agreement between scalar and blocked paths.

#include <algorithm>
#include <bit>
#include <cstring>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "index1d.hpp"
#include "variant.hpp"

namespace hiergrid {

enum class PoleOrder { Natural, Bfs, RevBfs };

namespace detail {

enum class Direction { Hierarchize, Dehierarchize };

template <Direction D>
inline constexpr double kWeight = D == Direction::Hierarchize ? -0.5 : 0.5;

// Hierarchization runs finest to coarsest so predecessors are still nodal
// when read; dehierarchization runs the other way.
template <Direction D, class F>
inline void for_levels(int axis_level, F&& f) {
  if constexpr (D == Direction::Hierarchize) {
    for (int lvl = axis_level; lvl >= 2; --lvl) f(lvl);
  } else {
    for (int lvl = 2; lvl <= axis_level; ++lvl) f(lvl);
  }
}

// ---- scalar poles -----------------------------------------------------------

template <Direction D>
inline void natural_pole(double* x, index_t stride, int axis_level, bool reduced) {
  constexpr double w = kWeight<D>;
  const index_t n = (index_t{1} << axis_level) - 1;
  for_levels<D>(axis_level, [&](int lvl) {
    const index_t h = index_t{1} << (axis_level - lvl);
    for (index_t i = h; i <= n; i += 2 * h) {
      double& v = x[(i - 1) * stride];
      const bool has_left = i > h;
      const bool has_right = i + h <= n;
      if (reduced && has_left && has_right) {
        v += w * (x[(i - h - 1) * stride] + x[(i + h - 1) * stride]);
        continue;
      }
      if (has_left) v += w * x[(i - h - 1) * stride];
      if (has_right) v += w * x[(i + h - 1) * stride];
    }
  });
}

template <PoleOrder O>
inline index_t level_base(int axis_level, int lvl) {
  if constexpr (O == PoleOrder::Bfs) {
    return (index_t{1} << (lvl - 1)) - 1;
  } else {
    return (index_t{1} << axis_level) - (index_t{1} << lvl);
  }
}

// Slot of the coarser point sitting on the k-th boundary between points of
// level `lvl` (k in [1, 2^(lvl-1) - 1]). Walks up the tree by trailing zeros.
template <PoleOrder O>
inline index_t boundary_slot(int axis_level, int lvl, index_t k) {
  const int t = std::countr_zero(static_cast<std::uint64_t>(k));
  return level_base<O>(axis_level, lvl - 1 - t) + (((k >> t) - 1) >> 1);
}

template <Direction D, PoleOrder O>
inline void tree_pole(double* x, int axis_level, bool reduced) {
  constexpr double w = kWeight<D>;
  for_levels<D>(axis_level, [&](int lvl) {
    const index_t count = index_t{1} << (lvl - 1);
    double* row = x + level_base<O>(axis_level, lvl);
    for (index_t j = 0; j < count; ++j) {
      const bool has_left = j > 0;
      const bool has_right = j + 1 < count;
      if (reduced && has_left && has_right) {
        row[j] += w * (x[boundary_slot<O>(axis_level, lvl, j)] +
                       x[boundary_slot<O>(axis_level, lvl, j + 1)]);
        continue;
      }
      if (has_left) row[j] += w * x[boundary_slot<O>(axis_level, lvl, j)];
      if (has_right) row[j] += w * x[boundary_slot<O>(axis_level, lvl, j + 1)];
    }
  });
}

// ---- level-index baseline ---------------------------------------------------

struct LevelIndex {
  int level;
  index_t index;  // odd; coordinate index * 2^-level
};

inline LevelIndex to_level_index(int axis_level, index_t i) {
  LevelIndex li{axis_level, i};
  while (li.level > 1 && li.index % 2 == 0) {
    li.index /= 2;
    --li.level;
  }
  return li;
}

// Reduces an even position k on level `lvl` to its canonical level-index.
inline LevelIndex coarsen(int lvl, index_t k) {
  LevelIndex li{lvl, k};
  while (li.index % 2 == 0) {
    li.index /= 2;
    --li.level;
  }
  return li;
}

inline index_t offset_of(const std::vector<LevelIndex>& li, const LevelVector& lv,
                         const std::vector<index_t>& strides) {
  index_t off = 0;
  for (std::size_t a = 0; a < li.size(); ++a) {
    const index_t flat = li[a].index << (lv[static_cast<int>(a)] - li[a].level);
    off += (flat - 1) * strides[a];
  }
  return off;
}

template <Direction D>
void func_dimension(Grid& g, int axis) {
  constexpr double w = kWeight<D>;
  const LevelVector& lv = g.levels();
  const int d = lv.dim();
  const auto strides = axis_strides(g.layout(), lv);
  const int axis_level = lv[axis];
  double* x = g.data().data();

  std::vector<index_t> mi(static_cast<std::size_t>(d), 1);
  std::vector<LevelIndex> li(static_cast<std::size_t>(d));
  std::vector<LevelIndex> pred(static_cast<std::size_t>(d));
  const auto ax = static_cast<std::size_t>(axis);
  for (;;) {
    for (int a = 0; a < d; ++a)
      if (a != axis) li[static_cast<std::size_t>(a)] = to_level_index(lv[a], mi[static_cast<std::size_t>(a)]);

    for_levels<D>(axis_level, [&](int lvl) {
      const index_t last = (index_t{1} << lvl) - 1;
      for (index_t idx = 1; idx <= last; idx += 2) {
        li[ax] = {lvl, idx};
        double& v = x[offset_of(li, lv, strides)];
        if (idx > 1) {
          pred = li;
          pred[ax] = coarsen(lvl, idx - 1);
          v += w * x[offset_of(pred, lv, strides)];
        }
        if (idx < last) {
          pred = li;
          pred[ax] = coarsen(lvl, idx + 1);
          v += w * x[offset_of(pred, lv, strides)];
        }
      }
    });

    int a = 0;
    for (; a < d; ++a) {
      if (a == axis) continue;
      auto& c = mi[static_cast<std::size_t>(a)];
      if (++c <= lv.points(a)) break;
      c = 1;
    }
    if (a == d) break;
  }
}

// ---- blocked poles (axes >= 1) ----------------------------------------------

template <int W>
struct Pack {
  // typedef, not using: GCC drops vector_size on dependent alias declarations.
  typedef double type __attribute__((vector_size(W * sizeof(double))));
  static_assert(sizeof(type) == W * sizeof(double));
};

// dst[k] += w * src[k] for k < len, W lanes at a time.
template <int W>
inline void axpy_line(double* dst, const double* src, index_t len, double w) {
  using V = typename Pack<W>::type;
  index_t k = 0;
  for (; k + W <= len; k += W) {
    V a, b;
    std::memcpy(&a, dst + k, sizeof(V));
    std::memcpy(&b, src + k, sizeof(V));
    a = a + w * b;
    std::memcpy(dst + k, &a, sizeof(V));
  }
  for (; k < len; ++k) dst[k] += w * src[k];
}

// dst[k] += w * (lhs[k] + rhs[k]).
template <int W>
inline void axpy2_line(double* dst, const double* lhs, const double* rhs, index_t len, double w) {
  using V = typename Pack<W>::type;
  index_t k = 0;
  for (; k + W <= len; k += W) {
    V a, l, r;
    std::memcpy(&a, dst + k, sizeof(V));
    std::memcpy(&l, lhs + k, sizeof(V));
    std::memcpy(&r, rhs + k, sizeof(V));
    a = a + w * (l + r);
    std::memcpy(dst + k, &a, sizeof(V));
  }
  for (; k < len; ++k) dst[k] += w * (lhs[k] + rhs[k]);
}

// U adjacent poles per inner step, plain unrolled scalar loop.
template <Direction D, int U>
inline void unrolled_poles(double* x, index_t stride, int axis_level) {
  constexpr double w = kWeight<D>;
  const index_t n = (index_t{1} << axis_level) - 1;
  for_levels<D>(axis_level, [&](int lvl) {
    const index_t h = index_t{1} << (axis_level - lvl);
    for (index_t i = h; i <= n; i += 2 * h) {
      double* v = x + (i - 1) * stride;
      if (i > h) {
        const double* l = x + (i - h - 1) * stride;
        for (int k = 0; k < U; ++k) v[k] += w * l[k];
      }
      if (i + h <= n) {
        const double* r = x + (i + h - 1) * stride;
        for (int k = 0; k < U; ++k) v[k] += w * r[k];
      }
    }
  });
}

// W adjacent poles per inner step in one vector register.
template <Direction D, int W>
inline void vectorized_poles(double* x, index_t stride, int axis_level) {
  constexpr double w = kWeight<D>;
  const index_t n = (index_t{1} << axis_level) - 1;
  for_levels<D>(axis_level, [&](int lvl) {
    const index_t h = index_t{1} << (axis_level - lvl);
    for (index_t i = h; i <= n; i += 2 * h) {
      double* v = x + (i - 1) * stride;
      if (i > h) axpy_line<W>(v, x + (i - h - 1) * stride, W, w);
      if (i + h <= n) axpy_line<W>(v, x + (i + h - 1) * stride, W, w);
    }
  });
}

enum class LineMode { Branching, PreBranched, Reduced };

// A whole axis-0 line of poles per point update.
template <Direction D, int W, LineMode M>
inline void line_poles(double* x, index_t stride, index_t line, int axis_level) {
  constexpr double w = kWeight<D>;
  const index_t n = (index_t{1} << axis_level) - 1;
  auto at = [&](index_t i) { return x + (i - 1) * stride; };
  for_levels<D>(axis_level, [&](int lvl) {
    const index_t h = index_t{1} << (axis_level - lvl);
    if constexpr (M == LineMode::Branching) {
      for (index_t i = h; i <= n; i += 2 * h) {
        if (i > h) axpy_line<W>(at(i), at(i - h), line, w);
        if (i + h <= n) axpy_line<W>(at(i), at(i + h), line, w);
      }
    } else {
      // lvl >= 2: the first point has only a right predecessor, the last
      // only a left one, all others both.
      const index_t first = h;
      const index_t last = n + 1 - h;
      axpy_line<W>(at(first), at(first + h), line, w);
      for (index_t i = first + 2 * h; i < last; i += 2 * h) {
        if constexpr (M == LineMode::Reduced) {
          axpy2_line<W>(at(i), at(i - h), at(i + h), line, w);
        } else {
          axpy_line<W>(at(i), at(i - h), line, w);
          axpy_line<W>(at(i), at(i + h), line, w);
        }
      }
      axpy_line<W>(at(last), at(last - h), line, w);
    }
  });
}

template <Direction D, int W>
inline void blocked_run(Variant tag, double* x, index_t stride, index_t run, int unroll,
                        int axis_level) {
  // `run` contiguous poles starting at x, all with the same stride.
  auto chunks = [&](int block, auto&& body) {
    index_t k = 0;
    for (; k + block <= run; k += block) body(x + k);
    for (; k < run; ++k) natural_pole<D>(x + k, stride, axis_level, false);
  };
  if (tag == Variant::BfsUnrolled) {
    switch (unroll) {
      case 1: chunks(1, [&](double* p) { unrolled_poles<D, 1>(p, stride, axis_level); }); break;
      case 2: chunks(2, [&](double* p) { unrolled_poles<D, 2>(p, stride, axis_level); }); break;
      case 4: chunks(4, [&](double* p) { unrolled_poles<D, 4>(p, stride, axis_level); }); break;
      case 8: chunks(8, [&](double* p) { unrolled_poles<D, 8>(p, stride, axis_level); }); break;
      case 16: chunks(16, [&](double* p) { unrolled_poles<D, 16>(p, stride, axis_level); }); break;
    }
  } else {
    chunks(W, [&](double* p) { vectorized_poles<D, W>(p, stride, axis_level); });
  }
}

inline void check_block_param(int v, const char* what) {
  if (v < 1 || v > 16 || !std::has_single_bit(static_cast<unsigned>(v)))
    throw ParameterError(std::string(what) + " must be a power of two in [1, 16], got " +
                         std::to_string(v));
}

template <Direction D, int W>
void upper_axis(Grid& g, int axis, Variant tag, int unroll) {
  const LevelVector& lv = g.levels();
  const int axis_level = lv[axis];
  const index_t stride = axis_strides(g.layout(), lv)[static_cast<std::size_t>(axis)];
  const index_t block = stride * lv.points(axis);
  const index_t line = g.layout().line_length(lv);
  const index_t live = lv.points(0);
  double* x = g.data().data();

  for (index_t base = 0; base < g.buffer_size(); base += block) {
    double* chunk = x + base;
    switch (tag) {
      case Variant::Ind:
      case Variant::Bfs:
      case Variant::BfsRev:
        for (index_t q = 0; q < stride; ++q)
          if (q % line < live) natural_pole<D>(chunk + q, stride, axis_level, false);
        break;
      case Variant::BfsUnrolled:
      case Variant::BfsVectorized:
        blocked_run<D, W>(tag, chunk, stride, stride, unroll, axis_level);
        break;
      case Variant::BfsOverVectorized:
        for (index_t q = 0; q < stride; q += line)
          line_poles<D, W, LineMode::Branching>(chunk + q, stride, line, axis_level);
        break;
      case Variant::BfsOverVectorizedPreBranched:
        for (index_t q = 0; q < stride; q += line)
          line_poles<D, W, LineMode::PreBranched>(chunk + q, stride, line, axis_level);
        break;
      case Variant::BfsOverVectorizedPreBranchedReducedOp:
        for (index_t q = 0; q < stride; q += line)
          line_poles<D, W, LineMode::Reduced>(chunk + q, stride, line, axis_level);
        break;
      case Variant::Func: break;
    }
  }
}

template <Direction D>
void transform_dimension(Grid& g, int axis, const KernelVariant& kv) {
  const LevelVector& lv = g.levels();
  if (axis < 0 || axis >= lv.dim())
    throw ParameterError("axis " + std::to_string(axis) + " out of range for dimension " +
                         std::to_string(lv.dim()));
  if (!accepts_layout(kv.tag, g.layout()))
    throw LayoutError(std::string(variant_name(kv.tag)) + " requires layout " +
                      required_layout(kv.tag).name() + ", grid has " + g.layout().name());
  check_block_param(kv.vector_width, "vector width");
  check_block_param(kv.unroll, "unroll factor");

  const int axis_level = lv[axis];
  if (axis_level == 1) return;

  if (kv.tag == Variant::Func) {
    func_dimension<D>(g, axis);
    return;
  }

  if (axis == 0) {
    const index_t line = g.layout().line_length(lv);
    const bool reduced = is_reduced(kv.tag);
    double* x = g.data().data();
    for (index_t base = 0; base < g.buffer_size(); base += line) {
      switch (g.layout().kind) {
        case LayoutKind::RowMajor: natural_pole<D>(x + base, 1, axis_level, reduced); break;
        case LayoutKind::Bfs1: tree_pole<D, PoleOrder::Bfs>(x + base, axis_level, reduced); break;
        case LayoutKind::RevBfs1:
          tree_pole<D, PoleOrder::RevBfs>(x + base, axis_level, reduced);
          break;
      }
    }
    return;
  }

  switch (kv.vector_width) {
    case 1: upper_axis<D, 1>(g, axis, kv.tag, kv.unroll); break;
    case 2: upper_axis<D, 2>(g, axis, kv.tag, kv.unroll); break;
    case 4: upper_axis<D, 4>(g, axis, kv.tag, kv.unroll); break;
    case 8: upper_axis<D, 8>(g, axis, kv.tag, kv.unroll); break;
    case 16: upper_axis<D, 16>(g, axis, kv.tag, kv.unroll); break;
  }
}

template <Direction D>
void pole_transform(std::span<double> values, int axis_level, bool reduced, PoleOrder order) {
  if (axis_level < 1) throw ParameterError("pole level must be >= 1");
  const auto n = static_cast<std::size_t>((index_t{1} << axis_level) - 1);
  if (values.size() < n)
    throw ParameterError("pole of level " + std::to_string(axis_level) + " needs " +
                         std::to_string(n) + " values, got " + std::to_string(values.size()));
  switch (order) {
    case PoleOrder::Natural: natural_pole<D>(values.data(), 1, axis_level, reduced); break;
    case PoleOrder::Bfs: tree_pole<D, PoleOrder::Bfs>(values.data(), axis_level, reduced); break;
    case PoleOrder::RevBfs:
      tree_pole<D, PoleOrder::RevBfs>(values.data(), axis_level, reduced);
      break;
  }
}

}  // namespace detail

/// Hierarchizes one 1-D pole of 2^level - 1 values stored in `order`.
/// With `reduced`, points with two predecessors take one multiplication.
inline void hierarchize_pole(std::span<double> values, int level, bool reduced = false,
                             PoleOrder order = PoleOrder::Natural) {
  detail::pole_transform<detail::Direction::Hierarchize>(values, level, reduced, order);
}

inline void dehierarchize_pole(std::span<double> values, int level,
                               PoleOrder order = PoleOrder::Natural) {
  detail::pole_transform<detail::Direction::Dehierarchize>(values, level, false, order);
}

/// Hierarchizes every pole along `axis` (0-based). Throws LayoutError if the
/// grid layout does not suit the variant.
inline void hierarchize_dimension(Grid& g, int axis, const KernelVariant& kv) {
  detail::transform_dimension<detail::Direction::Hierarchize>(g, axis, kv);
}

inline void dehierarchize_dimension(Grid& g, int axis, const KernelVariant& kv) {
  detail::transform_dimension<detail::Direction::Dehierarchize>(g, axis, kv);
}

/// Nodal values -> hierarchical surpluses, one axis after another. The
/// default axis order is 0..d-1; any permutation gives the same result up to
/// rounding.
inline void hierarchize(Grid& g, const KernelVariant& kv,
                        std::optional<std::span<const int>> axis_order = std::nullopt) {
  const int d = g.dim();
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  if (axis_order) {
    std::vector<int> sorted(axis_order->begin(), axis_order->end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted != order) throw ParameterError("axis order is not a permutation of 0..d-1");
    order.assign(axis_order->begin(), axis_order->end());
  }
  for (int axis : order) hierarchize_dimension(g, axis, kv);
}

/// Hierarchical surpluses -> nodal values.
inline void dehierarchize(Grid& g, const KernelVariant& kv) {
  for (int axis = g.dim() - 1; axis >= 0; --axis) dehierarchize_dimension(g, axis, kv);
}

}  // namespace hiergrid
