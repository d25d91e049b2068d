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

// Reference hierarchization by solving the hat-basis interpolation system
// directly, plus an instrumented scalar kernel that counts flops. Shares no
// navigation code with kernels.hpp.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace hiergrid::oracle {

inline constexpr index_t kDefaultCap = 8192;

/// phi(x) = max(0, 1 - 2^level |x - c|), c = (2 index + 1) 2^-level.
struct BasisFunction1D {
  int level = 1;
  index_t index = 0;  // 0-based within the level

  double center() const { return std::ldexp(static_cast<double>(2 * index + 1), -level); }
  double operator()(double x) const {
    return std::max(0.0, 1.0 - std::ldexp(std::abs(x - center()), level));
  }
};

/// Level and within-level index of the i-th point (1-based) on an axis.
inline BasisFunction1D basis_of(int axis_level, index_t i) {
  BasisFunction1D b{axis_level, i};
  while (b.index % 2 == 0) {
    b.index /= 2;
    --b.level;
  }
  b.index = (b.index - 1) / 2;
  return b;
}

namespace detail {

struct Node {
  std::vector<BasisFunction1D> basis;
  std::vector<double> x;
  int level_sum = 0;
};

inline std::vector<Node> nodes_of(const LevelVector& lv) {
  const int d = lv.dim();
  index_t n = num_points(lv);
  std::vector<Node> nodes(static_cast<std::size_t>(n));
  std::vector<index_t> mi(static_cast<std::size_t>(d), 1);
  for (auto& node : nodes) {
    for (int a = 0; a < d; ++a) {
      const index_t i = mi[static_cast<std::size_t>(a)];
      node.basis.push_back(basis_of(lv[a], i));
      node.x.push_back(std::ldexp(static_cast<double>(i), -lv[a]));
      node.level_sum += node.basis.back().level;
    }
    for (int a = 0; a < d; ++a) {
      auto& c = mi[static_cast<std::size_t>(a)];
      if (++c <= lv.points(a)) break;
      c = 1;
    }
  }
  return nodes;
}

inline double basis_at(const Node& q, std::span<const double> x) {
  double v = 1.0;
  for (std::size_t a = 0; a < x.size() && v != 0.0; ++a) v *= q.basis[a](x[a]);
  return v;
}

// Row-major positions sorted coarsest first (stable by level sum).
inline std::vector<std::size_t> coarse_to_fine(const std::vector<Node>& nodes) {
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return nodes[a].level_sum < nodes[b].level_sum;
  });
  return order;
}

}  // namespace detail

/// B[p][q] = prod_i phi_q(x_p,i) with rows and columns in coarse-to-fine
/// order, which makes B unit lower triangular. For small grids only.
inline std::vector<std::vector<double>> basis_matrix(const LevelVector& lv, index_t cap = 512) {
  if (num_points(lv) > cap) throw SizeError("basis matrix limited to " + std::to_string(cap) + " points");
  const auto nodes = detail::nodes_of(lv);
  const auto order = detail::coarse_to_fine(nodes);
  std::vector<std::vector<double>> b(order.size(), std::vector<double>(order.size()));
  for (std::size_t r = 0; r < order.size(); ++r)
    for (std::size_t c = 0; c < order.size(); ++c)
      b[r][c] = detail::basis_at(nodes[order[c]], nodes[order[r]].x);
  return b;
}

/// Surpluses alpha with B alpha = nodal values, by forward substitution.
/// Returns a row-major grid.
inline Grid hierarchize_oracle(const Grid& nodal, index_t cap = kDefaultCap) {
  const LevelVector& lv = nodal.levels();
  if (num_points(lv) > cap)
    throw SizeError("oracle limited to " + std::to_string(cap) + " points, grid has " +
                    std::to_string(num_points(lv)));
  const auto nodes = detail::nodes_of(lv);
  const auto order = detail::coarse_to_fine(nodes);
  const std::vector<double> v = nodal.live_values();
  std::vector<double> alpha(v.size(), 0.0);
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& p = nodes[order[r]];
    double s = v[order[r]];
    for (std::size_t c = 0; c < r; ++c) {
      const double a = alpha[order[c]];
      if (a != 0.0) s -= detail::basis_at(nodes[order[c]], p.x) * a;
    }
    alpha[order[r]] = s;
  }
  Grid out(lv, LayoutDescriptor::row_major());
  out.set_live_values(alpha);
  return out;
}

/// Value of the hierarchical interpolant with the given surpluses at x.
inline double evaluate_interpolant(const Grid& surpluses, std::span<const double> x) {
  const LevelVector& lv = surpluses.levels();
  if (static_cast<int>(x.size()) != lv.dim()) throw ParameterError("point dimension mismatch");
  const auto data = surpluses.data();
  double sum = 0.0;
  surpluses.for_each_point([&](std::span<const index_t> mi, index_t off) {
    const double a = data[static_cast<std::size_t>(off)];
    if (a == 0.0) return;
    double phi = 1.0;
    for (int k = 0; k < lv.dim() && phi != 0.0; ++k)
      phi *= basis_of(lv[k], mi[static_cast<std::size_t>(k)])(x[static_cast<std::size_t>(k)]);
    sum += a * phi;
  });
  return sum;
}

struct OpCountMeasured {
  index_t additions = 0;
  index_t multiplications = 0;
  index_t flops() const { return additions + multiplications; }
};

struct CountedResult {
  Grid grid;
  OpCountMeasured ops;
};

/// Scalar hierarchization on a row-major copy, counting every floating-point
/// addition and multiplication applied to grid values.
inline CountedResult counted_hierarchize(const Grid& g, bool reduced = false) {
  Grid work = convert_layout(g, LayoutDescriptor::row_major());
  const LevelVector& lv = work.levels();
  const int d = lv.dim();
  double* x = work.data().data();
  const index_t total = work.buffer_size();
  OpCountMeasured ops;

  index_t stride = 1;
  for (int axis = 0; axis < d; ++axis) {
    const index_t n = lv.points(axis);
    const int level = lv[axis];
    const index_t block = stride * n;
    for (index_t outer = 0; outer < total; outer += block) {
      for (index_t inner = 0; inner < stride; ++inner) {
        double* pole = x + outer + inner;
        auto at = [&](index_t i) -> double& { return pole[(i - 1) * stride]; };
        for (int lvl = level; lvl >= 2; --lvl) {
          const index_t h = index_t{1} << (level - lvl);
          for (index_t i = h; i <= n; i += 2 * h) {
            const bool l = i - h >= 1;
            const bool r = i + h <= n;
            if (reduced && l && r) {
              at(i) = at(i) - 0.5 * (at(i - h) + at(i + h));
              ops.additions += 2;
              ops.multiplications += 1;
              continue;
            }
            if (l) {
              at(i) = at(i) - 0.5 * at(i - h);
              ops.additions += 1;
              ops.multiplications += 1;
            }
            if (r) {
              at(i) = at(i) - 0.5 * at(i + h);
              ops.additions += 1;
              ops.multiplications += 1;
            }
          }
        }
      }
    }
    stride = block;
  }
  return {std::move(work), ops};
}

/// Normwise relative deviation max|a - b| / max|reference| (reference = b).
inline double max_relative_deviation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("length mismatch");
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff = std::max(diff, std::abs(a[k] - b[k]));
    scale = std::max(scale, std::abs(b[k]));
  }
  if (diff == 0.0) return 0.0;
  return diff / std::max(scale, 1e-300);
}

}  // namespace hiergrid::oracle
