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

// Closed-form operation counts and a compulsory-traffic model for one full
// hierarchization. Each "x -= 0.5 * pred" update is one addition and one
// multiplication; a pole of level l performs 2^(l+1) - 2l - 2 such updates.

#include "level_vector.hpp"

namespace hiergrid {

namespace detail {

// prod_{j != skip} (2^l_j - 1)
inline index_t points_except(const LevelVector& lv, int skip) {
  index_t p = 1;
  for (int j = 0; j < lv.dim(); ++j)
    if (j != skip) p = checked_mul(p, lv.points(j));
  return p;
}

}  // namespace detail

/// Floating-point operations of a non-reduced hierarchization:
/// F = 2 * sum_i (2^(l_i+1) - 2 l_i - 2) * prod_{j!=i} (2^l_j - 1).
inline index_t flop_count(const LevelVector& lv) {
  index_t f = 0;
  for (int i = 0; i < lv.dim(); ++i) {
    const int l = lv[i];
    const index_t updates = (index_t{1} << (l + 1)) - 2 * l - 2;
    f = detail::checked_add(f, detail::checked_mul(updates, detail::points_except(lv, i)));
  }
  return detail::checked_mul(f, 2);
}

/// Additions; unchanged by the reduced update.
inline index_t add_count(const LevelVector& lv) { return flop_count(lv) / 2; }

/// Multiplications when points with two predecessors fold them into one
/// product: sum_i (2^l_i - 2) * prod_{j!=i} (2^l_j - 1).
inline index_t mult_count_reduced(const LevelVector& lv) {
  index_t m = 0;
  for (int i = 0; i < lv.dim(); ++i) {
    const index_t per_pole = (index_t{1} << lv[i]) - 2;
    m = detail::checked_add(m, detail::checked_mul(per_pole, detail::points_except(lv, i)));
  }
  return m;
}

/// One read and one write of every point per axis sweep. Lower bound; ignores
/// predecessor re-reads and padding.
inline index_t memory_volume_model(const LevelVector& lv, int element_bytes = 8) {
  const index_t per_sweep = detail::checked_mul(detail::checked_mul(2, element_bytes), num_points(lv));
  return detail::checked_mul(per_sweep, lv.dim());
}

struct CostBreakdown {
  index_t flops = 0;
  index_t additions = 0;
  index_t multiplications_full = 0;
  index_t multiplications_reduced = 0;
  index_t bytes = 0;
  double intensity = 0.0;  // flops per byte
};

inline CostBreakdown cost_breakdown(const LevelVector& lv, int element_bytes = 8) {
  CostBreakdown c;
  c.flops = flop_count(lv);
  c.additions = c.flops / 2;
  c.multiplications_full = c.flops - c.additions;
  c.multiplications_reduced = mult_count_reduced(lv);
  c.bytes = memory_volume_model(lv, element_bytes);
  c.intensity = static_cast<double>(c.flops) / static_cast<double>(c.bytes);
  return c;
}

}  // namespace hiergrid
