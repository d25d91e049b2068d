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
#include <functional>
#include <future>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "oracle.hpp"

namespace hiergrid {

struct CombinationMember {
  LevelVector levels;
  int coefficient = 0;
};

/// Regular combination technique of dimension d and target level n: grids
/// with |l|_1 = n - q, q = 0..d-1, weighted (-1)^q binom(d-1, q).
struct CombinationScheme {
  int dim = 0;
  int level = 0;
  std::vector<CombinationMember> members;

  long coefficient_sum() const {
    long s = 0;
    for (const auto& m : members) s += m.coefficient;
    return s;
  }
};

namespace detail {

inline long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// All compositions of `sum` into parts >= 1, lexicographic.
inline void compositions(int parts, int sum, std::vector<int>& prefix,
                         std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    prefix.push_back(sum);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int first = 1; first <= sum - (parts - 1); ++first) {
    prefix.push_back(first);
    compositions(parts - 1, sum - first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

inline CombinationScheme enumerate_scheme(int d, int n) {
  if (d < 1) throw ParameterError("scheme dimension must be >= 1");
  if (n < d) throw ParameterError("target level " + std::to_string(n) + " < dimension " + std::to_string(d));
  CombinationScheme s{d, n, {}};
  for (int q = 0; q < d && n - q >= d; ++q) {
    std::vector<std::vector<int>> levels;
    std::vector<int> prefix;
    detail::compositions(d, n - q, prefix, levels);
    const int c = static_cast<int>((q % 2 ? -1 : 1) * detail::binomial(d - 1, q));
    for (auto& l : levels) s.members.push_back({LevelVector(std::move(l)), c});
  }
  std::sort(s.members.begin(), s.members.end(),
            [](const auto& a, const auto& b) { return a.levels < b.levels; });
  return s;
}

using Sampler = std::function<double(std::span<const double>)>;

/// Samples `f` on every member grid (in the variant's layout) and hierarchizes
/// it. Grids are independent; with threads > 1 they are processed
/// concurrently, one grid per task.
inline std::vector<Grid> hierarchize_scheme(const CombinationScheme& scheme, const Sampler& f,
                                            const KernelVariant& kv, int threads = 1) {
  auto build = [&](const CombinationMember& m) {
    Grid g(m.levels, required_layout(kv.tag));
    g.sample(f);
    hierarchize(g, kv);
    return g;
  };
  std::vector<Grid> out;
  out.reserve(scheme.members.size());
  if (threads <= 1) {
    for (const auto& m : scheme.members) out.push_back(build(m));
    return out;
  }
  for (std::size_t start = 0; start < scheme.members.size(); start += static_cast<std::size_t>(threads)) {
    std::vector<std::future<Grid>> batch;
    const std::size_t end = std::min(scheme.members.size(), start + static_cast<std::size_t>(threads));
    for (std::size_t k = start; k < end; ++k)
      batch.push_back(std::async(std::launch::async, build, std::cref(scheme.members[k])));
    for (auto& fut : batch) out.push_back(fut.get());
  }
  return out;
}

/// sum_k c_k u_k(x) over the hierarchized member grids.
inline double combined_value(const CombinationScheme& scheme, std::span<const Grid> grids,
                             std::span<const double> x) {
  if (grids.size() != scheme.members.size()) throw ParameterError("one grid per member required");
  double s = 0.0;
  for (std::size_t k = 0; k < grids.size(); ++k)
    s += scheme.members[k].coefficient * oracle::evaluate_interpolant(grids[k], x);
  return s;
}

}  // namespace hiergrid
