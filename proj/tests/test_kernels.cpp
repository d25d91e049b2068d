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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"

namespace hiergrid {
namespace {

std::vector<double> to_order(const std::vector<double>& natural, int level, PoleOrder order) {
  if (order == PoleOrder::Natural) return natural;
  const LayoutDescriptor layout = order == PoleOrder::Bfs ? LayoutDescriptor::bfs1() : LayoutDescriptor::rev_bfs1();
  std::vector<double> out(natural.size());
  for (index_t i = 1; i <= static_cast<index_t>(natural.size()); ++i)
    out[static_cast<std::size_t>(layout.line_position(level, i))] = natural[static_cast<std::size_t>(i - 1)];
  return out;
}

class PoleTest : public ::testing::TestWithParam<PoleOrder> {};

TEST_P(PoleTest, HierarchizeExamples) {
  const PoleOrder order = GetParam();
  auto v = to_order({1, 2, 3}, 2, order);
  hierarchize_pole(v, 2, false, order);
  EXPECT_EQ(v, to_order({0, 2, 2}, 2, order));

  v = to_order({1, 2, 3, 4, 3, 2, 1}, 3, order);
  hierarchize_pole(v, 3, false, order);
  EXPECT_EQ(v, to_order({0, 0, 0, 4, 0, 0, 0}, 3, order));

  std::vector<double> one{2.5};
  hierarchize_pole(one, 1, false, order);
  EXPECT_EQ(one[0], 2.5);
}

TEST_P(PoleTest, DehierarchizeExamples) {
  const PoleOrder order = GetParam();
  auto v = to_order({0, 2, 2}, 2, order);
  dehierarchize_pole(v, 2, order);
  EXPECT_EQ(v, to_order({1, 2, 3}, 2, order));

  v = to_order({0, 0, 0, 4, 0, 0, 0}, 3, order);
  dehierarchize_pole(v, 3, order);
  EXPECT_EQ(v, to_order({1, 2, 3, 4, 3, 2, 1}, 3, order));
}

TEST_P(PoleTest, MatchesOracleAndRoundTrips) {
  const PoleOrder order = GetParam();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int l = 1; l <= 9; ++l) {
    std::vector<double> natural(static_cast<std::size_t>((1 << l) - 1));
    for (auto& x : natural) x = u(rng);
    Grid g(LevelVector{l});
    g.set_live_values(natural);
    const auto expected = oracle::hierarchize_oracle(g).live_values();

    for (bool reduced : {false, true}) {
      auto v = to_order(natural, l, order);
      hierarchize_pole(v, l, reduced, order);
      EXPECT_LE(oracle::max_relative_deviation(v, to_order(expected, l, order)), 1e-12);
      dehierarchize_pole(v, l, order);
      EXPECT_LE(oracle::max_relative_deviation(v, to_order(natural, l, order)), 1e-12);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Orders, PoleTest,
                         ::testing::Values(PoleOrder::Natural, PoleOrder::Bfs, PoleOrder::RevBfs));

TEST(PoleTest, RejectsShortView) {
  std::vector<double> v(6);
  EXPECT_THROW(hierarchize_pole(v, 3), ParameterError);
  EXPECT_THROW(dehierarchize_pole(v, 0), ParameterError);
}

class VariantTest : public ::testing::TestWithParam<Variant> {};

TEST_P(VariantTest, RowsOfAllOnes) {
  const Variant v = GetParam();
  Grid g(LevelVector{2, 2}, required_layout(v));
  g.set_live_values(std::vector<double>(9, 1.0));
  hierarchize_dimension(g, 0, KernelVariant(v));
  EXPECT_EQ(g.live_values(), (std::vector<double>{0.5, 1, 0.5, 0.5, 1, 0.5, 0.5, 1, 0.5}));
  hierarchize_dimension(g, 1, KernelVariant(v));
  EXPECT_EQ(g.live_values(), (std::vector<double>{0.25, 0.5, 0.25, 0.5, 1, 0.5, 0.25, 0.5, 0.25}));
}

TEST_P(VariantTest, LevelOneAxisIsIdentity) {
  const Variant v = GetParam();
  const Grid g = testing::random_grid(LevelVector{3, 1, 2}, 4, required_layout(v));
  Grid h = g;
  hierarchize_dimension(h, 1, KernelVariant(v));
  EXPECT_EQ(h.live_values(), g.live_values());
}

TEST_P(VariantTest, ProductHat) {
  const Variant v = GetParam();
  Grid g(LevelVector{2, 2}, required_layout(v));
  g.sample([](std::span<const double> x) {
    const oracle::BasisFunction1D root{1, 0};
    return 4 * root(x[0]) * 4 * root(x[1]);
  });
  hierarchize(g, KernelVariant(v));
  EXPECT_EQ(g.live_values(), (std::vector<double>{0, 0, 0, 0, 16, 0, 0, 0, 0}));
}

TEST_P(VariantTest, ZeroIsFixedPoint) {
  const Variant v = GetParam();
  Grid g(LevelVector{3, 2, 2}, required_layout(v));
  hierarchize(g, KernelVariant(v));
  EXPECT_TRUE(std::all_of(g.data().begin(), g.data().end(), [](double x) { return x == 0.0; }));
  dehierarchize(g, KernelVariant(v));
  EXPECT_TRUE(std::all_of(g.data().begin(), g.data().end(), [](double x) { return x == 0.0; }));
}

TEST_P(VariantTest, RootSurplusDehierarchizesToTent) {
  const Variant v = GetParam();
  const LevelVector lv{3, 2};
  Grid g(lv, required_layout(v));
  const std::vector<index_t> root{4, 2};
  g.at(root) = 2.0;
  dehierarchize(g, KernelVariant(v));
  g.for_each_point([&](std::span<const index_t> mi, index_t off) {
    const oracle::BasisFunction1D hat{1, 0};
    const double expected = 2.0 * hat(coordinate(3, mi[0])) * hat(coordinate(2, mi[1]));
    EXPECT_EQ(g.data()[static_cast<std::size_t>(off)], expected);
  });
}

TEST_P(VariantTest, MatchesOracle) {
  const Variant v = GetParam();
  std::mt19937_64 rng(static_cast<std::uint64_t>(v) + 100);
  for (int d = 1; d <= 4; ++d) {
    for (int trial = 0; trial < 4; ++trial) {
      const LevelVector lv = bench::random_levels(rng, d, 2000);
      const Grid nodal = testing::random_grid(lv, rng());
      const Grid expected = oracle::hierarchize_oracle(nodal);
      Grid g = convert_layout(nodal, required_layout(v));
      hierarchize(g, KernelVariant(v));
      EXPECT_LE(testing::rel_dev(g, expected), 1e-10) << lv.to_string();
    }
  }
}

TEST_P(VariantTest, RoundTrip) {
  const Variant v = GetParam();
  const Grid g = testing::random_grid(LevelVector{4, 3}, 21, required_layout(v));
  Grid h = g;
  hierarchize(h, KernelVariant(v));
  dehierarchize(h, KernelVariant(v));
  EXPECT_LE(testing::rel_dev(h, g), 1e-12);
}

TEST_P(VariantTest, AxisOrderInvariance) {
  const Variant v = GetParam();
  const Grid g = testing::random_grid(LevelVector{3, 2, 4}, 22, required_layout(v));
  Grid ref = g;
  hierarchize(ref, KernelVariant(v));
  std::vector<int> perm{0, 1, 2};
  while (std::next_permutation(perm.begin(), perm.end())) {
    Grid h = g;
    hierarchize(h, KernelVariant(v), std::span<const int>(perm));
    EXPECT_LE(testing::rel_dev(h, ref), 1e-12);
  }
}

TEST_P(VariantTest, PaddingNeverReachesLiveValues) {
  const Variant v = GetParam();
  LayoutDescriptor layout = required_layout(v);
  layout.padded = true;
  for (const LevelVector& lv : {LevelVector{3, 3, 2}, LevelVector{1, 4}, LevelVector{2, 2, 2, 2}}) {
    Grid clean = testing::random_grid(lv, 23, layout);
    Grid poisoned = clean;
    poisoned.fill_padding(1e100);
    hierarchize(clean, KernelVariant(v));
    hierarchize(poisoned, KernelVariant(v));
    EXPECT_EQ(poisoned.live_values(), clean.live_values()) << lv.to_string();
    dehierarchize(clean, KernelVariant(v));
    dehierarchize(poisoned, KernelVariant(v));
    EXPECT_EQ(poisoned.live_values(), clean.live_values()) << lv.to_string();
  }
}

TEST_P(VariantTest, RejectsWrongLayout) {
  const Variant v = GetParam();
  for (const LayoutDescriptor& layout :
       {LayoutDescriptor::row_major(), LayoutDescriptor::bfs1(), LayoutDescriptor::rev_bfs1(true)}) {
    Grid g(LevelVector{2, 2}, layout);
    if (accepts_layout(v, layout)) {
      EXPECT_NO_THROW(hierarchize(g, KernelVariant(v)));
      continue;
    }
    try {
      hierarchize(g, KernelVariant(v));
      ADD_FAILURE() << "no LayoutError for " << variant_name(v) << " on " << layout.name();
    } catch (const LayoutError& e) {
      EXPECT_NE(std::string(e.what()).find(required_layout(v).name()), std::string::npos);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllVariants, VariantTest, ::testing::ValuesIn(kAllVariants),
                         [](const auto& info) { return std::string(variant_name(info.param)); });

TEST(KernelTest, NonReducedVariantsAgreeBitwise) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const LevelVector lv = bench::random_levels(rng, 1 + trial % 5, 30000);
    const Grid nodal = testing::random_grid(lv, rng());
    Grid ref = nodal;
    hierarchize(ref, KernelVariant(Variant::Func));
    const auto expected = ref.live_values();
    for (Variant v : kAllVariants) {
      Grid g = convert_layout(nodal, required_layout(v));
      hierarchize(g, KernelVariant(v));
      if (is_reduced(v)) {
        EXPECT_LE(oracle::max_relative_deviation(g.live_values(), expected), 1e-14) << lv.to_string();
      } else {
        EXPECT_EQ(g.live_values(), expected) << variant_name(v) << " " << lv.to_string();
      }
    }
  }
}

TEST(KernelTest, BlockingParametersDoNotChangeBits) {
  const LevelVector lv{3, 4, 3};
  const Grid nodal = testing::random_grid(lv, 41);
  Grid ref = nodal;
  hierarchize(ref, KernelVariant(Variant::Ind));
  for (Variant v : {Variant::BfsUnrolled, Variant::BfsVectorized, Variant::BfsOverVectorized,
                    Variant::BfsOverVectorizedPreBranched}) {
    for (int p : {1, 2, 4, 8, 16}) {
      Grid g = convert_layout(nodal, required_layout(v));
      hierarchize(g, KernelVariant(v, p, p));
      EXPECT_EQ(g.live_values(), ref.live_values()) << variant_name(v) << " width " << p;
    }
  }
}

TEST(KernelTest, UnpaddedBfsAcceptedByScalarBfs) {
  const Grid nodal = testing::random_grid(LevelVector{3, 3}, 42);
  Grid ref = nodal;
  hierarchize(ref, KernelVariant(Variant::Ind));
  Grid g = convert_layout(nodal, LayoutDescriptor::bfs1(true));
  hierarchize(g, KernelVariant(Variant::Bfs));
  EXPECT_EQ(g.live_values(), ref.live_values());
  Grid p = convert_layout(nodal, LayoutDescriptor::row_major_padded());
  hierarchize(p, KernelVariant(Variant::Func));
  EXPECT_EQ(p.live_values(), ref.live_values());
}

TEST(KernelTest, ParameterErrors) {
  Grid g(LevelVector{2, 2}, LayoutDescriptor::bfs1(true));
  EXPECT_THROW(hierarchize(g, KernelVariant(Variant::BfsVectorized, 3)), ParameterError);
  EXPECT_THROW(hierarchize(g, KernelVariant(Variant::BfsUnrolled, 4, 32)), ParameterError);
  EXPECT_THROW(hierarchize_dimension(g, 2, KernelVariant(Variant::Bfs)), ParameterError);
  const std::vector<int> bad{0, 0};
  EXPECT_THROW(hierarchize(g, KernelVariant(Variant::Bfs), std::span<const int>(bad)), ParameterError);
}

TEST(VariantNames, ParseRoundTrip) {
  for (Variant v : kAllVariants) EXPECT_EQ(parse_variant(variant_name(v)), v);
  EXPECT_FALSE(parse_variant("Nope"));
  EXPECT_EQ(required_layout(Variant::BfsVectorized), LayoutDescriptor::bfs1(true));
  EXPECT_EQ(required_layout(Variant::Ind), LayoutDescriptor::row_major());
}

}  // namespace
}  // namespace hiergrid
