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
#include <numeric>
#include <random>
#include <set>

#include "test_support.hpp"

namespace hiergrid {
namespace {

TEST(LevelVectorTest, NumPoints) {
  EXPECT_EQ(num_points(LevelVector{3}), 7);
  EXPECT_EQ(num_points(LevelVector{1, 1, 1}), 1);
  EXPECT_EQ(num_points(LevelVector{2, 2}), 9);
  EXPECT_EQ(LevelVector({5, 5, 3}).level_sum(), 13);
  EXPECT_EQ(LevelVector({5, 5, 3}).to_string(), "5x5x3");
}

TEST(LevelVectorTest, RejectsInvalidAndOverflowingLevels) {
  EXPECT_THROW(LevelVector(std::vector<int>{}), ParameterError);
  EXPECT_THROW(LevelVector({2, 0}), ParameterError);
  EXPECT_THROW(LevelVector({62}), CapacityError);
  EXPECT_THROW(num_points(LevelVector({40, 40})), CapacityError);
  // 2 * N must fit as well.
  EXPECT_THROW(num_points(LevelVector({61, 2})), CapacityError);
  EXPECT_NO_THROW(num_points(LevelVector({27})));
}

TEST(Index1DTest, Predecessors) {
  EXPECT_EQ(hierarchical_predecessors(3, 3), (Predecessors{2, 4}));
  EXPECT_EQ(hierarchical_predecessors(3, 1), (Predecessors{std::nullopt, 2}));
  EXPECT_EQ(hierarchical_predecessors(3, 4), (Predecessors{}));
  EXPECT_EQ(hierarchical_predecessors(3, 7), (Predecessors{6, std::nullopt}));
  EXPECT_EQ(hierarchical_predecessors(1, 1), (Predecessors{}));
}

TEST(Index1DTest, LevelAndIndex) {
  EXPECT_EQ(hierarchical_level(3, 4), 1);
  EXPECT_EQ(hierarchical_level(3, 6), 2);
  EXPECT_EQ(hierarchical_level(3, 5), 3);
  EXPECT_EQ(level_index(6), 1);
  EXPECT_EQ(level_index(5), 2);
  EXPECT_EQ(flat_index(3, 2, 1), 6);
}

TEST(Index1DTest, BfsPositions) {
  EXPECT_EQ(bfs_position(3, 4), 0);
  EXPECT_EQ(bfs_position(3, 3), 4);
  EXPECT_EQ(bfs_position(3, 6), 2);
  EXPECT_EQ(rev_bfs_position(3, 4), 6);
  EXPECT_EQ(rev_bfs_position(3, 1), 0);
  EXPECT_EQ(rev_bfs_position(3, 2), 4);
}

TEST(Index1DTest, BfsMatchesLevelOrderWalk) {
  for (int l = 1; l <= 10; ++l) {
    const auto walk = testing::level_order_walk(l);
    for (std::size_t pos = 0; pos < walk.size(); ++pos) {
      EXPECT_EQ(bfs_position(l, walk[pos]), static_cast<index_t>(pos));
      EXPECT_EQ(index_from_bfs_position(l, static_cast<index_t>(pos)), walk[pos]);
    }
  }
}

TEST(Index1DTest, RevBfsMatchesReversedLevelBlocks) {
  // Reverse BFS keeps the left-to-right order inside each level but stores
  // the levels finest first.
  for (int l = 1; l <= 10; ++l) {
    const auto walk = testing::level_order_walk(l);
    std::vector<index_t> rev;
    for (int lvl = l; lvl >= 1; --lvl) {
      const auto begin = walk.begin() + ((index_t{1} << (lvl - 1)) - 1);
      rev.insert(rev.end(), begin, begin + (index_t{1} << (lvl - 1)));
    }
    for (std::size_t pos = 0; pos < rev.size(); ++pos) {
      EXPECT_EQ(rev_bfs_position(l, rev[pos]), static_cast<index_t>(pos));
      EXPECT_EQ(index_from_rev_bfs_position(l, static_cast<index_t>(pos)), rev[pos]);
    }
  }
}

TEST(Index1DProperty, PositionsAreBijections) {
  for (int l = 1; l <= 12; ++l) {
    const index_t n = (index_t{1} << l) - 1;
    std::vector<char> seen_bfs(static_cast<std::size_t>(n), 0), seen_rev(static_cast<std::size_t>(n), 0);
    for (index_t i = 1; i <= n; ++i) {
      const index_t b = bfs_position(l, i), r = rev_bfs_position(l, i);
      ASSERT_GE(b, 0);
      ASSERT_LT(b, n);
      ASSERT_GE(r, 0);
      ASSERT_LT(r, n);
      ++seen_bfs[static_cast<std::size_t>(b)];
      ++seen_rev[static_cast<std::size_t>(r)];
    }
    EXPECT_TRUE(std::all_of(seen_bfs.begin(), seen_bfs.end(), [](char c) { return c == 1; })) << "level " << l;
    EXPECT_TRUE(std::all_of(seen_rev.begin(), seen_rev.end(), [](char c) { return c == 1; })) << "level " << l;
  }
}

TEST(Index1DProperty, PredecessorsAreNearestCoarserPoints) {
  for (int l = 1; l <= 10; ++l) {
    const index_t n = (index_t{1} << l) - 1;
    for (index_t i = 1; i <= n; ++i) {
      const int li = testing::level_by_division(l, i);
      Predecessors brute;
      for (index_t k = 1; k <= n; ++k) {
        if (testing::level_by_division(l, k) >= li) continue;
        if (k < i) brute.left = k;
        if (k > i && !brute.right) brute.right = k;
      }
      const auto p = hierarchical_predecessors(l, i);
      ASSERT_EQ(p, brute) << "l=" << l << " i=" << i;
      if (p.left) EXPECT_LT(hierarchical_level(l, *p.left), hierarchical_level(l, i));
      if (p.right) EXPECT_LT(hierarchical_level(l, *p.right), hierarchical_level(l, i));
      EXPECT_EQ(!p.left && !p.right, i == (index_t{1} << (l - 1)));
    }
  }
}

TEST(LayoutTest, BufferOffsets) {
  const LevelVector lv{2, 2};
  const std::vector<index_t> first{1, 1}, pt{3, 2};
  EXPECT_EQ(buffer_offset(LayoutDescriptor::row_major(), lv, first), 0);
  EXPECT_EQ(buffer_offset(LayoutDescriptor::row_major(), lv, pt), 5);
  const std::vector<index_t> root{4, 1};
  EXPECT_EQ(buffer_offset(LayoutDescriptor::bfs1(), LevelVector{3, 1}, root), 0);
  // Padding widens the axis-0 line to 2^l0.
  EXPECT_EQ(buffer_offset(LayoutDescriptor::row_major_padded(), lv, pt), 6);
  EXPECT_EQ(LayoutDescriptor::row_major_padded().buffer_size(lv), 12);
}

TEST(LayoutTest, BufferOffsetErrors) {
  const LevelVector lv{2, 2};
  const std::vector<index_t> bad{4, 1}, zero{0, 1}, short_mi{1};
  EXPECT_THROW(buffer_offset(LayoutDescriptor::row_major(), lv, bad), IndexError);
  EXPECT_THROW(buffer_offset(LayoutDescriptor::row_major(), lv, zero), IndexError);
  EXPECT_THROW(buffer_offset(LayoutDescriptor::row_major(), lv, short_mi), IndexError);
}

TEST(LayoutProperty, BufferOffsetInjectiveOnRandomGrids) {
  std::mt19937_64 rng(7);
  const std::vector<LayoutDescriptor> layouts = {
      LayoutDescriptor::row_major(), LayoutDescriptor::row_major_padded(), LayoutDescriptor::bfs1(),
      LayoutDescriptor::bfs1(true), LayoutDescriptor::rev_bfs1(), LayoutDescriptor::rev_bfs1(true)};
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 5);
    const LevelVector lv = bench::random_levels(rng, d, 100000);
    for (const auto& layout : layouts) {
      const index_t size = layout.buffer_size(lv);
      std::vector<char> used(static_cast<std::size_t>(size), 0);
      Grid g(lv, layout);
      index_t count = 0;
      g.for_each_point([&](std::span<const index_t> mi, index_t off) {
        ASSERT_EQ(off, buffer_offset(layout, lv, mi));
        ASSERT_LT(off, size);
        ASSERT_EQ(used[static_cast<std::size_t>(off)]++, 0) << lv.to_string() << " " << layout.name();
        ++count;
      });
      EXPECT_EQ(count, num_points(lv));
    }
  }
}

TEST(GridTest, ConvertLayout) {
  Grid g(LevelVector{3});
  std::vector<double> v{1, 2, 3, 4, 5, 6, 7};
  g.set_live_values(v);

  const Grid same = convert_layout(g, LayoutDescriptor::row_major());
  EXPECT_TRUE(std::equal(same.data().begin(), same.data().end(), g.data().begin()));

  const Grid bfs = convert_layout(g, LayoutDescriptor::bfs1());
  // Level order of the 7-point tree: 4 | 2 6 | 1 3 5 7.
  const std::vector<double> expected{4, 2, 6, 1, 3, 5, 7};
  EXPECT_TRUE(std::equal(bfs.data().begin(), bfs.data().end(), expected.begin()));

  const Grid rev = convert_layout(g, LayoutDescriptor::rev_bfs1());
  const std::vector<double> expected_rev{1, 3, 5, 7, 2, 6, 4};
  EXPECT_TRUE(std::equal(rev.data().begin(), rev.data().end(), expected_rev.begin()));

  const Grid back = convert_layout(bfs, LayoutDescriptor::row_major());
  EXPECT_EQ(back.live_values(), v);
}

TEST(GridTest, PaddingIsZeroAfterConversion) {
  Grid g = testing::random_grid(LevelVector{3, 2}, 3);
  const Grid p = convert_layout(g, LayoutDescriptor::bfs1(true));
  ASSERT_EQ(p.buffer_size(), 8 * 3);
  for (index_t line = 0; line < 3; ++line) EXPECT_EQ(p.data()[static_cast<std::size_t>(line * 8 + 7)], 0.0);
  Grid poisoned = p;
  poisoned.fill_padding(1e100);
  const Grid cleaned = convert_layout(poisoned, LayoutDescriptor::bfs1(true));
  EXPECT_EQ(cleaned.data()[7], 0.0);
}

TEST(GridProperty, ConvertRoundTripAllLayoutPairs) {
  const std::vector<LayoutDescriptor> layouts = {
      LayoutDescriptor::row_major(), LayoutDescriptor::row_major_padded(), LayoutDescriptor::bfs1(),
      LayoutDescriptor::bfs1(true), LayoutDescriptor::rev_bfs1(), LayoutDescriptor::rev_bfs1(true)};
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const LevelVector lv = bench::random_levels(rng, 1 + static_cast<int>(rng() % 4), 4000);
    const Grid g = testing::random_grid(lv, rng());
    for (const auto& a : layouts) {
      const Grid ga = convert_layout(g, a);
      EXPECT_EQ(ga.live_values(), g.live_values());
      for (const auto& b : layouts) {
        const Grid back = convert_layout(convert_layout(ga, b), a);
        EXPECT_TRUE(std::equal(back.data().begin(), back.data().end(), ga.data().begin()))
            << a.name() << " -> " << b.name();
      }
    }
  }
}

TEST(GridTest, SampleUsesDyadicCoordinates) {
  Grid g(LevelVector{2, 1});
  g.sample([](std::span<const double> x) { return x[0] * 10 + x[1]; });
  EXPECT_EQ(g.live_values(), (std::vector<double>{3.0, 5.5, 8.0}));
}

}  // namespace
}  // namespace hiergrid
