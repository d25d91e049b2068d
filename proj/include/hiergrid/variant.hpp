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

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "layout.hpp"

namespace hiergrid {

enum class Variant {
  Func,  // level-index vector navigation, the baseline
  Ind,   // offsets and strides on the row-major layout
  Bfs,
  BfsRev,
  BfsUnrolled,
  BfsVectorized,
  BfsOverVectorized,
  BfsOverVectorizedPreBranched,
  BfsOverVectorizedPreBranchedReducedOp,
};

inline constexpr std::array<Variant, 9> kAllVariants = {
    Variant::Func,
    Variant::Ind,
    Variant::Bfs,
    Variant::BfsRev,
    Variant::BfsUnrolled,
    Variant::BfsVectorized,
    Variant::BfsOverVectorized,
    Variant::BfsOverVectorizedPreBranched,
    Variant::BfsOverVectorizedPreBranchedReducedOp,
};

/// A kernel variant plus its blocking parameters. Both must be powers of two
/// no larger than 16.
struct KernelVariant {
  Variant tag = Variant::Ind;
  int vector_width = 4;
  int unroll = 4;

  KernelVariant() = default;
  KernelVariant(Variant t, int w = 4, int u = 4) : tag(t), vector_width(w), unroll(u) {}
};

inline std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::Func: return "Func";
    case Variant::Ind: return "Ind";
    case Variant::Bfs: return "Bfs";
    case Variant::BfsRev: return "BfsRev";
    case Variant::BfsUnrolled: return "BfsUnrolled";
    case Variant::BfsVectorized: return "BfsVectorized";
    case Variant::BfsOverVectorized: return "BfsOverVectorized";
    case Variant::BfsOverVectorizedPreBranched: return "BfsOverVectorizedPreBranched";
    case Variant::BfsOverVectorizedPreBranchedReducedOp:
      return "BfsOverVectorizedPreBranchedReducedOp";
  }
  return "?";
}

inline std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : kAllVariants)
    if (variant_name(v) == name) return v;
  return std::nullopt;
}

inline bool is_reduced(Variant v) { return v == Variant::BfsOverVectorizedPreBranchedReducedOp; }

/// Variants that read whole aligned blocks of an axis-0 line.
inline bool needs_padding(Variant v) {
  switch (v) {
    case Variant::BfsVectorized:
    case Variant::BfsOverVectorized:
    case Variant::BfsOverVectorizedPreBranched:
    case Variant::BfsOverVectorizedPreBranchedReducedOp: return true;
    default: return false;
  }
}

/// The layout the benchmark harness allocates for a variant.
inline LayoutDescriptor required_layout(Variant v) {
  switch (v) {
    case Variant::Func:
    case Variant::Ind: return LayoutDescriptor::row_major();
    case Variant::BfsRev: return LayoutDescriptor::rev_bfs1();
    default: return LayoutDescriptor::bfs1(needs_padding(v));
  }
}

inline bool accepts_layout(Variant v, const LayoutDescriptor& layout) {
  const LayoutDescriptor req = required_layout(v);
  if (layout.kind != req.kind) return false;
  return layout.padded || !req.padded;
}

}  // namespace hiergrid
