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

// Benchmark harness: level sweeps per kernel variant, median-of-R timing,
// performance from the calculated flop count, CSV and roofline output.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "costmodel.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "oracle.hpp"

namespace hiergrid::bench {

enum class LevelSpec {
  Explicit,        // cfg.levels
  Isotropic,       // |l|_1 from levelsum_min to levelsum_max, spread evenly
  AnisoFirstAxis,  // (L, f, ..., f), L grows with the level sum
};

struct BenchConfig {
  int dims = 1;
  LevelSpec spec = LevelSpec::Isotropic;
  std::vector<LevelVector> levels;
  int levelsum_min = 10;
  int levelsum_max = 20;
  int aniso_fixed_level = 2;  // 2^2 - 1 = 3 points
  std::vector<KernelVariant> variants;
  int reps = 5;
  int warmup = 1;
  double freq_ghz = 2.7;
  double peak_flops_per_cycle = 4.0;
  double bandwidth_bytes_per_cycle = 8.0;
  int element_bytes = 8;
  std::uint64_t seed = 1;
  index_t mem_cap_bytes = index_t{1} << 30;

  void validate() const {
    if (dims < 1) throw ConfigError("--dims must be >= 1");
    if (reps < 1) throw ConfigError("--reps must be >= 1");
    if (warmup < 0) throw ConfigError("--warmup must be >= 0");
    if (!(freq_ghz > 0)) throw ConfigError("--freq-ghz must be > 0");
    if (!(peak_flops_per_cycle > 0)) throw ConfigError("peak flops/cycle must be > 0");
    if (!(bandwidth_bytes_per_cycle > 0)) throw ConfigError("bandwidth must be > 0");
    if (element_bytes != 8) throw ConfigError("only 8-byte elements are supported");
    if (mem_cap_bytes <= 0) throw ConfigError("--mem-cap-bytes must be > 0");
    if (variants.empty()) throw ConfigError("no variants selected");
    for (const auto& v : variants) {
      for (int p : {v.vector_width, v.unroll})
        if (p < 1 || p > 16 || !std::has_single_bit(static_cast<unsigned>(p)))
          throw ConfigError("vector width and unroll must be powers of two in [1, 16]");
    }
    if (spec == LevelSpec::Explicit) {
      if (levels.empty()) throw ConfigError("no level vectors given");
      for (const auto& l : levels)
        if (l.dim() != dims) throw ConfigError("level vector " + l.to_string() + " has wrong dimension");
    } else {
      if (levelsum_min > levelsum_max) throw ConfigError("--levelsum-min > --levelsum-max");
      if (spec == LevelSpec::Isotropic && levelsum_min < dims)
        throw ConfigError("level sum must be >= dimension");
      if (spec == LevelSpec::AnisoFirstAxis) {
        if (aniso_fixed_level < 1) throw ConfigError("fixed level must be >= 1");
        if (levelsum_min < 1 + (dims - 1) * aniso_fixed_level)
          throw ConfigError("level sum too small for the fixed axes");
      }
    }
  }

  /// Grids of the sweep, in sweep order.
  std::vector<LevelVector> grids() const {
    if (spec == LevelSpec::Explicit) return levels;
    std::vector<LevelVector> out;
    for (int s = levelsum_min; s <= levelsum_max; ++s) {
      std::vector<int> l(static_cast<std::size_t>(dims));
      if (spec == LevelSpec::Isotropic) {
        for (int a = 0; a < dims; ++a) l[static_cast<std::size_t>(a)] = s / dims + (a < s % dims ? 1 : 0);
      } else {
        std::fill(l.begin(), l.end(), aniso_fixed_level);
        l[0] = s - (dims - 1) * aniso_fixed_level;
      }
      out.emplace_back(std::move(l));
    }
    return out;
  }
};

struct BenchRecord {
  std::string variant;
  LevelVector levels;
  index_t points = 0;
  index_t bytes = 0;
  int reps = 0;
  std::optional<double> seconds;  // median; empty when skipped
  double cycles = 0.0;
  index_t flops_model = 0;
  double flops_per_cycle = 0.0;
  double gflops = 0.0;
  double intensity = 0.0;
  std::string checksum;

  bool skipped() const { return !seconds.has_value(); }
};

/// FNV-1a over the bit patterns of the live values in logical order.
inline std::string checksum(const Grid& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto data = g.data();
  g.for_each_point([&](std::span<const index_t>, index_t off) {
    auto bits = std::bit_cast<std::uint64_t>(data[static_cast<std::size_t>(off)]);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  });
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Uniform values in [-1, 1] assigned in logical order, so every layout gets
/// the same logical grid for the same seed.
inline void fill_random(Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto data = g.data();
  g.for_each_point([&](std::span<const index_t>, index_t off) { data[static_cast<std::size_t>(off)] = dist(rng); });
}

inline std::uint64_t grid_seed(std::uint64_t seed, const LevelVector& lv) {
  std::uint64_t h = seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL;
  for (int l : lv.levels()) h = (h ^ static_cast<std::uint64_t>(l)) * 0x100000001b3ULL;
  return h;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline void derive_performance(BenchRecord& r, double freq_ghz) {
  r.cycles = *r.seconds * freq_ghz * 1e9;
  r.flops_per_cycle = static_cast<double>(r.flops_model) / r.cycles;
  r.gflops = static_cast<double>(r.flops_model) / *r.seconds * 1e-9;
}

using Transform = std::function<void(Grid&, const KernelVariant&)>;

inline void default_transform(Grid& g, const KernelVariant& kv) { hierarchize(g, kv); }

/// Times every (grid, variant) pair. Grids whose buffer would exceed the
/// memory cap produce a skipped record.
inline std::vector<BenchRecord> run_sweep(const BenchConfig& cfg,
                                          const std::function<void(const BenchRecord&)>& on_record = {}) {
  cfg.validate();
  std::vector<BenchRecord> out;
  for (const LevelVector& lv : cfg.grids()) {
    const CostBreakdown cost = cost_breakdown(lv, cfg.element_bytes);
    for (const KernelVariant& kv : cfg.variants) {
      BenchRecord r;
      r.variant = std::string(variant_name(kv.tag));
      r.levels = lv;
      r.points = num_points(lv);
      const LayoutDescriptor layout = required_layout(kv.tag);
      r.bytes = detail::checked_mul(layout.buffer_size(lv), cfg.element_bytes);
      r.reps = cfg.reps;
      r.flops_model = cost.flops;
      r.intensity = cost.intensity;
      if (r.bytes > cfg.mem_cap_bytes) {
        out.push_back(r);
        if (on_record) on_record(out.back());
        continue;
      }

      Grid pristine(lv, layout);
      fill_random(pristine, grid_seed(cfg.seed, lv));
      Grid work = pristine;
      auto reset = [&] { std::copy(pristine.data().begin(), pristine.data().end(), work.data().begin()); };
      for (int w = 0; w < cfg.warmup; ++w) {
        reset();
        hierarchize(work, kv);
      }
      std::vector<double> times;
      for (int rep = 0; rep < cfg.reps; ++rep) {
        reset();
        const auto t0 = std::chrono::steady_clock::now();
        hierarchize(work, kv);
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::max(std::chrono::duration<double>(t1 - t0).count(), 1e-9));
      }
      r.seconds = median(times);
      derive_performance(r, cfg.freq_ghz);
      r.checksum = checksum(work);
      out.push_back(r);
      if (on_record) on_record(out.back());
    }
  }
  return out;
}

// ---- verification -----------------------------------------------------------

struct VerifyEntry {
  std::string variant;
  LevelVector levels;
  std::uint64_t seed = 0;
  double deviation = 0.0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<VerifyEntry> entries;
  double tolerance = 1e-10;

  bool passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
  }
};

/// Random level vector with at most `max_points` points.
inline LevelVector random_levels(std::mt19937_64& rng, int d, index_t max_points, int max_level = 12) {
  std::uniform_int_distribution<int> pick(1, max_level);
  for (;;) {
    std::vector<int> l(static_cast<std::size_t>(d));
    index_t n = 1;
    for (auto& x : l) {
      x = pick(rng);
      n *= (index_t{1} << x) - 1;
      if (n > max_points) break;
    }
    if (n <= max_points) return LevelVector(std::move(l));
  }
}

/// Runs each variant on each grid (seeded random data) and compares against
/// the oracle. A custom transform can stand in for the kernels.
inline VerifyReport verify_mode(const std::vector<LevelVector>& grids, const std::vector<KernelVariant>& variants,
                                std::uint64_t seed, int seeds_per_grid = 1, double tolerance = 1e-10,
                                index_t cap = oracle::kDefaultCap,
                                const Transform& transform = default_transform) {
  for (const auto& lv : grids)
    if (num_points(lv) > cap)
      throw ConfigError("grid " + lv.to_string() + " exceeds oracle cap of " + std::to_string(cap) + " points");
  if (variants.empty()) throw ConfigError("no variants selected");

  VerifyReport report;
  report.tolerance = tolerance;
  for (const auto& lv : grids) {
    for (int s = 0; s < seeds_per_grid; ++s) {
      const std::uint64_t gs = grid_seed(seed + static_cast<std::uint64_t>(s), lv);
      Grid nodal(lv);
      fill_random(nodal, gs);
      const std::vector<double> expected = oracle::hierarchize_oracle(nodal, cap).live_values();
      for (const auto& kv : variants) {
        Grid g = convert_layout(nodal, required_layout(kv.tag));
        transform(g, kv);
        VerifyEntry e{std::string(variant_name(kv.tag)), lv, gs, 0.0, false};
        e.deviation = oracle::max_relative_deviation(g.live_values(), expected);
        e.passed = e.deviation <= tolerance;
        report.entries.push_back(std::move(e));
      }
    }
  }
  return report;
}

// ---- CSV --------------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "variant,d,levels,points,bytes,reps,seconds_med,cycles,flops_model,flops_per_cycle,gflops,intensity,checksum";

inline std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// Header plus one row per record in input order. Metadata, when given, is
/// written first as "# key=value" lines.
inline std::string emit_csv(const std::vector<BenchRecord>& records,
                            const std::vector<std::pair<std::string, std::string>>& metadata = {}) {
  std::string s;
  for (const auto& [k, v] : metadata) s += "# " + k + "=" + v + "\n";
  s += kCsvHeader;
  s += '\n';
  for (const auto& r : records) {
    s += r.variant + ',' + std::to_string(r.levels.dim()) + ',' + r.levels.to_string() + ',' +
         std::to_string(r.points) + ',' + std::to_string(r.bytes) + ',' + std::to_string(r.reps) + ',';
    if (r.skipped()) {
      s += ",," + std::to_string(r.flops_model) + ",,," + format_g9(r.intensity) + ",\n";
      continue;
    }
    s += format_g9(*r.seconds) + ',' + format_g9(r.cycles) + ',' + std::to_string(r.flops_model) + ',' +
         format_g9(r.flops_per_cycle) + ',' + format_g9(r.gflops) + ',' + format_g9(r.intensity) + ',' +
         r.checksum + '\n';
  }
  return s;
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

/// Parses the output of emit_csv. Comment lines are ignored.
inline std::vector<BenchRecord> read_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::vector<BenchRecord> out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line != kCsvHeader) throw ParameterError("unexpected CSV header: " + line);
      header = true;
      continue;
    }
    const auto f = detail::split(line, ',');
    if (f.size() != 13) throw ParameterError("CSV row has " + std::to_string(f.size()) + " fields");
    BenchRecord r;
    r.variant = f[0];
    std::vector<int> lv;
    for (const auto& part : detail::split(f[2], 'x')) lv.push_back(std::stoi(part));
    r.levels = LevelVector(std::move(lv));
    r.points = std::stoll(f[3]);
    r.bytes = std::stoll(f[4]);
    r.reps = std::stoi(f[5]);
    if (!f[6].empty()) {
      r.seconds = std::stod(f[6]);
      r.cycles = std::stod(f[7]);
      r.flops_per_cycle = std::stod(f[9]);
      r.gflops = std::stod(f[10]);
    }
    r.flops_model = std::stoll(f[8]);
    r.intensity = std::stod(f[11]);
    r.checksum = f[12];
    out.push_back(std::move(r));
  }
  if (!header) throw ParameterError("CSV has no header");
  return out;
}

// ---- roofline ---------------------------------------------------------------

struct Ceilings {
  double peak_flops_per_cycle = 4.0;
  double bandwidth_bytes_per_cycle = 8.0;
};

struct RooflinePlot {
  std::string svg;
  std::vector<std::string> warnings;
  std::map<std::string, std::size_t> series;  // variant -> point count
};

/// Log-log roofline: x = flops/byte, y = flops/cycle. The compute roof is the
/// scalar peak for every variant.
inline RooflinePlot emit_roofline(const std::vector<BenchRecord>& records, const Ceilings& c) {
  std::vector<const BenchRecord*> pts;
  for (const auto& r : records)
    if (!r.skipped() && r.flops_per_cycle > 0 && r.intensity > 0) pts.push_back(&r);
  if (pts.empty()) throw ParameterError("roofline needs at least one timed record");
  if (!(c.peak_flops_per_cycle > 0) || !(c.bandwidth_bytes_per_cycle > 0))
    throw ParameterError("ceilings must be positive");

  RooflinePlot plot;
  const double ridge = c.peak_flops_per_cycle / c.bandwidth_bytes_per_cycle;
  double xmin = ridge, xmax = ridge, ymin = c.peak_flops_per_cycle, ymax = c.peak_flops_per_cycle;
  for (const auto* r : pts) {
    xmin = std::min(xmin, r->intensity);
    xmax = std::max(xmax, r->intensity);
    ymin = std::min(ymin, r->flops_per_cycle);
    ymax = std::max(ymax, r->flops_per_cycle);
    if (r->flops_per_cycle > c.bandwidth_bytes_per_cycle * r->intensity * (1 + 1e-12))
      plot.warnings.push_back(r->variant + " " + r->levels.to_string() + ": " + format_g9(r->flops_per_cycle) +
                              " flops/cycle exceeds the bandwidth roof at intensity " + format_g9(r->intensity));
    if (r->flops_per_cycle > c.peak_flops_per_cycle * (1 + 1e-12))
      plot.warnings.push_back(r->variant + " " + r->levels.to_string() + ": above scalar peak");
  }
  const double lx0 = std::floor(std::log10(xmin)) - 0.5, lx1 = std::ceil(std::log10(xmax)) + 0.5;
  const double ly0 = std::floor(std::log10(ymin)) - 0.5, ly1 = std::ceil(std::log10(ymax)) + 0.5;
  constexpr double W = 720, H = 480, ml = 70, mr = 230, mt = 30, mb = 60;
  auto px = [&](double x) { return ml + (std::log10(x) - lx0) / (lx1 - lx0) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (std::log10(y) - ly0) / (ly1 - ly0) * (H - mt - mb); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1)); ++e) {
    const double x = px(std::pow(10.0, e));
    o << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\"" << H - mb << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << x << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1)); ++e) {
    const double y = py(std::pow(10.0, e));
    o << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << W - mr << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << ml - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">operational intensity [flops/byte]</text>\n";
  o << "<text x=\"18\" y=\"" << (mt + H - mb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (mt + H - mb) / 2
    << ")\">performance [flops/cycle]</text>\n";

  // Roofs: bandwidth diagonal up to the ridge, scalar peak beyond it.
  const double xa = std::pow(10.0, lx0), xb = std::pow(10.0, lx1);
  o << "<polyline class=\"ceiling\" fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"" << px(xa) << ','
    << py(c.bandwidth_bytes_per_cycle * xa) << ' ' << px(ridge) << ',' << py(c.peak_flops_per_cycle) << ' ' << px(xb)
    << ',' << py(c.peak_flops_per_cycle) << "\"/>\n";
  o << "<text x=\"" << px(xb) - 4 << "\" y=\"" << py(c.peak_flops_per_cycle) - 6 << "\" text-anchor=\"end\">scalar peak "
    << format_g9(c.peak_flops_per_cycle) << " flops/cycle</text>\n";

  static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::vector<std::string> order;
  for (const auto* r : pts)
    if (std::find(order.begin(), order.end(), r->variant) == order.end()) order.push_back(r->variant);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const char* color = palette[k % 10];
    std::ostringstream poly;
    std::size_t count = 0;
    for (const auto* r : pts) {
      if (r->variant != order[k]) continue;
      poly << px(r->intensity) << ',' << py(r->flops_per_cycle) << ' ';
      o << "<circle cx=\"" << px(r->intensity) << "\" cy=\"" << py(r->flops_per_cycle) << "\" r=\"3\" fill=\"" << color
        << "\"/>\n";
      ++count;
    }
    o << "<polyline class=\"series\" data-variant=\"" << order[k] << "\" fill=\"none\" stroke=\"" << color
      << "\" points=\"" << poly.str() << "\"/>\n";
    o << "<text x=\"" << W - mr + 10 << "\" y=\"" << mt + 16 * (k + 1) << "\" fill=\"" << color << "\">" << order[k]
      << "</text>\n";
    plot.series[order[k]] = count;
  }
  o << "</svg>\n";
  plot.svg = o.str();
  return plot;
}

}  // namespace hiergrid::bench
