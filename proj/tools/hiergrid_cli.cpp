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

// Command-line driver: bench, verify, roofline, scheme.

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hiergrid/hiergrid.hpp"

namespace {

using namespace hiergrid;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("not an integer list: " + s);
    }
  }
  if (out.empty()) throw ConfigError("empty level list");
  return out;
}

std::vector<KernelVariant> parse_variants(const std::string& s, int width, int unroll) {
  std::vector<KernelVariant> out;
  if (s == "all") {
    for (Variant v : kAllVariants) out.emplace_back(v, width, unroll);
    return out;
  }
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto v = parse_variant(part);
    if (!v) throw ConfigError("unknown variant '" + part + "'");
    out.emplace_back(*v, width, unroll);
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Options {
  int dims = 1;
  std::vector<std::string> levels;
  int levelsum_min = 10;
  int levelsum_max = 20;
  bool aniso = false;
  int aniso_fixed = 2;
  std::string variants = "all";
  int vector_width = 4;
  int unroll = 4;
  int reps = 5;
  int warmup = 1;
  std::uint64_t seed = 1;
  double freq_ghz = 2.7;
  double peak = 4.0;
  double bandwidth_gbps = 20.0;
  index_t mem_cap = index_t{1} << 30;
  std::string csv;
  std::string plot;
  // verify
  int random_grids = 0;
  int seeds = 1;
  double tolerance = 1e-10;
  // scheme
  int target_level = 4;
  std::string function = "product";
  int threads = 1;
};

void add_grid_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--dims", o.dims, "Grid dimension");
  cmd->add_option("--levels", o.levels, "Explicit level vector a,b,c (repeatable)");
  cmd->add_option("--levelsum-min", o.levelsum_min, "Smallest level sum of the sweep");
  cmd->add_option("--levelsum-max", o.levelsum_max, "Largest level sum of the sweep");
  cmd->add_flag("--aniso-first-axis", o.aniso, "Vary axis 1 only; other axes fixed");
  cmd->add_option("--aniso-fixed-level", o.aniso_fixed, "Level of the fixed axes (default 2 = 3 points)");
  cmd->add_option("--variants", o.variants, "Comma-separated variant names or 'all'");
  cmd->add_option("--vector-width", o.vector_width, "Doubles per vector step");
  cmd->add_option("--unroll", o.unroll, "Poles per unrolled step");
  cmd->add_option("--seed", o.seed, "RNG seed");
}

void add_ceiling_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--freq-ghz", o.freq_ghz, "Nominal clock for cycle derivation");
  cmd->add_option("--peak-flops-per-cycle", o.peak, "Scalar compute roof");
  cmd->add_option("--bandwidth-gbps", o.bandwidth_gbps, "Memory bandwidth roof in GB/s");
}

bench::BenchConfig make_config(const Options& o) {
  bench::BenchConfig cfg;
  cfg.dims = o.dims;
  if (!o.levels.empty()) {
    cfg.spec = bench::LevelSpec::Explicit;
    for (const auto& s : o.levels) {
      try {
        cfg.levels.emplace_back(parse_ints(s));
      } catch (const ParameterError& e) {
        throw ConfigError(e.what());
      } catch (const CapacityError& e) {
        throw ConfigError(e.what());
      }
    }
    if (o.dims == 1 && cfg.levels.front().dim() != 1) cfg.dims = cfg.levels.front().dim();
  } else {
    cfg.spec = o.aniso ? bench::LevelSpec::AnisoFirstAxis : bench::LevelSpec::Isotropic;
  }
  cfg.levelsum_min = o.levelsum_min;
  cfg.levelsum_max = o.levelsum_max;
  cfg.aniso_fixed_level = o.aniso_fixed;
  cfg.variants = parse_variants(o.variants, o.vector_width, o.unroll);
  cfg.reps = o.reps;
  cfg.warmup = o.warmup;
  cfg.seed = o.seed;
  cfg.freq_ghz = o.freq_ghz;
  cfg.peak_flops_per_cycle = o.peak;
  cfg.bandwidth_bytes_per_cycle = o.bandwidth_gbps / o.freq_ghz;
  cfg.mem_cap_bytes = o.mem_cap;
  cfg.validate();
  return cfg;
}

int run_bench(const Options& o) {
  const bench::BenchConfig cfg = make_config(o);
  const auto records = bench::run_sweep(cfg, [](const bench::BenchRecord& r) {
    std::cerr << r.variant << " " << r.levels.to_string() << ": "
              << (r.skipped() ? std::string("skipped (memory cap)")
                              : bench::format_g9(r.flops_per_cycle) + " flops/cycle")
              << "\n";
  });
  write_file(o.csv, bench::emit_csv(records, {{"aggregation", "median"},
                                              {"reps", std::to_string(cfg.reps)},
                                              {"warmup", std::to_string(cfg.warmup)},
                                              {"freq_ghz", bench::format_g9(cfg.freq_ghz)},
                                              {"seed", std::to_string(cfg.seed)}}));
  if (!o.plot.empty()) {
    const auto plot = bench::emit_roofline(records, {cfg.peak_flops_per_cycle, cfg.bandwidth_bytes_per_cycle});
    for (const auto& w : plot.warnings) std::cerr << "warning: " << w << "\n";
    write_file(o.plot, plot.svg);
  }
  return kExitOk;
}

int run_verify(const Options& o) {
  std::vector<LevelVector> grids;
  for (const auto& s : o.levels) grids.emplace_back(parse_ints(s));
  if (o.random_grids > 0) {
    std::mt19937_64 rng(o.seed);
    for (int k = 0; k < o.random_grids; ++k) grids.push_back(bench::random_levels(rng, o.dims, 5000));
  }
  if (grids.empty()) throw ConfigError("verify needs --levels or --random");
  const auto variants = parse_variants(o.variants, o.vector_width, o.unroll);
  const auto report = bench::verify_mode(grids, variants, o.seed, o.seeds, o.tolerance);
  double worst = 0.0;
  for (const auto& e : report.entries) {
    worst = std::max(worst, e.deviation);
    if (!e.passed)
      std::cout << "FAIL " << e.variant << " " << e.levels.to_string() << " seed " << e.seed
                << " deviation " << bench::format_g9(e.deviation) << "\n";
  }
  std::cout << (report.passed() ? "PASS" : "FAIL") << " " << report.entries.size()
            << " checks, max relative deviation " << bench::format_g9(worst) << " (tolerance "
            << bench::format_g9(report.tolerance) << ")\n";
  return report.passed() ? kExitOk : kExitVerifyFailed;
}

int run_roofline(const Options& o) {
  if (o.csv.empty()) throw ConfigError("roofline needs --csv input");
  const auto records = bench::read_csv(read_file(o.csv));
  const auto plot = bench::emit_roofline(records, {o.peak, o.bandwidth_gbps / o.freq_ghz});
  for (const auto& w : plot.warnings) std::cerr << "warning: " << w << "\n";
  write_file(o.plot, plot.svg);
  return kExitOk;
}

int run_scheme(const Options& o) {
  const auto scheme = enumerate_scheme(o.dims, o.target_level);
  const auto variants = parse_variants(o.variants == "all" ? "BfsOverVectorized" : o.variants, o.vector_width, o.unroll);
  Sampler f;
  if (o.function == "product") {
    f = [](std::span<const double> x) {
      double v = 1.0;
      for (double xi : x) v *= 4.0 * xi * (1.0 - xi);
      return v;
    };
  } else if (o.function == "constant") {
    f = [](std::span<const double>) { return 1.0; };
  } else if (o.function == "zero") {
    f = [](std::span<const double>) { return 0.0; };
  } else {
    throw ConfigError("unknown function '" + o.function + "' (product, constant, zero)");
  }
  const auto grids = hierarchize_scheme(scheme, f, variants.front(), o.threads);
  std::cout << "levels,coefficient,points,checksum\n";
  for (std::size_t k = 0; k < grids.size(); ++k)
    std::cout << scheme.members[k].levels.to_string() << ',' << scheme.members[k].coefficient << ','
              << num_points(scheme.members[k].levels) << ',' << bench::checksum(grids[k]) << '\n';
  std::cerr << scheme.members.size() << " grids, coefficient sum " << scheme.coefficient_sum() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchization of sparse grid combination grids"};
  app.require_subcommand(1);
  Options o;

  auto* bench_cmd = app.add_subcommand("bench", "Time kernel variants over a level sweep, write CSV");
  add_grid_options(bench_cmd, o);
  add_ceiling_options(bench_cmd, o);
  bench_cmd->add_option("--reps", o.reps, "Timed repetitions (median reported)");
  bench_cmd->add_option("--warmup", o.warmup, "Untimed warm-up runs");
  bench_cmd->add_option("--mem-cap-bytes", o.mem_cap, "Skip grids whose buffer exceeds this size");
  bench_cmd->add_option("--csv", o.csv, "CSV output path (default stdout)");
  bench_cmd->add_option("--plot", o.plot, "Roofline SVG output path");

  auto* verify_cmd = app.add_subcommand("verify", "Compare variants against the interpolation oracle");
  add_grid_options(verify_cmd, o);
  verify_cmd->add_option("--random", o.random_grids, "Number of random grids of dimension --dims");
  verify_cmd->add_option("--seeds", o.seeds, "Random fills per grid");
  verify_cmd->add_option("--tolerance", o.tolerance, "Maximum relative deviation");

  auto* roof_cmd = app.add_subcommand("roofline", "Render a roofline plot from bench CSV");
  add_ceiling_options(roof_cmd, o);
  roof_cmd->add_option("--csv", o.csv, "CSV input path")->required();
  roof_cmd->add_option("--plot", o.plot, "SVG output path (default stdout)");

  auto* scheme_cmd = app.add_subcommand("scheme", "Enumerate and hierarchize a combination scheme");
  scheme_cmd->add_option("--dims", o.dims, "Dimension");
  scheme_cmd->add_option("--level", o.target_level, "Target level n");
  scheme_cmd->add_option("--variants", o.variants, "Kernel variant");
  scheme_cmd->add_option("--function", o.function, "Sampled function: product, constant, zero");
  scheme_cmd->add_option("--threads", o.threads, "Grids hierarchized concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*bench_cmd) return run_bench(o);
    if (*verify_cmd) return run_verify(o);
    if (*roof_cmd) return run_roofline(o);
    if (*scheme_cmd) return run_scheme(o);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParameterError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CapacityError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const LayoutError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
