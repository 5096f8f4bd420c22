// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "commands.hpp"
#include "nmsparse/errors.hpp"

namespace nmsparse::cli {

namespace {

constexpr const char* kSeedEnv = "NM_SPARSE_SEED";

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

// Appends "--key=value" for every config entry the chosen subcommand knows
// and the command line does not already set. Keys that no subcommand knows
// are rejected so typos do not pass silently.
void inject_config(CLI::App& app, std::vector<std::string>& args) {
  const std::string path = config_path(args);
  if (path.empty()) return;
  CLI::App* sub = nullptr;
  for (const std::string& a : args) {
    if (CLI::App* candidate = app.get_subcommand_no_throw(a)) {
      sub = candidate;
      break;
    }
  }
  std::vector<std::pair<std::string, std::string>> entries;
  try {
    entries = read_config_file(path);
  } catch (const std::exception& e) {
    throw CLI::FileError(e.what());
  }
  for (const auto& [key, value] : entries) {
    const std::string flag = "--" + key;
    bool known = false;
    for (const CLI::App* s : app.get_subcommands({})) {
      known = known || s->get_option_no_throw(flag) != nullptr;
    }
    if (!known) throw CLI::ValidationError("config", "unknown key '" + key + "' in " + path);
    if (sub == nullptr || sub->get_option_no_throw(flag) == nullptr) continue;
    if (!has_flag(args, flag)) args.push_back(flag + "=" + value);
  }
}

template <typename T>
void add_seed(CLI::App* sub, T& seed) {
  sub->add_option("--seed", seed, "RNG seed")->envname(kSeedEnv)->capture_default_str();
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"N:M structured sparse attention: codec fuzzing, quality and cost models",
               "nmsparse"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config;
  app.add_option("--config", config, "key=value file of flag defaults; flags win");

  FuzzArgs fuzz;
  auto* fuzz_cmd = app.add_subcommand("roundtrip-fuzz", "Fuzz the codec, tile layout and container");
  fuzz_cmd->add_option("--mode", fuzz.mode, "1:2, 2:4 or both")
      ->check(CLI::IsMember({"1:2", "2:4", "both"}))
      ->capture_default_str();
  fuzz_cmd->add_option("--iters", fuzz.iters, "Random cases per mode")->capture_default_str();
  add_seed(fuzz_cmd, fuzz.seed);
  fuzz_cmd->add_option("--container", fuzz.container, "Validate an NMCS file instead")
      ->check(CLI::ExistingFile);

  QualitySweepOptions quality;
  std::string quality_out;
  auto* quality_cmd = app.add_subcommand("quality-sweep", "Theory vs empirical Q^p as CSV");
  quality_cmd->add_option("--p", quality.p, "Task exponent")->capture_default_str();
  quality_cmd->add_option("--sigma", quality.sigma, "Score standard deviation")->capture_default_str();
  quality_cmd->add_option("--densities", quality.densities, "Comma-separated densities")
      ->delimiter(',');
  quality_cmd->add_option("--n", quality.n, "Sequence length (multiple of 4)")->capture_default_str();
  quality_cmd->add_option("--samples", quality.samples, "Score matrices per point")
      ->capture_default_str();
  add_seed(quality_cmd, quality.seed);
  quality_cmd->add_option("--out", quality_out, "CSV path (default stdout)");

  SpeedupArgs speedup;
  auto* speedup_cmd = app.add_subcommand("speedup-table", "Cost-model speedups as CSV");
  speedup_cmd->add_option("--d", speedup.d, "Head dimension")->capture_default_str();
  speedup_cmd->add_option("--T", speedup.tile, "Tile size")->capture_default_str();
  speedup_cmd->add_option("--m", speedup.features, "Performer features (default round(d ln d))");
  speedup_cmd->add_option("--n-list", speedup.n_list, "Comma-separated sequence lengths")
      ->delimiter(',');
  speedup_cmd->add_option("--s-list", speedup.s_list, "Comma-separated densities")->delimiter(',');
  speedup_cmd->add_option("--out", speedup.out, "CSV path (default stdout)");

  AttnDemoArgs demo;
  auto* demo_cmd = app.add_subcommand("attn-demo", "Compare N:M attention with full attention");
  demo_cmd->add_option("--n", demo.n, "Sequence length")->capture_default_str();
  demo_cmd->add_option("--d", demo.d, "Head dimension")->capture_default_str();
  demo_cmd->add_option("--mode", demo.mode, "1:2 or 2:4")
      ->check(CLI::IsMember({"1:2", "2:4"}))
      ->capture_default_str();
  add_seed(demo_cmd, demo.seed);
  demo_cmd->add_option("--heads", demo.heads, "Independent heads")->capture_default_str();
  demo_cmd->add_option("--dump-heatmaps", demo.dump_heatmaps, "Directory for weight CSVs");

  TrafficArgs traffic;
  traffic.kind = "all";
  auto* traffic_cmd = app.add_subcommand("traffic", "Memory-access counts per stage as CSV");
  traffic_cmd->add_option("--kind", traffic.kind, "full, topk, fixed, nm or all")
      ->check(CLI::IsMember({"full", "topk", "fixed", "nm", "all"}))
      ->capture_default_str();
  traffic_cmd->add_option("--n", traffic.n, "Sequence length")->capture_default_str();
  traffic_cmd->add_option("--d", traffic.d, "Head dimension")->capture_default_str();
  traffic_cmd->add_option("--T", traffic.tile, "Tile size")->capture_default_str();
  traffic_cmd->add_option("--s", traffic.s, "Density for topk / fixed")->capture_default_str();
  traffic_cmd->add_option("--out", traffic.out, "CSV path (default stdout)");

  CompressArgs compress;
  auto* compress_cmd = app.add_subcommand("compress", "Write a random compressed NMCS container");
  compress_cmd->add_option("--rows", compress.rows)->capture_default_str();
  compress_cmd->add_option("--cols", compress.cols)->capture_default_str();
  compress_cmd->add_option("--mode", compress.mode)
      ->check(CLI::IsMember({"1:2", "2:4"}))
      ->capture_default_str();
  compress_cmd->add_option("--layout", compress.layout, "logical or tile")
      ->check(CLI::IsMember({"logical", "tile"}))
      ->capture_default_str();
  add_seed(compress_cmd, compress.seed);
  compress_cmd->add_option("--out", compress.out, "Container path")->required();

  std::vector<std::string> args = args_in;
  try {
    inject_config(app, args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fuzz_cmd->parsed()) return cmd_roundtrip_fuzz(fuzz, out, err);
    if (quality_cmd->parsed()) return cmd_quality_sweep(quality, quality_out, out, err);
    if (speedup_cmd->parsed()) return cmd_speedup_table(speedup, out, err);
    if (demo_cmd->parsed()) return cmd_attn_demo(demo, out, err);
    if (traffic_cmd->parsed()) return cmd_traffic(traffic, out, err);
    if (compress_cmd->parsed()) return cmd_compress(compress, out, err);
  } catch (const std::logic_error& e) {
    // ShapeError / DomainError: the requested parameters are invalid.
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace nmsparse::cli
