// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "csv.hpp"
#include "nmsparse/container.hpp"
#include "nmsparse/errors.hpp"
#include "nmsparse/gemm.hpp"
#include "nmsparse/pipeline.hpp"
#include "nmsparse/theory/cost_model.hpp"
#include "nmsparse/theory/performer.hpp"
#include "nmsparse/theory/quality.hpp"
#include "nmsparse/tile_layout.hpp"

namespace nmsparse::cli {

namespace {

bool bitwise_equal(const DenseMatrix& a, const DenseMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(double)) == 0;
}

SparsityMode require_mode(const std::string& text) {
  const auto mode = parse_sparsity_mode(text);
  if (!mode) throw DomainError(fmt::format("unknown sparsity mode '{}' (expected 1:2 or 2:4)", text));
  return *mode;
}

std::size_t tile_width(SparsityMode mode) { return kNibblesPerWord * group_width(mode); }

DenseMatrix slice(const DenseMatrix& m, std::size_t r0, std::size_t rows, std::size_t c0,
                  std::size_t cols) {
  DenseMatrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = m(r0 + r, c0 + c);
  }
  return out;
}

std::optional<std::string> guarded(const CaseCheck& check, const DenseMatrix& m,
                                   SparsityMode mode) {
  try {
    return check(m, mode);
  } catch (const std::exception& e) {
    return std::string("exception: ") + e.what();
  }
}

void print_matrix(std::ostream& out, const DenseMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out << (c == 0 ? "  " : " ") << format_number(m(r, c));
    }
    out << '\n';
  }
}

// Writes to `path`, or to `fallback` when path is empty.
template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  fn(file);
  if (!file) throw std::runtime_error("write to " + path + " failed");
}

int validate_container(const std::string& path, std::ostream& out) {
  const CompressedSparse c = read_container(path);
  std::ifstream file(path, std::ios::binary);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                        std::istreambuf_iterator<char>());
  if (serialize(c) != bytes) {
    out << "FAIL: re-serializing " << path << " does not reproduce the file\n";
    return kExitValidation;
  }
  if (c.layout() == MetadataLayout::TileInterleaved &&
      !(tile_layout_encode(tile_layout_decode(c)) == c)) {
    out << "FAIL: tile layout of " << path << " does not round-trip\n";
    return kExitValidation;
  }
  out << fmt::format("container ok: {}x{} {} {}, {} nonzeros\n", c.rows(), c.dense_cols(),
                     to_string(c.mode()),
                     c.layout() == MetadataLayout::Logical ? "logical" : "tile-interleaved",
                     c.nonzeros().size());
  return kExitOk;
}

}  // namespace

// -- roundtrip fuzzing --------------------------------------------------------

std::optional<std::string> check_codec_case(const DenseMatrix& m, SparsityMode mode) {
  const CompressedSparse logical = compress_logical(m, mode);
  const DenseMatrix oracle = prune_dense(m, mode).pruned;
  if (!bitwise_equal(decompress(logical), oracle)) {
    return "decompress(compress(M)) differs from the prune oracle";
  }
  const CompressedSparse tiled = tile_layout_encode(logical);
  if (!(tile_layout_decode(tiled) == logical)) return "tile decode(encode(C)) is not the identity";
  if (!bitwise_equal(decompress(tiled), oracle)) {
    return "decompress of the tile-interleaved form differs from the prune oracle";
  }
  if (!(deserialize(serialize(tiled)) == tiled)) return "container round trip changed the matrix";
  return std::nullopt;
}

DenseMatrix random_codec_matrix(Rng& rng, SparsityMode mode) {
  const std::size_t rows = kMetadataTileRows * (1 + rng.below(2));
  const std::size_t cols = tile_width(mode) * (1 + rng.below(3));
  const bool ties = rng.below(2) == 0;
  DenseMatrix m(rows, cols);
  for (double& x : m.data()) x = ties ? static_cast<double>(rng.below(5)) - 2.0 : rng.normal();
  return m;
}

DenseMatrix minimize_counterexample(const DenseMatrix& m, SparsityMode mode,
                                    const CaseCheck& check) {
  DenseMatrix best = m;
  const std::size_t band = kMetadataTileRows;
  const std::size_t width = tile_width(mode);
  if (best.rows() > band && best.rows() % band == 0) {
    for (std::size_t r0 = 0; r0 < best.rows(); r0 += band) {
      DenseMatrix candidate = slice(best, r0, band, 0, best.cols());
      if (guarded(check, candidate, mode)) {
        best = std::move(candidate);
        break;
      }
    }
  }
  if (best.cols() > width && best.cols() % width == 0) {
    for (std::size_t c0 = 0; c0 < best.cols(); c0 += width) {
      DenseMatrix candidate = slice(best, 0, best.rows(), c0, width);
      if (guarded(check, candidate, mode)) {
        best = std::move(candidate);
        break;
      }
    }
  }
  // Zero every entry that is not needed to reproduce the failure.
  for (double& x : best.data()) {
    if (x == 0.0) continue;
    const double saved = x;
    x = 0.0;
    if (!guarded(check, best, mode)) x = saved;
  }
  return best;
}

FuzzReport fuzz_codec(SparsityMode mode, std::size_t iters, std::uint64_t seed,
                      const CaseCheck& check) {
  FuzzReport report;
  Rng rng(seed);
  for (std::size_t i = 0; i < iters; ++i) {
    const DenseMatrix m = random_codec_matrix(rng, mode);
    ++report.cases;
    const auto failure = guarded(check, m, mode);
    if (!failure) {
      ++report.passed;
      continue;
    }
    if (!report.counterexample) {
      report.failure = fmt::format("case {}: {}", i, *failure);
      report.counterexample = minimize_counterexample(m, mode, check);
    }
  }
  return report;
}

int cmd_roundtrip_fuzz(const FuzzArgs& args, std::ostream& out, std::ostream& /*err*/) {
  if (!args.container.empty()) return validate_container(args.container, out);

  std::vector<SparsityMode> modes;
  if (args.mode == "both") {
    modes = {SparsityMode::OneOfTwo, SparsityMode::TwoOfFour};
  } else {
    modes = {require_mode(args.mode)};
  }
  if (args.iters == 0) {
    out << "0 cases\n";
    return kExitOk;
  }
  int status = kExitOk;
  for (const SparsityMode mode : modes) {
    const FuzzReport report = fuzz_codec(mode, args.iters, args.seed);
    out << fmt::format("{}/{} ok ({})\n", report.passed, report.cases, to_string(mode));
    if (report.counterexample) {
      status = kExitValidation;
      const DenseMatrix& m = *report.counterexample;
      out << fmt::format("FAIL {}\nminimized counterexample ({}x{}, {}):\n", report.failure,
                         m.rows(), m.cols(), to_string(mode));
      print_matrix(out, m);
    }
  }
  return status;
}

// -- quality sweep ------------------------------------------------------------

std::vector<QualityRow> quality_sweep(const QualitySweepOptions& o) {
  if (!(o.p > 0.0) || !(o.sigma > 0.0)) throw DomainError("quality-sweep: p and sigma must be > 0");
  if (o.n < 4 || o.n % 4 != 0) {
    throw ShapeError(fmt::format("quality-sweep: alignment error, n={} must be a positive multiple of 4", o.n));
  }
  if (o.samples == 0) throw DomainError("quality-sweep: samples must be >= 1");
  for (const double s : o.densities) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError(fmt::format("quality-sweep: density {} not in (0, 1]", s));
  }

  Rng rng(o.seed);
  std::vector<DenseMatrix> weights;
  weights.reserve(o.samples);
  for (std::size_t i = 0; i < o.samples; ++i) {
    weights.push_back(softmax_rows_dense(gaussian_matrix(rng, o.n, o.n, 0.0, o.sigma)));
  }

  const double ps = o.p * o.sigma;
  std::vector<QualityRow> rows;
  auto add = [&](std::string pattern, double s, double theory, auto&& mask_of) {
    double sum = 0.0;
    std::vector<double> values;
    for (const DenseMatrix& w : weights) {
      values.push_back(theory::empirical_quality(w, mask_of(w), o.p));
      sum += values.back();
    }
    const double mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    const double sd =
        values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
    rows.push_back({std::move(pattern), s, theory, mean, sd});
  };

  for (const double s : o.densities) {
    add("topk", s, s < 1.0 ? theory::quality_topk(s, ps) : 1.0,
        [&](const DenseMatrix& w) { return theory::topk_mask(w, s); });
    add("fixed", s, theory::quality_fixed(s),
        [&](const DenseMatrix& w) { return theory::fixed_mask(w.rows(), w.cols(), s); });
  }
  for (const SparsityMode mode : {SparsityMode::OneOfTwo, SparsityMode::TwoOfFour}) {
    add(std::string(to_string(mode)), 0.5, theory::quality_nm(ps, mode).value,
        [&](const DenseMatrix& w) { return prune_dense(w, mode).mask; });
  }
  return rows;
}

int cmd_quality_sweep(const QualitySweepOptions& options, const std::string& out_path,
                      std::ostream& out, std::ostream& err) {
  const auto rows = quality_sweep(options);
  with_output(out_path, out, [&](std::ostream& csv) {
    write_csv_row(csv, {"pattern", "s", "theory", "empirical_mean", "empirical_std"});
    for (const QualityRow& r : rows) {
      write_csv_row(csv, {r.pattern, format_number(r.density), format_number(r.theory),
                          format_number(r.empirical_mean), format_number(r.empirical_std)});
    }
  });
  err << fmt::format("quality-sweep: {} rows, n={}, samples={}, p={}, sigma={}\n", rows.size(),
                     options.n, options.samples, options.p, options.sigma);
  return kExitOk;
}

// -- speedup table ------------------------------------------------------------

int cmd_speedup_table(const SpeedupArgs& args, std::ostream& out, std::ostream& err) {
  if (!(args.d > 0.0) || !(args.tile > 0.0)) throw DomainError("speedup-table: d and T must be > 0");
  if (args.n_list.empty()) throw DomainError("speedup-table: --n-list is empty");
  for (const double s : args.s_list) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError(fmt::format("speedup-table: density {} not in (0, 1]", s));
  }
  const double m = args.features > 0.0 ? args.features : theory::performer_default_features(args.d);

  std::vector<std::string> header{"n", "nm", "nm_asymptotic", "performer", "performer_gt_dense",
                                  "performer_ge_nm"};
  for (const double s : args.s_list) {
    const std::string tag = format_number(s);
    header.push_back("topk_bound_s" + tag);
    header.push_back("topk_s" + tag);
    header.push_back("fixed_s" + tag);
  }

  with_output(args.out, out, [&](std::ostream& csv) {
    write_csv_row(csv, header);
    for (const double n : args.n_list) {
      if (!(n > 0.0)) throw DomainError(fmt::format("speedup-table: n={} must be > 0", n));
      const theory::CostModelParams base{.n = n, .d = args.d, .tile = args.tile, .features = m};
      const auto nm = theory::speedup_nm(base);
      const double performer = theory::performer_speedup(base);
      std::vector<std::string> row{format_number(n),         format_number(nm.finite),
                                   format_number(nm.asymptotic), format_number(performer),
                                   performer > 1.0 ? "1" : "0", performer >= nm.finite ? "1" : "0"};
      for (const double s : args.s_list) {
        theory::CostModelParams p = base;
        p.density = s;
        row.push_back(format_number(theory::speedup_topk_bound(p)));
        row.push_back(format_number(theory::speedup_topk_finite(p)));
        row.push_back(format_number(theory::speedup_fixed(p).finite));
      }
      write_csv_row(csv, row);
    }
  });

  if (args.d == std::floor(args.d) && args.tile == std::floor(args.tile)) {
    const auto ratio = theory::speedup_nm_ratio(static_cast<std::int64_t>(args.d),
                                                static_cast<std::int64_t>(args.tile));
    err << fmt::format("nm speedup: {}/{} = {}\n", ratio.num, ratio.den, format_number(ratio.value()));
  }
  err << fmt::format("top-k break-even density: {}\n",
                     format_number(theory::topk_breakeven_density(args.d, args.tile)));
  err << fmt::format("top-k equal-efficiency density: {}\n",
                     format_number(theory::topk_equal_efficiency_density(args.d, args.tile)));
  err << fmt::format("fixed equal-efficiency density: {}\n",
                     format_number(theory::fixed_equal_efficiency_density(args.d, args.tile)));
  err << fmt::format("performer (m={}) beats dense from n={}, matches nm from n={}\n",
                     format_number(m), theory::performer_breakeven_length(args.d, args.tile, m),
                     theory::performer_nm_crossover_length(args.d, args.tile, m));
  return kExitOk;
}

// -- attention demo -----------------------------------------------------------

int cmd_attn_demo(const AttnDemoArgs& args, std::ostream& out, std::ostream& /*err*/) {
  const SparsityMode mode = require_mode(args.mode);
  if (args.n == 0 || args.d == 0) throw ShapeError("attn-demo: n and d must be >= 1");
  if (args.n % group_width(mode) != 0) {
    throw ShapeError(fmt::format("attn-demo: alignment error, n={} is not a multiple of the {} group width {}",
                                 args.n, to_string(mode), group_width(mode)));
  }
  if (args.heads == 0) throw DomainError("attn-demo: heads must be >= 1");
  if (!args.dump_heatmaps.empty()) std::filesystem::create_directories(args.dump_heatmaps);

  Rng rng(args.seed);
  bool all_pass = true;
  for (std::size_t h = 0; h < args.heads; ++h) {
    AttentionInputs in;
    in.q = gaussian_matrix(rng, args.n, args.d);
    in.k = gaussian_matrix(rng, args.n, args.d);
    in.v = gaussian_matrix(rng, args.n, args.d);

    const ApproxError e = approx_error(full_attention(in), dfss_attention(in, mode));
    const AttentionHeatmap heat = attention_heatmap(in, mode);

    bool stochastic = true;
    bool dominates = true;
    for (std::size_t r = 0; r < args.n; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < args.n; ++c) {
        const double s = heat.sparse(r, c);
        sum += s;
        if (s != 0.0 && s < heat.dense(r, c)) dominates = false;
      }
      if (std::abs(sum - 1.0) > 1e-12) stochastic = false;
    }
    all_pass = all_pass && stochastic && dominates;
    out << fmt::format("head {}: n={} d={} mode={} rel_l2={:.12e} max_abs={:.6e} row_stochastic={} "
                       "domination={}\n",
                       h, args.n, args.d, to_string(mode), e.rel_l2, e.max_abs,
                       stochastic ? "pass" : "FAIL", dominates ? "pass" : "FAIL");

    if (!args.dump_heatmaps.empty()) {
      const std::filesystem::path dir(args.dump_heatmaps);
      with_output((dir / fmt::format("head{}_dense.csv", h)).string(), out,
                  [&](std::ostream& csv) { write_matrix_csv(csv, heat.dense); });
      with_output((dir / fmt::format("head{}_sparse.csv", h)).string(), out,
                  [&](std::ostream& csv) { write_matrix_csv(csv, heat.sparse); });
    }
  }
  return all_pass ? kExitOk : kExitValidation;
}

// -- traffic ------------------------------------------------------------------

int cmd_traffic(const TrafficArgs& args, std::ostream& out, std::ostream& /*err*/) {
  static const std::vector<std::pair<std::string, theory::AttentionKind>> kinds{
      {"full", theory::AttentionKind::Full},
      {"topk", theory::AttentionKind::TopK},
      {"fixed", theory::AttentionKind::Fixed},
      {"nm", theory::AttentionKind::NmSparse}};
  const theory::CostModelParams params{.n = args.n, .d = args.d, .tile = args.tile, .density = args.s};

  std::vector<std::pair<std::string, theory::AttentionKind>> selected;
  for (const auto& entry : kinds) {
    if (args.kind == "all" || args.kind == entry.first) selected.push_back(entry);
  }
  if (selected.empty()) {
    throw DomainError(fmt::format("traffic: unknown kind '{}' (full, topk, fixed, nm, all)", args.kind));
  }
  with_output(args.out, out, [&](std::ostream& csv) {
    write_csv_row(csv, {"kind", "qk", "softmax", "av", "total"});
    for (const auto& [name, kind] : selected) {
      const theory::MemoryAccess m = theory::memory_access_counts(kind, params);
      write_csv_row(csv, {name, format_number(m.qk), format_number(m.softmax), format_number(m.av),
                          format_number(m.total())});
    }
  });
  return kExitOk;
}

// -- compress -----------------------------------------------------------------

int cmd_compress(const CompressArgs& args, std::ostream& out, std::ostream& /*err*/) {
  const SparsityMode mode = require_mode(args.mode);
  if (args.layout != "logical" && args.layout != "tile") {
    throw DomainError(fmt::format("compress: unknown layout '{}' (logical, tile)", args.layout));
  }
  Rng rng(args.seed);
  CompressedSparse c = compress_logical(gaussian_matrix(rng, args.rows, args.cols), mode);
  if (args.layout == "tile") c = tile_layout_encode(c);
  const auto bytes = serialize(c);
  write_container(args.out, c);
  out << fmt::format("wrote {} bytes ({} payload bits at 32-bit values) to {}\n", bytes.size(),
                     container_payload_bits(bytes, 32), args.out);
  return kExitOk;
}

}  // namespace nmsparse::cli
