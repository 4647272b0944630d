// tpk: command-line front end for the TokenPacker engine.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 data/shape error.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "tokenpacker/baselines.h"
#include "tokenpacker/cost.h"
#include "tokenpacker/errors.h"
#include "tokenpacker/gradcheck.h"
#include "tokenpacker/io.h"
#include "tokenpacker/layout.h"
#include "tokenpacker/projector.h"
#include "tokenpacker/rng.h"
#include "tokenpacker/slicer.h"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

// Thrown for bad flag values discovered after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename F>
double time_ms(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---------------------------------------------------------------- plan-grid

struct PlanGridArgs {
  long long height = 0;
  long long width = 0;
  std::size_t cell = tpk::kDefaultCellSize;
  std::size_t max_grids = tpk::kDefaultMaxGrids;
  double beta = tpk::kDefaultBeta;
  bool all_scores = false;
  bool fixed_split = false;
};

tpk::ImageExtent checked_extent(long long h, long long w) {
  if (h <= 0 || w <= 0) {
    throw UsageError("--height and --width must be positive (got " + std::to_string(h) + "x" + std::to_string(w) +
                     ")");
  }
  return {static_cast<std::size_t>(h), static_cast<std::size_t>(w)};
}

int run_plan_grid(const PlanGridArgs& a) {
  const auto extent = checked_extent(a.height, a.width);
  if (a.cell == 0 || a.max_grids == 0 || a.beta < 0) {
    throw UsageError("--cell-size and --max-grids must be positive, --beta non-negative");
  }
  const auto plan = a.fixed_split ? tpk::baseline_fixed_split(extent, a.cell)
                                  : tpk::make_slice_plan(extent, a.cell, a.max_grids, a.beta);
  json out = tpk::io::plan_to_json(plan);
  if (a.all_scores) {
    json scores = json::array();
    for (const auto& g : tpk::enumerate_grids(a.max_grids)) {
      scores.push_back(tpk::io::score_to_json(g, tpk::score_grid(extent, a.cell, g, a.beta)));
    }
    out["scores"] = scores;
  }
  emit(out);
  return 0;
}

// ------------------------------------------------------------------ project

struct ProjectArgs {
  std::vector<std::string> features;
  std::string query_source;
  std::string weights;
  std::string config;
  std::string out;
};

// A config that fails validation is bad input data here, not a bad flag.
tpk::ProjectorConfig load_config_as_data(const std::string& path) {
  try {
    return tpk::io::load_config(path);
  } catch (const tpk::InvalidArgument& e) {
    throw tpk::FormatError(e.what());
  }
}

int run_project(const ProjectArgs& a) {
  const auto cfg = load_config_as_data(a.config);
  const auto weights = tpk::io::load_weights(a.weights, cfg);
  tpk::LevelFeatures f;
  for (const auto& path : a.features) f.levels.push_back(tpk::io::load_features(path));
  if (!a.query_source.empty()) {
    f.query_source = tpk::io::load_features(a.query_source);
  } else if (cfg.query_mode == tpk::QueryMode::kInterpolated) {
    throw UsageError("--query-source is required in interpolated query mode");
  }
  const tpk::Tensor tokens = tpk::forward(cfg, weights, f);
  tpk::io::save_features(a.out, tokens);
  emit({{"tokens", tokens.dim(0)}, {"dims", tokens.dim(1)}, {"out", a.out}});
  return 0;
}

// ------------------------------------------------------------- init helpers

struct InitWeightsArgs {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
};

int run_init_weights(const InitWeightsArgs& a) {
  const auto cfg = load_config_as_data(a.config);
  tpk::io::save_weights(a.out, tpk::ProjectorWeights::init(cfg, a.seed));
  emit({{"out", a.out}, {"config", tpk::io::config_to_json(cfg)}});
  return 0;
}

struct SynthArgs {
  std::uint64_t seed = 0;
  std::size_t grid_h = 24;
  std::size_t grid_w = 24;
  std::size_t channels = 16;
  std::size_t levels = 1;
  std::string out_dir = ".";
};

int run_synth(const SynthArgs& a) {
  const auto f = tpk::io::synth_features(a.seed, a.grid_h, a.grid_w, a.channels, a.levels);
  fs::create_directories(a.out_dir);
  json files = json::array();
  for (std::size_t l = 0; l < f.levels.size(); ++l) {
    const fs::path p = fs::path(a.out_dir) / ("level_" + std::to_string(l) + ".tpkf");
    tpk::io::save_features(p, f.levels[l]);
    files.push_back(p.string());
  }
  const fs::path q = fs::path(a.out_dir) / "query_source.tpkf";
  tpk::io::save_features(q, f.query_source);
  emit({{"levels", files}, {"query_source", q.string()}});
  return 0;
}

// ----------------------------------------------------------------- pipeline

struct PipelineArgs {
  long long height = 0;
  long long width = 0;
  std::size_t scale = 2;
  std::size_t max_grids = tpk::kDefaultMaxGrids;
  double beta = tpk::kDefaultBeta;
  std::size_t cell = tpk::kDefaultCellSize;
  std::size_t patch = 14;
  std::size_t channels = 32;
  std::size_t levels = 4;
  std::size_t out_dim = 64;
  std::uint64_t seed = 0;
  std::string out_prefix;
};

std::size_t thread_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) n = static_cast<std::size_t>(v);
  }
  return std::min(n, std::max<std::size_t>(jobs, 1));
}

int run_pipeline(const PipelineArgs& a) {
  const auto extent = checked_extent(a.height, a.width);
  if (a.patch == 0 || a.cell % a.patch != 0) throw UsageError("--cell-size must be a multiple of --patch-size");
  const auto plan = tpk::make_slice_plan(extent, a.cell, a.max_grids, a.beta);

  tpk::ProjectorConfig cfg;
  cfg.channels = a.channels;
  cfg.grid_h = cfg.grid_w = a.cell / a.patch;
  cfg.scale = a.scale;
  cfg.levels = a.levels;
  cfg.out_dim = a.out_dim;
  cfg.validate();
  const auto weights = tpk::ProjectorWeights::init(cfg, tpk::Rng::derive(a.seed, 0));

  // Block 0 is the overview, then patches row-major.
  const std::size_t blocks = 1 + plan.grid.cells();
  std::vector<tpk::Tensor> outputs(blocks);
  auto project_block = [&](std::size_t b) {
    const auto f =
        tpk::io::synth_features(tpk::Rng::derive(a.seed, b + 1), cfg.grid_h, cfg.grid_w, cfg.channels, cfg.levels);
    outputs[b] = tpk::forward(cfg, weights, f);
  };
  const std::size_t workers = thread_count(blocks);
  const double ms = time_ms([&] {
    if (workers <= 1) {
      for (std::size_t b = 0; b < blocks; ++b) project_block(b);
      return;
    }
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t b = t; b < blocks; b += workers) project_block(b);
      });
    }
    for (auto& th : pool) th.join();
  });

  tpk::PatchGrid grid(plan.grid.rows);
  for (std::size_t i = 0; i < plan.grid.rows; ++i)
    for (std::size_t j = 0; j < plan.grid.cols; ++j) grid[i].push_back(outputs[1 + i * plan.grid.cols + j]);
  const auto seq = tpk::assemble(outputs[0], grid);
  const auto counted = tpk::count_tokens(seq);
  const auto expected = tpk::token_count(plan.grid.rows, plan.grid.cols, cfg.num_tokens(), true);
  if (counted.visual != expected.visual || counted.separators() != expected.separators()) {
    std::cerr << "internal error: assembled sequence disagrees with the token-count formula\n";
    return kExitCheckFailed;
  }

  json out{{"grid", {{"rows", plan.grid.rows}, {"cols", plan.grid.cols}}},
           {"blocks", blocks},
           {"tokens_per_block", cfg.num_tokens()},
           {"dims", cfg.out_dim},
           {"visual", counted.visual},
           {"commas", counted.commas},
           {"newlines", counted.newlines},
           {"separators", counted.separators()},
           {"total", counted.total()},
           {"threads", workers},
           {"forward_ms", ms}};
  if (!a.out_prefix.empty()) {
    const std::string tokens = a.out_prefix + ".tpkf", manifest = a.out_prefix + ".json";
    tpk::io::save_sequence(tokens, manifest, seq);
    out["files"] = {{"tokens", tokens}, {"manifest", manifest}};
  }
  emit(out);
  return 0;
}

// ---------------------------------------------------------------- gradcheck

struct GradcheckArgs {
  tpk::GradcheckOptions opts;
  std::string query_mode = "interpolated";
};

int run_gradcheck(GradcheckArgs a) {
  a.opts.query_mode = tpk::query_mode_from_string(a.query_mode);
  if (!(a.opts.eps > 0)) throw UsageError("--eps must be positive");
  const auto report = tpk::run_gradcheck(a.opts);
  std::cout << "tensor\telements\tmax_rel_error\tmax_abs_error\n";
  for (const auto& e : report.entries) {
    std::ostringstream rel, abs;
    rel.precision(3);
    abs.precision(3);
    rel << std::scientific << e.max_rel_error;
    abs << std::scientific << e.max_abs_error;
    std::cout << e.name << '\t' << e.elements << '\t' << rel.str() << '\t' << abs.str() << '\n';
  }
  std::cout << (report.passed() ? "PASS" : "FAIL") << " worst=" << report.worst()
            << " tolerance=" << report.tolerance << " eps=" << a.opts.eps << '\n';
  return report.passed() ? 0 : kExitCheckFailed;
}

// -------------------------------------------------------------------- bench

struct BenchArgs {
  std::string scales = "2,3,4";
  std::size_t text_tokens = 128;
  std::string grid_plan = "none";
  std::size_t grid = 24;
  std::size_t channels = 64;
  std::size_t levels = 4;
  std::size_t out_dim = 128;
  std::size_t max_grids = tpk::kDefaultMaxGrids;
  std::size_t repeats = 3;
  std::uint64_t seed = 0;
  std::string format = "both";
};

std::vector<std::size_t> parse_scales(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const long v = std::stol(item);
      if (v < 2) throw UsageError("scales must be >= 2, got '" + item + "'");
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw UsageError("bad scale '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--scales is empty");
  return out;
}

int run_bench(const BenchArgs& a) {
  const auto scales = parse_scales(a.scales);
  std::size_t rows = 0, cols = 0;
  if (a.grid_plan != "none") {
    long long h = 0, w = 0;
    char x = 0;
    std::istringstream in(a.grid_plan);
    if (!(in >> h >> x >> w) || (x != 'x' && x != 'X')) throw UsageError("--grid-plan expects HxW or none");
    const auto plan = tpk::make_slice_plan(checked_extent(h, w), tpk::kDefaultCellSize, a.max_grids);
    rows = plan.grid.rows;
    cols = plan.grid.cols;
  }
  auto report = tpk::build_cost_report(a.grid, a.grid, scales, a.text_tokens, rows, cols);

  const auto f = tpk::io::synth_features(a.seed, a.grid, a.grid, a.channels, a.levels);
  for (auto& row : report.rows) {
    double best = 0.0;
    for (std::size_t r = 0; r < std::max<std::size_t>(a.repeats, 1); ++r) {
      double ms = 0.0;
      if (row.scale == 1) {
        tpk::ProjectorConfig cfg;
        cfg.channels = a.channels;
        cfg.grid_h = cfg.grid_w = a.grid;
        const auto mlp = tpk::TwoLayerMlp::init(a.channels, a.out_dim, a.seed);
        ms = time_ms([&] { (void)tpk::baseline_mlp(cfg, f.levels.back(), mlp); });
      } else {
        tpk::ProjectorConfig cfg;
        cfg.channels = a.channels;
        cfg.grid_h = cfg.grid_w = a.grid;
        cfg.scale = row.scale;
        cfg.levels = a.levels;
        cfg.out_dim = a.out_dim;
        const auto w = tpk::ProjectorWeights::init(cfg, a.seed);
        ms = time_ms([&] { (void)tpk::forward(cfg, w, f); });
      }
      best = r == 0 ? ms : std::min(best, ms);
    }
    row.forward_ms = best;
  }

  if (a.format == "tsv" || a.format == "both") std::cout << report.to_tsv();
  if (a.format == "json" || a.format == "both") emit(report.to_json());
  return 0;
}

// ------------------------------------------------------------------ compare

struct CompareArgs {
  std::string projector = "tokenpacker";
  std::size_t grid = 24;
  std::size_t scale = 2;
  std::size_t channels = 64;
  std::size_t levels = 4;
  std::size_t out_dim = 128;
  std::uint64_t seed = 0;
};

json norm_stats(const tpk::Tensor& t) {
  double sum_abs = 0.0, sum_sq = 0.0;
  for (double v : t.data()) {
    sum_abs += std::abs(v);
    sum_sq += v * v;
  }
  const double n = static_cast<double>(t.size());
  return {{"mean_abs", sum_abs / n}, {"rms", std::sqrt(sum_sq / n)}, {"max_abs", tpk::max_abs(t)}};
}

// Max |context(W_q = 0) - blockmean(levels) W_v| for the shared features.
double zero_query_degeneracy(const tpk::ProjectorConfig& cfg, tpk::ProjectorWeights w,
                             const tpk::LevelFeatures& f) {
  w.w_q = tpk::Tensor::zeros(w.w_q.shape());
  const auto tr = tpk::forward_traced(cfg, w, f);
  const tpk::Tensor pooled = tpk::block_mean(tpk::concat_channels(f.levels), cfg.scale);
  const tpk::Tensor mean = pooled.reshaped({cfg.num_tokens(), cfg.levels * cfg.channels});
  return tpk::max_abs_diff(tr.context, tpk::matmul(mean, w.w_v));
}

int run_compare(const CompareArgs& a) {
  tpk::ProjectorConfig cfg;
  cfg.channels = a.channels;
  cfg.grid_h = cfg.grid_w = a.grid;
  cfg.scale = a.scale;
  cfg.levels = a.levels;
  cfg.out_dim = a.out_dim;
  cfg.validate();
  const auto f = tpk::io::synth_features(a.seed, a.grid, a.grid, a.channels, a.levels);
  const auto weights = tpk::ProjectorWeights::init(cfg, a.seed);
  const auto mlp = tpk::TwoLayerMlp::init(a.channels, a.out_dim, a.seed);

  tpk::Tensor out;
  double ms = 0.0;
  json extra = json::object();
  if (a.projector == "tokenpacker") {
    ms = time_ms([&] { out = tpk::forward(cfg, weights, f); });
    extra["zero_wq_context_max_abs_diff"] = zero_query_degeneracy(cfg, weights, f);
  } else if (a.projector == "avgpool") {
    ms = time_ms([&] { out = tpk::baseline_avgpool(cfg, f.levels.back(), mlp); });
    extra["zero_wq_context_max_abs_diff"] = zero_query_degeneracy(cfg, weights, f);
  } else if (a.projector == "pixelshuffle") {
    ms = time_ms([&] { out = tpk::baseline_pixelshuffle(cfg, f.levels.back()); });
    extra["round_trip_exact"] = tpk::pixel_unshuffle(out, a.grid, a.grid, a.scale) == f.levels.back();
  } else if (a.projector == "mlp") {
    ms = time_ms([&] { out = tpk::baseline_mlp(cfg, f.levels.back(), mlp); });
  } else {
    throw UsageError("--projector must be tokenpacker|avgpool|pixelshuffle|mlp");
  }
  json j{{"projector", a.projector}, {"tokens", out.dim(0)},  {"dims", out.dim(1)},
         {"input_tokens", cfg.num_input_tokens()}, {"norm", norm_stats(out)}, {"forward_ms", ms}};
  j.update(extra);
  emit(j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TokenPacker engine: visual token compression, dynamic grid slicing, cost modelling"};
  app.require_subcommand(1);

  PlanGridArgs plan;
  auto* plan_cmd = app.add_subcommand("plan-grid", "Choose an aspect-preserving grid and print the slice plan");
  plan_cmd->add_option("--height", plan.height, "Image height in pixels")->required();
  plan_cmd->add_option("--width", plan.width, "Image width in pixels")->required();
  plan_cmd->add_option("--cell-size", plan.cell, "Grid cell size r")->capture_default_str();
  plan_cmd->add_option("--max-grids", plan.max_grids, "Maximum number of cells N_g")->capture_default_str();
  plan_cmd->add_option("--beta", plan.beta, "Overlap score weight")->capture_default_str();
  plan_cmd->add_flag("--all-scores", plan.all_scores, "Include every candidate's scores");
  plan_cmd->add_flag("--fixed-split", plan.fixed_split, "Use the 672x672 fixed 2x2 split instead");

  ProjectArgs project;
  auto* project_cmd = app.add_subcommand("project", "Run the projector on feature files");
  project_cmd->add_option("--features", project.features, "Level feature files (comma separated)")
      ->required()
      ->delimiter(',');
  project_cmd->add_option("--query-source", project.query_source, "Query-source feature file");
  project_cmd->add_option("--weights", project.weights, "Weight file")->required();
  project_cmd->add_option("--config", project.config, "Config JSON")->required();
  project_cmd->add_option("--out", project.out, "Output token file")->required();

  InitWeightsArgs init;
  auto* init_cmd = app.add_subcommand("init-weights", "Write seeded projector weights for a config");
  init_cmd->add_option("--config", init.config, "Config JSON")->required();
  init_cmd->add_option("--seed", init.seed)->capture_default_str();
  init_cmd->add_option("--out", init.out, "Output weight file")->required();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth-features", "Write seeded synthetic feature files");
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--grid-h", synth.grid_h)->capture_default_str();
  synth_cmd->add_option("--grid-w", synth.grid_w)->capture_default_str();
  synth_cmd->add_option("--channels", synth.channels)->capture_default_str();
  synth_cmd->add_option("--levels", synth.levels)->capture_default_str();
  synth_cmd->add_option("--out-dir", synth.out_dir)->capture_default_str();

  PipelineArgs pipe;
  auto* pipe_cmd = app.add_subcommand("pipeline", "Slice, project every block, assemble the token sequence");
  pipe_cmd->add_option("--height", pipe.height)->required();
  pipe_cmd->add_option("--width", pipe.width)->required();
  pipe_cmd->add_option("--scale", pipe.scale, "Downsampling ratio s")->required();
  pipe_cmd->add_option("--max-grids", pipe.max_grids)->capture_default_str();
  pipe_cmd->add_option("--beta", pipe.beta)->capture_default_str();
  pipe_cmd->add_option("--cell-size", pipe.cell)->capture_default_str();
  pipe_cmd->add_option("--patch-size", pipe.patch, "Encoder patch size")->capture_default_str();
  pipe_cmd->add_option("--channels", pipe.channels)->capture_default_str();
  pipe_cmd->add_option("--levels", pipe.levels)->capture_default_str();
  pipe_cmd->add_option("--out-dim", pipe.out_dim)->capture_default_str();
  pipe_cmd->add_option("--seed", pipe.seed)->capture_default_str();
  pipe_cmd->add_option("--out", pipe.out_prefix, "Write <prefix>.tpkf and <prefix>.json");

  GradcheckArgs grad;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Compare analytic gradients with central differences");
  grad_cmd->add_option("--grid", grad.opts.grid)->capture_default_str();
  grad_cmd->add_option("--channels", grad.opts.channels)->capture_default_str();
  grad_cmd->add_option("--scale", grad.opts.scale)->capture_default_str();
  grad_cmd->add_option("--levels", grad.opts.levels)->capture_default_str();
  grad_cmd->add_option("--heads", grad.opts.heads)->capture_default_str();
  grad_cmd->add_option("--eps", grad.opts.eps)->capture_default_str();
  grad_cmd->add_option("--tolerance", grad.opts.tolerance)->capture_default_str();
  grad_cmd->add_option("--seed", grad.opts.seed)->capture_default_str();
  grad_cmd->add_option("--query-mode", grad.query_mode, "interpolated|learnable")->capture_default_str();
  grad_cmd->add_flag("--corrupt-backward", grad.opts.corrupt_backward, "Harness self-test: skew one gradient");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Token counts, compression and quadratic cost per scale");
  bench_cmd->add_option("--scales", bench.scales)->capture_default_str();
  bench_cmd->add_option("--text-tokens", bench.text_tokens)->capture_default_str();
  bench_cmd->add_option("--grid-plan", bench.grid_plan, "HxW image to slice, or none")->capture_default_str();
  bench_cmd->add_option("--max-grids", bench.max_grids)->capture_default_str();
  bench_cmd->add_option("--grid", bench.grid, "Feature grid side")->capture_default_str();
  bench_cmd->add_option("--channels", bench.channels)->capture_default_str();
  bench_cmd->add_option("--levels", bench.levels)->capture_default_str();
  bench_cmd->add_option("--out-dim", bench.out_dim)->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats)->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
  bench_cmd->add_option("--format", bench.format)->check(CLI::IsMember({"tsv", "json", "both"}))->capture_default_str();

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Run one projector on shared synthetic features");
  cmp_cmd->add_option("--projector", cmp.projector)
      ->check(CLI::IsMember({"tokenpacker", "avgpool", "pixelshuffle", "mlp"}))
      ->capture_default_str();
  cmp_cmd->add_option("--grid", cmp.grid)->capture_default_str();
  cmp_cmd->add_option("--scale", cmp.scale)->capture_default_str();
  cmp_cmd->add_option("--channels", cmp.channels)->capture_default_str();
  cmp_cmd->add_option("--levels", cmp.levels)->capture_default_str();
  cmp_cmd->add_option("--out-dim", cmp.out_dim)->capture_default_str();
  cmp_cmd->add_option("--seed", cmp.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*plan_cmd) return run_plan_grid(plan);
    if (*project_cmd) return run_project(project);
    if (*init_cmd) return run_init_weights(init);
    if (*synth_cmd) return run_synth(synth);
    if (*pipe_cmd) return run_pipeline(pipe);
    if (*grad_cmd) return run_gradcheck(grad);
    if (*bench_cmd) return run_bench(bench);
    if (*cmp_cmd) return run_compare(cmp);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tpk::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tpk::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
