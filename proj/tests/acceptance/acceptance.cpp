// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "support/oracles.h"
#include "tokenpacker/baselines.h"
#include "tokenpacker/cost.h"
#include "tokenpacker/io.h"
#include "tokenpacker/layout.h"
#include "tokenpacker/projector.h"
#include "tokenpacker/rng.h"
#include "tokenpacker/slicer.h"

namespace {

using namespace tpk;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "FAILED: " << what << "; ";
    ok = ok && cond;
  }
};

struct Criterion {
  std::string id;
  std::string title;
  double time_limit_s;  // <= 0 means no runtime bound
  std::function<void(Outcome&)> body;
};

ProjectorConfig make_config(std::size_t grid, std::size_t c, std::size_t s, std::size_t levels,
                            std::size_t out_dim) {
  ProjectorConfig cfg;
  cfg.channels = c;
  cfg.grid_h = cfg.grid_w = grid;
  cfg.scale = s;
  cfg.levels = levels;
  cfg.out_dim = out_dim;
  return cfg;
}

void token_compression_law(Outcome& o) {
  const auto f = io::synth_features(0, 24, 24, 16, 2);
  const std::pair<std::size_t, std::size_t> expect[] = {{2, 144}, {3, 64}, {4, 36}};
  for (auto [s, tokens] : expect) {
    const auto cfg = make_config(24, 16, s, 2, 32);
    const Tensor out = forward(cfg, ProjectorWeights::init(cfg, s), f);
    o.require(out.dim(0) == tokens && out.dim(1) == 32, "s=" + std::to_string(s) + " token count");
    o.require(tokens * s * s == 576, "token law N/s^2");
    o.detail << "s=" << s << ":" << out.dim(0) << " (" << 100.0 * (1.0 - out.dim(0) / 576.0) << "% fewer) ";
  }
}

void grid_planner_oracle(Outcome& o) {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> ext(32, 4096);
  std::size_t mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t h = ext(gen), w = ext(gen), ng = (i % 2) ? 16 : 9;
    const auto got = select_grid({h, w}, 336, ng, 0.1);
    const auto want = oracle::exhaustive_select(h, w, 336, ng, 0.1L);
    if (got.grid.rows != want.rows || got.grid.cols != want.cols) {
      if (mismatches++ < 3) o.detail << "mismatch " << h << "x" << w << " Ng=" << ng << "; ";
    }
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  o.detail << "10000 extents, " << mismatches << " mismatches";
}

void named_geometry(Outcome& o) {
  constexpr double tol = 1e-12;
  auto c = select_grid({336, 336}, 336, 9, 0.1);
  o.require(c.grid == GridSpec{1, 1}, "336x336 -> (1,1)");
  c = select_grid({672, 336}, 336, 9, 0.1);
  o.require(c.grid == GridSpec{2, 1}, "672x336 -> (2,1)");
  o.require(std::abs(c.score.padding - 1.0) <= tol && std::abs(c.score.overlap - 1.0) <= tol,
            "672x336 S_p = S_o = 1");
  c = select_grid({1344, 1344}, 336, 16, 0.1);
  o.require(c.grid == GridSpec{4, 4}, "1344x1344 -> (4,4)");
  o.require(std::abs(c.score.total - 1.1) <= tol, "1344x1344 total 1.1");
  const auto p = padding_score({1000, 500}, 336, {3, 2});
  o.require(std::abs(p.padding - 0.75) <= tol, "1000x500 (3,2) S_p = 0.75");
  o.detail << "S_p(1000x500,(3,2))=" << p.padding << " total(1344,(4,4))=" << c.score.total;
}

double max_rel(const Tensor& a, const Tensor& n) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - n[i]) / std::max({std::abs(a[i]), std::abs(n[i]), 1e-6}));
  }
  return worst;
}

void gradient_correctness(Outcome& o) {
  auto cfg = make_config(4, 8, 2, 2, 8);
  cfg.heads = 1;
  auto w = ProjectorWeights::init(cfg, 77);
  std::mt19937_64 gen(78);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (Tensor* b : {&w.mlp_b1, &w.mlp_b2, &w.b_out})
    for (auto& v : b->data()) v = 0.1 * dist(gen);
  auto f = io::synth_features(79, 4, 4, 8, 2);
  Tensor upstream({cfg.num_tokens(), cfg.out_dim});
  for (auto& v : upstream.data()) v = dist(gen);

  const auto g = backward(cfg, w, f, upstream);
  auto loss = [&] {
    const Tensor out = forward(cfg, w, f);
    double acc = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) acc += out[i] * upstream[i];
    return acc;
  };
  double worst = 0.0;
  std::string worst_name;
  auto check = [&](const std::string& name, Tensor& param, const Tensor& analytic) {
    const double e = max_rel(analytic, oracle::finite_difference(param, loss, 1e-5));
    if (e >= worst) {
      worst = e;
      worst_name = name;
    }
  };
  auto params = named_tensors(w);
  const auto grads = named_tensors(std::as_const(g.weights));
  for (std::size_t i = 0; i < params.size(); ++i) check(params[i].name, *params[i].tensor, *grads[i].tensor);
  for (std::size_t l = 0; l < 2; ++l) check("level_" + std::to_string(l), f.levels[l], g.levels[l]);
  check("query_source", f.query_source, g.query_source);
  o.require(worst < 1e-4, "max relative error below 1e-4");
  o.detail << "worst " << worst << " (" << worst_name << "), 13 tensors";
}

void degeneracy_oracle(Outcome& o) {
  std::mt19937_64 gen(31);
  double worst_ctx = 0.0, worst_sum = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t s = 2 + trial % 3;
    auto cfg = make_config(s * (1 + trial % 4), 2 + trial % 7, s, 1 + trial % 4, 4);
    cfg.heads = (cfg.channels % 2 == 0 && trial % 2) ? 2 : 1;
    auto w = ProjectorWeights::init(cfg, gen());
    const auto f = io::synth_features(gen(), cfg.grid_h, cfg.grid_w, cfg.channels, cfg.levels);

    const auto tr = forward_traced(cfg, w, f);
    const std::size_t cells = s * s;
    for (std::size_t base = 0; base < tr.attention.size(); base += cells) {
      double total = 0.0;
      for (std::size_t j = 0; j < cells; ++j) total += tr.attention[base + j];
      worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    }

    w.w_q = Tensor::zeros(w.w_q.shape());
    const auto zero = forward_traced(cfg, w, f);
    const std::size_t lc = cfg.levels * cfg.channels;
    const Tensor mean = block_mean(concat_channels(f.levels), s).reshaped({cfg.num_tokens(), lc});
    worst_ctx = std::max(worst_ctx, max_abs_diff(zero.context, matmul(mean, w.w_v)));
  }
  o.require(worst_ctx <= 1e-12, "zero-W_q context equals projected region mean");
  o.require(worst_sum <= 1e-12, "attention rows sum to 1");
  o.detail << "100 configs, max |ctx - mean W_v| = " << worst_ctx << ", max |sum - 1| = " << worst_sum;
}

void locality(Outcome& o) {
  const auto cfg = make_config(8, 6, 2, 2, 5);
  const auto w = ProjectorWeights::init(cfg, 41);
  const auto f = io::synth_features(42, 8, 8, 6, 2);
  const Tensor base = forward(cfg, w, f);
  std::size_t leaks = 0, silent = 0, probes = 0;
  for (std::size_t y = 0; y < 8; ++y) {
    for (std::size_t x = 0; x < 8; ++x) {
      // One probe per tensor that feeds the projector.
      for (std::size_t which = 0; which <= cfg.levels; ++which) {
        LevelFeatures g = f;
        Tensor& target = which < cfg.levels ? g.levels[which] : g.query_source;
        target.at(y, x, (y + x) % 6) += 1.0;
        const Tensor out = forward(cfg, w, g);
        ++probes;
        const std::size_t owner = (y / 2) * 4 + x / 2;
        for (std::size_t m = 0; m < cfg.num_tokens(); ++m) {
          const auto a = out.row(m), b = base.row(m);
          const bool same = std::equal(a.begin(), a.end(), b.begin(), [](double p, double q) {
            return std::bit_cast<std::uint64_t>(p) == std::bit_cast<std::uint64_t>(q);
          });
          if (m != owner && !same) ++leaks;
          if (m == owner && same) ++silent;
        }
      }
    }
  }
  o.require(leaks == 0, "rows outside the perturbed region unchanged bitwise");
  o.detail << probes << " probes, " << leaks << " leaks, " << silent << " probes with no effect on own row";
}

void structure_round_trips(Outcome& o) {
  const auto f = io::synth_features(51, 24, 24, 8, 1);
  for (std::size_t s : {2, 3, 4}) {
    o.require(pixel_unshuffle(pixel_shuffle(f.levels[0], s), 24, 24, s) == f.levels[0],
              "pixel shuffle inverse s=" + std::to_string(s));
  }

  std::mt19937_64 gen(52);
  std::uniform_real_distribution<double> dist(-1, 1);
  auto block = [&] {
    Tensor t({4, 3});
    for (auto& v : t.data()) v = dist(gen);
    return t;
  };
  std::size_t shapes = 0;
  for (std::size_t r = 0; r <= 5; ++r) {
    for (std::size_t c = r ? 1 : 0; c <= (r ? 5u : 0u); ++c) {
      const Tensor ov = block();
      PatchGrid grid(r);
      for (auto& row : grid)
        for (std::size_t j = 0; j < c; ++j) row.push_back(block());
      const auto parsed = parse(assemble(ov, grid));
      bool same = parsed.overview == ov && parsed.patches.size() == r;
      for (std::size_t i = 0; same && i < r; ++i) {
        same = parsed.patches[i].size() == c;
        for (std::size_t j = 0; same && j < c; ++j) same = parsed.patches[i][j] == grid[i][j];
      }
      o.require(same, "layout round trip " + std::to_string(r) + "x" + std::to_string(c));
      ++shapes;
    }
  }

  const std::filesystem::path golden = TPK_GOLDEN_DIR;
  const auto feature_bytes = io::read_file(golden / "features_2x3.tpkf");
  o.require(io::encode_features(io::decode_features(feature_bytes)) == feature_bytes, "feature golden bytes");
  const auto cfg = io::load_config(golden / "tiny_config.json");
  const auto weight_bytes = io::read_file(golden / "weights_tiny.tpkw");
  o.require(io::encode_weights(io::decode_weights(weight_bytes, cfg)) == weight_bytes, "weight golden bytes");
  o.detail << "pixel shuffle s=2,3,4; " << shapes << " layout shapes; 2 golden fixtures";
}

void pipeline_token_budget(Outcome& o) {
  const auto plan = make_slice_plan({1344, 1344}, 336, 16, 0.1);
  o.require(plan.grid == GridSpec{4, 4}, "1344x1344 plans a 4x4 grid");
  const auto cfg = make_config(24, 8, 2, 2, 16);
  const auto w = ProjectorWeights::init(cfg, 61);
  const Tensor overview = forward(cfg, w, io::synth_features(Rng::derive(62, 0), 24, 24, 8, 2));
  PatchGrid grid(plan.grid.rows);
  for (std::size_t i = 0; i < plan.grid.rows; ++i)
    for (std::size_t j = 0; j < plan.grid.cols; ++j)
      grid[i].push_back(forward(cfg, w, io::synth_features(Rng::derive(62, 1 + i * 4 + j), 24, 24, 8, 2)));
  const auto got = count_tokens(assemble(overview, grid));
  const auto formula = token_count(4, 4, 144, true);
  o.require(got.visual == 2448 && formula.visual == 2448, "2448 visual tokens");
  o.require(got.commas == 12 && formula.commas == 12, "12 commas");
  o.require(got.newlines == 5 && formula.newlines == 5, "5 newlines");
  o.detail << "visual " << got.visual << ", commas " << got.commas << ", newlines " << got.newlines;
}

void cost_proxy(Outcome& o) {
  double prev = -1.0;
  bool increasing = true;
  for (std::size_t v = 0; v <= 20000; ++v) {
    const double c = quadratic_cost(v, 128);
    increasing = increasing && c > prev;
    prev = c;
  }
  o.require(increasing, "cost strictly increasing in visual tokens");
  const auto report = build_cost_report(24, 24, {2, 3, 4}, 128);
  const double ratio = report.rows[0].cost / report.rows[1].cost;
  o.require(report.rows[1].cost == 272.0 * 272.0 && report.rows[0].cost == 704.0 * 704.0,
            "(144+128)^2 and (576+128)^2");
  o.require(quadratic_cost(144, 128) < quadratic_cost(576, 128), "(144+128)^2 < (576+128)^2");
  o.require(ratio == 495616.0 / 73984.0, "cost ratio equals the closed form");
  o.detail << "MLP/TokenPacker(s=2) cost ratio " << ratio << ", relative cost " << report.rows[1].relative_cost;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "token compression law 144/64/36", 1.0, token_compression_law},
      {"AC2", "grid planner matches exhaustive oracle", 10.0, grid_planner_oracle},
      {"AC3", "named geometry cases", 0.0, named_geometry},
      {"AC4", "analytic gradients vs central differences", 30.0, gradient_correctness},
      {"AC5", "zero-query degeneracy and attention normalisation", 0.0, degeneracy_oracle},
      {"AC6", "locality under single-cell perturbation", 0.0, locality},
      {"AC7", "structure round trips", 0.0, structure_round_trips},
      {"AC8", "pipeline token budget 1344x1344", 0.0, pipeline_token_budget},
      {"AC9", "quadratic cost proxy", 0.0, cost_proxy},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0) o.require(secs < c.time_limit_s, "runtime limit " + std::to_string(c.time_limit_s) + " s");
    failures += !o.ok;
    std::printf("[%s] %s %s (%.3f s): %s\n", o.ok ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), secs,
                o.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
