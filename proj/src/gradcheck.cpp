#include "tokenpacker/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "tokenpacker/io.h"
#include "tokenpacker/rng.h"

namespace tpk {

double GradcheckReport::worst() const {
  double w = 0.0;
  for (const auto& e : entries) w = std::max(w, e.max_rel_error);
  return w;
}

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

namespace {

double objective(const ProjectorConfig& cfg, const ProjectorWeights& w, const LevelFeatures& f,
                 const Tensor& upstream) {
  const Tensor out = forward(cfg, w, f);
  double acc = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) acc += upstream[i] * out[i];
  return acc;
}

}  // namespace

GradcheckReport run_gradcheck(const GradcheckOptions& opts) {
  ProjectorConfig cfg;
  cfg.channels = opts.channels;
  cfg.grid_h = opts.grid;
  cfg.grid_w = opts.grid;
  cfg.scale = opts.scale;
  cfg.levels = opts.levels;
  cfg.heads = opts.heads;
  cfg.out_dim = opts.channels;
  cfg.query_mode = opts.query_mode;
  cfg.validate();

  ProjectorWeights w = ProjectorWeights::init(cfg, Rng::derive(opts.seed, 100));
  // Nonzero biases so their gradients are checked away from a special point.
  Rng bias_rng(Rng::derive(opts.seed, 101));
  for (Tensor* b : {&w.mlp_b1, &w.mlp_b2, &w.b_out})
    for (auto& v : b->data()) v = bias_rng.uniform(-0.1, 0.1);

  LevelFeatures f = io::synth_features(Rng::derive(opts.seed, 102), cfg.grid_h, cfg.grid_w, cfg.channels,
                                       cfg.levels);
  Rng up_rng(Rng::derive(opts.seed, 103));
  Tensor upstream({cfg.num_tokens(), cfg.out_dim});
  for (auto& v : upstream.data()) v = up_rng.uniform(-1.0, 1.0);

  ProjectorGradients g = backward(cfg, w, f, upstream);
  if (opts.corrupt_backward) g.weights.w_o = scale(g.weights.w_o, 1.01);

  GradcheckReport report;
  report.tolerance = opts.tolerance;
  auto check = [&](const std::string& name, Tensor& param, const Tensor& analytic) {
    GradcheckEntry e;
    e.name = name;
    e.elements = param.size();
    for (std::size_t i = 0; i < param.size(); ++i) {
      const double saved = param[i];
      param[i] = saved + opts.eps;
      const double plus = objective(cfg, w, f, upstream);
      param[i] = saved - opts.eps;
      const double minus = objective(cfg, w, f, upstream);
      param[i] = saved;
      const double numeric = (plus - minus) / (2.0 * opts.eps);
      e.max_rel_error = std::max(e.max_rel_error, relative_error(analytic[i], numeric));
      e.max_abs_error = std::max(e.max_abs_error, std::abs(analytic[i] - numeric));
    }
    report.entries.push_back(e);
  };

  auto params = named_tensors(w);
  const auto grads = named_tensors(std::as_const(g.weights));
  for (std::size_t i = 0; i < params.size(); ++i) check(params[i].name, *params[i].tensor, *grads[i].tensor);
  for (std::size_t l = 0; l < cfg.levels; ++l) check("level_" + std::to_string(l), f.levels[l], g.levels[l]);
  if (cfg.query_mode == QueryMode::kInterpolated) check("query_source", f.query_source, g.query_source);
  return report;
}

}  // namespace tpk
