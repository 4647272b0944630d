#include "tokenpacker/projector.h"

#include <cmath>

#include "tokenpacker/errors.h"
#include "tokenpacker/rng.h"

namespace tpk {

std::string to_string(QueryMode mode) {
  return mode == QueryMode::kLearnable ? "learnable" : "interpolated";
}

QueryMode query_mode_from_string(const std::string& name) {
  if (name == "interpolated") return QueryMode::kInterpolated;
  if (name == "learnable") return QueryMode::kLearnable;
  throw InvalidArgument("unknown query_mode '" + name + "' (expected interpolated|learnable)");
}

void ProjectorConfig::validate() const {
  if (channels == 0) throw InvalidArgument("config: channels must be positive");
  if (out_dim == 0) throw InvalidArgument("config: out_dim must be positive");
  if (grid_h == 0 || grid_w == 0) throw InvalidArgument("config: grid extent must be positive");
  if (levels == 0) throw InvalidArgument("config: levels must be >= 1");
  if (heads == 0) throw InvalidArgument("config: heads must be >= 1");
  if (mlp_ratio == 0) throw InvalidArgument("config: mlp_ratio must be >= 1");
  if (scale < 2) throw InvalidArgument("config: scale must be >= 2");
  if (attn_dim() % heads != 0) {
    throw InvalidArgument("config: inner_dim " + std::to_string(attn_dim()) + " not divisible by heads " +
                          std::to_string(heads));
  }
  if (grid_h % scale != 0 || grid_w % scale != 0) {
    throw IndivisibleGridError("config: scale " + std::to_string(scale) + " does not divide grid " +
                               std::to_string(grid_h) + "x" + std::to_string(grid_w));
  }
}

Shape expected_shape(const ProjectorConfig& cfg, const std::string& section) {
  const std::size_t c = cfg.channels, d = cfg.attn_dim(), lc = cfg.levels * cfg.channels;
  if (section == "w_q") return {c, d};
  if (section == "w_k" || section == "w_v") return {lc, d};
  if (section == "w_o") return {d, c};
  if (section == "mlp_w1") return {c, cfg.hidden_dim()};
  if (section == "mlp_b1") return {cfg.hidden_dim()};
  if (section == "mlp_w2") return {cfg.hidden_dim(), c};
  if (section == "mlp_b2") return {c};
  if (section == "w_out") return {c, cfg.out_dim};
  if (section == "b_out") return {cfg.out_dim};
  if (section == "learnable_query") return {cfg.num_tokens(), c};
  throw InvalidArgument("unknown weight section '" + section + "'");
}

std::vector<NamedTensorRef> named_tensors(ProjectorWeights& w) {
  std::vector<NamedTensorRef> out = {
      {"w_q", &w.w_q},       {"w_k", &w.w_k},       {"w_v", &w.w_v},       {"w_o", &w.w_o},
      {"mlp_w1", &w.mlp_w1}, {"mlp_b1", &w.mlp_b1}, {"mlp_w2", &w.mlp_w2}, {"mlp_b2", &w.mlp_b2},
      {"w_out", &w.w_out},   {"b_out", &w.b_out},
  };
  if (w.learnable_query) out.push_back({"learnable_query", &*w.learnable_query});
  return out;
}

std::vector<NamedTensorView> named_tensors(const ProjectorWeights& w) {
  std::vector<NamedTensorView> out;
  for (const auto& [name, tensor] : named_tensors(const_cast<ProjectorWeights&>(w))) {
    out.push_back({name, tensor});
  }
  return out;
}

ProjectorWeights ProjectorWeights::init(const ProjectorConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  const std::size_t c = cfg.channels, d = cfg.attn_dim(), lc = cfg.levels * c, hid = cfg.hidden_dim();
  ProjectorWeights w;
  w.w_q = init_uniform(rng, {c, d}, c, d);
  w.w_k = init_uniform(rng, {lc, d}, lc, d);
  w.w_v = init_uniform(rng, {lc, d}, lc, d);
  w.w_o = init_uniform(rng, {d, c}, d, c);
  w.mlp_w1 = init_uniform(rng, {c, hid}, c, hid);
  w.mlp_b1 = Tensor::zeros({hid});
  w.mlp_w2 = init_uniform(rng, {hid, c}, hid, c);
  w.mlp_b2 = Tensor::zeros({c});
  w.w_out = init_uniform(rng, {c, cfg.out_dim}, c, cfg.out_dim);
  w.b_out = Tensor::zeros({cfg.out_dim});
  if (cfg.query_mode == QueryMode::kLearnable) {
    w.learnable_query = init_uniform(rng, {cfg.num_tokens(), c}, c, c);
  }
  return w;
}

void ProjectorWeights::validate(const ProjectorConfig& cfg) const {
  for (const auto& [name, tensor] : named_tensors(*this)) {
    const Shape want = expected_shape(cfg, name);
    if (tensor->shape() != want) {
      throw ShapeMismatchError(name, "weight section '" + name + "' has shape " +
                                         shape_to_string(tensor->shape()) + ", config requires " +
                                         shape_to_string(want));
    }
    if (!tensor->all_finite()) throw InvalidArgument("weight section '" + name + "' has non-finite entries");
  }
  if (cfg.query_mode == QueryMode::kLearnable && !learnable_query) {
    throw MissingSectionError("learnable_query");
  }
}

void LevelFeatures::validate(const ProjectorConfig& cfg) const {
  if (levels.size() != cfg.levels) {
    throw DimensionError("expected " + std::to_string(cfg.levels) + " feature levels, got " +
                         std::to_string(levels.size()));
  }
  const Shape want = {cfg.grid_h, cfg.grid_w, cfg.channels};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].shape() != want) {
      throw DimensionError("feature level " + std::to_string(i) + " has shape " +
                           shape_to_string(levels[i].shape()) + ", expected " + shape_to_string(want));
    }
  }
  if (cfg.query_mode == QueryMode::kInterpolated && query_source.shape() != want) {
    throw DimensionError("query source has shape " + shape_to_string(query_source.shape()) + ", expected " +
                         shape_to_string(want));
  }
}

Tensor build_point_region_pairs(const Tensor& high, std::size_t s) {
  if (high.rank() != 3) throw DimensionError("point-region pairs need an h x w x C grid");
  const std::size_t h = high.dim(0), w = high.dim(1), c = high.dim(2);
  if (s == 0 || h % s != 0 || w % s != 0) {
    throw IndivisibleGridError("scale " + std::to_string(s) + " does not divide grid " +
                               shape_to_string(high.shape()));
  }
  const std::size_t lh = h / s, lw = w / s;
  Tensor out({lh * lw, s * s, c});
  for (std::size_t i = 0; i < lh; ++i)
    for (std::size_t j = 0; j < lw; ++j)
      for (std::size_t di = 0; di < s; ++di)
        for (std::size_t dj = 0; dj < s; ++dj)
          for (std::size_t k = 0; k < c; ++k)
            out.at(i * lw + j, di * s + dj, k) = high.at(i * s + di, j * s + dj, k);
  return out;
}

Tensor scatter_point_region_pairs(const Tensor& regions, std::size_t grid_h, std::size_t grid_w,
                                  std::size_t s) {
  if (regions.rank() != 3 || s == 0 || grid_h % s != 0 || grid_w % s != 0 ||
      regions.dim(0) != (grid_h / s) * (grid_w / s) || regions.dim(1) != s * s) {
    throw DimensionError("regions " + shape_to_string(regions.shape()) + " inconsistent with grid " +
                         std::to_string(grid_h) + "x" + std::to_string(grid_w) + " at scale " +
                         std::to_string(s));
  }
  const std::size_t lw = grid_w / s, c = regions.dim(2);
  Tensor out({grid_h, grid_w, c});
  for (std::size_t m = 0; m < regions.dim(0); ++m)
    for (std::size_t cell = 0; cell < s * s; ++cell)
      for (std::size_t k = 0; k < c; ++k)
        out.at((m / lw) * s + cell / s, (m % lw) * s + cell % s, k) = regions.at(m, cell, k);
  return out;
}

Tensor make_query(const ProjectorConfig& cfg, const ProjectorWeights& w, const LevelFeatures& features) {
  if (cfg.query_mode == QueryMode::kLearnable) {
    if (!w.learnable_query) throw MissingSectionError("learnable_query");
    return *w.learnable_query;
  }
  const Tensor low = bilinear_downsample(features.query_source, cfg.scale);
  return low.reshaped({cfg.num_tokens(), cfg.channels});
}

Tensor make_regions(const ProjectorConfig& cfg, const LevelFeatures& features) {
  return build_point_region_pairs(concat_channels(features.levels), cfg.scale);
}

InjectTrace inject_traced(const ProjectorConfig& cfg, const ProjectorWeights& w, const Tensor& query,
                          const Tensor& regions) {
  const std::size_t m_tokens = cfg.num_tokens(), cells = cfg.region_size();
  const std::size_t lc = cfg.levels * cfg.channels, d = cfg.attn_dim();
  const std::size_t heads = cfg.heads, dh = cfg.head_dim();
  if (query.shape() != Shape{m_tokens, cfg.channels}) {
    throw DimensionError("inject: query shape " + shape_to_string(query.shape()) + ", expected " +
                         shape_to_string({m_tokens, cfg.channels}));
  }
  if (regions.shape() != Shape{m_tokens, cells, lc}) {
    throw DimensionError("inject: regions shape " + shape_to_string(regions.shape()) + ", expected " +
                         shape_to_string({m_tokens, cells, lc}));
  }
  if (!query.all_finite() || !regions.all_finite()) {
    throw InvalidArgument("inject: non-finite values in query or regions");
  }

  InjectTrace tr;
  tr.query = query;
  tr.regions = regions;
  const Tensor flat = regions.reshaped({m_tokens * cells, lc});
  tr.q = matmul(query, w.w_q);
  tr.k = matmul(flat, w.w_k);
  tr.v = matmul(flat, w.w_v);

  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
  Tensor scores({m_tokens, heads, cells});
  for (std::size_t m = 0; m < m_tokens; ++m)
    for (std::size_t h = 0; h < heads; ++h)
      for (std::size_t j = 0; j < cells; ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < dh; ++c) acc += tr.q.at(m, h * dh + c) * tr.k.at(m * cells + j, h * dh + c);
        scores.at(m, h, j) = acc * inv_sqrt;
      }
  tr.attention = softmax_last(scores);

  tr.context = Tensor({m_tokens, d});
  for (std::size_t m = 0; m < m_tokens; ++m)
    for (std::size_t h = 0; h < heads; ++h)
      for (std::size_t c = 0; c < dh; ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < cells; ++j) acc += tr.attention.at(m, h, j) * tr.v.at(m * cells + j, h * dh + c);
        tr.context.at(m, h * dh + c) = acc;
      }

  tr.u = add(query, matmul(tr.context, w.w_o));
  tr.hidden = add_row_bias(matmul(tr.u, w.mlp_w1), w.mlp_b1);
  tr.activated = gelu(tr.hidden);
  tr.t = add(tr.u, add_row_bias(matmul(tr.activated, w.mlp_w2), w.mlp_b2));
  tr.output = add_row_bias(matmul(tr.t, w.w_out), w.b_out);
  return tr;
}

Tensor inject(const ProjectorConfig& cfg, const ProjectorWeights& w, const Tensor& query,
              const Tensor& regions) {
  return inject_traced(cfg, w, query, regions).output;
}

InjectTrace forward_traced(const ProjectorConfig& cfg, const ProjectorWeights& w,
                           const LevelFeatures& features) {
  cfg.validate();
  w.validate(cfg);
  features.validate(cfg);
  return inject_traced(cfg, w, make_query(cfg, w, features), make_regions(cfg, features));
}

Tensor forward(const ProjectorConfig& cfg, const ProjectorWeights& w, const LevelFeatures& features) {
  return forward_traced(cfg, w, features).output;
}

ProjectorGradients backward(const ProjectorConfig& cfg, const ProjectorWeights& w,
                            const LevelFeatures& features, const Tensor& upstream) {
  const InjectTrace tr = forward_traced(cfg, w, features);
  if (upstream.shape() != tr.output.shape()) {
    throw DimensionError("backward: upstream shape " + shape_to_string(upstream.shape()) + ", expected " +
                         shape_to_string(tr.output.shape()));
  }
  const std::size_t m_tokens = cfg.num_tokens(), cells = cfg.region_size();
  const std::size_t lc = cfg.levels * cfg.channels, d = cfg.attn_dim();
  const std::size_t heads = cfg.heads, dh = cfg.head_dim();

  ProjectorGradients g;
  auto& gw = g.weights;

  // output = t W_out + b_out
  gw.w_out = matmul_tn(tr.t, upstream);
  gw.b_out = sum_rows(upstream);
  Tensor d_t = matmul_nt(upstream, w.w_out);

  // t = u + gelu(u W1 + b1) W2 + b2
  gw.mlp_w2 = matmul_tn(tr.activated, d_t);
  gw.mlp_b2 = sum_rows(d_t);
  Tensor d_hidden = matmul_nt(d_t, w.mlp_w2);
  for (std::size_t i = 0; i < d_hidden.size(); ++i) d_hidden[i] *= gelu_derivative(tr.hidden[i]);
  gw.mlp_w1 = matmul_tn(tr.u, d_hidden);
  gw.mlp_b1 = sum_rows(d_hidden);
  Tensor d_u = add(d_t, matmul_nt(d_hidden, w.mlp_w1));

  // u = query + context W_o
  gw.w_o = matmul_tn(tr.context, d_u);
  const Tensor d_context = matmul_nt(d_u, w.w_o);
  Tensor d_query = d_u;

  // Attention, per region and head.
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
  Tensor d_q({m_tokens, d});
  Tensor d_k({m_tokens * cells, d});
  Tensor d_v({m_tokens * cells, d});
  std::vector<double> d_attn(cells);
  for (std::size_t m = 0; m < m_tokens; ++m) {
    for (std::size_t h = 0; h < heads; ++h) {
      double weighted = 0.0;
      for (std::size_t j = 0; j < cells; ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < dh; ++c) {
          acc += d_context.at(m, h * dh + c) * tr.v.at(m * cells + j, h * dh + c);
          d_v.at(m * cells + j, h * dh + c) += tr.attention.at(m, h, j) * d_context.at(m, h * dh + c);
        }
        d_attn[j] = acc;
        weighted += tr.attention.at(m, h, j) * acc;
      }
      for (std::size_t j = 0; j < cells; ++j) {
        const double d_score = tr.attention.at(m, h, j) * (d_attn[j] - weighted) * inv_sqrt;
        for (std::size_t c = 0; c < dh; ++c) {
          d_q.at(m, h * dh + c) += d_score * tr.k.at(m * cells + j, h * dh + c);
          d_k.at(m * cells + j, h * dh + c) += d_score * tr.q.at(m, h * dh + c);
        }
      }
    }
  }

  gw.w_q = matmul_tn(tr.query, d_q);
  d_query = add(d_query, matmul_nt(d_q, w.w_q));

  const Tensor flat = tr.regions.reshaped({m_tokens * cells, lc});
  gw.w_k = matmul_tn(flat, d_k);
  gw.w_v = matmul_tn(flat, d_v);
  const Tensor d_regions =
      add(matmul_nt(d_k, w.w_k), matmul_nt(d_v, w.w_v)).reshaped({m_tokens, cells, lc});
  g.levels = split_channels(scatter_point_region_pairs(d_regions, cfg.grid_h, cfg.grid_w, cfg.scale),
                            cfg.levels);

  if (cfg.query_mode == QueryMode::kLearnable) {
    gw.learnable_query = d_query;
    g.query_source = Tensor::zeros({cfg.grid_h, cfg.grid_w, cfg.channels});
  } else {
    const Tensor d_low = d_query.reshaped({cfg.grid_h / cfg.scale, cfg.grid_w / cfg.scale, cfg.channels});
    g.query_source = bilinear_downsample_backward(d_low, cfg.grid_h, cfg.grid_w, cfg.scale);
  }
  return g;
}

}  // namespace tpk
