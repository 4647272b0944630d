#include "tokenpacker/baselines.h"

#include "tokenpacker/errors.h"
#include "tokenpacker/rng.h"

namespace tpk {

TwoLayerMlp TwoLayerMlp::init(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed) {
  Rng rng(seed);
  TwoLayerMlp mlp;
  mlp.w1 = init_uniform(rng, {in_dim, out_dim}, in_dim, out_dim);
  mlp.b1 = Tensor::zeros({out_dim});
  mlp.w2 = init_uniform(rng, {out_dim, out_dim}, out_dim, out_dim);
  mlp.b2 = Tensor::zeros({out_dim});
  return mlp;
}

Tensor TwoLayerMlp::apply(const Tensor& x) const {
  return add_row_bias(matmul(gelu(add_row_bias(matmul(x, w1), b1)), w2), b2);
}

Tensor block_mean(const Tensor& grid, std::size_t s) {
  if (grid.rank() != 3) throw DimensionError("block_mean needs an h x w x C grid");
  const std::size_t h = grid.dim(0), w = grid.dim(1), c = grid.dim(2);
  if (s == 0 || h % s != 0 || w % s != 0) {
    throw IndivisibleGridError("scale " + std::to_string(s) + " does not divide grid " +
                               shape_to_string(grid.shape()));
  }
  const double inv = 1.0 / static_cast<double>(s * s);
  Tensor out({h / s, w / s, c});
  for (std::size_t i = 0; i < h / s; ++i)
    for (std::size_t j = 0; j < w / s; ++j)
      for (std::size_t k = 0; k < c; ++k) {
        double acc = 0.0;
        for (std::size_t di = 0; di < s; ++di)
          for (std::size_t dj = 0; dj < s; ++dj) acc += grid.at(i * s + di, j * s + dj, k);
        out.at(i, j, k) = acc * inv;
      }
  return out;
}

Tensor pixel_shuffle(const Tensor& grid, std::size_t s) {
  const Tensor regions = build_point_region_pairs(grid, s);
  return regions.reshaped({regions.dim(0), regions.dim(1) * regions.dim(2)});
}

Tensor pixel_unshuffle(const Tensor& tokens, std::size_t grid_h, std::size_t grid_w, std::size_t s) {
  if (tokens.rank() != 2 || s == 0 || tokens.dim(1) % (s * s) != 0) {
    throw DimensionError("pixel_unshuffle: token shape " + shape_to_string(tokens.shape()) +
                         " incompatible with scale " + std::to_string(s));
  }
  const Tensor regions = tokens.reshaped({tokens.dim(0), s * s, tokens.dim(1) / (s * s)});
  return scatter_point_region_pairs(regions, grid_h, grid_w, s);
}

Tensor baseline_avgpool(const ProjectorConfig& cfg, const Tensor& last_level, const TwoLayerMlp& mlp) {
  const Tensor pooled = block_mean(last_level, cfg.scale);
  return mlp.apply(pooled.reshaped({pooled.dim(0) * pooled.dim(1), pooled.dim(2)}));
}

Tensor baseline_pixelshuffle(const ProjectorConfig& cfg, const Tensor& last_level) {
  return pixel_shuffle(last_level, cfg.scale);
}

Tensor baseline_mlp(const ProjectorConfig&, const Tensor& last_level, const TwoLayerMlp& mlp) {
  if (last_level.rank() != 3) throw DimensionError("baseline_mlp needs an h x w x C grid");
  return mlp.apply(last_level.reshaped({last_level.dim(0) * last_level.dim(1), last_level.dim(2)}));
}

}  // namespace tpk
