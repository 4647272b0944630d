#pragma once

#include <cstddef>
#include <cstdint>

#include "tokenpacker/projector.h"
#include "tokenpacker/tensor.h"

namespace tpk {

// LLaVA-style two-layer projector: gelu(x W1 + b1) W2 + b2.
struct TwoLayerMlp {
  Tensor w1;  // in x D
  Tensor b1;  // D
  Tensor w2;  // D x D
  Tensor b2;  // D

  static TwoLayerMlp init(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed);
  Tensor apply(const Tensor& x) const;
};

// s x s average pooling of an h x w x C grid.
Tensor block_mean(const Tensor& grid, std::size_t s);

// Lossless space-to-channel rearrangement: M x (s^2 C), row m holding the s x s
// block of low-res cell m with cells in row-major order.
Tensor pixel_shuffle(const Tensor& grid, std::size_t s);
Tensor pixel_unshuffle(const Tensor& tokens, std::size_t grid_h, std::size_t grid_w, std::size_t s);

// Average pooling then MLP: M x D.
Tensor baseline_avgpool(const ProjectorConfig& cfg, const Tensor& last_level, const TwoLayerMlp& mlp);
// M x (s^2 C), no learned parameters.
Tensor baseline_pixelshuffle(const ProjectorConfig& cfg, const Tensor& last_level);
// One token per feature cell: N x D.
Tensor baseline_mlp(const ProjectorConfig& cfg, const Tensor& last_level, const TwoLayerMlp& mlp);

}  // namespace tpk
