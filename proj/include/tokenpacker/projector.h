#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tokenpacker/tensor.h"

namespace tpk {

enum class QueryMode { kInterpolated, kLearnable };

std::string to_string(QueryMode mode);
QueryMode query_mode_from_string(const std::string& name);

struct ProjectorConfig {
  std::size_t channels = 0;  // C, per-level feature width
  std::size_t grid_h = 24;
  std::size_t grid_w = 24;
  std::size_t scale = 2;  // s
  std::size_t levels = 1;  // L
  std::size_t heads = 1;
  std::size_t inner_dim = 0;  // d; 0 means "same as channels"
  std::size_t mlp_ratio = 4;
  std::size_t out_dim = 0;  // D
  QueryMode query_mode = QueryMode::kInterpolated;

  std::size_t attn_dim() const { return inner_dim ? inner_dim : channels; }
  std::size_t head_dim() const { return attn_dim() / heads; }
  std::size_t hidden_dim() const { return mlp_ratio * channels; }
  std::size_t num_input_tokens() const { return grid_h * grid_w; }
  std::size_t num_tokens() const { return (grid_h / scale) * (grid_w / scale); }
  std::size_t region_size() const { return scale * scale; }

  // Throws InvalidArgument / IndivisibleGridError on a broken config.
  void validate() const;
};

struct ProjectorWeights {
  Tensor w_q;     // C x d
  Tensor w_k;     // (L*C) x d
  Tensor w_v;     // (L*C) x d
  Tensor w_o;     // d x C
  Tensor mlp_w1;  // C x (rho*C)
  Tensor mlp_b1;  // rho*C
  Tensor mlp_w2;  // (rho*C) x C
  Tensor mlp_b2;  // C
  Tensor w_out;   // C x D
  Tensor b_out;   // D
  std::optional<Tensor> learnable_query;  // M x C, learnable mode only

  // Xavier-uniform matrices, zero biases; learnable_query drawn when the
  // config asks for it.
  static ProjectorWeights init(const ProjectorConfig& cfg, std::uint64_t seed);

  // Throws ShapeMismatchError naming the first offending section.
  void validate(const ProjectorConfig& cfg) const;
};

// Named view used by serialization and gradient checking. Order is the
// canonical on-disk section order.
struct NamedTensorRef {
  std::string name;
  Tensor* tensor;
};
struct NamedTensorView {
  std::string name;
  const Tensor* tensor;
};
std::vector<NamedTensorRef> named_tensors(ProjectorWeights& w);
std::vector<NamedTensorView> named_tensors(const ProjectorWeights& w);
Shape expected_shape(const ProjectorConfig& cfg, const std::string& section);

// Encoder features consumed by the projector. Each level and the query source
// is grid_h x grid_w x C.
struct LevelFeatures {
  std::vector<Tensor> levels;
  Tensor query_source;

  void validate(const ProjectorConfig& cfg) const;
};

// M x s^2 x C': row m holds the s x s block under low-res cell m (row-major
// over low-res cells), block cells flattened row-major.
Tensor build_point_region_pairs(const Tensor& high, std::size_t s);
// Inverse of build_point_region_pairs.
Tensor scatter_point_region_pairs(const Tensor& regions, std::size_t grid_h, std::size_t grid_w,
                                  std::size_t s);

Tensor make_query(const ProjectorConfig& cfg, const ProjectorWeights& w, const LevelFeatures& features);

// Channel-concatenated levels rearranged into point-region pairs:
// M x s^2 x (L*C).
Tensor make_regions(const ProjectorConfig& cfg, const LevelFeatures& features);

// Intermediates of one injection pass; backward consumes them.
struct InjectTrace {
  Tensor query;      // M x C
  Tensor regions;    // M x s^2 x (L*C)
  Tensor q;          // M x d
  Tensor k;          // (M*s^2) x d
  Tensor v;          // (M*s^2) x d
  Tensor attention;  // M x heads x s^2
  Tensor context;    // M x d
  Tensor u;          // M x C, after the attention residual
  Tensor hidden;     // M x (rho*C), pre-activation
  Tensor activated;  // M x (rho*C)
  Tensor t;          // M x C, after the MLP residual
  Tensor output;     // M x D
};

InjectTrace inject_traced(const ProjectorConfig& cfg, const ProjectorWeights& w, const Tensor& query,
                          const Tensor& regions);
Tensor inject(const ProjectorConfig& cfg, const ProjectorWeights& w, const Tensor& query,
              const Tensor& regions);

InjectTrace forward_traced(const ProjectorConfig& cfg, const ProjectorWeights& w,
                           const LevelFeatures& features);
// M x D visual tokens.
Tensor forward(const ProjectorConfig& cfg, const ProjectorWeights& w, const LevelFeatures& features);

struct ProjectorGradients {
  ProjectorWeights weights;  // same layout; learnable_query set iff present in the input weights
  std::vector<Tensor> levels;
  Tensor query_source;
};

// Exact reverse-mode gradients of sum(upstream * forward(...)).
ProjectorGradients backward(const ProjectorConfig& cfg, const ProjectorWeights& w,
                            const LevelFeatures& features, const Tensor& upstream);

}  // namespace tpk
