#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tokenpacker/layout.h"
#include "json.hpp"

namespace tpk {

// Dimensionless proxy for the LLM's attention cost: (visual + text)^2.
double quadratic_cost(std::size_t visual_tokens, std::size_t text_tokens);

struct CostRow {
  std::string projector;  // "mlp" for the uncompressed baseline, else "tokenpacker"
  std::size_t scale = 1;
  std::size_t tokens_per_block = 0;
  TokenCount tokens;
  std::size_t text_tokens = 0;
  double compression_ratio = 0.0;  // 1 - visual / baseline visual
  double cost = 0.0;
  double relative_cost = 0.0;  // cost / baseline cost
  double forward_ms = 0.0;     // informational wall time
};

struct CostReport {
  std::size_t grid_h = 24;
  std::size_t grid_w = 24;
  std::size_t text_tokens = 128;
  std::size_t plan_rows = 0;  // 0 x 0 when no grid plan was applied
  std::size_t plan_cols = 0;
  std::vector<CostRow> rows;

  nlohmann::json to_json() const;
  std::string to_tsv() const;
};

// Rows for the s = 1 MLP baseline followed by one row per scale. With a
// non-empty grid plan each row counts n_H n_W patches plus an overview and
// their separators; otherwise a single image block without separators.
CostReport build_cost_report(std::size_t grid_h, std::size_t grid_w, const std::vector<std::size_t>& scales,
                             std::size_t text_tokens, std::size_t plan_rows = 0, std::size_t plan_cols = 0);

}  // namespace tpk
