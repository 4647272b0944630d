#include "tokenpacker/cost.h"

#include <sstream>

#include "tokenpacker/errors.h"

namespace tpk {

double quadratic_cost(std::size_t visual_tokens, std::size_t text_tokens) {
  const double t = static_cast<double>(visual_tokens + text_tokens);
  return t * t;
}

namespace {

TokenCount count_for(std::size_t per_block, std::size_t plan_rows, std::size_t plan_cols) {
  if (plan_rows == 0 || plan_cols == 0) return TokenCount{per_block, 0, 0};
  return token_count(plan_rows, plan_cols, per_block, true);
}

}  // namespace

CostReport build_cost_report(std::size_t grid_h, std::size_t grid_w, const std::vector<std::size_t>& scales,
                             std::size_t text_tokens, std::size_t plan_rows, std::size_t plan_cols) {
  CostReport report;
  report.grid_h = grid_h;
  report.grid_w = grid_w;
  report.text_tokens = text_tokens;
  report.plan_rows = plan_rows;
  report.plan_cols = plan_cols;

  CostRow base;
  base.projector = "mlp";
  base.scale = 1;
  base.tokens_per_block = grid_h * grid_w;
  base.tokens = count_for(base.tokens_per_block, plan_rows, plan_cols);
  base.text_tokens = text_tokens;
  base.cost = quadratic_cost(base.tokens.total(), text_tokens);
  base.relative_cost = 1.0;
  report.rows.push_back(base);

  for (std::size_t s : scales) {
    if (s < 2 || grid_h % s != 0 || grid_w % s != 0) {
      throw IndivisibleGridError("bench: scale " + std::to_string(s) + " does not divide " +
                                 std::to_string(grid_h) + "x" + std::to_string(grid_w));
    }
    CostRow row;
    row.projector = "tokenpacker";
    row.scale = s;
    row.tokens_per_block = (grid_h / s) * (grid_w / s);
    row.tokens = count_for(row.tokens_per_block, plan_rows, plan_cols);
    row.text_tokens = text_tokens;
    row.compression_ratio =
        1.0 - static_cast<double>(row.tokens.visual) / static_cast<double>(base.tokens.visual);
    row.cost = quadratic_cost(row.tokens.total(), text_tokens);
    row.relative_cost = row.cost / base.cost;
    report.rows.push_back(row);
  }
  return report;
}

nlohmann::json CostReport::to_json() const {
  nlohmann::json out_rows = nlohmann::json::array();
  for (const auto& r : rows) {
    out_rows.push_back({{"projector", r.projector},
                        {"scale", r.scale},
                        {"tokens_per_block", r.tokens_per_block},
                        {"visual_tokens", r.tokens.visual},
                        {"separator_tokens", r.tokens.separators()},
                        {"text_tokens", r.text_tokens},
                        {"compression_ratio", r.compression_ratio},
                        {"cost_proxy", r.cost},
                        {"relative_cost", r.relative_cost},
                        {"forward_ms", r.forward_ms}});
  }
  return {{"feature_grid", {{"h", grid_h}, {"w", grid_w}}},
          {"text_tokens", text_tokens},
          {"grid_plan", plan_rows ? nlohmann::json{{"rows", plan_rows}, {"cols", plan_cols}} : nlohmann::json()},
          {"cost_unit", "(visual + separators + text)^2, dimensionless"},
          {"rows", out_rows}};
}

std::string CostReport::to_tsv() const {
  std::ostringstream os;
  os << "projector\tscale\tvisual_tokens\tseparator_tokens\ttext_tokens\tcompression_ratio\tcost_proxy"
        "\trelative_cost\tforward_ms\n";
  for (const auto& r : rows) {
    os << r.projector << '\t' << r.scale << '\t' << r.tokens.visual << '\t' << r.tokens.separators() << '\t'
       << r.text_tokens << '\t' << r.compression_ratio << '\t' << r.cost << '\t' << r.relative_cost << '\t'
       << r.forward_ms << '\n';
  }
  return os.str();
}

}  // namespace tpk
