#include "tokenpacker/slicer.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "tokenpacker/errors.h"

namespace tpk {

namespace {

void check_inputs(const ImageExtent& image, std::size_t cell) {
  if (image.height == 0 || image.width == 0) {
    throw InvalidArgument("image extent must be positive, got " + std::to_string(image.height) + "x" +
                          std::to_string(image.width));
  }
  if (cell == 0) throw InvalidArgument("cell size must be positive");
}

// Round half up, then clamp to the available extent.
std::size_t scaled_extent(double alpha, std::size_t length, std::size_t limit) {
  const double v = std::floor(alpha * static_cast<double>(length) + 0.5);
  return std::min(static_cast<std::size_t>(std::max(v, 0.0)), limit);
}

}  // namespace

std::vector<GridSpec> enumerate_grids(std::size_t max_grids) {
  if (max_grids == 0) throw InvalidArgument("max_grids must be >= 1");
  std::vector<GridSpec> grids;
  for (std::size_t rows = 1; rows <= max_grids; ++rows)
    for (std::size_t cols = 1; rows * cols <= max_grids; ++cols) grids.push_back({rows, cols});
  return grids;
}

GridScore padding_score(const ImageExtent& image, std::size_t cell, const GridSpec& grid) {
  check_inputs(image, cell);
  const double h = static_cast<double>(image.height), w = static_cast<double>(image.width);
  const double r = static_cast<double>(cell);
  GridScore s;
  s.alpha_h = static_cast<double>(grid.rows) * r / h;
  s.alpha_w = static_cast<double>(grid.cols) * r / w;
  s.alpha = std::min(s.alpha_h, s.alpha_w);
  s.padding = h * w * s.alpha * s.alpha / (static_cast<double>(grid.cells()) * r * r);
  return s;
}

double overlap_score(const ImageExtent& image, std::size_t cell, const GridSpec& grid) {
  check_inputs(image, cell);
  const double h = static_cast<double>(image.height), w = static_cast<double>(image.width);
  const double gh = static_cast<double>(grid.rows * cell), gw = static_cast<double>(grid.cols * cell);
  const double inter = std::min(h, gh) * std::min(w, gw);
  return inter / (h * w + gh * gw - inter);
}

GridScore score_grid(const ImageExtent& image, std::size_t cell, const GridSpec& grid, double beta) {
  GridScore s = padding_score(image, cell, grid);
  s.overlap = overlap_score(image, cell, grid);
  s.total = s.padding + beta * s.overlap;
  return s;
}

GridChoice select_grid(const ImageExtent& image, std::size_t cell, std::size_t max_grids, double beta) {
  check_inputs(image, cell);
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be >= 0");
  auto grids = enumerate_grids(max_grids);
  // Visiting in tie-rule order means a later grid wins only on a strict improvement.
  std::stable_sort(grids.begin(), grids.end(), [](const GridSpec& a, const GridSpec& b) {
    return a.cells() != b.cells() ? a.cells() < b.cells() : a.rows < b.rows;
  });
  GridChoice best{grids.front(), score_grid(image, cell, grids.front(), beta)};
  for (std::size_t i = 1; i < grids.size(); ++i) {
    const GridScore s = score_grid(image, cell, grids[i], beta);
    if (s.total > best.score.total + kScoreTieTolerance) best = {grids[i], s};
  }
  return best;
}

OverviewGeometry make_overview(const ImageExtent& image, std::size_t cell) {
  check_inputs(image, cell);
  OverviewGeometry ov;
  ov.size = cell;
  const double r = static_cast<double>(cell);
  ov.alpha = std::min(r / static_cast<double>(image.height), r / static_cast<double>(image.width));
  ov.resized_h = std::max<std::size_t>(1, scaled_extent(ov.alpha, image.height, cell));
  ov.resized_w = std::max<std::size_t>(1, scaled_extent(ov.alpha, image.width, cell));
  ov.pad_bottom = cell - ov.resized_h;
  ov.pad_right = cell - ov.resized_w;
  return ov;
}

namespace {

void fill_patches(SlicePlan& plan) {
  plan.patches.clear();
  for (std::size_t i = 0; i < plan.grid.rows; ++i)
    for (std::size_t j = 0; j < plan.grid.cols; ++j)
      plan.patches.push_back({j * plan.cell_size, i * plan.cell_size, plan.cell_size, plan.cell_size});
}

}  // namespace

SlicePlan make_slice_plan(const ImageExtent& image, std::size_t cell, std::size_t max_grids, double beta) {
  const GridChoice choice = select_grid(image, cell, max_grids, beta);
  SlicePlan plan;
  plan.image = image;
  plan.grid = choice.grid;
  plan.cell_size = cell;
  plan.beta = beta;
  plan.max_grids = max_grids;
  plan.alpha = choice.score.alpha;
  plan.alpha_h = choice.score.alpha_h;
  plan.alpha_w = choice.score.alpha_w;
  plan.resized_h = std::max<std::size_t>(1, scaled_extent(plan.alpha, image.height, plan.canvas_h()));
  plan.resized_w = std::max<std::size_t>(1, scaled_extent(plan.alpha, image.width, plan.canvas_w()));
  plan.pad_bottom = plan.canvas_h() - plan.resized_h;
  plan.pad_right = plan.canvas_w() - plan.resized_w;
  fill_patches(plan);
  plan.overview = make_overview(image, cell);
  return plan;
}

SlicePlan baseline_fixed_split(const ImageExtent& image, std::size_t cell) {
  check_inputs(image, cell);
  SlicePlan plan;
  plan.image = image;
  plan.grid = {2, 2};
  plan.cell_size = cell;
  plan.beta = 0.0;
  plan.max_grids = 4;
  const double side = static_cast<double>(2 * cell);
  plan.alpha_h = side / static_cast<double>(image.height);
  plan.alpha_w = side / static_cast<double>(image.width);
  plan.alpha = std::min(plan.alpha_h, plan.alpha_w);
  plan.resized_h = 2 * cell;
  plan.resized_w = 2 * cell;
  fill_patches(plan);
  plan.overview = make_overview(image, cell);
  return plan;
}

}  // namespace tpk
