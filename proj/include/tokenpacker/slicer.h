#pragma once

#include <cstddef>
#include <vector>

namespace tpk {

inline constexpr std::size_t kDefaultCellSize = 336;
inline constexpr std::size_t kDefaultMaxGrids = 9;
inline constexpr double kDefaultBeta = 0.1;
// Scores closer than this are treated as equal and resolved by the tie rule.
inline constexpr double kScoreTieTolerance = 1e-12;

struct ImageExtent {
  std::size_t height = 0;
  std::size_t width = 0;
};

struct GridSpec {
  std::size_t rows = 0;  // n_H
  std::size_t cols = 0;  // n_W

  std::size_t cells() const { return rows * cols; }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct GridScore {
  double alpha_h = 0.0;  // n_H r / H
  double alpha_w = 0.0;  // n_W r / W
  double alpha = 0.0;    // min(alpha_h, alpha_w)
  double padding = 0.0;  // S_p
  double overlap = 0.0;  // S_o
  double total = 0.0;    // S_p + beta S_o
};

struct Rect {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t w = 0;
  std::size_t h = 0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

// Aspect-preserving fit of the whole image into a single r x r cell.
struct OverviewGeometry {
  std::size_t size = 0;
  double alpha = 0.0;
  std::size_t resized_h = 0;
  std::size_t resized_w = 0;
  std::size_t pad_bottom = 0;
  std::size_t pad_right = 0;
};

struct SlicePlan {
  ImageExtent image;
  GridSpec grid;
  double alpha = 0.0;
  double alpha_h = 0.0;
  double alpha_w = 0.0;
  std::size_t resized_h = 0;
  std::size_t resized_w = 0;
  std::size_t pad_bottom = 0;
  std::size_t pad_right = 0;
  std::vector<Rect> patches;  // row-major
  OverviewGeometry overview;
  std::size_t cell_size = kDefaultCellSize;
  double beta = kDefaultBeta;
  std::size_t max_grids = kDefaultMaxGrids;

  std::size_t canvas_h() const { return grid.rows * cell_size; }
  std::size_t canvas_w() const { return grid.cols * cell_size; }
};

// All (n_H, n_W) with n_H n_W <= max_grids, n_H ascending then n_W ascending.
std::vector<GridSpec> enumerate_grids(std::size_t max_grids);

// Fills alpha_h, alpha_w, alpha and padding; overlap and total are left zero.
GridScore padding_score(const ImageExtent& image, std::size_t cell, const GridSpec& grid);
// IoU of the top-left-anchored rectangles (H, W) and (n_H r, n_W r).
double overlap_score(const ImageExtent& image, std::size_t cell, const GridSpec& grid);
GridScore score_grid(const ImageExtent& image, std::size_t cell, const GridSpec& grid, double beta);

struct GridChoice {
  GridSpec grid;
  GridScore score;
};

// argmax of S_p + beta S_o. Ties (within kScoreTieTolerance) go to the grid
// with fewer cells, then fewer rows.
GridChoice select_grid(const ImageExtent& image, std::size_t cell, std::size_t max_grids, double beta);

SlicePlan make_slice_plan(const ImageExtent& image, std::size_t cell = kDefaultCellSize,
                          std::size_t max_grids = kDefaultMaxGrids, double beta = kDefaultBeta);

// Non-aspect-preserving resize to 672 x 672 split 2 x 2.
SlicePlan baseline_fixed_split(const ImageExtent& image, std::size_t cell = kDefaultCellSize);

OverviewGeometry make_overview(const ImageExtent& image, std::size_t cell);

}  // namespace tpk
