#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace tpk {

using Shape = std::vector<std::size_t>;

std::string shape_to_string(const Shape& shape);
std::size_t shape_numel(const Shape& shape);

// Dense row-major array of doubles. Every dimension is >= 1 and the flat
// buffer always holds exactly shape_numel(shape) elements.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor zeros(Shape shape) { return Tensor(std::move(shape), 0.0); }
  // 2-D literal, e.g. Tensor::matrix({{1, 2}, {3, 4}}).
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor vector(std::initializer_list<double> values);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double& at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
  double& at(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  // Contiguous slice along the leading axis.
  std::span<double> row(std::size_t i);
  std::span<const double> row(std::size_t i) const;

  // Same data, new shape with equal element count.
  Tensor reshaped(Shape shape) const;

  bool all_finite() const;

  // Bitwise equality of shape and data.
  friend bool operator==(const Tensor& a, const Tensor& b);

 private:
  Shape shape_;
  std::vector<double> data_;
};

// Row-major matrix product. Each output element is accumulated over k in
// ascending order starting from 0.0, so results are reproducible bit-for-bit.
Tensor matmul(const Tensor& a, const Tensor& b);
// a^T * b without materialising the transpose; accumulation runs over the
// shared leading index in ascending order.
Tensor matmul_tn(const Tensor& a, const Tensor& b);
// a * b^T; accumulation over the shared trailing index in ascending order.
Tensor matmul_nt(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

// Softmax over the last axis with max subtraction.
Tensor softmax_last(const Tensor& t);

// Bilinear resize of an h x w x C grid by integer factor s using half-pixel
// centres: output cell (i, j) samples input position ((i + 0.5)s - 0.5,
// (j + 0.5)s - 0.5). For s = 2 this is the 2x2 block mean, for s = 3 the
// centre cell of each 3x3 block.
Tensor bilinear_downsample(const Tensor& grid, std::size_t s);
// Adjoint of bilinear_downsample: scatters an (h/s) x (w/s) x C gradient back
// onto the h x w x C input grid.
Tensor bilinear_downsample_backward(const Tensor& grad_out, std::size_t h, std::size_t w,
                                    std::size_t s);

// tanh approximation: 0.5 x (1 + tanh(sqrt(2/pi) (x + 0.044715 x^3))).
double gelu(double x);
double gelu_derivative(double x);
Tensor gelu(const Tensor& t);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& t, double c);
// Adds a length-n bias to every row of an m x n matrix.
Tensor add_row_bias(const Tensor& a, const Tensor& bias);
// Column sums of an m x n matrix, returned as a length-n vector.
Tensor sum_rows(const Tensor& a);

double max_abs(const Tensor& t);
double max_abs_diff(const Tensor& a, const Tensor& b);

// Concatenate h x w x C_i grids along the channel axis.
Tensor concat_channels(std::span<const Tensor> grids);
// Inverse of concat_channels for equal channel widths.
std::vector<Tensor> split_channels(const Tensor& grid, std::size_t parts);

class Rng;
// Entries i.i.d. uniform on the open interval (-a, a), a = sqrt(6 / (fan_in + fan_out)).
Tensor init_uniform(Rng& rng, Shape shape, std::size_t fan_in, std::size_t fan_out);

}  // namespace tpk
