#include "tokenpacker/tensor.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tokenpacker/errors.h"
#include "tokenpacker/rng.h"

namespace tpk {

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

std::size_t shape_numel(const Shape& shape) {
  if (shape.empty()) return 0;
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

namespace {

void check_shape(const Shape& shape) {
  if (shape.empty()) throw DimensionError("tensor shape must have at least one dimension");
  for (auto d : shape) {
    if (d == 0) throw DimensionError("tensor dimensions must be positive, got " + shape_to_string(shape));
  }
}

void require_rank(const Tensor& t, std::size_t rank, const char* op) {
  if (t.rank() != rank) {
    throw DimensionError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                         shape_to_string(t.shape()));
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_to_string(a.shape()) + " vs " +
                         shape_to_string(b.shape()));
  }
}

}  // namespace

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
  check_shape(shape_);
  data_.assign(shape_numel(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  check_shape(shape_);
  if (data_.size() != shape_numel(shape_)) {
    throw DimensionError("data length " + std::to_string(data_.size()) + " does not match shape " +
                         shape_to_string(shape_));
  }
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(m * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw DimensionError("ragged matrix literal");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Tensor({m, n}, std::move(data));
}

Tensor Tensor::vector(std::initializer_list<double> values) {
  return Tensor({values.size()}, std::vector<double>(values));
}

std::span<double> Tensor::row(std::size_t i) {
  const std::size_t stride = data_.size() / shape_[0];
  return std::span<double>(data_).subspan(i * stride, stride);
}

std::span<const double> Tensor::row(std::size_t i) const {
  const std::size_t stride = data_.size() / shape_[0];
  return std::span<const double>(data_).subspan(i * stride, stride);
}

Tensor Tensor::reshaped(Shape shape) const {
  if (shape_numel(shape) != data_.size()) {
    throw DimensionError("cannot reshape " + shape_to_string(shape_) + " to " + shape_to_string(shape));
  }
  return Tensor(std::move(shape), data_);
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

bool operator==(const Tensor& a, const Tensor& b) {
  if (a.shape_ != b.shape_) return false;
  // Bitwise comparison: distinguishes -0.0 from 0.0 and compares NaN payloads.
  return std::equal(a.data_.begin(), a.data_.end(), b.data_.begin(), [](double x, double y) {
    return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
  });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "matmul");
  require_rank(b, 2, "matmul");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul: inner dimensions disagree, " + shape_to_string(a.shape()) + " x " +
                         shape_to_string(b.shape()));
  }
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += a.at(i, p) * b.at(p, j);
      out.at(i, j) = acc;
    }
  }
  return out;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "matmul_tn");
  require_rank(b, 2, "matmul_tn");
  const std::size_t k = a.dim(0), m = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul_tn: leading dimensions disagree, " + shape_to_string(a.shape()) + " vs " +
                         shape_to_string(b.shape()));
  }
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += a.at(p, i) * b.at(p, j);
      out.at(i, j) = acc;
    }
  }
  return out;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "matmul_nt");
  require_rank(b, 2, "matmul_nt");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(0);
  if (b.dim(1) != k) {
    throw DimensionError("matmul_nt: trailing dimensions disagree, " + shape_to_string(a.shape()) + " vs " +
                         shape_to_string(b.shape()));
  }
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += a.at(i, p) * b.at(j, p);
      out.at(i, j) = acc;
    }
  }
  return out;
}

Tensor transpose(const Tensor& a) {
  require_rank(a, 2, "transpose");
  Tensor out({a.dim(1), a.dim(0)});
  for (std::size_t i = 0; i < a.dim(0); ++i)
    for (std::size_t j = 0; j < a.dim(1); ++j) out.at(j, i) = a.at(i, j);
  return out;
}

Tensor softmax_last(const Tensor& t) {
  if (t.empty()) throw DimensionError("softmax_last: empty tensor");
  const std::size_t n = t.shape().back();
  Tensor out = t;
  auto data = out.data();
  for (std::size_t base = 0; base < data.size(); base += n) {
    auto slice = data.subspan(base, n);
    const double mx = *std::max_element(slice.begin(), slice.end());
    double total = 0.0;
    for (auto& v : slice) {
      v = std::exp(v - mx);
      total += v;
    }
    for (auto& v : slice) v /= total;
  }
  return out;
}

namespace {

struct Tap {
  std::size_t lo, hi;
  double w_hi;  // weight of `hi`; `lo` gets 1 - w_hi
};

// Half-pixel source coordinate for output index i, clamped to [0, n-1].
Tap make_tap(std::size_t i, std::size_t s, std::size_t n) {
  double src = (static_cast<double>(i) + 0.5) * static_cast<double>(s) - 0.5;
  src = std::clamp(src, 0.0, static_cast<double>(n - 1));
  const auto lo = static_cast<std::size_t>(std::floor(src));
  const std::size_t hi = std::min(lo + 1, n - 1);
  return {lo, hi, src - static_cast<double>(lo)};
}

void check_downsample(const Tensor& grid, std::size_t s) {
  require_rank(grid, 3, "bilinear_downsample");
  if (s < 1) throw InvalidArgument("bilinear_downsample: scale must be positive");
  if (grid.dim(0) % s != 0 || grid.dim(1) % s != 0) {
    throw IndivisibleGridError("scale " + std::to_string(s) + " does not divide grid " +
                               shape_to_string(grid.shape()));
  }
}

}  // namespace

Tensor bilinear_downsample(const Tensor& grid, std::size_t s) {
  check_downsample(grid, s);
  const std::size_t h = grid.dim(0), w = grid.dim(1), c = grid.dim(2);
  const std::size_t oh = h / s, ow = w / s;
  Tensor out({oh, ow, c});
  for (std::size_t i = 0; i < oh; ++i) {
    const Tap ty = make_tap(i, s, h);
    for (std::size_t j = 0; j < ow; ++j) {
      const Tap tx = make_tap(j, s, w);
      for (std::size_t k = 0; k < c; ++k) {
        const double top = (1.0 - tx.w_hi) * grid.at(ty.lo, tx.lo, k) + tx.w_hi * grid.at(ty.lo, tx.hi, k);
        const double bot = (1.0 - tx.w_hi) * grid.at(ty.hi, tx.lo, k) + tx.w_hi * grid.at(ty.hi, tx.hi, k);
        out.at(i, j, k) = (1.0 - ty.w_hi) * top + ty.w_hi * bot;
      }
    }
  }
  return out;
}

Tensor bilinear_downsample_backward(const Tensor& grad_out, std::size_t h, std::size_t w,
                                    std::size_t s) {
  require_rank(grad_out, 3, "bilinear_downsample_backward");
  if (grad_out.dim(0) * s != h || grad_out.dim(1) * s != w) {
    throw DimensionError("bilinear_downsample_backward: gradient " + shape_to_string(grad_out.shape()) +
                         " inconsistent with input extent");
  }
  const std::size_t c = grad_out.dim(2);
  Tensor grad({h, w, c});
  for (std::size_t i = 0; i < grad_out.dim(0); ++i) {
    const Tap ty = make_tap(i, s, h);
    for (std::size_t j = 0; j < grad_out.dim(1); ++j) {
      const Tap tx = make_tap(j, s, w);
      for (std::size_t k = 0; k < c; ++k) {
        const double g = grad_out.at(i, j, k);
        grad.at(ty.lo, tx.lo, k) += (1.0 - ty.w_hi) * (1.0 - tx.w_hi) * g;
        grad.at(ty.lo, tx.hi, k) += (1.0 - ty.w_hi) * tx.w_hi * g;
        grad.at(ty.hi, tx.lo, k) += ty.w_hi * (1.0 - tx.w_hi) * g;
        grad.at(ty.hi, tx.hi, k) += ty.w_hi * tx.w_hi * g;
      }
    }
  }
  return grad;
}

namespace {
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;
}  // namespace

double gelu(double x) {
  return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + kGeluA * x * x * x)));
}

double gelu_derivative(double x) {
  const double u = kGeluC * (x + kGeluA * x * x * x);
  const double th = std::tanh(u);
  const double du = kGeluC * (1.0 + 3.0 * kGeluA * x * x);
  return 0.5 * (1.0 + th) + 0.5 * x * (1.0 - th * th) * du;
}

Tensor gelu(const Tensor& t) {
  Tensor out = t;
  for (auto& v : out.data()) v = gelu(v);
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Tensor out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += bd[i];
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  Tensor out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bd[i];
  return out;
}

Tensor scale(const Tensor& t, double c) {
  Tensor out = t;
  for (auto& v : out.data()) v *= c;
  return out;
}

Tensor add_row_bias(const Tensor& a, const Tensor& bias) {
  require_rank(a, 2, "add_row_bias");
  if (bias.size() != a.dim(1)) {
    throw DimensionError("add_row_bias: bias " + shape_to_string(bias.shape()) + " vs matrix " +
                         shape_to_string(a.shape()));
  }
  Tensor out = a;
  for (std::size_t i = 0; i < a.dim(0); ++i)
    for (std::size_t j = 0; j < a.dim(1); ++j) out.at(i, j) += bias[j];
  return out;
}

Tensor sum_rows(const Tensor& a) {
  require_rank(a, 2, "sum_rows");
  Tensor out({a.dim(1)});
  for (std::size_t i = 0; i < a.dim(0); ++i)
    for (std::size_t j = 0; j < a.dim(1); ++j) out[j] += a.at(i, j);
  return out;
}

double max_abs(const Tensor& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Tensor concat_channels(std::span<const Tensor> grids) {
  if (grids.empty()) throw DimensionError("concat_channels: no inputs");
  const std::size_t h = grids[0].dim(0), w = grids[0].dim(1);
  std::size_t total = 0;
  for (const auto& g : grids) {
    require_rank(g, 3, "concat_channels");
    if (g.dim(0) != h || g.dim(1) != w) {
      throw DimensionError("concat_channels: extent mismatch " + shape_to_string(grids[0].shape()) + " vs " +
                           shape_to_string(g.shape()));
    }
    total += g.dim(2);
  }
  Tensor out({h, w, total});
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      std::size_t offset = 0;
      for (const auto& g : grids) {
        for (std::size_t k = 0; k < g.dim(2); ++k) out.at(i, j, offset + k) = g.at(i, j, k);
        offset += g.dim(2);
      }
    }
  }
  return out;
}

std::vector<Tensor> split_channels(const Tensor& grid, std::size_t parts) {
  require_rank(grid, 3, "split_channels");
  if (parts == 0 || grid.dim(2) % parts != 0) {
    throw DimensionError("split_channels: " + std::to_string(grid.dim(2)) + " channels not divisible into " +
                         std::to_string(parts) + " parts");
  }
  const std::size_t h = grid.dim(0), w = grid.dim(1), c = grid.dim(2) / parts;
  std::vector<Tensor> out(parts, Tensor({h, w, c}));
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j)
      for (std::size_t p = 0; p < parts; ++p)
        for (std::size_t k = 0; k < c; ++k) out[p].at(i, j, k) = grid.at(i, j, p * c + k);
  return out;
}

Tensor init_uniform(Rng& rng, Shape shape, std::size_t fan_in, std::size_t fan_out) {
  if (fan_in == 0 || fan_out == 0) throw InvalidArgument("init_uniform: fans must be positive");
  Tensor out(std::move(shape));
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (auto& v : out.data()) {
    // Rounding can land on the boundary for unusual a; redraw to keep the interval open.
    do {
      v = rng.uniform(-a, a);
    } while (v <= -a || v >= a);
  }
  return out;
}

}  // namespace tpk
