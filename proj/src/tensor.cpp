#include "prioritizer/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <utility>

#include "prioritizer/errors.hpp"

namespace prioritizer {
namespace {

std::string shape_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i != 0) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

void check_shape(const Shape& shape) {
  if (shape.empty()) throw DimensionError("tensor rank must be at least 1");
  for (std::size_t d : shape) {
    if (d == 0) throw DimensionError("tensor dimensions must be positive, got " + shape_string(shape));
  }
}

template <typename T>
std::size_t argmax_impl(std::span<const T> v) {
  if (v.empty()) throw ValueError("argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

std::size_t element_count(const Shape& shape) {
  if (shape.empty()) return 0;
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
  check_shape(shape_);
  data_.assign(element_count(shape_), 0.0f);
}

Tensor::Tensor(Shape shape, std::vector<float> data) : shape_(std::move(shape)), data_(std::move(data)) {
  check_shape(shape_);
  if (data_.size() != element_count(shape_)) {
    throw DimensionError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                         shape_string(shape_));
  }
}

float& Tensor::at(std::size_t row, std::size_t col) {
  if (rank() != 2) throw DimensionError("2-D access on a rank-" + std::to_string(rank()) + " tensor");
  return data_.at(row * shape_[1] + col);
}

float Tensor::at(std::size_t row, std::size_t col) const {
  if (rank() != 2) throw DimensionError("2-D access on a rank-" + std::to_string(rank()) + " tensor");
  return data_.at(row * shape_[1] + col);
}

Shape Tensor::sample_shape() const {
  if (rank() < 2) return Shape{1};
  return Shape(shape_.begin() + 1, shape_.end());
}

std::size_t Tensor::sample_size() const {
  if (shape_.empty()) return 0;
  return data_.size() / shape_[0];
}

std::span<const float> Tensor::sample(std::size_t i) const {
  if (shape_.empty() || i >= shape_[0]) {
    throw DimensionError("sample index " + std::to_string(i) + " out of range");
  }
  const std::size_t n = sample_size();
  return std::span<const float>(data_).subspan(i * n, n);
}

Tensor Tensor::sample_tensor(std::size_t i) const {
  auto s = sample(i);
  return Tensor(sample_shape(), std::vector<float>(s.begin(), s.end()));
}

Tensor Tensor::reshaped(Shape shape) const {
  if (element_count(shape) != data_.size()) {
    throw DimensionError("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
  }
  return Tensor(std::move(shape), data_);
}

bool Tensor::all_finite() const noexcept {
  for (float x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) throw DimensionError("matmul requires rank-2 operands");
  const std::size_t m = a.dim(0);
  const std::size_t k = a.dim(1);
  const std::size_t n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul inner dimensions disagree: " + std::to_string(k) + " vs " +
                         std::to_string(b.dim(0)));
  }
  Tensor out({m, n});
  std::vector<double> row(n);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      const float* brow = b.values().data() + p * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += aip * brow[j];
    }
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = static_cast<float>(row[j]);
  }
  return out;
}

double l2_distance(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw DimensionError("l2_distance length mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

std::size_t argmax(std::span<const float> v) { return argmax_impl(v); }
std::size_t argmax(std::span<const double> v) { return argmax_impl(v); }

}  // namespace prioritizer
