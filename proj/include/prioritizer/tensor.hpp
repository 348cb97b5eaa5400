#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace prioritizer {

using Shape = std::vector<std::size_t>;

/// Number of elements described by a shape. An empty shape has zero elements.
std::size_t element_count(const Shape& shape);

/// Dense row-major float32 tensor. Rank is at least one and every dimension
/// is positive; the data length always equals the product of the shape.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);  // zero-filled
  Tensor(Shape shape, std::vector<float> data);

  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
  [[nodiscard]] std::size_t rank() const noexcept { return shape_.size(); }
  [[nodiscard]] std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  [[nodiscard]] std::span<const float> values() const noexcept { return data_; }
  [[nodiscard]] std::span<float> values() noexcept { return data_; }
  [[nodiscard]] const std::vector<float>& data() const noexcept { return data_; }

  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }

  /// 2-D element access; requires rank 2.
  float& at(std::size_t row, std::size_t col);
  [[nodiscard]] float at(std::size_t row, std::size_t col) const;

  /// Shape with the leading (sample) dimension removed.
  [[nodiscard]] Shape sample_shape() const;
  /// Elements per leading-dimension slice.
  [[nodiscard]] std::size_t sample_size() const;
  /// Flat view of the i-th slice along the leading dimension.
  [[nodiscard]] std::span<const float> sample(std::size_t i) const;
  /// Copy of the i-th leading slice as a tensor of sample_shape().
  [[nodiscard]] Tensor sample_tensor(std::size_t i) const;

  [[nodiscard]] Tensor reshaped(Shape shape) const;
  [[nodiscard]] bool all_finite() const noexcept;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<float> data_;
};

/// Dense row-major tensor of unsigned 32-bit integers (class-index labels).
struct IndexTensor {
  Shape shape;
  std::vector<std::uint32_t> data;

  friend bool operator==(const IndexTensor&, const IndexTensor&) = default;
};

/// Matrix product of an [m,k] and a [k,n] tensor, float64 accumulation.
Tensor matmul(const Tensor& a, const Tensor& b);

/// Euclidean distance with float64 accumulation.
double l2_distance(std::span<const float> a, std::span<const float> b);

/// Index of the largest entry; ties resolve to the smallest index.
std::size_t argmax(std::span<const float> v);
std::size_t argmax(std::span<const double> v);

}  // namespace prioritizer
