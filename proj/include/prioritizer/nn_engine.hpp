#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "prioritizer/model_format.hpp"
#include "prioritizer/tensor.hpp"

namespace prioritizer {

/// Dropout layers are identity.
struct Deterministic {};

/// Monte-Carlo dropout pass. The mask of every dropout layer is drawn from a
/// stream seeded by (global_seed, input_index, sample_index, layer ordinal),
/// so a pass never depends on scheduling or call order.
struct Stochastic {
  std::uint64_t global_seed = 0;
  std::uint64_t input_index = 0;
  std::uint32_t sample_index = 0;
};

using ForwardMode = std::variant<Deterministic, Stochastic>;

/// A validated, immutable model ready for inference.
class Network {
 public:
  explicit Network(ModelManifest model);

  [[nodiscard]] const ModelManifest& model() const noexcept { return model_; }
  [[nodiscard]] Task task() const noexcept { return model_.task; }
  [[nodiscard]] const Shape& input_shape() const noexcept { return model_.input_shape; }
  [[nodiscard]] const Shape& output_shape(std::size_t layer) const { return shapes_.at(layer); }
  [[nodiscard]] std::size_t output_size() const { return element_count(shapes_.back()); }
  [[nodiscard]] std::size_t layer_count() const noexcept { return model_.layers.size(); }
  [[nodiscard]] bool has_dropout() const noexcept;

  /// Default activation-trace layer: the layer feeding the final softmax, or
  /// the last layer of a regression model.
  [[nodiscard]] std::string default_trace_layer() const;

 private:
  ModelManifest model_;
  std::vector<Shape> shapes_;
};

/// Numerically stable softmax (max subtraction), evaluated in double.
std::vector<double> softmax(std::span<const double> logits);
std::vector<double> softmax(std::span<const float> logits);

/// Output of the last layer for one input of shape net.input_shape().
Tensor forward(const Network& net, const Tensor& input, const ForwardMode& mode = Deterministic{});
std::vector<float> forward(const Network& net, std::span<const float> input, const ForwardMode& mode);

/// Row i is the deterministic output for inputs[i]; inputs is [N, ...input_shape].
Tensor predict_batch(const Network& net, const Tensor& inputs, std::size_t threads = 1);

struct ActivationTraceSet {
  std::vector<std::string> layer_names;   // network order
  Tensor traces;                          // [N, d]
  std::vector<std::uint32_t> predicted_class;  // D(x_i); empty for regression
  std::size_t num_classes = 0;

  [[nodiscard]] std::size_t count() const { return traces.empty() ? 0 : traces.dim(0); }
  [[nodiscard]] std::size_t dim() const { return traces.empty() ? 0 : traces.dim(1); }
};

/// Deterministic activation traces of the named layers, concatenated in
/// network order regardless of the order given. For classification models
/// predicted_class holds the argmax of the final output. Asking for classes
/// on a regression model is an error.
ActivationTraceSet capture_traces(const Network& net, const Tensor& inputs, const std::vector<std::string>& layer_names,
                                  bool require_classes = false, std::size_t threads = 1);

/// Checks that a batch tensor is [N, ...input_shape] and returns N.
std::size_t batch_count(const Network& net, const Tensor& inputs);

}  // namespace prioritizer
