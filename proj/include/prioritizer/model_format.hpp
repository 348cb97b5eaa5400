#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "prioritizer/tensor.hpp"

namespace prioritizer {

enum class Task { classification, regression };

enum class LayerKind { dense, relu, softmax, dropout, flatten, conv2d, maxpool2d, batchnorm };

enum class Padding { same, valid };

struct DenseParams {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;

  friend bool operator==(const DenseParams&, const DenseParams&) = default;
};

struct DropoutParams {
  double rate = 0.0;

  friend bool operator==(const DropoutParams&, const DropoutParams&) = default;
};

struct Conv2dParams {
  std::size_t out_channels = 0;
  std::size_t in_channels = 0;
  std::size_t kernel_h = 0;
  std::size_t kernel_w = 0;
  std::size_t stride = 1;
  Padding padding = Padding::valid;

  friend bool operator==(const Conv2dParams&, const Conv2dParams&) = default;
};

struct MaxPool2dParams {
  std::size_t kernel = 0;
  std::size_t stride = 0;

  friend bool operator==(const MaxPool2dParams&, const MaxPool2dParams&) = default;
};

struct BatchNormParams {
  double epsilon = 1e-3;

  friend bool operator==(const BatchNormParams&, const BatchNormParams&) = default;
};

using LayerParams =
    std::variant<std::monostate, DenseParams, DropoutParams, Conv2dParams, MaxPool2dParams, BatchNormParams>;

/// One layer of a feed-forward model. `weights` maps a role ("kernel",
/// "bias", "gamma", ...) to a tensor name in the weights blob.
///
/// Activation layout is channels-last: conv2d, maxpool2d and batchnorm see
/// per-sample tensors of shape [height, width, channels]; batchnorm on a
/// rank-1 activation treats every feature as a channel.
struct LayerSpec {
  LayerKind kind = LayerKind::relu;
  std::string name;
  LayerParams params;
  std::map<std::string, std::string> weights;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct ModelManifest {
  std::string name;
  Task task = Task::classification;
  Shape input_shape;  // per sample, without the batch dimension
  std::vector<LayerSpec> layers;
  std::map<std::string, Tensor> weights;

  friend bool operator==(const ModelManifest&, const ModelManifest&) = default;
};

const char* to_string(Task task);
const char* to_string(LayerKind kind);
Task parse_task(const std::string& text);
LayerKind parse_layer_kind(const std::string& text);

/// Output shape of `layer` applied to a per-sample activation of `input`.
/// Throws ShapeError when the layer cannot accept the input.
Shape layer_output_shape(const LayerSpec& layer, const Shape& input);

/// Full structural validation: schema rules, weight resolution, weight
/// shapes, finiteness, and shape chaining. Returns the per-layer output
/// shapes on success.
std::vector<Shape> validate_model(const ModelManifest& model);

/// Weight tensor for `role` of `layer`; throws UnresolvedNameError.
const Tensor& layer_weight(const ModelManifest& model, const LayerSpec& layer, const std::string& role);

/// Index of the layer named `name`, or throws UnresolvedNameError.
std::size_t layer_index(const ModelManifest& model, const std::string& name);

// ---- JSON manifest ---------------------------------------------------------

std::string manifest_to_json(const ModelManifest& model);
/// Parses the manifest text; the returned model has no weights attached.
ModelManifest manifest_from_json(const std::string& text);

// ---- NNWB weights blob -------------------------------------------------------
//
//   "NNWB" | u32 version = 1 | u32 tensor_count
//   tensor_count x { u32 name_len | name bytes (UTF-8) | u8 dtype (0 = f32)
//                    | u8 rank | u32 dims[rank] | u64 byte_offset | u64 byte_len }
//   raw little-endian f32 payloads
//
// byte_offset is absolute from the start of the file. Tensors are written in
// lexicographic name order with contiguous payloads.

std::vector<std::uint8_t> encode_weights(const std::map<std::string, Tensor>& weights);
std::map<std::string, Tensor> decode_weights(std::span<const std::uint8_t> bytes);

// ---- TBIN tensor files ------------------------------------------------------
//
//   "TBIN" | u32 version = 1 | u8 dtype (0 = f32, 1 = u32) | u8 rank
//   | u32 dims[rank] | raw little-endian payload

enum class DType : std::uint8_t { f32 = 0, u32 = 1 };

using AnyTensor = std::variant<Tensor, IndexTensor>;

std::vector<std::uint8_t> encode_tensor(const AnyTensor& tensor);
AnyTensor decode_tensor(std::span<const std::uint8_t> bytes);

// ---- files -------------------------------------------------------------------

ModelManifest load_model(const std::filesystem::path& manifest_path, const std::filesystem::path& weights_path);
void save_model(const ModelManifest& model, const std::filesystem::path& manifest_path,
                const std::filesystem::path& weights_path);

Tensor load_tensor_file(const std::filesystem::path& path);
void save_tensor_file(const Tensor& tensor, const std::filesystem::path& path);

IndexTensor load_index_file(const std::filesystem::path& path);
void save_index_file(const IndexTensor& tensor, const std::filesystem::path& path);

/// Label files hold either u32 class indices or f32 regression targets.
AnyTensor load_label_file(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace prioritizer
