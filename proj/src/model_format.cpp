#include "prioritizer/model_format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>

#include <json.hpp>

#include "byte_io.hpp"
#include "prioritizer/errors.hpp"

namespace prioritizer {
namespace {

using nlohmann::json;
using detail::ByteReader;
using detail::ByteWriter;

constexpr std::string_view kWeightsMagic = "NNWB";
constexpr std::string_view kTensorMagic = "TBIN";
constexpr std::uint32_t kFormatVersion = 1;

std::string shape_str(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i != 0) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

std::vector<std::string> required_roles(LayerKind kind) {
  switch (kind) {
    case LayerKind::dense:
    case LayerKind::conv2d:
      return {"bias", "kernel"};
    case LayerKind::batchnorm:
      return {"beta", "gamma", "moving_mean", "moving_var"};
    default:
      return {};
  }
}

std::size_t conv_out_extent(std::size_t in, std::size_t kernel, std::size_t stride, Padding padding,
                            const std::string& layer) {
  if (padding == Padding::same) return (in + stride - 1) / stride;
  if (in < kernel) {
    throw ShapeError("layer '" + layer + "': kernel " + std::to_string(kernel) + " larger than input extent " +
                     std::to_string(in));
  }
  return (in - kernel) / stride + 1;
}

Shape expected_weight_shape(const LayerSpec& layer, const std::string& role, const Shape& input) {
  switch (layer.kind) {
    case LayerKind::dense: {
      const auto& p = std::get<DenseParams>(layer.params);
      return role == "kernel" ? Shape{p.out_dim, p.in_dim} : Shape{p.out_dim};
    }
    case LayerKind::conv2d: {
      const auto& p = std::get<Conv2dParams>(layer.params);
      return role == "kernel" ? Shape{p.out_channels, p.in_channels, p.kernel_h, p.kernel_w}
                              : Shape{p.out_channels};
    }
    case LayerKind::batchnorm:
      return Shape{input.back()};
    default:
      return {};
  }
}

// ---- JSON helpers ------------------------------------------------------------

std::size_t get_positive(const json& obj, const char* key, const std::string& layer) {
  if (!obj.contains(key) || !obj.at(key).is_number_unsigned() || obj.at(key).get<std::size_t>() == 0) {
    throw SchemaError("layer '" + layer + "': '" + key + "' must be a positive integer");
  }
  return obj.at(key).get<std::size_t>();
}

double get_number(const json& obj, const char* key, const std::string& layer) {
  if (!obj.contains(key) || !obj.at(key).is_number()) {
    throw SchemaError("layer '" + layer + "': '" + key + "' must be a number");
  }
  return obj.at(key).get<double>();
}

std::set<std::string> allowed_keys(LayerKind kind) {
  std::set<std::string> keys{"kind", "name", "weights"};
  switch (kind) {
    case LayerKind::dense:
      keys.insert({"in_dim", "out_dim"});
      break;
    case LayerKind::dropout:
      keys.insert("rate");
      break;
    case LayerKind::conv2d:
      keys.insert({"out_channels", "in_channels", "kernel_h", "kernel_w", "stride", "padding"});
      break;
    case LayerKind::maxpool2d:
      keys.insert({"kernel", "stride"});
      break;
    case LayerKind::batchnorm:
      keys.insert("epsilon");
      break;
    default:
      break;
  }
  return keys;
}

LayerSpec layer_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("layer entries must be objects");
  if (!j.contains("name") || !j.at("name").is_string() || j.at("name").get<std::string>().empty()) {
    throw SchemaError("layer is missing a non-empty string 'name'");
  }
  LayerSpec layer;
  layer.name = j.at("name").get<std::string>();
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw SchemaError("layer '" + layer.name + "' is missing string 'kind'");
  }
  layer.kind = parse_layer_kind(j.at("kind").get<std::string>());

  const auto keys = allowed_keys(layer.kind);
  for (const auto& [key, _] : j.items()) {
    if (!keys.contains(key)) throw SchemaError("layer '" + layer.name + "': unexpected key '" + key + "'");
  }

  switch (layer.kind) {
    case LayerKind::dense:
      layer.params = DenseParams{get_positive(j, "in_dim", layer.name), get_positive(j, "out_dim", layer.name)};
      break;
    case LayerKind::dropout: {
      const double rate = get_number(j, "rate", layer.name);
      if (!(rate >= 0.0 && rate < 1.0)) {
        throw SchemaError("layer '" + layer.name + "': dropout rate must lie in [0, 1)");
      }
      layer.params = DropoutParams{rate};
      break;
    }
    case LayerKind::conv2d: {
      Conv2dParams p;
      p.out_channels = get_positive(j, "out_channels", layer.name);
      p.in_channels = get_positive(j, "in_channels", layer.name);
      p.kernel_h = get_positive(j, "kernel_h", layer.name);
      p.kernel_w = get_positive(j, "kernel_w", layer.name);
      p.stride = get_positive(j, "stride", layer.name);
      if (!j.contains("padding") || !j.at("padding").is_string()) {
        throw SchemaError("layer '" + layer.name + "': 'padding' must be \"same\" or \"valid\"");
      }
      const auto pad = j.at("padding").get<std::string>();
      if (pad == "same") {
        p.padding = Padding::same;
      } else if (pad == "valid") {
        p.padding = Padding::valid;
      } else {
        throw SchemaError("layer '" + layer.name + "': unknown padding '" + pad + "'");
      }
      layer.params = p;
      break;
    }
    case LayerKind::maxpool2d:
      layer.params = MaxPool2dParams{get_positive(j, "kernel", layer.name), get_positive(j, "stride", layer.name)};
      break;
    case LayerKind::batchnorm: {
      const double eps = get_number(j, "epsilon", layer.name);
      if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw SchemaError("layer '" + layer.name + "': epsilon must be positive");
      }
      layer.params = BatchNormParams{eps};
      break;
    }
    default:
      break;
  }

  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    if (!w.is_object()) throw SchemaError("layer '" + layer.name + "': 'weights' must be an object");
    for (const auto& [role, ref] : w.items()) {
      if (!ref.is_string()) throw SchemaError("layer '" + layer.name + "': weight refs must be strings");
      layer.weights.emplace(role, ref.get<std::string>());
    }
  }
  return layer;
}

json layer_to_json(const LayerSpec& layer) {
  json j;
  j["kind"] = to_string(layer.kind);
  j["name"] = layer.name;
  std::visit(
      [&j](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, DenseParams>) {
          j["in_dim"] = p.in_dim;
          j["out_dim"] = p.out_dim;
        } else if constexpr (std::is_same_v<P, DropoutParams>) {
          j["rate"] = p.rate;
        } else if constexpr (std::is_same_v<P, Conv2dParams>) {
          j["out_channels"] = p.out_channels;
          j["in_channels"] = p.in_channels;
          j["kernel_h"] = p.kernel_h;
          j["kernel_w"] = p.kernel_w;
          j["stride"] = p.stride;
          j["padding"] = p.padding == Padding::same ? "same" : "valid";
        } else if constexpr (std::is_same_v<P, MaxPool2dParams>) {
          j["kernel"] = p.kernel;
          j["stride"] = p.stride;
        } else if constexpr (std::is_same_v<P, BatchNormParams>) {
          j["epsilon"] = p.epsilon;
        }
      },
      layer.params);
  if (!layer.weights.empty()) {
    json w = json::object();
    for (const auto& [role, ref] : layer.weights) w[role] = ref;
    j["weights"] = w;
  }
  return j;
}

void check_finite(const Tensor& t, const std::string& name) {
  if (!t.all_finite()) throw NumericError("tensor '" + name + "' contains NaN or Inf");
}

}  // namespace

const char* to_string(Task task) { return task == Task::classification ? "classification" : "regression"; }

const char* to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::dense: return "dense";
    case LayerKind::relu: return "relu";
    case LayerKind::softmax: return "softmax";
    case LayerKind::dropout: return "dropout";
    case LayerKind::flatten: return "flatten";
    case LayerKind::conv2d: return "conv2d";
    case LayerKind::maxpool2d: return "maxpool2d";
    case LayerKind::batchnorm: return "batchnorm";
  }
  return "?";
}

Task parse_task(const std::string& text) {
  if (text == "classification") return Task::classification;
  if (text == "regression") return Task::regression;
  throw SchemaError("unknown task '" + text + "'");
}

LayerKind parse_layer_kind(const std::string& text) {
  for (LayerKind k : {LayerKind::dense, LayerKind::relu, LayerKind::softmax, LayerKind::dropout, LayerKind::flatten,
                      LayerKind::conv2d, LayerKind::maxpool2d, LayerKind::batchnorm}) {
    if (text == to_string(k)) return k;
  }
  throw SchemaError("unknown layer kind '" + text + "'");
}

Shape layer_output_shape(const LayerSpec& layer, const Shape& input) {
  const auto fail = [&](const std::string& why) -> ShapeError {
    return ShapeError("layer '" + layer.name + "' (" + to_string(layer.kind) + ") cannot take input " +
                      shape_str(input) + ": " + why);
  };
  switch (layer.kind) {
    case LayerKind::dense: {
      const auto& p = std::get<DenseParams>(layer.params);
      if (input.size() != 1 || input[0] != p.in_dim) throw fail("expected [" + std::to_string(p.in_dim) + "]");
      return {p.out_dim};
    }
    case LayerKind::relu:
    case LayerKind::dropout:
      return input;
    case LayerKind::softmax:
      if (input.size() != 1) throw fail("softmax needs a rank-1 activation");
      return input;
    case LayerKind::flatten:
      return {element_count(input)};
    case LayerKind::conv2d: {
      const auto& p = std::get<Conv2dParams>(layer.params);
      if (input.size() != 3 || input[2] != p.in_channels) {
        throw fail("expected [H,W," + std::to_string(p.in_channels) + "]");
      }
      return {conv_out_extent(input[0], p.kernel_h, p.stride, p.padding, layer.name),
              conv_out_extent(input[1], p.kernel_w, p.stride, p.padding, layer.name), p.out_channels};
    }
    case LayerKind::maxpool2d: {
      const auto& p = std::get<MaxPool2dParams>(layer.params);
      if (input.size() != 3) throw fail("expected [H,W,C]");
      return {conv_out_extent(input[0], p.kernel, p.stride, Padding::valid, layer.name),
              conv_out_extent(input[1], p.kernel, p.stride, Padding::valid, layer.name), input[2]};
    }
    case LayerKind::batchnorm:
      return input;
  }
  throw fail("unsupported layer kind");
}

const Tensor& layer_weight(const ModelManifest& model, const LayerSpec& layer, const std::string& role) {
  const auto ref = layer.weights.find(role);
  if (ref == layer.weights.end()) {
    throw UnresolvedNameError("layer '" + layer.name + "' has no '" + role + "' weight reference");
  }
  const auto t = model.weights.find(ref->second);
  if (t == model.weights.end()) {
    throw UnresolvedNameError("weight tensor '" + ref->second + "' referenced by layer '" + layer.name +
                              "' is not in the weights blob");
  }
  return t->second;
}

std::size_t layer_index(const ModelManifest& model, const std::string& name) {
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    if (model.layers[i].name == name) return i;
  }
  throw UnresolvedNameError("model has no layer named '" + name + "'");
}

std::vector<Shape> validate_model(const ModelManifest& model) {
  if (model.layers.empty()) throw SchemaError("model '" + model.name + "' has an empty layer list");
  if (model.input_shape.empty()) throw SchemaError("input_shape must be non-empty");
  for (std::size_t d : model.input_shape) {
    if (d == 0) throw SchemaError("input_shape dimensions must be positive");
  }

  std::set<std::string> names;
  std::vector<Shape> shapes;
  shapes.reserve(model.layers.size());
  Shape current = model.input_shape;
  for (const auto& layer : model.layers) {
    if (!names.insert(layer.name).second) throw SchemaError("duplicate layer name '" + layer.name + "'");

    const auto roles = required_roles(layer.kind);
    for (const auto& [role, _] : layer.weights) {
      if (std::find(roles.begin(), roles.end(), role) == roles.end()) {
        throw SchemaError("layer '" + layer.name + "' (" + to_string(layer.kind) + ") has unexpected weight role '" +
                          role + "'");
      }
    }
    for (const auto& role : roles) {
      const Tensor& t = layer_weight(model, layer, role);
      const Shape want = expected_weight_shape(layer, role, current);
      if (t.shape() != want) {
        throw ShapeError("weight '" + layer.weights.at(role) + "' of layer '" + layer.name + "' has shape " +
                         shape_str(t.shape()) + ", expected " + shape_str(want));
      }
      check_finite(t, layer.weights.at(role));
    }
    if (layer.kind == LayerKind::dropout) {
      const double rate = std::get<DropoutParams>(layer.params).rate;
      if (!(rate >= 0.0 && rate < 1.0)) throw SchemaError("layer '" + layer.name + "': dropout rate outside [0, 1)");
    }

    current = layer_output_shape(layer, current);
    shapes.push_back(current);
  }

  const bool ends_in_softmax = model.layers.back().kind == LayerKind::softmax;
  if (model.task == Task::classification && !ends_in_softmax) {
    throw SchemaError("classification model '" + model.name + "' must end in a softmax layer");
  }
  if (model.task == Task::regression && ends_in_softmax) {
    throw SchemaError("regression model '" + model.name + "' must not end in a softmax layer");
  }
  if (shapes.back().size() != 1) throw ShapeError("model output must be rank 1, got " + shape_str(shapes.back()));
  return shapes;
}

// ---- manifest ------------------------------------------------------------------

std::string manifest_to_json(const ModelManifest& model) {
  json j;
  j["name"] = model.name;
  j["task"] = to_string(model.task);
  j["input_shape"] = model.input_shape;
  json layers = json::array();
  for (const auto& layer : model.layers) layers.push_back(layer_to_json(layer));
  j["layers"] = layers;
  return j.dump(2) + "\n";
}

ModelManifest manifest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("manifest must be a JSON object");
  for (const char* key : {"name", "task", "input_shape", "layers"}) {
    if (!j.contains(key)) throw SchemaError(std::string("manifest is missing '") + key + "'");
  }
  ModelManifest model;
  if (!j.at("name").is_string()) throw SchemaError("'name' must be a string");
  model.name = j.at("name").get<std::string>();
  if (!j.at("task").is_string()) throw SchemaError("'task' must be a string");
  model.task = parse_task(j.at("task").get<std::string>());

  const auto& shape = j.at("input_shape");
  if (!shape.is_array() || shape.empty()) throw SchemaError("'input_shape' must be a non-empty array");
  for (const auto& d : shape) {
    if (!d.is_number_unsigned() || d.get<std::size_t>() == 0) {
      throw SchemaError("'input_shape' entries must be positive integers");
    }
    model.input_shape.push_back(d.get<std::size_t>());
  }

  const auto& layers = j.at("layers");
  if (!layers.is_array()) throw SchemaError("'layers' must be an array");
  if (layers.empty()) throw SchemaError("'layers' must not be empty");
  for (const auto& l : layers) model.layers.push_back(layer_from_json(l));
  return model;
}

// ---- NNWB ----------------------------------------------------------------------

std::vector<std::uint8_t> encode_weights(const std::map<std::string, Tensor>& weights) {
  // Header size first, so payload offsets can be absolute.
  std::size_t header = kWeightsMagic.size() + 4 + 4;
  for (const auto& [name, t] : weights) header += 4 + name.size() + 1 + 1 + 4 * t.rank() + 8 + 8;

  ByteWriter w;
  w.bytes(kWeightsMagic);
  w.u32(kFormatVersion);
  if (weights.size() > std::numeric_limits<std::uint32_t>::max()) throw FormatError("too many tensors");
  w.u32(static_cast<std::uint32_t>(weights.size()));
  std::uint64_t offset = header;
  for (const auto& [name, t] : weights) {
    if (t.rank() > 255) throw FormatError("tensor '" + name + "' rank exceeds 255");
    w.u32(static_cast<std::uint32_t>(name.size()));
    w.bytes(name);
    w.u8(static_cast<std::uint8_t>(DType::f32));
    w.u8(static_cast<std::uint8_t>(t.rank()));
    for (std::size_t d : t.shape()) {
      if (d > std::numeric_limits<std::uint32_t>::max()) throw FormatError("dimension exceeds u32");
      w.u32(static_cast<std::uint32_t>(d));
    }
    const std::uint64_t len = 4ull * t.size();
    w.u64(offset);
    w.u64(len);
    offset += len;
  }
  for (const auto& [_, t] : weights) {
    for (float v : t.values()) w.f32(v);
  }
  return w.take();
}

std::map<std::string, Tensor> decode_weights(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "weights blob");
  if (r.remaining() < kWeightsMagic.size() || r.bytes(kWeightsMagic.size()) != kWeightsMagic) {
    throw FormatError("weights blob: bad magic (expected NNWB)");
  }
  const auto version = r.u32();
  if (version != kFormatVersion) throw FormatError("weights blob: unsupported version " + std::to_string(version));
  const auto count = r.u32();

  struct Entry {
    std::string name;
    Shape shape;
    std::uint64_t offset;
    std::uint64_t len;
  };
  std::vector<Entry> entries;
  for (std::uint32_t i = 0; i < count; ++i) {
    Entry e;
    e.name = r.bytes(r.u32());
    const auto dtype = r.u8();
    if (dtype != static_cast<std::uint8_t>(DType::f32)) {
      throw FormatError("weights blob: tensor '" + e.name + "' has unsupported dtype " + std::to_string(dtype));
    }
    const auto rank = r.u8();
    if (rank == 0) throw FormatError("weights blob: tensor '" + e.name + "' has rank 0");
    for (int d = 0; d < rank; ++d) {
      const auto dim = r.u32();
      if (dim == 0) throw FormatError("weights blob: tensor '" + e.name + "' has a zero dimension");
      e.shape.push_back(dim);
    }
    e.offset = r.u64();
    e.len = r.u64();
    if (e.len != 4ull * element_count(e.shape)) {
      throw FormatError("weights blob: tensor '" + e.name + "' byte_len disagrees with its shape");
    }
    entries.push_back(std::move(e));
  }

  std::map<std::string, Tensor> out;
  for (const auto& e : entries) {
    if (e.offset > bytes.size() || e.len > bytes.size() - e.offset) {
      throw TruncatedError("weights blob: payload of '" + e.name + "' extends past end of data");
    }
    r.seek(e.offset);
    std::vector<float> data(element_count(e.shape));
    for (float& v : data) v = r.f32();
    if (!out.emplace(e.name, Tensor(e.shape, std::move(data))).second) {
      throw FormatError("weights blob: duplicate tensor name '" + e.name + "'");
    }
  }
  return out;
}

// ---- TBIN ----------------------------------------------------------------------

std::vector<std::uint8_t> encode_tensor(const AnyTensor& tensor) {
  ByteWriter w;
  w.bytes(kTensorMagic);
  w.u32(kFormatVersion);
  const auto write_shape = [&w](const Shape& shape) {
    if (shape.empty() || shape.size() > 255) throw FormatError("tensor rank must be in [1, 255]");
    w.u8(static_cast<std::uint8_t>(shape.size()));
    for (std::size_t d : shape) {
      if (d == 0 || d > std::numeric_limits<std::uint32_t>::max()) throw FormatError("dimension out of range");
      w.u32(static_cast<std::uint32_t>(d));
    }
  };
  if (const auto* f = std::get_if<Tensor>(&tensor)) {
    w.u8(static_cast<std::uint8_t>(DType::f32));
    write_shape(f->shape());
    for (float v : f->values()) w.f32(v);
  } else {
    const auto& u = std::get<IndexTensor>(tensor);
    if (u.data.size() != element_count(u.shape)) throw DimensionError("index tensor data/shape mismatch");
    w.u8(static_cast<std::uint8_t>(DType::u32));
    write_shape(u.shape);
    for (std::uint32_t v : u.data) w.u32(v);
  }
  return w.take();
}

AnyTensor decode_tensor(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "tensor file");
  if (r.remaining() < kTensorMagic.size() || r.bytes(kTensorMagic.size()) != kTensorMagic) {
    throw FormatError("tensor file: bad magic (expected TBIN)");
  }
  const auto version = r.u32();
  if (version != kFormatVersion) throw FormatError("tensor file: unsupported version " + std::to_string(version));
  const auto dtype = r.u8();
  if (dtype > static_cast<std::uint8_t>(DType::u32)) {
    throw FormatError("tensor file: unsupported dtype " + std::to_string(dtype));
  }
  const auto rank = r.u8();
  if (rank == 0) throw FormatError("tensor file: rank 0");
  Shape shape;
  for (int d = 0; d < rank; ++d) {
    const auto dim = r.u32();
    if (dim == 0) throw FormatError("tensor file: zero dimension");
    shape.push_back(dim);
  }
  const std::size_t n = element_count(shape);
  if (r.remaining() / 4 < n) {
    throw TruncatedError("tensor file: shape " + shape_str(shape) + " needs " + std::to_string(4 * n) +
                         " payload bytes, found " + std::to_string(r.remaining()));
  }
  if (r.remaining() != 4 * n) throw FormatError("tensor file: trailing bytes after payload");

  if (dtype == static_cast<std::uint8_t>(DType::f32)) {
    std::vector<float> data(n);
    for (float& v : data) v = r.f32();
    Tensor t(std::move(shape), std::move(data));
    check_finite(t, "tensor file");
    return t;
  }
  IndexTensor u{std::move(shape), std::vector<std::uint32_t>(n)};
  for (auto& v : u.data) v = r.u32();
  return u;
}

// ---- files -----------------------------------------------------------------------

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

ModelManifest load_model(const std::filesystem::path& manifest_path, const std::filesystem::path& weights_path) {
  const auto text = read_file_bytes(manifest_path);
  ModelManifest model = manifest_from_json(std::string(text.begin(), text.end()));
  model.weights = decode_weights(read_file_bytes(weights_path));
  validate_model(model);
  return model;
}

void save_model(const ModelManifest& model, const std::filesystem::path& manifest_path,
                const std::filesystem::path& weights_path) {
  validate_model(model);
  const auto text = manifest_to_json(model);
  write_file_bytes(manifest_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  write_file_bytes(weights_path, encode_weights(model.weights));
}

Tensor load_tensor_file(const std::filesystem::path& path) {
  auto any = decode_tensor(read_file_bytes(path));
  if (auto* t = std::get_if<Tensor>(&any)) return std::move(*t);
  throw FormatError("'" + path.string() + "': expected dtype f32, found u32");
}

void save_tensor_file(const Tensor& tensor, const std::filesystem::path& path) {
  write_file_bytes(path, encode_tensor(tensor));
}

IndexTensor load_index_file(const std::filesystem::path& path) {
  auto any = decode_tensor(read_file_bytes(path));
  if (auto* t = std::get_if<IndexTensor>(&any)) return std::move(*t);
  throw FormatError("'" + path.string() + "': expected dtype u32, found f32");
}

void save_index_file(const IndexTensor& tensor, const std::filesystem::path& path) {
  write_file_bytes(path, encode_tensor(tensor));
}

AnyTensor load_label_file(const std::filesystem::path& path) { return decode_tensor(read_file_bytes(path)); }

}  // namespace prioritizer
