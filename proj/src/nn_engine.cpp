#include "prioritizer/nn_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "prioritizer/errors.hpp"
#include "prioritizer/parallel.hpp"
#include "prioritizer/rng.hpp"

namespace prioritizer {
namespace {

using Activation = std::vector<float>;

Activation dense(const ModelManifest& m, const LayerSpec& layer, const Activation& x) {
  const auto& p = std::get<DenseParams>(layer.params);
  const Tensor& kernel = layer_weight(m, layer, "kernel");
  const Tensor& bias = layer_weight(m, layer, "bias");
  Activation y(p.out_dim);
  for (std::size_t o = 0; o < p.out_dim; ++o) {
    const float* row = kernel.values().data() + o * p.in_dim;
    double acc = bias[o];
    for (std::size_t i = 0; i < p.in_dim; ++i) acc += static_cast<double>(row[i]) * x[i];
    y[o] = static_cast<float>(acc);
  }
  return y;
}

// Channels-last convolution. "same" padding splits the total pad evenly,
// with the odd pixel on the bottom/right.
Activation conv2d(const ModelManifest& m, const LayerSpec& layer, const Shape& in, const Shape& out,
                  const Activation& x) {
  const auto& p = std::get<Conv2dParams>(layer.params);
  const Tensor& kernel = layer_weight(m, layer, "kernel");
  const Tensor& bias = layer_weight(m, layer, "bias");
  const std::size_t in_h = in[0], in_w = in[1], in_c = in[2];
  const std::size_t out_h = out[0], out_w = out[1], out_c = out[2];

  std::ptrdiff_t pad_top = 0, pad_left = 0;
  if (p.padding == Padding::same) {
    const auto total = [](std::size_t o, std::size_t s, std::size_t k, std::size_t i) {
      const auto need = static_cast<std::ptrdiff_t>((o - 1) * s + k) - static_cast<std::ptrdiff_t>(i);
      return std::max<std::ptrdiff_t>(need, 0);
    };
    pad_top = total(out_h, p.stride, p.kernel_h, in_h) / 2;
    pad_left = total(out_w, p.stride, p.kernel_w, in_w) / 2;
  }

  Activation y(out_h * out_w * out_c);
  const float* k = kernel.values().data();
  for (std::size_t oy = 0; oy < out_h; ++oy) {
    for (std::size_t ox = 0; ox < out_w; ++ox) {
      for (std::size_t oc = 0; oc < out_c; ++oc) {
        double acc = bias[oc];
        for (std::size_t ky = 0; ky < p.kernel_h; ++ky) {
          const auto iy = static_cast<std::ptrdiff_t>(oy * p.stride + ky) - pad_top;
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(in_h)) continue;
          for (std::size_t kx = 0; kx < p.kernel_w; ++kx) {
            const auto ix = static_cast<std::ptrdiff_t>(ox * p.stride + kx) - pad_left;
            if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(in_w)) continue;
            const float* px = x.data() + (static_cast<std::size_t>(iy) * in_w + static_cast<std::size_t>(ix)) * in_c;
            for (std::size_t ic = 0; ic < in_c; ++ic) {
              acc += static_cast<double>(px[ic]) * k[((oc * in_c + ic) * p.kernel_h + ky) * p.kernel_w + kx];
            }
          }
        }
        y[(oy * out_w + ox) * out_c + oc] = static_cast<float>(acc);
      }
    }
  }
  return y;
}

Activation maxpool2d(const LayerSpec& layer, const Shape& in, const Shape& out, const Activation& x) {
  const auto& p = std::get<MaxPool2dParams>(layer.params);
  const std::size_t in_w = in[1], c = in[2];
  Activation y(out[0] * out[1] * c, -std::numeric_limits<float>::infinity());
  for (std::size_t oy = 0; oy < out[0]; ++oy) {
    for (std::size_t ox = 0; ox < out[1]; ++ox) {
      float* dst = y.data() + (oy * out[1] + ox) * c;
      for (std::size_t ky = 0; ky < p.kernel; ++ky) {
        for (std::size_t kx = 0; kx < p.kernel; ++kx) {
          const float* src = x.data() + ((oy * p.stride + ky) * in_w + ox * p.stride + kx) * c;
          for (std::size_t ch = 0; ch < c; ++ch) dst[ch] = std::max(dst[ch], src[ch]);
        }
      }
    }
  }
  return y;
}

Activation batchnorm(const ModelManifest& m, const LayerSpec& layer, const Activation& x) {
  const double eps = std::get<BatchNormParams>(layer.params).epsilon;
  const Tensor& gamma = layer_weight(m, layer, "gamma");
  const Tensor& beta = layer_weight(m, layer, "beta");
  const Tensor& mean = layer_weight(m, layer, "moving_mean");
  const Tensor& var = layer_weight(m, layer, "moving_var");
  const std::size_t c = gamma.size();
  Activation y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t ch = i % c;
    const double norm = (static_cast<double>(x[i]) - mean[ch]) / std::sqrt(static_cast<double>(var[ch]) + eps);
    y[i] = static_cast<float>(gamma[ch] * norm + beta[ch]);
  }
  return y;
}

void dropout(const LayerSpec& layer, std::size_t ordinal, const Stochastic& mode, Activation& x) {
  const double rate = std::get<DropoutParams>(layer.params).rate;
  const double scale = 1.0 / (1.0 - rate);
  MaskStream stream(mask_stream_seed(mode.global_seed, mode.input_index, mode.sample_index, ordinal));
  for (float& v : x) {
    // keep with probability 1 - rate
    v = stream.next_unit() >= rate ? static_cast<float>(v * scale) : 0.0f;
  }
}

// Runs every layer; when `capture` is non-null, copies the outputs of the
// flagged layers into it in network order.
Activation run_layers(const Network& net, std::span<const float> input, const ForwardMode& mode,
                      const std::vector<bool>* capture, std::vector<float>* captured) {
  const ModelManifest& m = net.model();
  if (input.size() != element_count(net.input_shape())) {
    throw ShapeError("input has " + std::to_string(input.size()) + " elements, model expects " +
                     std::to_string(element_count(net.input_shape())));
  }
  const auto* stochastic = std::get_if<Stochastic>(&mode);
  if (stochastic != nullptr && !net.has_dropout()) {
    throw ModelError("stochastic forward requested but model '" + m.name + "' has no dropout layers");
  }

  Activation x(input.begin(), input.end());
  Shape shape = net.input_shape();
  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    const LayerSpec& layer = m.layers[li];
    const Shape& out = net.output_shape(li);
    switch (layer.kind) {
      case LayerKind::dense:
        x = dense(m, layer, x);
        break;
      case LayerKind::relu:
        for (float& v : x) v = v > 0.0f ? v : 0.0f;
        break;
      case LayerKind::softmax: {
        const auto p = softmax(std::span<const float>(x));
        std::transform(p.begin(), p.end(), x.begin(), [](double v) { return static_cast<float>(v); });
        break;
      }
      case LayerKind::dropout:
        if (stochastic != nullptr) dropout(layer, li, *stochastic, x);
        break;
      case LayerKind::flatten:
        break;
      case LayerKind::conv2d:
        x = conv2d(m, layer, shape, out, x);
        break;
      case LayerKind::maxpool2d:
        x = maxpool2d(layer, shape, out, x);
        break;
      case LayerKind::batchnorm:
        x = batchnorm(m, layer, x);
        break;
    }
    shape = out;
    if (capture != nullptr && (*capture)[li]) captured->insert(captured->end(), x.begin(), x.end());
  }

  for (float v : x) {
    if (!std::isfinite(v)) throw NumericError("forward pass of model '" + m.name + "' produced a non-finite output");
  }
  return x;
}

}  // namespace

Network::Network(ModelManifest model) : model_(std::move(model)), shapes_(validate_model(model_)) {}

bool Network::has_dropout() const noexcept {
  return std::any_of(model_.layers.begin(), model_.layers.end(),
                     [](const LayerSpec& l) { return l.kind == LayerKind::dropout; });
}

std::string Network::default_trace_layer() const {
  const auto& layers = model_.layers;
  if (layers.back().kind == LayerKind::softmax) {
    if (layers.size() < 2) throw ModelError("model '" + model_.name + "' has no layer before its softmax");
    return layers[layers.size() - 2].name;
  }
  return layers.back().name;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw ValueError("softmax of an empty vector");
  for (double z : logits) {
    if (!std::isfinite(z)) throw NumericError("softmax input contains NaN or Inf");
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> softmax(std::span<const float> logits) {
  const std::vector<double> wide(logits.begin(), logits.end());
  return softmax(std::span<const double>(wide));
}

std::vector<float> forward(const Network& net, std::span<const float> input, const ForwardMode& mode) {
  return run_layers(net, input, mode, nullptr, nullptr);
}

Tensor forward(const Network& net, const Tensor& input, const ForwardMode& mode) {
  if (input.shape() != net.input_shape()) throw ShapeError("input shape does not match the model input_shape");
  auto out = run_layers(net, input.values(), mode, nullptr, nullptr);
  return Tensor(net.output_shape(net.layer_count() - 1), std::move(out));
}

std::size_t batch_count(const Network& net, const Tensor& inputs) {
  const Shape& want = net.input_shape();
  const Shape& got = inputs.shape();
  if (got.size() != want.size() + 1 || !std::equal(want.begin(), want.end(), got.begin() + 1)) {
    throw ShapeError("batch tensor must be [N, ...input_shape]");
  }
  return got[0];
}

Tensor predict_batch(const Network& net, const Tensor& inputs, std::size_t threads) {
  const std::size_t n = batch_count(net, inputs);
  const std::size_t out_dim = net.output_size();
  Tensor out({n, out_dim});
  parallel_for(n, threads, [&](std::size_t i) {
    const auto y = run_layers(net, inputs.sample(i), Deterministic{}, nullptr, nullptr);
    std::copy(y.begin(), y.end(), out.values().begin() + static_cast<std::ptrdiff_t>(i * out_dim));
  });
  return out;
}

ActivationTraceSet capture_traces(const Network& net, const Tensor& inputs, const std::vector<std::string>& layer_names,
                                  bool require_classes, std::size_t threads) {
  if (layer_names.empty()) throw ValueError("no trace layers requested");
  const bool classify = net.task() == Task::classification;
  if (require_classes && !classify) {
    throw ModelError("predicted classes requested from regression model '" + net.model().name + "'");
  }

  std::vector<bool> capture(net.layer_count(), false);
  std::set<std::size_t> seen;
  for (const auto& name : layer_names) {
    const std::size_t li = layer_index(net.model(), name);
    if (!seen.insert(li).second) throw ValueError("trace layer '" + name + "' listed twice");
    capture[li] = true;
  }
  ActivationTraceSet set;
  std::size_t d = 0;
  for (std::size_t li : seen) {
    set.layer_names.push_back(net.model().layers[li].name);
    d += element_count(net.output_shape(li));
  }

  const std::size_t n = batch_count(net, inputs);
  set.traces = Tensor({n, d});
  if (classify) {
    set.predicted_class.resize(n);
    set.num_classes = net.output_size();
  }
  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<float> row;
    row.reserve(d);
    const auto y = run_layers(net, inputs.sample(i), Deterministic{}, &capture, &row);
    std::copy(row.begin(), row.end(), set.traces.values().begin() + static_cast<std::ptrdiff_t>(i * d));
    if (classify) set.predicted_class[i] = static_cast<std::uint32_t>(argmax(std::span<const float>(y)));
  });
  return set;
}

}  // namespace prioritizer
