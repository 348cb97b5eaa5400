#include "prioritizer/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "prioritizer/errors.hpp"
#include "prioritizer/parallel.hpp"

namespace prioritizer {
namespace {

void require_classification(const Network& net, const char* what) {
  if (net.task() != Task::classification) {
    throw ModelError(std::string(what) + " scoring requires a classification model");
  }
}

void require_regression(const Network& net, const char* what) {
  if (net.task() != Task::regression) throw ModelError(std::string(what) + " scoring requires a regression model");
}

void require_mc(const Network& net, const McConfig& mc) {
  if (mc.samples == 0) throw ValueError("Monte-Carlo sample count T must be at least 1");
  if (!net.has_dropout()) {
    throw ModelError("dropout scoring requires at least one dropout layer in model '" + net.model().name + "'");
  }
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::softmax: return "softmax";
    case Method::dropout_cls: return "dropout_cls";
    case Method::dropout_reg: return "dropout_reg";
    case Method::dsa: return "dsa";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  for (Method m : {Method::softmax, Method::dropout_cls, Method::dropout_reg, Method::dsa}) {
    if (text == to_string(m)) return m;
  }
  throw ValueError("unknown scoring method '" + text + "'");
}

double entropy(std::span<const double> p) {
  if (p.empty()) throw ValueError("entropy of an empty probability vector");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValueError("probability entries must be finite and non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-4) throw ValueError("probabilities sum to " + std::to_string(sum) + ", not 1");
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return std::max(h, 0.0);
}

ScoreRecord score_softmax(const Network& net, std::span<const float> input, std::uint32_t input_index) {
  require_classification(net, "softmax");
  const auto probs = forward(net, input, Deterministic{});
  const std::vector<double> p(probs.begin(), probs.end());
  return {input_index, Method::softmax, entropy(p)};
}

ScoreRecord score_dropout_cls(const Network& net, std::span<const float> input, std::uint32_t input_index,
                              const McConfig& mc) {
  require_classification(net, "dropout classification");
  require_mc(net, mc);
  std::vector<double> mean(net.output_size(), 0.0);
  for (std::uint32_t t = 0; t < mc.samples; ++t) {
    const auto probs = forward(net, input, Stochastic{mc.global_seed, input_index, t});
    for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += probs[c];
  }
  for (double& v : mean) v /= mc.samples;
  return {input_index, Method::dropout_cls, entropy(mean)};
}

double predictive_variance(const std::vector<std::vector<float>>& samples) {
  if (samples.empty()) throw ValueError("predictive variance needs at least one sample");
  const std::size_t dim = samples.front().size();
  const auto t = static_cast<double>(samples.size());
  std::vector<double> mean(dim, 0.0);
  for (const auto& y : samples) {
    if (y.size() != dim) throw DimensionError("sampled outputs differ in length");
    for (std::size_t j = 0; j < dim; ++j) mean[j] += y[j];
  }
  for (double& m : mean) m /= t;

  // mean_t(f.f) - E.E, evaluated as mean_t |f - E|^2 so identical samples
  // give exactly zero and the result is never negative.
  double var = 0.0;
  for (const auto& y : samples) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double dev = static_cast<double>(y[j]) - mean[j];
      var += dev * dev;
    }
  }
  return var / t;
}

ScoreRecord score_dropout_reg(const Network& net, std::span<const float> input, std::uint32_t input_index,
                              const McConfig& mc) {
  require_regression(net, "dropout variance");
  require_mc(net, mc);
  std::vector<std::vector<float>> samples;
  samples.reserve(mc.samples);
  for (std::uint32_t t = 0; t < mc.samples; ++t) {
    samples.push_back(forward(net, input, Stochastic{mc.global_seed, input_index, t}));
  }
  return {input_index, Method::dropout_reg, predictive_variance(samples)};
}

// ---- DSA -----------------------------------------------------------------------

DsaIndex::DsaIndex(ActivationTraceSet train) : traces_(std::move(train.traces)), classes_(std::move(train.predicted_class)) {
  if (traces_.rank() != 2 || traces_.dim(0) == 0) throw DimensionError("training traces must be a non-empty [N, d] matrix");
  if (classes_.size() != traces_.dim(0)) {
    throw DimensionError("training traces need one predicted class per row (" + std::to_string(traces_.dim(0)) +
                         " rows, " + std::to_string(classes_.size()) + " classes)");
  }
  std::size_t num_classes = train.num_classes;
  const std::uint32_t max_class = *std::max_element(classes_.begin(), classes_.end());
  if (num_classes == 0) num_classes = static_cast<std::size_t>(max_class) + 1;
  if (max_class >= num_classes) {
    throw ValueError("predicted class " + std::to_string(max_class) + " outside [0, " + std::to_string(num_classes) +
                     ")");
  }
  buckets_.resize(num_classes);
  for (std::size_t i = 0; i < classes_.size(); ++i) buckets_[classes_[i]].push_back(static_cast<std::uint32_t>(i));
  const auto populated = std::count_if(buckets_.begin(), buckets_.end(), [](const auto& b) { return !b.empty(); });
  if (populated < 2) throw ValueError("training traces cover a single predicted class; DSA needs at least two");
}

DsaIndex build_dsa_index(ActivationTraceSet train_traces) { return DsaIndex(std::move(train_traces)); }

DsaResult dsa(const DsaIndex& index, std::span<const float> test_trace, std::uint32_t predicted_class) {
  if (test_trace.size() != index.dim()) {
    throw DimensionError("test trace has dimension " + std::to_string(test_trace.size()) + ", index has " +
                         std::to_string(index.dim()));
  }
  if (predicted_class >= index.num_classes() || index.bucket(predicted_class).empty()) {
    throw ValueError("no training traces with predicted class " + std::to_string(predicted_class));
  }
  const auto& same = index.bucket(predicted_class);
  if (same.size() == index.size()) throw ValueError("no training traces outside class " + std::to_string(predicted_class));

  DsaResult r;
  r.nearest_same = same.front();
  r.dist_a = l2_distance(test_trace, index.trace(same.front()));
  for (std::size_t k = 1; k < same.size(); ++k) {
    const double d = l2_distance(test_trace, index.trace(same[k]));
    if (d < r.dist_a) {
      r.dist_a = d;
      r.nearest_same = same[k];
    }
  }

  const auto anchor = index.trace(r.nearest_same);
  bool found = false;
  for (std::size_t row = 0; row < index.size(); ++row) {
    if (index.class_of(row) == predicted_class) continue;
    const double d = l2_distance(anchor, index.trace(row));
    if (!found || d < r.dist_b) {
      r.dist_b = d;
      r.nearest_other = static_cast<std::uint32_t>(row);
      found = true;
    }
  }

  if (r.dist_a == 0.0) {
    r.score = 0.0;
  } else if (r.dist_b == 0.0) {
    r.score = std::numeric_limits<double>::infinity();
  } else {
    r.score = r.dist_a / r.dist_b;
  }
  return r;
}

ScoreRecord score_dsa(const DsaIndex& index, std::span<const float> test_trace, std::uint32_t predicted_class,
                      std::uint32_t input_index) {
  return {input_index, Method::dsa, dsa(index, test_trace, predicted_class).score};
}

// ---- batch drivers ---------------------------------------------------------------

std::vector<ScoreRecord> score_softmax_batch(const Network& net, const Tensor& inputs, std::size_t threads) {
  require_classification(net, "softmax");
  const std::size_t n = batch_count(net, inputs);
  std::vector<ScoreRecord> out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    out[i] = score_softmax(net, inputs.sample(i), static_cast<std::uint32_t>(i));
  });
  return out;
}

std::vector<ScoreRecord> score_dropout_batch(const Network& net, const Tensor& inputs, const McConfig& mc,
                                             std::size_t threads) {
  require_mc(net, mc);
  const std::size_t n = batch_count(net, inputs);
  const bool classify = net.task() == Task::classification;
  std::vector<ScoreRecord> out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto idx = static_cast<std::uint32_t>(i);
    out[i] = classify ? score_dropout_cls(net, inputs.sample(i), idx, mc)
                      : score_dropout_reg(net, inputs.sample(i), idx, mc);
  });
  return out;
}

std::vector<ScoreRecord> score_dsa_batch(const DsaIndex& index, const ActivationTraceSet& tests, std::size_t threads) {
  const std::size_t n = tests.count();
  if (tests.predicted_class.size() != n) throw DimensionError("test traces need one predicted class per row");
  std::vector<ScoreRecord> out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    out[i] = score_dsa(index, tests.traces.sample(i), tests.predicted_class[i], static_cast<std::uint32_t>(i));
  });
  return out;
}

}  // namespace prioritizer
