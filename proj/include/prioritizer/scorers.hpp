#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "prioritizer/nn_engine.hpp"

namespace prioritizer {

enum class Method { softmax, dropout_cls, dropout_reg, dsa };

const char* to_string(Method method);
Method parse_method(const std::string& text);

/// Priority score of one input; higher means more likely to reveal an error.
struct ScoreRecord {
  std::uint32_t input_index = 0;
  Method method = Method::softmax;
  double score = 0.0;  // may be +inf for degenerate DSA

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

struct McConfig {
  std::uint32_t samples = 10;
  std::uint64_t global_seed = 42;
};

/// Shannon entropy in nats, with 0 ln 0 = 0. Entries must be non-negative
/// and sum to 1 within 1e-4.
double entropy(std::span<const double> p);

/// Entropy of the deterministic softmax output.
ScoreRecord score_softmax(const Network& net, std::span<const float> input, std::uint32_t input_index = 0);

/// Entropy of the mean of T Monte-Carlo softmax vectors.
ScoreRecord score_dropout_cls(const Network& net, std::span<const float> input, std::uint32_t input_index,
                              const McConfig& mc);

/// Predictive variance over T Monte-Carlo outputs:
/// mean_t(f_t . f_t) - E[y] . E[y], accumulated in double (two-pass form).
ScoreRecord score_dropout_reg(const Network& net, std::span<const float> input, std::uint32_t input_index,
                              const McConfig& mc);

/// Predictive variance of an explicit set of sampled outputs (one per row).
double predictive_variance(const std::vector<std::vector<float>>& samples);

// ---- Distance-based surprise adequacy ---------------------------------------

/// Training traces bucketed by model-predicted class. Bucket members keep
/// ascending training-row order, which is what argmin ties resolve to.
class DsaIndex {
 public:
  explicit DsaIndex(ActivationTraceSet train);

  [[nodiscard]] std::size_t dim() const noexcept { return traces_.dim(1); }
  [[nodiscard]] std::size_t num_classes() const noexcept { return buckets_.size(); }
  [[nodiscard]] std::size_t size() const noexcept { return traces_.dim(0); }
  [[nodiscard]] const std::vector<std::uint32_t>& bucket(std::size_t c) const { return buckets_.at(c); }
  [[nodiscard]] std::span<const float> trace(std::size_t row) const { return traces_.sample(row); }
  [[nodiscard]] std::uint32_t class_of(std::size_t row) const { return classes_.at(row); }

 private:
  Tensor traces_;
  std::vector<std::uint32_t> classes_;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

DsaIndex build_dsa_index(ActivationTraceSet train_traces);

struct DsaResult {
  std::uint32_t nearest_same = 0;   // training row of x_a
  std::uint32_t nearest_other = 0;  // training row of x_b
  double dist_a = 0.0;
  double dist_b = 0.0;
  double score = 0.0;
};

/// Exact two-stage nearest-neighbour search. dist_a = 0 gives score 0;
/// otherwise dist_b = 0 gives +inf.
DsaResult dsa(const DsaIndex& index, std::span<const float> test_trace, std::uint32_t predicted_class);

ScoreRecord score_dsa(const DsaIndex& index, std::span<const float> test_trace, std::uint32_t predicted_class,
                      std::uint32_t input_index = 0);

// ---- batch drivers (parallel across inputs, schedule independent) -------------

std::vector<ScoreRecord> score_softmax_batch(const Network& net, const Tensor& inputs, std::size_t threads = 1);
/// Dispatches to the classification or regression dropout score by task.
std::vector<ScoreRecord> score_dropout_batch(const Network& net, const Tensor& inputs, const McConfig& mc,
                                             std::size_t threads = 1);
std::vector<ScoreRecord> score_dsa_batch(const DsaIndex& index, const ActivationTraceSet& tests,
                                         std::size_t threads = 1);

}  // namespace prioritizer
