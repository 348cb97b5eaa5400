#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "prioritizer/model_format.hpp"
#include "prioritizer/scorers.hpp"

namespace prioritizer {

/// Regression outputs count as correct when their MAE is at most this.
inline constexpr double kDefaultMaeThreshold = 0.25;

struct CorrectnessVector {
  std::vector<bool> correct;
  Task task = Task::classification;
  double threshold = kDefaultMaeThreshold;  // regression only

  [[nodiscard]] std::size_t size() const noexcept { return correct.size(); }
  [[nodiscard]] std::size_t error_count() const;
};

/// Classification: correct iff argmax(prediction row) == label. Labels are
/// u32 class indices of shape [N] or [N,1].
/// Regression: correct iff mean |prediction - label| <= threshold over the
/// output dimensions. Labels are f32 with the predictions' shape.
CorrectnessVector derive_correctness(const Tensor& predictions, const AnyTensor& labels, Task task,
                                     double threshold = kDefaultMaeThreshold);

/// Input indices by descending score; equal scores keep input order and
/// +inf sorts first. Records must share one method and contain no NaN.
std::vector<std::uint32_t> rank_by_score(std::span<const ScoreRecord> scores);

struct EvalReport {
  std::vector<std::uint32_t> permutation;
  std::vector<std::uint32_t> is_error;   // per rank, 0/1
  std::vector<std::uint32_t> cum_errors; // cum_errors[k]: errors among the first k+1
  std::size_t total_errors = 0;
  double apfd_percent = 0.0;  // filled by evaluate(); NaN-free only when total_errors > 0
};

/// Curve part of the report; apfd_percent is left at 0.
EvalReport cumulative_error_curve(std::span<const std::uint32_t> permutation, const CorrectnessVector& correctness);

/// 100 * sum_k cum_errors[k] / sum_{k=1..n} min(k, m), unit-step area.
double apfd_score(std::span<const std::uint32_t> cum_errors, std::size_t total_errors);

/// Curve plus APFD in one call.
EvalReport evaluate(std::span<const std::uint32_t> permutation, const CorrectnessVector& correctness);

/// Either a fraction in (0, 1] (rounded up to whole inputs) or an absolute count.
struct Fraction {
  double value = 0.01;
};
struct TopK {
  std::size_t k = 1;
};
using Selection = std::variant<Fraction, TopK>;

/// Number of inputs a selection picks out of n.
std::size_t selection_size(const Selection& selection, std::size_t n);

/// Leading indices of rank_by_score(scores), in priority order.
std::vector<std::uint32_t> select_top(std::span<const ScoreRecord> scores, const Selection& selection);

}  // namespace prioritizer
