#include "prioritizer/prioritize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "prioritizer/errors.hpp"

namespace prioritizer {

std::size_t CorrectnessVector::error_count() const {
  return static_cast<std::size_t>(std::count(correct.begin(), correct.end(), false));
}

CorrectnessVector derive_correctness(const Tensor& predictions, const AnyTensor& labels, Task task,
                                     double threshold) {
  if (predictions.rank() != 2) throw DimensionError("predictions must be an [N, out] matrix");
  const std::size_t n = predictions.dim(0);
  const std::size_t out = predictions.dim(1);

  CorrectnessVector result;
  result.task = task;
  result.threshold = threshold;
  result.correct.resize(n);

  if (task == Task::classification) {
    const auto* idx = std::get_if<IndexTensor>(&labels);
    if (idx == nullptr) throw FormatError("classification labels must be u32 class indices");
    const bool column = idx->shape.size() == 2 && idx->shape[1] == 1;
    if (!(idx->shape.size() == 1 || column) || idx->shape[0] != n) {
      throw DimensionError("classification labels must have shape [N] or [N,1] with N = " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t label = idx->data[i];
      if (label >= out) {
        throw ValueError("label " + std::to_string(label) + " at row " + std::to_string(i) + " outside [0, " +
                         std::to_string(out) + ")");
      }
      result.correct[i] = argmax(predictions.sample(i)) == label;
    }
    return result;
  }

  if (!(threshold >= 0.0) || !std::isfinite(threshold)) throw ValueError("MAE threshold must be finite and >= 0");
  const auto* target = std::get_if<Tensor>(&labels);
  if (target == nullptr) throw FormatError("regression labels must be f32 targets");
  if (target->shape() != predictions.shape()) throw DimensionError("regression labels must match the predictions' shape");
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = predictions.sample(i);
    const auto y = target->sample(i);
    double abs_sum = 0.0;
    for (std::size_t j = 0; j < out; ++j) abs_sum += std::abs(static_cast<double>(p[j]) - static_cast<double>(y[j]));
    result.correct[i] = abs_sum / static_cast<double>(out) <= threshold;
  }
  return result;
}

std::vector<std::uint32_t> rank_by_score(std::span<const ScoreRecord> scores) {
  if (scores.empty()) return {};
  const Method method = scores.front().method;
  for (const auto& r : scores) {
    if (r.method != method) throw ValueError("cannot rank scores from different methods together");
    if (std::isnan(r.score)) throw ValueError("score of input " + std::to_string(r.input_index) + " is NaN");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a].score > scores[b].score; });
  std::vector<std::uint32_t> perm;
  perm.reserve(order.size());
  for (std::size_t k : order) perm.push_back(scores[k].input_index);
  return perm;
}

EvalReport cumulative_error_curve(std::span<const std::uint32_t> permutation, const CorrectnessVector& correctness) {
  const std::size_t n = correctness.size();
  if (permutation.size() != n) {
    throw DimensionError("permutation length " + std::to_string(permutation.size()) + " != input count " +
                         std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (std::uint32_t i : permutation) {
    if (i >= n || seen[i]) throw ValueError("ordering is not a permutation of [0, " + std::to_string(n) + ")");
    seen[i] = true;
  }

  EvalReport report;
  report.permutation.assign(permutation.begin(), permutation.end());
  report.is_error.reserve(n);
  report.cum_errors.reserve(n);
  std::uint32_t running = 0;
  for (std::uint32_t i : permutation) {
    const std::uint32_t err = correctness.correct[i] ? 0 : 1;
    running += err;
    report.is_error.push_back(err);
    report.cum_errors.push_back(running);
  }
  report.total_errors = running;
  return report;
}

double apfd_score(std::span<const std::uint32_t> cum_errors, std::size_t total_errors) {
  if (total_errors == 0) throw ValueError("no error-revealing inputs; APFD is undefined");
  const std::size_t n = cum_errors.size();
  if (n == 0) throw ValueError("empty cumulative error curve");
  std::uint64_t area = 0;
  std::uint64_t ideal = 0;
  std::uint32_t previous = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint32_t c = cum_errors[k];
    if (c < previous || c - previous > 1) throw ValueError("cumulative error curve must rise by 0 or 1 per step");
    previous = c;
    area += c;
    ideal += std::min<std::uint64_t>(k + 1, total_errors);
  }
  if (previous != total_errors) {
    throw ValueError("curve ends at " + std::to_string(previous) + " errors, expected " + std::to_string(total_errors));
  }
  return 100.0 * static_cast<double>(area) / static_cast<double>(ideal);
}

EvalReport evaluate(std::span<const std::uint32_t> permutation, const CorrectnessVector& correctness) {
  EvalReport report = cumulative_error_curve(permutation, correctness);
  report.apfd_percent = apfd_score(report.cum_errors, report.total_errors);
  return report;
}

std::size_t selection_size(const Selection& selection, std::size_t n) {
  if (const auto* f = std::get_if<Fraction>(&selection)) {
    if (!(f->value > 0.0 && f->value <= 1.0)) throw ValueError("fraction must lie in (0, 1]");
    // The small slack keeps products like 0.01 * 60000 from rounding up past 600.
    const double exact = f->value * static_cast<double>(n);
    const auto k = static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
    return std::clamp<std::size_t>(k, n == 0 ? 0 : 1, n);
  }
  const std::size_t k = std::get<TopK>(selection).k;
  if (k < 1 || k > n) throw ValueError("k must lie in [1, " + std::to_string(n) + "]");
  return k;
}

std::vector<std::uint32_t> select_top(std::span<const ScoreRecord> scores, const Selection& selection) {
  const std::size_t k = selection_size(selection, scores.size());
  auto perm = rank_by_score(scores);
  perm.resize(k);
  return perm;
}

}  // namespace prioritizer
