#pragma once

// Exhaustive two-stage nearest-neighbour oracle for DSA. Shares no code with
// the library: it materialises every pairwise distance it needs and picks
// minima by (distance, row) lexicographic order.

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace prioritizer::testing {

struct DsaOracleResult {
  std::size_t x_a = 0;
  std::size_t x_b = 0;
  double dist_a = 0.0;
  double dist_b = 0.0;
  double score = 0.0;
};

inline double oracle_distance(const std::vector<float>& a, const std::vector<float>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

inline DsaOracleResult dsa_oracle(const std::vector<std::vector<float>>& train, const std::vector<std::uint32_t>& classes,
                                  const std::vector<float>& query, std::uint32_t query_class) {
  std::vector<std::pair<double, std::size_t>> same;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (classes[i] == query_class) same.emplace_back(oracle_distance(query, train[i]), i);
  }
  DsaOracleResult r;
  const auto best_a = *std::min_element(same.begin(), same.end());
  r.dist_a = best_a.first;
  r.x_a = best_a.second;

  std::vector<std::pair<double, std::size_t>> other;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (classes[i] != query_class) other.emplace_back(oracle_distance(train[r.x_a], train[i]), i);
  }
  const auto best_b = *std::min_element(other.begin(), other.end());
  r.dist_b = best_b.first;
  r.x_b = best_b.second;

  if (r.dist_a == 0.0) {
    r.score = 0.0;
  } else if (r.dist_b == 0.0) {
    r.score = std::numeric_limits<double>::infinity();
  } else {
    r.score = r.dist_a / r.dist_b;
  }
  return r;
}

}  // namespace prioritizer::testing

#include <random>
#include <set>

namespace prioritizer::testing {

struct DsaInstance {
  std::vector<std::vector<float>> train;
  std::vector<std::uint32_t> classes;
  std::size_t num_classes = 0;
  std::vector<float> query;
  std::uint32_t query_class = 0;
};

/// Random DSA instance. Half the instances live on a small integer grid so
/// exact distance ties occur; a quarter of the queries copy a training trace
/// (dist_a = 0) and a quarter sit next to a trace duplicated in another class
/// (dist_b = 0).
inline DsaInstance random_dsa_instance(std::mt19937_64& rng, std::size_t max_n = 500, std::size_t max_d = 64,
                                       std::size_t max_c = 10) {
  auto pick = [&rng](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  DsaInstance inst;
  const std::size_t n = pick(2, max_n);
  const std::size_t d = pick(1, max_d);
  inst.num_classes = pick(2, max_c);
  const bool grid = pick(0, 1) == 1;
  std::uniform_real_distribution<float> uni(-1.0f, 1.0f);
  auto sample_value = [&]() { return grid ? static_cast<float>(static_cast<int>(pick(0, 4)) - 2) : uni(rng); };

  inst.train.assign(n, std::vector<float>(d));
  for (auto& row : inst.train)
    for (float& v : row) v = sample_value();
  inst.classes.resize(n);
  for (auto& c : inst.classes) c = static_cast<std::uint32_t>(pick(0, inst.num_classes - 1));
  if (std::set<std::uint32_t>(inst.classes.begin(), inst.classes.end()).size() < 2) {
    inst.classes[0] = 0;
    inst.classes[1] = 1;
  }

  const std::size_t anchor = pick(0, n - 1);
  inst.query_class = inst.classes[anchor];
  switch (pick(0, 3)) {
    case 0:  // exact copy of a same-class trace
      inst.query = inst.train[anchor];
      break;
    case 1: {  // anchor duplicated into another class, query perturbed off it
      std::size_t other = pick(0, n - 1);
      if (other == anchor) other = (anchor + 1) % n;
      inst.train[other] = inst.train[anchor];
      if (inst.classes[other] == inst.query_class) {
        inst.classes[other] = static_cast<std::uint32_t>((inst.query_class + 1) % inst.num_classes);
      }
      inst.query = inst.train[anchor];
      inst.query[pick(0, d - 1)] += 0.001f;
      break;
    }
    default:
      inst.query.resize(d);
      for (float& v : inst.query) v = sample_value();
      break;
  }
  // The query class must keep at least one member and leave one outside.
  bool inside = false, outside = false;
  for (auto c : inst.classes) (c == inst.query_class ? inside : outside) = true;
  if (!inside) inst.classes[anchor] = inst.query_class;
  if (!outside) inst.classes[(anchor + 1) % n] = static_cast<std::uint32_t>((inst.query_class + 1) % inst.num_classes);
  return inst;
}

}  // namespace prioritizer::testing
