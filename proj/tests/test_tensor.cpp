#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "prioritizer/errors.hpp"
#include "prioritizer/tensor.hpp"
#include "test_support.hpp"

using namespace prioritizer;
using prioritizer::testing::random_tensor;

namespace {

Tensor identity(std::size_t n) {
  Tensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0f;
  return t;
}

}  // namespace

TEST(Tensor, RejectsDataShapeMismatch) {
  EXPECT_THROW(Tensor({2, 3}, std::vector<float>(5)), DimensionError);
  EXPECT_THROW(Tensor(Shape{}), DimensionError);
  EXPECT_THROW(Tensor({2, 0}), DimensionError);
}

TEST(Tensor, SampleSlicing) {
  Tensor t({3, 2}, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(t.sample_size(), 2u);
  EXPECT_EQ(t.sample(1)[0], 3.0f);
  EXPECT_EQ(t.sample_tensor(2), Tensor({2}, {5, 6}));
  EXPECT_THROW((void)t.sample(3), DimensionError);
}

TEST(Matmul, IdentityIsExact) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor a = random_tensor({3, 3}, rng, -100.0f, 100.0f);
    EXPECT_EQ(matmul(identity(3), a), a);
    EXPECT_EQ(matmul(a, identity(3)), a);
  }
}

TEST(Matmul, Scalar) { EXPECT_EQ(matmul(Tensor({1, 1}, {2}), Tensor({1, 1}, {3})), Tensor({1, 1}, {6})); }

TEST(Matmul, MatchesTripleLoop) {
  std::mt19937_64 rng(7);
  const Tensor a = random_tensor({4, 3}, rng);
  const Tensor b = random_tensor({3, 5}, rng);
  const Tensor c = matmul(a, b);
  ASSERT_EQ(c.shape(), (Shape{4, 5}));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      double expect = 0.0;
      for (std::size_t k = 0; k < 3; ++k) expect += static_cast<double>(a.at(i, k)) * b.at(k, j);
      EXPECT_NEAR(c.at(i, j), expect, 1e-6);
    }
  }
}

TEST(Matmul, ShapeMismatch) {
  EXPECT_THROW(matmul(Tensor({2, 3}), Tensor({2, 3})), DimensionError);
  EXPECT_THROW(matmul(Tensor({6}), Tensor({6, 1})), DimensionError);
}

TEST(L2Distance, Basics) {
  const std::vector<float> a{0, 0}, b{3, 4};
  EXPECT_EQ(l2_distance(a, a), 0.0);
  EXPECT_EQ(l2_distance(a, b), 5.0);
  EXPECT_THROW(l2_distance(a, std::vector<float>{1, 2, 3}), DimensionError);
}

TEST(L2Distance, MatchesDirectSummation) {
  std::mt19937_64 rng(3);
  const Tensor a = random_tensor({16}, rng), b = random_tensor({16}, rng);
  double sum = 0.0;
  for (std::size_t i = 0; i < 16; ++i) sum += std::pow(static_cast<double>(a[i]) - b[i], 2);
  EXPECT_NEAR(l2_distance(a.values(), b.values()), std::sqrt(sum), 1e-6);
}

TEST(L2Distance, SymmetricNonNegativeZeroIffEqual) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Tensor a = random_tensor({8}, rng), b = random_tensor({8}, rng);
    const double d = l2_distance(a.values(), b.values());
    EXPECT_EQ(d, l2_distance(b.values(), a.values()));
    EXPECT_GT(d, 0.0);
    EXPECT_EQ(l2_distance(a.values(), a.values()), 0.0);
  }
}

TEST(Argmax, Basics) {
  EXPECT_EQ(argmax(std::vector<float>{0.1f, 0.8f, 0.1f}), 1u);
  EXPECT_EQ(argmax(std::vector<float>{0.5f, 0.5f}), 0u);
  EXPECT_THROW(argmax(std::vector<float>{}), ValueError);
}

TEST(Argmax, MatchesLinearScanAndIsShiftInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> small(0, 4);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<float> v(10);
    for (float& x : v) x = static_cast<float>(small(rng));  // plenty of ties
    std::size_t expect = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] > v[expect]) expect = i;
    }
    ASSERT_EQ(argmax(v), expect);
    std::vector<float> shifted(v);
    for (float& x : shifted) x += 3.0f;
    ASSERT_EQ(argmax(shifted), expect);
  }
}
