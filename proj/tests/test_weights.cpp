#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "roumieu/weights.hpp"

using namespace roumieu;

TEST(Weights, GevreyValues) {
  auto w = WeightSequence::gevrey(2.0, 4);
  const double expect[] = {1, 1, 4, 36, 576};
  for (int p = 0; p <= 4; ++p) EXPECT_NEAR(w.at(p), expect[p], 1e-9 * expect[p]);
}

TEST(Weights, FactorialValues) {
  auto w = WeightSequence::factorial(3);
  const double expect[] = {1, 1, 2, 6};
  for (int p = 0; p <= 3; ++p) EXPECT_NEAR(w.at(p), expect[p], 1e-12 * expect[p]);
}

TEST(Weights, ExplicitTableRejected) {
  EXPECT_THROW(WeightSequence::from_table({1, 2, 0.5}), DomainError);
  EXPECT_THROW(WeightSequence::from_table({1, -2, 3}), DomainError);
}

TEST(Weights, ExplicitTableNormalized) {
  auto w = WeightSequence::from_table({2, 4, 8});
  EXPECT_DOUBLE_EQ(w.at(0), 1.0);
  EXPECT_NEAR(w.at(2), 4.0, 1e-12);
}

TEST(Weights, GevreyM1AndProduct) {
  auto w = WeightSequence::gevrey(2.0, 256);
  auto m1 = check_condition(w, Condition::M1);
  EXPECT_TRUE(m1.holds_on_prefix);
  EXPECT_FALSE(m1.first_violation.has_value());
  EXPECT_EQ(m1.prefix_length, 256);
  EXPECT_TRUE(check_product_inequality(w).holds_on_prefix);
}

TEST(Weights, GevreyM2Constants) {
  auto w = WeightSequence::gevrey(2.0, 256);
  auto r = check_condition(w, Condition::M2);
  ASSERT_TRUE(r.holds_on_prefix);
  EXPECT_EQ(r.witness_constants->A, 1.0);
  EXPECT_EQ(r.witness_constants->H, 4.0);
  // Brute force: C(p,q)^2 <= 4^p.
  for (int p = 0; p <= 256; ++p)
    for (int q = 0; q <= p; ++q) ASSERT_LE(2.0 * log_binomial(p, q), p * std::log(4.0) + 1e-9);
}

TEST(Weights, GevreyM2PrimeAndM3) {
  auto w = WeightSequence::gevrey(2.0, 256);
  auto m2p = check_condition(w, Condition::M2prime);
  ASSERT_TRUE(m2p.holds_on_prefix);
  // M_p / M_{p-1} = p^2 <= A H^p.
  for (int p = 1; p <= 256; ++p)
    ASSERT_LE(2 * std::log(p), std::log(m2p.witness_constants->A) + p * std::log(m2p.witness_constants->H) + 1e-9);
  auto m3 = check_condition(w, Condition::M3);
  EXPECT_TRUE(m3.holds_on_prefix);
  EXPECT_NEAR(*m3.tail_exponent, 2.0, 1e-9);
  auto m3p = check_condition(w, Condition::M3prime);
  EXPECT_TRUE(m3p.holds_on_prefix);
  // sum 1/p^2 = pi^2/6.
  EXPECT_NEAR(*m3p.partial_sum, M_PI * M_PI / 6, 1e-4);
}

TEST(Weights, FactorialFailsM3Prime) {
  auto w = WeightSequence::factorial(256);
  auto r = check_condition(w, Condition::M3prime);
  EXPECT_FALSE(r.holds_on_prefix);
  ASSERT_TRUE(r.first_violation.has_value());
  // Oracle: direct harmonic summation.
  double h = 0;
  long long n = 0;
  while (h <= 10.0) h += 1.0 / static_cast<double>(++n);
  EXPECT_EQ(r.first_violation->at(0), n);
  EXPECT_FALSE(check_condition(w, Condition::M3).holds_on_prefix);
}

TEST(Weights, ShortPrefixRejectedForTailConditions) {
  auto w = WeightSequence::gevrey(2.0, 8);
  EXPECT_THROW(check_condition(w, Condition::M3), DomainError);
}

TEST(Weights, ExplicitProductInequality) {
  auto w = WeightSequence::from_table({1, 1, 1.5});
  EXPECT_TRUE(check_product_inequality(w).holds_on_prefix);
}

TEST(Weights, MultiIndexWeight) {
  auto w = WeightSequence::gevrey(2.0, 16);
  EXPECT_NEAR(multiindex_weight(w, {1, 1}), 4.0, 1e-12);
  EXPECT_NEAR(multiindex_weight(w, {2, 1}), 36.0, 1e-10);
  EXPECT_DOUBLE_EQ(multiindex_weight(w, {0, 0, 0}), 1.0);
  EXPECT_THROW(multiindex_weight(w, {10, 7}), OutOfRangeError);
  std::mt19937 rng(7);
  for (int t = 0; t < 50; ++t) {
    MultiIndex k{static_cast<int>(rng() % 5), static_cast<int>(rng() % 5), static_cast<int>(rng() % 5)};
    MultiIndex perm = k;
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(multiindex_weight(w, k), multiindex_weight(w, perm));
  }
}

TEST(Weights, AssociatedFunction) {
  auto g = WeightSequence::gevrey(2.0, 64);
  EXPECT_EQ(associated_function(g, 1.0), 0.0);
  EXPECT_EQ(associated_function(g, 1e-8), 0.0);
  auto f = WeightSequence::factorial(64);
  double best = 0;
  for (int p = 0; p <= 64; ++p) best = std::max(best, p * std::log(10.0) - std::lgamma(p + 1.0));
  EXPECT_NEAR(associated_function(f, 10.0), best, 1e-12);
  double prev = 0;
  for (double rho = 0.1; rho < 100; rho *= 1.3) {
    const double v = associated_function(f, rho);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Weights, M1ImpliesProductInequality) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    // Log-convex from nondecreasing increments, M_0 = 1.
    std::vector<double> logs{0.0};
    double inc = U(rng);
    for (int p = 1; p <= 40; ++p) {
      logs.push_back(logs.back() + inc);
      inc += U(rng);
    }
    auto w = WeightSequence::from_logs(logs);
    ASSERT_TRUE(check_condition(w, Condition::M1).holds_on_prefix);
    EXPECT_TRUE(check_product_inequality(w).holds_on_prefix);
  }
}
