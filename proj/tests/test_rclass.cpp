#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "roumieu/rclass.hpp"

using namespace roumieu;

namespace {

RSequence random_rsequence(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> v{1.0};
  for (int p = 1; p <= n; ++p) v.push_back(v.back() * (1.0 + (U(rng) < 0.3 ? 0.0 : U(rng))));
  if (v.back() <= 1.0) v.back() = 2.0;
  return RSequence::from_values(v);
}

}  // namespace

TEST(RClass, ProductOfLinearIsFactorial) {
  auto R = product_sequence(RSequence::linear(20));
  for (int p = 0; p <= 20; ++p) EXPECT_NEAR(R.log_at(p), std::lgamma(p + 1.0), 1e-12);
  for (int p = 0; p < 20; ++p) EXPECT_NEAR(R.log_at(p + 1) - R.log_at(p), std::log(std::max(1, p + 1)), 1e-12);
}

TEST(RClass, ConstructorRejectsNonGrowth) {
  EXPECT_THROW(RSequence::from_values(std::vector<double>(10, 1.0)), ClassViolation);
  std::vector<double> two(10, 2.0);
  two[0] = 1.0;
  EXPECT_THROW(RSequence::from_values(two, false), ClassViolation);
  EXPECT_THROW(RSequence::from_values({1.0, 3.0, 2.0}), ClassViolation);
  EXPECT_THROW(RSequence::from_values({2.0, 3.0}), ClassViolation);
}

TEST(RClass, ScaleLambda) {
  auto r = RSequence::linear(10);
  auto same = scale_lambda(r, 1.0);
  EXPECT_EQ(same.values(), r.values());
  EXPECT_THROW(scale_lambda(r, 0.5), ClassViolation);
  auto r3 = RSequence::from_values({1, 3, 4, 5, 6});
  auto half = scale_lambda(r3, 0.5);
  EXPECT_DOUBLE_EQ(half.at(0), 1.0);
  EXPECT_DOUBLE_EQ(half.at(1), 1.5);
  // Product of the scaled sequence: lambda^p R_p.
  const auto R = product_sequence(r3), Rb = product_sequence(half);
  for (int p = 0; p <= 4; ++p) EXPECT_NEAR(Rb.log_at(p), p * std::log(0.5) + R.log_at(p), 1e-12);
}

TEST(RClass, Shift) {
  auto r = RSequence::linear(64);
  auto s = shift_rsequence(r, 16.0);
  EXPECT_DOUBLE_EQ(s.at(0), 1.0);
  for (int p = 1; p <= s.prefix(); ++p) EXPECT_DOUBLE_EQ(s.at(p), p + 16.0);
  auto t = shift_rsequence(r, 0.5);
  EXPECT_EQ(t.values(), r.values());
  EXPECT_THROW(shift_rsequence(r, 100.0), InsufficientPrefix);
}

TEST(RClass, SuperadditiveOnRandomSequences) {
  std::mt19937 rng(3);
  for (int t = 0; t < 100; ++t) {
    auto r = random_rsequence(rng, 40);
    EXPECT_TRUE(check_superadditive(product_sequence(r), 1 + t % 3).holds_on_prefix);
  }
  auto R = product_sequence(RSequence::linear(30));
  EXPECT_TRUE(check_superadditive(R).holds_on_prefix);
}

TEST(RClass, PPInequality) {
  EXPECT_TRUE(check_pp_inequality(RSequence::linear(256)).holds_on_prefix);
  std::vector<double> v;
  for (int p = 0; p <= 32; ++p) v.push_back(std::ldexp(1.0, p));
  auto rep = check_pp_inequality(RSequence::from_values(v));
  ASSERT_FALSE(rep.holds_on_prefix);
  // Oracle: first (p, q) by total, then p, with sum_{i=p+1}^{p+q} i > p + q + sum_{i=1}^q i.
  std::vector<long long> first;
  for (int total = 0; total <= 32 && first.empty(); ++total)
    for (int p = 0; p <= total; ++p) {
      const int q = total - p;
      const double lhs = (total * (total + 1) / 2.0);
      const double rhs = total + p * (p + 1) / 2.0 + q * (q + 1) / 2.0;
      if (lhs > rhs) {
        first = {p, q};
        break;
      }
    }
  EXPECT_EQ(*rep.first_violation, first);
}

TEST(RClass, PPMinorantFixedPoint) {
  auto r = pp_minorant(RSequence::linear(50));
  for (int p = 1; p <= 50; ++p) EXPECT_NEAR(r.at(p), p, 1e-12);
}

TEST(RClass, PPMinorantGeometric) {
  std::vector<double> v;
  for (int p = 0; p <= 30; ++p) v.push_back(std::ldexp(1.0, p));
  auto r = pp_minorant(RSequence::from_values(v));
  for (int p = 1; p <= 30; ++p) EXPECT_NEAR(r.at(p), 2.0 * p, 1e-12);
}

TEST(RClass, PPMinorantProperties) {
  std::mt19937 rng(5);
  std::vector<RSequence> fixtures;
  std::vector<double> slow{1.0};
  for (int p = 1; p <= 9; ++p) slow.push_back(1.0 + 0.1 * p);
  for (int p = 10; p <= 64; ++p) slow.push_back(p + 1.0);
  fixtures.push_back(RSequence::from_values(slow));
  for (int t = 0; t < 9; ++t) fixtures.push_back(random_rsequence(rng, 64));
  for (const auto& s : fixtures) {
    auto r = pp_minorant(s);
    for (int p = 1; p <= s.prefix(); ++p) {
      EXPECT_LE(r.at(p), s.at(p) * (1 + 1e-12));
      EXPECT_LE(r.at(p - 1), r.at(p) * (1 + 1e-12));
      if (p >= 2) EXPECT_LE(r.at(p) / p, r.at(p - 1) / (p - 1) * (1 + 1e-12));
    }
    EXPECT_TRUE(check_pp_inequality(r).holds_on_prefix);
    // Intermediate bound R_{p+q}/(R_p R_q) <= C(p+q, q).
    const auto R = product_sequence(r);
    for (int t = 0; t < 200; ++t) {
      const int p = static_cast<int>(rng() % 32), q = static_cast<int>(rng() % 32);
      EXPECT_LE(R.log_at(p + q) - R.log_at(p) - R.log_at(q), log_binomial(p + q, q) + 1e-9);
    }
  }
}
