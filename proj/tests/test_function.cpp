#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <random>

#include "roumieu/function.hpp"

using namespace roumieu;

namespace {

double oracle_bump(double u) { return std::abs(u) < 1 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

double oracle_integral(std::function<double(double)> f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b);
}

/// Richardson-extrapolated central difference of g at x.
double richardson(const std::function<double(double)>& g, double x, double h = 1e-3) {
  const double d1 = (g(x + h) - g(x - h)) / (2 * h);
  const double d2 = (g(x + h / 2) - g(x - h / 2)) / h;
  return (4 * d2 - d1) / 3;
}

}  // namespace

TEST(Bump, Values) {
  auto b = SmoothFunction::atom({0.0}, {1.0});
  EXPECT_NEAR(b({0.0}).real(), std::exp(-1.0), 1e-15);
  EXPECT_EQ(b({1.5}).real(), 0.0);
  const double u = std::sqrt(1 - 1e-6);
  EXPECT_EQ(b({u}).real(), 0.0);
  auto b2 = SmoothFunction::atom({0.3, -1.0}, {0.5, 2.0});
  EXPECT_NEAR(b2({0.4, 0.0}).real(), oracle_bump(0.2) * oracle_bump(0.5), 1e-15);
}

TEST(Bump, FirstDerivativeStructure) {
  BumpProfile b(0.0, 1.0);
  auto d = b.symbolic_derivative();
  EXPECT_EQ(d->boundary_power(), 2);
  ASSERT_EQ(d->numerator().size(), 2u);
  EXPECT_DOUBLE_EQ(d->numerator()[0], 0.0);
  EXPECT_DOUBLE_EQ(d->numerator()[1], -2.0);
}

TEST(Bump, SymbolicClosureMatchesJets) {
  auto cur = std::make_shared<BumpProfile>(0.2, 0.8);
  const BumpProfile base(0.2, 0.8);
  for (int n = 1; n <= 6; ++n) {
    auto next = cur->symbolic_derivative();
    EXPECT_EQ(next->boundary_power(), cur->boundary_power() + 2);
    EXPECT_LE(next->numerator().size(), cur->numerator().size() + 3);
    cur = next;
    for (double t = -0.5; t <= 0.9; t += 0.1) {
      const double jet = base.value(t, n);
      const double sym = cur->value(t, 0);
      EXPECT_NEAR(jet, sym, 1e-10 * std::max(1.0, std::abs(sym))) << "n=" << n << " t=" << t;
    }
  }
}

TEST(Bump, FiniteDifferenceOracle) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(-0.7, 0.7);
  BumpProfile b(0.0, 1.0);
  for (int k = 1; k <= 4; ++k) {
    double scale = 0;
    for (double t = -0.95; t <= 0.95; t += 0.01) scale = std::max(scale, std::abs(b.value(t, k)));
    for (int s = 0; s < 50; ++s) {
      const double x = U(rng);
      const double fd = richardson([&](double t) { return b.value(t, k - 1); }, x);
      EXPECT_NEAR(fd, b.value(x, k), 1e-6 * std::max(std::abs(b.value(x, k)), 1e-3 * scale));
    }
  }
}

TEST(Bump, BoundaryContinuity) {
  BumpProfile b(0.0, 1.0);
  double prev = 1;
  for (double w = 0.1; w > 1e-5; w /= 2) {
    const double v = std::abs(b.value(std::sqrt(1 - w), 0));
    EXPECT_LE(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 1e-300);
}

TEST(Plateau, ValuesAndDerivativeSupport) {
  PlateauProfile p(-3, -1, 2, 2.5);
  EXPECT_EQ(p.value(-3.5, 0), 0.0);
  EXPECT_EQ(p.value(0, 0), 1.0);
  EXPECT_EQ(p.value(2.6, 0), 0.0);
  for (double t = -3.2; t <= 2.7; t += 0.013) {
    const double v = p.value(t, 0);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    if (t > -1 && t < 2) {
      for (int n = 1; n <= 5; ++n) EXPECT_EQ(p.value(t, n), 0.0);
    }
  }
  // Step oracle: independent tanh-sinh integral of the bump.
  const double z = oracle_integral(oracle_bump, -1, 1);
  for (double t = -2.9; t < -1; t += 0.17) {
    const double u = 2 * (t + 3) / 2 - 1;
    EXPECT_NEAR(p.value(t, 0), oracle_integral(oracle_bump, -1, u) / z, 1e-12);
  }
  // d/dt of the order-0 value matches the exact first derivative.
  for (double t = 2.05; t < 2.5; t += 0.05)
    EXPECT_NEAR(richardson([&](double s) { return p.value(s, 0); }, t, 1e-4), p.value(t, 1), 1e-6);
}

TEST(Plateau, DerivativeIntegratesToJump) {
  auto P = SmoothFunction::from_factors(1, {Factor{make_plateau(-2, -1, 1, 3), {0}, 1}});
  // The derivative integrates to 1 on the left margin and -1 on the right.
  const auto v = integrate(P, {0});
  EXPECT_NEAR(v.real(), 0.0, 1e-10);
  auto Pl = P * SmoothFunction::from_factors(1, {Factor{make_plateau(-3, -2.5, 0, 0.5), {0}, 0}});
  EXPECT_NEAR(integrate(Pl, {0}).real(), 1.0, 1e-10);
}

TEST(Function, MixedPartialsCommute) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> U(-1.2, 1.2);
  auto f = SmoothFunction::atom({0.1, -0.2}, {1.0, 0.7}) +
           SmoothFunction::atom({0.3, 0.0}, {0.8, 1.1}).scaled({0.5, -1.0}) *
               SmoothFunction::atom({-0.1, 0.2}, {0.9, 0.9}) +
           SmoothFunction::from_factors(2, {Factor{make_plateau(-1, -0.5, 0.5, 1), {0}, 0},
                                            Factor{make_bump(0.0, 1.0), {1}, 0}});
  auto fxy = f.partial({1, 0}).partial({0, 1});
  auto fyx = f.partial({0, 1}).partial({1, 0});
  auto f11 = f.partial({1, 1});
  EXPECT_EQ(fxy.key(), fyx.key());
  for (int s = 0; s < 1000; ++s) {
    const Point x{U(rng), U(rng)};
    const Complex a = fxy(x), b = fyx(x), c = f11(x);
    EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a)));
    EXPECT_LE(std::abs(a - c), 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(Function, JetMatchesSymbolicPartials) {
  auto f = SmoothFunction::atom({0.1, -0.2}, {1.0, 0.7}).diag().restricted(3, 0.05).restricted(2, -0.1);
  // f(x0, x1) = phi(x0 - 0.1, x1 + 0.05) after fixing y.
  auto g = SmoothFunction::atom({0.1, -0.2}, {1.0, 0.7}) * SmoothFunction::atom({0.0, 0.1}, {1.5, 1.5});
  for (const auto& h : {g}) {
    const Point x{0.2, -0.1};
    const auto jet = h.jet(x, 6);
    for (std::size_t i = 0; i < jet.indices.size(); ++i) {
      const Complex direct = h.partial(jet.indices[i])(x);
      EXPECT_LE(std::abs(direct - jet.values[i]), 1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
  EXPECT_EQ(f.dim(), 4);
}

TEST(Function, DiagonalComposition) {
  auto phi = SmoothFunction::atom({0.2}, {0.9});
  auto tri = phi.diag();
  for (double x = -1; x <= 1; x += 0.1) {
    EXPECT_EQ(tri({x, 0.0}), phi({x}));
    EXPECT_EQ(tri.partial({2, 1})({x, 0.3}), tri.partial({1, 2})({x, 0.3}));
    EXPECT_EQ(tri.partial({3, 0})({x, 0.3}), phi.partial({3})({x + 0.3}));
  }
}

TEST(Function, ProductOfAlignedBumpsMerges) {
  auto a = SmoothFunction::atom({0.0}, {1.0});
  auto p = a * a;
  ASSERT_EQ(p.terms().size(), 1u);
  ASSERT_EQ(p.terms()[0].factors.size(), 1u);
  const auto* b = dynamic_cast<const BumpProfile*>(p.terms()[0].factors[0].g.get());
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->kappa(), 2);
  for (double x = -0.9; x < 0.9; x += 0.1) EXPECT_NEAR(p({x}).real(), std::pow(a({x}).real(), 2), 1e-15);
}

TEST(Function, IntegrateMatchesOracle1D) {
  integral_cache().clear();
  auto b = SmoothFunction::atom({0.5}, {0.75});
  const double oracle = oracle_integral([](double x) { return oracle_bump((x - 0.5) / 0.75); }, -0.25, 1.25);
  EXPECT_NEAR(integrate(b, {0}).real(), oracle, 1e-10);
  auto c = b * SmoothFunction::poly(1, {1.0, 2.0, -1.0});
  const double oracle2 = oracle_integral(
      [](double x) { return oracle_bump((x - 0.5) / 0.75) * (1 + 2 * x - x * x); }, -0.25, 1.25);
  EXPECT_NEAR(integrate(c, {0}).real(), oracle2, 1e-10);
}

TEST(Function, IntegrateDiagonalMatchesOracle2D) {
  integral_cache().clear();
  auto f = SmoothFunction::atom({0.3}, {0.6}).embedded(2, {0});
  auto g = SmoothFunction::atom({-0.2}, {0.8}).embedded(2, {1});
  auto phi = SmoothFunction::atom({0.1}, {1.0}).diag();
  const Complex v = integrate(f * g * phi, {0, 1});
  boost::math::quadrature::gauss_kronrod<double, 61> gk;
  auto outer = [&](double x) {
    auto inner = [&](double y) {
      return oracle_bump((x - 0.3) / 0.6) * oracle_bump((y + 0.2) / 0.8) * oracle_bump((x + y - 0.1) / 1.0);
    };
    return gk.integrate(inner, -1.0, 0.6, 15, 1e-13);
  };
  const double oracle = gk.integrate(outer, -0.3, 0.9, 15, 1e-12);
  EXPECT_NEAR(v.real(), oracle, 1e-8);
  EXPECT_NEAR(v.real(), oracle, 1e-6 * std::abs(oracle));
}

TEST(Function, UnboundedIntegralThrows) {
  auto one = SmoothFunction::constant(1, 1.0);
  EXPECT_THROW(integrate(one, {0}), DivergentPairing);
  auto p = SmoothFunction::poly(2, {1.0}, 0) * SmoothFunction::atom({0.0}, {1.0}).diag();
  EXPECT_THROW(integrate(p, {0, 1}), DivergentPairing);
}

TEST(Function, TranslateReflectDilate) {
  auto f = SmoothFunction::atom({0.2}, {0.5}).partial({1});
  auto t = f.translated({0.3});
  auto r = f.reflected();
  auto d = f.dilated(2.0);
  for (double x = -1; x <= 1; x += 0.05) {
    EXPECT_NEAR(t({x}).real(), f({x - 0.3}).real(), 1e-14);
    EXPECT_NEAR(r({x}).real(), f({-x}).real(), 1e-14);
    EXPECT_NEAR(d({x}).real(), f({x / 2}).real(), 1e-14);
  }
}
