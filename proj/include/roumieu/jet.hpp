#pragma once

// Truncated Taylor series ("jets") and the derivative tables of the bump
//   b(u) = q(u) (1-u^2)^{-m} exp(-kappa / (1-u^2)),  |u| < 1.
// Jets are propagated through log/exp so high orders stay accurate; the
// expanded rational-numerator form loses all digits well before order 20.

#include <cmath>
#include <vector>

#include "roumieu/core.hpp"

namespace roumieu {

/// Coefficients c_0..c_K of a power series in t.
using Series = std::vector<double>;

inline Series series_mul(const Series& a, const Series& b, int order) {
  Series r(static_cast<std::size_t>(order) + 1, 0.0);
  const int na = static_cast<int>(a.size()) - 1, nb = static_cast<int>(b.size()) - 1;
  for (int i = 0; i <= std::min(na, order); ++i) {
    if (a[static_cast<std::size_t>(i)] == 0.0) continue;
    for (int j = 0; j <= std::min(nb, order - i); ++j)
      r[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
  }
  return r;
}

/// Taylor coefficients of p(u + t) for the polynomial p with coefficients `p`.
inline Series poly_shift(const std::vector<double>& p, double u, int order) {
  const int deg = static_cast<int>(p.size()) - 1;
  Series r(static_cast<std::size_t>(order) + 1, 0.0);
  if (deg < 0) return r;
  // Repeated Horner deflation: after pass n, a[n] = p^{(n)}(u) / n!.
  std::vector<double> a(p);
  for (int n = 0; n <= deg; ++n)
    for (int j = deg - 1; j >= n; --j) a[static_cast<std::size_t>(j)] += u * a[static_cast<std::size_t>(j) + 1];
  for (int n = 0; n <= std::min(order, deg); ++n) r[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(n)];
  return r;
}

inline double poly_eval(const std::vector<double>& p, double u) {
  double acc = 0.0;
  for (std::size_t j = p.size(); j-- > 0;) acc = acc * u + p[j];
  return acc;
}

inline std::vector<double> poly_derivative(const std::vector<double>& p) {
  if (p.size() <= 1) return {0.0};
  std::vector<double> r(p.size() - 1);
  for (std::size_t j = 1; j < p.size(); ++j) r[j - 1] = static_cast<double>(j) * p[j];
  return r;
}

inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

/// Boundary cutoff on 1 - u^2 below which the bump and all its derivatives are 0.
inline constexpr double kBoundaryCutoff = 1e-4;

/// Taylor coefficients (in t) of b(u + t) up to `order`; zero outside
/// |u| < 1 and inside the boundary cutoff.
inline Series bump_series(const std::vector<double>& q, int m, int kappa, double u, int order) {
  const auto K = static_cast<std::size_t>(order);
  Series e(K + 1, 0.0);
  const double w0 = 1.0 - u * u;
  if (!(w0 >= kBoundaryCutoff)) return e;
  const double w1 = -2.0 * u, w2 = -1.0;
  Series inv(K + 1, 0.0);
  inv[0] = 1.0 / w0;
  for (std::size_t n = 1; n <= K; ++n) {
    double s = w1 * inv[n - 1];
    if (n >= 2) s += w2 * inv[n - 2];
    inv[n] = -s / w0;
  }
  // g = -m log w - kappa / w
  Series g(K + 1, 0.0);
  g[0] = -m * std::log(w0) - kappa * inv[0];
  for (std::size_t n = 1; n <= K; ++n) {
    double dl = w1 * inv[n - 1];
    if (n >= 2) dl += 2.0 * w2 * inv[n - 2];
    dl /= static_cast<double>(n);
    g[n] = -m * dl - kappa * inv[n];
  }
  e[0] = std::exp(g[0]);
  if (e[0] == 0.0) return e;
  for (std::size_t n = 1; n <= K; ++n) {
    double s = 0.0;
    for (std::size_t j = 1; j <= n; ++j) s += static_cast<double>(j) * g[j] * e[n - j];
    e[n] = s / static_cast<double>(n);
  }
  if (q.size() == 1 && q[0] == 1.0) return e;
  return series_mul(e, poly_shift(q, u, order), order);
}

/// Derivatives d^n/dt^n of b((t - c)/rho) at t, n = 0..order.
inline std::vector<double> series_to_derivatives(const Series& s, double inv_rho) {
  std::vector<double> d(s.size());
  double fact = 1.0, scale = 1.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    if (n > 0) {
      fact *= static_cast<double>(n);
      scale *= inv_rho;
    }
    d[n] = s[n] * fact * scale;
  }
  return d;
}

/// exp(-1/(1-u^2)) with the boundary cutoff.
inline double standard_bump(double u) {
  const double w = 1.0 - u * u;
  return w >= kBoundaryCutoff ? std::exp(-1.0 / w) : 0.0;
}

/// Plain value of the bump, no derivatives.
inline double bump_value(const std::vector<double>& q, int m, int kappa, double u) {
  const double w = 1.0 - u * u;
  if (!(w >= kBoundaryCutoff)) return 0.0;
  double v = std::exp(-kappa / w);
  if (m != 0) v *= std::pow(w, -m);
  if (!(q.size() == 1 && q[0] == 1.0)) v *= poly_eval(q, u);
  return v;
}

}  // namespace roumieu
