#pragma once

// Gauss-Legendre rules and adaptive panel integration on bounded intervals.

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "roumieu/core.hpp"

namespace roumieu {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, computed by Newton iteration on P_n.
inline GaussRule compute_gauss_rule(int n) {
  GaussRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return r;
}

/// Cached rule; thread-safe.
inline const GaussRule& gauss_rule(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_rule(n)).first;
  return it->second;
}

template <class F>
double gauss_fixed(F&& f, double a, double b, const GaussRule& rule) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

struct QuadratureOptions {
  double abs_tol = 1e-10;
  // The target is max(abs_tol, rel_tol * coarse estimate of int |f|).
  double rel_tol = 1e-10;
  int rule_points = 20;
  int max_depth = 30;
  // Memoize component integrals (see integrate()).
  bool use_cache = true;
};

namespace quad_detail {

template <class F>
double adapt(F& f, double a, double b, double whole, double tol, int depth, const QuadratureOptions& opt,
             const GaussRule& rule, double& err_acc) {
  const double mid = 0.5 * (a + b);
  const double left = gauss_fixed(f, a, mid, rule);
  const double right = gauss_fixed(f, mid, b, rule);
  const double diff = std::abs(whole - (left + right));
  if (diff <= tol || (b - a) < 1e-13 * std::max(1.0, std::abs(a))) {
    err_acc += diff;
    return left + right;
  }
  if (depth >= opt.max_depth) {
    err_acc += diff;
    throw AccuracyError("adaptive quadrature exceeded its depth limit", left + right, err_acc);
  }
  return adapt(f, a, mid, left, 0.5 * tol, depth + 1, opt, rule, err_acc) +
         adapt(f, mid, b, right, 0.5 * tol, depth + 1, opt, rule, err_acc);
}

}  // namespace quad_detail

/// Integral of f over [a, b], split at the given breakpoints, to absolute
/// tolerance max(opt.abs_tol, opt.rel_tol * int |f|). Each panel gets a share
/// proportional to its length.
template <class F>
double integrate_1d(F&& f, double a, double b, std::vector<double> breaks = {}, const QuadratureOptions& opt = {}) {
  if (!(a < b)) return 0.0;
  if (!std::isfinite(a) || !std::isfinite(b)) throw DivergentPairing("integration over an unbounded interval");
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const GaussRule& rule = gauss_rule(opt.rule_points);
  const double total = b - a;
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (breaks[i] < breaks[i + 1])
      l1 += gauss_fixed([&](double t) { return std::abs(f(t)); }, breaks[i], breaks[i + 1], rule);
  const double tol = std::max(opt.abs_tol, opt.rel_tol * l1);
  double sum = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
    if (!(lo < hi)) continue;
    const double whole = gauss_fixed(f, lo, hi, rule);
    sum += quad_detail::adapt(f, lo, hi, whole, tol * (hi - lo) / total, 0, opt, rule, err);
  }
  return sum;
}

}  // namespace roumieu
