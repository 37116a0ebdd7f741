#pragma once

// Shared vocabulary: scalars, multi-indices, error types, log-domain helpers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace roumieu {

using Complex = std::complex<double>;
using MultiIndex = std::vector<int>;
using Point = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Relative tolerance for every log-domain inequality comparison. Ties pass.
inline constexpr double kLogRelTol = 1e-12;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or violated construction invariants.
class DomainError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// A sequence was asked to leave the class of monotone sequences increasing to infinity.
class ClassViolation : public Error {
 public:
  using Error::Error;
};

/// The prefix is too short for the requested construction.
class InsufficientPrefix : public Error {
 public:
  using Error::Error;
};

/// Derivative order exceeded what the closed algebra can represent stably.
class ClosureGuardError : public Error {
 public:
  using Error::Error;
};

/// Quadrature failed to reach its tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate, double error)
      : Error(what), estimate_(estimate), error_(error) {}
  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

/// A tensor pairing whose effective support is not compact.
class DivergentPairing : public Error {
 public:
  using Error::Error;
};

class NotOfClass : public Error {
 public:
  NotOfClass(const std::string& what, int escaping_index)
      : Error(what), escaping_index_(escaping_index) {}
  int escaping_index() const noexcept { return escaping_index_; }

 private:
  int escaping_index_;
};

class UnsupportedCombination : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Log-domain comparisons

/// lhs <= rhs with relative slack kLogRelTol scaled by the magnitudes involved.
inline bool log_leq(double lhs, double rhs, double scale = 0.0) {
  if (lhs == kNegInf) return true;
  if (rhs == kInf) return true;
  const double mag = std::max({1.0, std::abs(lhs), std::abs(rhs), std::abs(scale)});
  return lhs <= rhs + kLogRelTol * mag;
}

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double log_binomial(int n, int k) {
  if (k < 0 || k > n) return kNegInf;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r < 1e15 ? std::round(r) : r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// i^n for integer n >= 0.
inline Complex ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// (-i)^n, the scalar relating D^k = (1/i)^{|k|} d^k to real partials.
inline Complex minus_ipow(int n) { return ipow(3 * (n % 4)); }

// ---------------------------------------------------------------------------
// Multi-indices

inline int order(const MultiIndex& k) { return std::accumulate(k.begin(), k.end(), 0); }

inline MultiIndex zero_index(int d) { return MultiIndex(static_cast<std::size_t>(d), 0); }

inline MultiIndex unit_index(int d, int axis) {
  MultiIndex k = zero_index(d);
  k.at(static_cast<std::size_t>(axis)) = 1;
  return k;
}

inline MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw DomainError("multi-index dimension mismatch");
  MultiIndex r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw DomainError("multi-index dimension mismatch");
  MultiIndex r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

/// Componentwise a <= b.
inline bool index_leq(const MultiIndex& a, const MultiIndex& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline double index_factorial(const MultiIndex& k) {
  double r = 1.0;
  for (int v : k) r *= factorial(v);
  return r;
}

inline double index_binomial(const MultiIndex& n, const MultiIndex& k) {
  double r = 1.0;
  for (std::size_t i = 0; i < n.size(); ++i) r *= binomial(n[i], k[i]);
  return r;
}

/// All multi-indices in `dim` variables with total order <= max_order, graded
/// by total order and lexicographically descending within a grade.
inline std::vector<MultiIndex> indices_up_to(int dim, int max_order) {
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<std::size_t>(dim), 0);
  std::function<void(int, int)> rec = [&](int axis, int remaining) {
    if (axis == dim - 1) {
      cur[static_cast<std::size_t>(axis)] = remaining;
      out.push_back(cur);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      cur[static_cast<std::size_t>(axis)] = v;
      rec(axis + 1, remaining - v);
    }
  };
  if (dim == 0) {
    out.push_back({});
    return out;
  }
  for (int total = 0; total <= max_order; ++total) rec(0, total);
  return out;
}

/// All multi-indices j with j <= k componentwise.
inline std::vector<MultiIndex> indices_below(const MultiIndex& k) {
  std::vector<MultiIndex> out;
  MultiIndex cur(k.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t axis) {
    if (axis == k.size()) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= k[axis]; ++v) {
      cur[axis] = v;
      rec(axis + 1);
    }
  };
  rec(0);
  return out;
}

// ---------------------------------------------------------------------------
// Boxes

struct Interval {
  double lo = kNegInf;
  double hi = kInf;

  bool empty() const { return !(lo < hi); }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

inline Interval intersect(Interval a, Interval b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }
inline Interval hull(Interval a, Interval b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

using Box = std::vector<Interval>;

inline Box unbounded_box(int dim) { return Box(static_cast<std::size_t>(dim)); }

inline Box cube(int dim, double half_width, double center = 0.0) {
  return Box(static_cast<std::size_t>(dim), Interval{center - half_width, center + half_width});
}

inline bool box_contains(const Box& outer, const Box& inner) {
  for (std::size_t i = 0; i < outer.size(); ++i)
    if (inner[i].lo < outer[i].lo || inner[i].hi > outer[i].hi) return false;
  return true;
}

}  // namespace roumieu
