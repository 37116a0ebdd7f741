#pragma once

// One-variable building blocks g(t): bumps, smooth plateaus, polynomials.
// Every profile knows all of its derivatives and the supports of each.

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "roumieu/core.hpp"
#include "roumieu/jet.hpp"
#include "roumieu/quadrature.hpp"

namespace roumieu {

// ---------------------------------------------------------------------------
// Interval unions

using IntervalSet = std::vector<Interval>;

inline IntervalSet whole_line() { return {Interval{kNegInf, kInf}}; }

inline IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet r;
  for (const auto& x : a)
    for (const auto& y : b) {
      const Interval z = intersect(x, y);
      if (z.lo < z.hi) r.push_back(z);
    }
  std::sort(r.begin(), r.end(), [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
  return r;
}

inline Interval hull(const IntervalSet& s) {
  if (s.empty()) return {0.0, 0.0};
  Interval h = s.front();
  for (const auto& i : s) h = {std::min(h.lo, i.lo), std::max(h.hi, i.hi)};
  return h;
}

inline bool bounded(const IntervalSet& s) {
  for (const auto& i : s)
    if (!i.bounded()) return false;
  return true;
}

inline IntervalSet shifted(const IntervalSet& s, double by) {
  IntervalSet r(s);
  for (auto& i : r) i = {i.lo + by, i.hi + by};
  return r;
}

inline std::string hex(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

// ---------------------------------------------------------------------------

class Profile;
using ProfilePtr = std::shared_ptr<const Profile>;

class Profile {
 public:
  virtual ~Profile() = default;
  /// g^{(n)}(t).
  virtual double value(double t, int n) const = 0;
  /// g^{(j)}(t) for j = 0..order.
  virtual std::vector<double> derivatives(double t, int order) const = 0;
  /// Closed support of g^{(n)}; empty when g^{(n)} vanishes identically.
  virtual IntervalSet support(int n) const = 0;
  /// Points where g (or one of its derivatives) is not analytic.
  virtual std::vector<double> breakpoints() const = 0;
  virtual std::string key() const = 0;
  /// t -> g(t - s)
  virtual ProfilePtr translated(double s) const = 0;
  /// t -> g(-t)
  virtual ProfilePtr reflected() const = 0;
  /// t -> g(t / a), a > 0
  virtual ProfilePtr dilated(double a) const = 0;
  virtual bool is_one() const { return false; }
};

/// amp * q(u) (1-u^2)^{-m} exp(-kappa/(1-u^2)) with u = (t - c)/rho.
class BumpProfile final : public Profile {
 public:
  BumpProfile(double c, double rho, std::vector<double> q = {1.0}, int m = 0, int kappa = 1, double amp = 1.0)
      : c_(c), rho_(rho), q_(std::move(q)), m_(m), kappa_(kappa), amp_(amp) {
    if (!(rho_ > 0.0) || !std::isfinite(rho_)) throw DomainError("bump radius must be positive and finite");
    if (kappa_ < 1) throw DomainError("bump exponent multiplicity must be >= 1");
    if (m_ < 0) throw DomainError("boundary power must be nonnegative");
    if (q_.empty()) q_ = {0.0};
  }

  double center() const { return c_; }
  double radius() const { return rho_; }
  const std::vector<double>& numerator() const { return q_; }
  int boundary_power() const { return m_; }
  int kappa() const { return kappa_; }
  double amplitude() const { return amp_; }

  double value(double t, int n) const override {
    const double u = (t - c_) / rho_;
    if (n == 0) return amp_ * bump_value(q_, m_, kappa_, u);
    return derivatives(t, n)[static_cast<std::size_t>(n)];
  }

  std::vector<double> derivatives(double t, int order) const override {
    const double u = (t - c_) / rho_;
    auto d = series_to_derivatives(bump_series(q_, m_, kappa_, u, order), 1.0 / rho_);
    for (auto& v : d) v *= amp_;
    return d;
  }

  IntervalSet support(int) const override { return {Interval{c_ - rho_, c_ + rho_}}; }
  std::vector<double> breakpoints() const override { return {c_ - rho_, c_ + rho_}; }

  std::string key() const override {
    std::string k = "B(" + hex(c_) + "," + hex(rho_) + "," + std::to_string(m_) + "," + std::to_string(kappa_) + "," +
                    hex(amp_) + ";";
    for (double v : q_) k += hex(v) + ",";
    return k + ")";
  }

  ProfilePtr translated(double s) const override {
    return std::make_shared<BumpProfile>(c_ + s, rho_, q_, m_, kappa_, amp_);
  }
  ProfilePtr reflected() const override {
    std::vector<double> q(q_);
    for (std::size_t j = 1; j < q.size(); j += 2) q[j] = -q[j];
    return std::make_shared<BumpProfile>(-c_, rho_, q, m_, kappa_, amp_);
  }
  ProfilePtr dilated(double a) const override {
    if (!(a > 0.0)) throw DomainError("dilation factor must be positive");
    return std::make_shared<BumpProfile>(c_ * a, rho_ * a, q_, m_, kappa_, amp_);
  }

  /// Exact derivative as a new element of the same family: numerator
  /// q' w^2 + 2 m u q w - 2 kappa u q, boundary power m + 2.
  std::shared_ptr<BumpProfile> symbolic_derivative() const {
    const std::vector<double> w{1.0, 0.0, -1.0};
    const std::vector<double> u{0.0, 1.0};
    std::vector<double> a = poly_mul(poly_derivative(q_), poly_mul(w, w));
    std::vector<double> b = poly_mul(poly_mul(u, q_), w);
    for (auto& v : b) v *= 2.0 * m_;
    std::vector<double> c = poly_mul(u, q_);
    for (auto& v : c) v *= -2.0 * kappa_;
    std::vector<double> sum(std::max({a.size(), b.size(), c.size()}), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) sum[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) sum[i] += b[i];
    for (std::size_t i = 0; i < c.size(); ++i) sum[i] += c[i];
    while (sum.size() > 1 && sum.back() == 0.0) sum.pop_back();
    return std::make_shared<BumpProfile>(c_, rho_, sum, m_ + 2, kappa_, amp_ / rho_);
  }

  bool aligned_with(const BumpProfile& o) const { return c_ == o.c_ && rho_ == o.rho_; }

  /// Pointwise product of two bumps on the same interval.
  std::shared_ptr<BumpProfile> times(const BumpProfile& o) const {
    if (!aligned_with(o)) throw DomainError("bump product needs equal centers and radii");
    return std::make_shared<BumpProfile>(c_, rho_, poly_mul(q_, o.q_), m_ + o.m_, kappa_ + o.kappa_, amp_ * o.amp_);
  }

 private:
  double c_, rho_;
  std::vector<double> q_;
  int m_, kappa_;
  double amp_;
};

namespace plateau_detail {

inline constexpr int kCells = 512;

/// Cumulative integrals of the standard bump exp(-1/(1-u^2)) at u_i = -1 + 2i/kCells.
struct StepTable {
  std::array<double, kCells + 1> cum{};
  double total = 0.0;
  double h = 2.0 / kCells;

  StepTable() {
    const GaussRule& g16 = gauss_rule(16);
    auto b = [](double u) { return standard_bump(u); };
    cum[0] = 0.0;
    for (int i = 0; i < kCells; ++i) {
      const double a = -1.0 + i * h;
      cum[static_cast<std::size_t>(i) + 1] = cum[static_cast<std::size_t>(i)] + gauss_fixed(b, a, a + h, g16);
    }
    total = cum[kCells];
  }
};

inline const StepTable& step_table() {
  static const StepTable table;
  return table;
}

/// S(u) = int_{-1}^u b / int_{-1}^1 b.
inline double step(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const StepTable& t = step_table();
  int i = static_cast<int>(std::floor((u + 1.0) / t.h));
  i = std::clamp(i, 0, kCells - 1);
  const double a = -1.0 + i * t.h;
  static const GaussRule& g8 = gauss_rule(8);
  auto b = [](double v) { return standard_bump(v); };
  const double partial = u > a ? gauss_fixed(b, a, u, g8) : 0.0;
  return (t.cum[static_cast<std::size_t>(i)] + partial) / t.total;
}

inline double normalizer() { return step_table().total; }

}  // namespace plateau_detail

/// Smooth plateau: 0 outside [lo_out, hi_out], 1 on [lo_in, hi_in], built from
/// the normalized integral of the standard bump on each margin.
class PlateauProfile final : public Profile {
 public:
  PlateauProfile(double lo_out, double lo_in, double hi_in, double hi_out)
      : lo_out_(lo_out), lo_in_(lo_in), hi_in_(hi_in), hi_out_(hi_out) {
    if (!(lo_out < lo_in && lo_in <= hi_in && hi_in < hi_out))
      throw DomainError("plateau needs lo_out < lo_in <= hi_in < hi_out");
  }

  double lo_out() const { return lo_out_; }
  double lo_in() const { return lo_in_; }
  double hi_in() const { return hi_in_; }
  double hi_out() const { return hi_out_; }

  double value(double t, int n) const override {
    if (n == 0) {
      if (t <= lo_out_ || t >= hi_out_) return 0.0;
      if (t >= lo_in_ && t <= hi_in_) return 1.0;
      if (t < lo_in_) return plateau_detail::step(left_u(t));
      return 1.0 - plateau_detail::step(right_u(t));
    }
    return derivatives(t, n)[static_cast<std::size_t>(n)];
  }

  std::vector<double> derivatives(double t, int order) const override {
    std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
    d[0] = value(t, 0);
    if (order == 0 || t <= lo_out_ || t >= hi_out_ || (t >= lo_in_ && t <= hi_in_)) return d;
    const bool left = t < lo_in_;
    const double rho = left ? 0.5 * (lo_in_ - lo_out_) : 0.5 * (hi_out_ - hi_in_);
    const double u = left ? left_u(t) : right_u(t);
    const auto b = series_to_derivatives(bump_series({1.0}, 0, 1, u, order - 1), 1.0);
    const double z = plateau_detail::normalizer();
    double scale = (left ? 1.0 : -1.0) / z;
    for (int n = 1; n <= order; ++n) {
      scale /= rho;
      d[static_cast<std::size_t>(n)] = b[static_cast<std::size_t>(n) - 1] * scale;
    }
    return d;
  }

  IntervalSet support(int n) const override {
    if (n == 0) return {Interval{lo_out_, hi_out_}};
    return {Interval{lo_out_, lo_in_}, Interval{hi_in_, hi_out_}};
  }
  std::vector<double> breakpoints() const override { return {lo_out_, lo_in_, hi_in_, hi_out_}; }

  std::string key() const override {
    return "P(" + hex(lo_out_) + "," + hex(lo_in_) + "," + hex(hi_in_) + "," + hex(hi_out_) + ")";
  }

  ProfilePtr translated(double s) const override {
    return std::make_shared<PlateauProfile>(lo_out_ + s, lo_in_ + s, hi_in_ + s, hi_out_ + s);
  }
  ProfilePtr reflected() const override {
    return std::make_shared<PlateauProfile>(-hi_out_, -hi_in_, -lo_in_, -lo_out_);
  }
  ProfilePtr dilated(double a) const override {
    if (!(a > 0.0)) throw DomainError("dilation factor must be positive");
    return std::make_shared<PlateauProfile>(lo_out_ * a, lo_in_ * a, hi_in_ * a, hi_out_ * a);
  }

  /// True when the plateau is identically 1 on [lo, hi].
  bool covers(Interval range) const { return range.lo >= lo_in_ && range.hi <= hi_in_; }

 private:
  double left_u(double t) const { return 2.0 * (t - lo_out_) / (lo_in_ - lo_out_) - 1.0; }
  double right_u(double t) const { return 2.0 * (t - hi_in_) / (hi_out_ - hi_in_) - 1.0; }

  double lo_out_, lo_in_, hi_in_, hi_out_;
};

/// Polynomial sum_j a_j t^j.
class PolyProfile final : public Profile {
 public:
  explicit PolyProfile(std::vector<double> coeffs) : a_(std::move(coeffs)) {
    while (a_.size() > 1 && a_.back() == 0.0) a_.pop_back();
    if (a_.empty()) a_ = {0.0};
  }

  const std::vector<double>& coefficients() const { return a_; }
  int degree() const { return static_cast<int>(a_.size()) - 1; }

  double value(double t, int n) const override {
    if (n == 0) return poly_eval(a_, t);
    return derivatives(t, n)[static_cast<std::size_t>(n)];
  }
  std::vector<double> derivatives(double t, int order) const override {
    return series_to_derivatives(poly_shift(a_, t, order), 1.0);
  }
  IntervalSet support(int n) const override {
    if (n > degree() || (degree() == 0 && a_[0] == 0.0)) return {};
    return whole_line();
  }
  std::vector<double> breakpoints() const override { return {}; }
  std::string key() const override {
    std::string k = "Q(";
    for (double v : a_) k += hex(v) + ",";
    return k + ")";
  }
  ProfilePtr translated(double s) const override {
    return std::make_shared<PolyProfile>(poly_shift(a_, -s, degree()));
  }
  ProfilePtr reflected() const override {
    std::vector<double> a(a_);
    for (std::size_t j = 1; j < a.size(); j += 2) a[j] = -a[j];
    return std::make_shared<PolyProfile>(a);
  }
  ProfilePtr dilated(double s) const override {
    std::vector<double> a(a_);
    double f = 1.0;
    for (auto& v : a) {
      v /= f;
      f *= s;
    }
    return std::make_shared<PolyProfile>(a);
  }
  bool is_one() const override { return a_.size() == 1 && a_[0] == 1.0; }

 private:
  std::vector<double> a_;
};

inline ProfilePtr make_bump(double c, double rho) { return std::make_shared<BumpProfile>(c, rho); }
inline ProfilePtr make_plateau(double lo_out, double lo_in, double hi_in, double hi_out) {
  return std::make_shared<PlateauProfile>(lo_out, lo_in, hi_in, hi_out);
}
inline ProfilePtr make_poly(std::vector<double> coeffs) { return std::make_shared<PolyProfile>(std::move(coeffs)); }

}  // namespace roumieu
