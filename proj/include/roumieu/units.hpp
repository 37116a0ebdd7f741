#pragma once

// Approximate units: sequences pi_n of compactly supported functions tending
// to 1, built per axis either from plateaus with growing inner boxes or by
// dilating a fixed plateau generator psi.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "roumieu/core.hpp"
#include "roumieu/function.hpp"
#include "roumieu/profile.hpp"
#include "roumieu/seminorm.hpp"

namespace roumieu {

enum class UnitKind { dilation, plateau };

inline std::string to_string(UnitKind k) { return k == UnitKind::dilation ? "dilation" : "plateau"; }

class ApproximateUnit {
 public:
  /// Plateau kind: pi_n = 1 on [-a_n, a_n]^d, 0 outside [-a_n - margin, a_n + margin]^d.
  static ApproximateUnit plateau(int dim, std::vector<double> schedule, double margin = 1.0) {
    if (!(margin > 0.0)) throw DomainError("plateau margin must be positive");
    ApproximateUnit u(UnitKind::plateau, dim, std::move(schedule));
    u.margin_ = margin;
    u.special_ = true;
    return u;
  }

  /// Dilation kind: pi_n(x) = prod_i psi(x_i / a_n), psi = 1 on [-inner, inner].
  static ApproximateUnit dilation(int dim, std::vector<double> schedule, double inner = 1.0, double outer = 2.0) {
    if (!(inner > 0.0 && outer > inner)) throw DomainError("dilation generator needs 0 < inner < outer");
    ApproximateUnit u(UnitKind::dilation, dim, std::move(schedule));
    u.psi_ = std::make_shared<PlateauProfile>(-outer, -inner, inner, outer);
    u.psi_inner_ = inner;
    u.special_ = true;
    return u;
  }

  /// pi_n + eps^n chi per axis factor, with chi a bump at `at`: still tends to
  /// 1 with bounded seminorms, but never equals 1 near `at`.
  static ApproximateUnit perturbed(const ApproximateUnit& base, double eps = 0.1, double at = 0.0,
                                   double radius = 0.5) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("perturbation base must lie in (0, 1)");
    ApproximateUnit u(base);
    u.chi_ = make_bump(at, radius);
    u.eps_ = eps;
    u.special_ = false;
    return u;
  }

  /// Same construction in another dimension (e.g. 2d for tensor pairings).
  ApproximateUnit with_dim(int dim) const {
    ApproximateUnit u(*this);
    if (dim < 1) throw DomainError("unit dimension must be positive");
    u.dim_ = dim;
    return u;
  }

  static std::vector<double> linear_schedule(int n_max, double slope = 1.0, double offset = 0.0) {
    std::vector<double> s;
    for (int n = 1; n <= n_max; ++n) s.push_back(offset + slope * n);
    return s;
  }

  UnitKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool special() const { return special_; }
  int length() const { return static_cast<int>(schedule_.size()); }
  double scale(int n) const { return schedule_.at(static_cast<std::size_t>(n - 1)); }
  const std::vector<double>& schedule() const { return schedule_; }
  bool perturbed_unit() const { return static_cast<bool>(chi_); }

  /// The one-variable factor of pi_n.
  SmoothFunction axis_member(int n) const {
    const double a = scale(n);
    ProfilePtr g = kind_ == UnitKind::plateau ? make_plateau(-a - margin_, -a, a, a + margin_) : psi_->dilated(a);
    SmoothFunction f = SmoothFunction::from_factors(1, {Factor{g, {0}, 0}});
    if (chi_) f = f + SmoothFunction::from_factors(1, {Factor{chi_, {0}, 0}}, std::pow(eps_, n));
    return f;
  }

  SmoothFunction member(int n) const {
    const SmoothFunction one = axis_member(n);
    SmoothFunction f = one.embedded(dim_, {0});
    for (int a = 1; a < dim_; ++a) f = f * one.embedded(dim_, {a});
    return f;
  }

  /// Half-width of the cube on which pi_n = 1 for the unperturbed construction.
  double inner_half(int n) const { return kind_ == UnitKind::plateau ? scale(n) : scale(n) * psi_inner_; }

  /// The dilation generator as a function on R.
  SmoothFunction generator() const {
    if (kind_ != UnitKind::dilation) throw DomainError("plateau units have no dilation generator");
    return SmoothFunction::from_factors(1, {Factor{psi_, {0}, 0}});
  }

  std::string describe() const {
    std::string s = to_string(kind_) + " d=" + std::to_string(dim_) + " a=[";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, schedule_.size()); ++i) s += hex(schedule_[i]) + ",";
    s += "...]";
    if (chi_) s += " perturbed(" + hex(eps_) + ")";
    return s;
  }

 private:
  ApproximateUnit(UnitKind k, int dim, std::vector<double> schedule) : kind_(k), dim_(dim), schedule_(std::move(schedule)) {
    if (dim < 1) throw DomainError("unit dimension must be positive");
    if (schedule_.empty()) throw DomainError("empty unit schedule");
    for (double a : schedule_)
      if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("unit schedule entries must be positive");
  }

  UnitKind kind_;
  int dim_;
  std::vector<double> schedule_;
  double margin_ = 1.0;
  ProfilePtr psi_;
  double psi_inner_ = 1.0;
  ProfilePtr chi_;
  double eps_ = 0.0;
  bool special_ = false;
};

inline ApproximateUnit make_unit(UnitKind kind, std::vector<double> schedule, int dim = 1, double margin = 1.0) {
  return kind == UnitKind::plateau ? ApproximateUnit::plateau(dim, std::move(schedule), margin)
                                   : ApproximateUnit::dilation(dim, std::move(schedule));
}

/// psi(n x): supports shrink to the origin, so this does not tend to 1.
inline ApproximateUnit shrinking_nonexample(int n_max, int dim = 1) {
  std::vector<double> s;
  for (int n = 1; n <= n_max; ++n) s.push_back(1.0 / n);
  return ApproximateUnit::dilation(dim, std::move(s));
}

struct UnitBoundReport {
  std::string r_name;
  std::vector<double> values;   // ||pi_n||_(r), n = 1..N_max
  double sup = 0.0;
  std::optional<double> generator_norm;  // ||psi||_(r) for the dilation kind
  bool holds = true;
};

struct UnitReport {
  std::vector<UnitBoundReport> bounds;
  bool schedule_increasing = true;
  // max_{|k| <= K_max} sup_box |d^k (pi_n - 1)| at n = N_max, per test box.
  std::vector<double> box_half_widths;
  std::vector<double> final_errors;
  bool converges = true;
  std::vector<std::optional<int>> n0;  // first n from which pi_n = 1 on the box
  bool special_ok = true;
  bool ok = true;
  std::string counterexample;
};

/// Truncated checks: (a) uniform (r_p) bounds for each r, (b) convergence to
/// 1 on test cubes for all |k| <= K_max, (c) correctness of the special flag.
inline UnitReport verify_unit(const ApproximateUnit& U, const std::vector<std::pair<std::string, RSequence>>& r_list,
                              const WeightSequence& M, int K_max, int N_max,
                              std::vector<double> box_half_widths = {1.0, 2.0, 4.0}) {
  if (N_max > U.length()) throw InsufficientPrefix("unit schedule shorter than N_max");
  UnitReport rep;
  rep.box_half_widths = box_half_widths;
  auto fail = [&](const std::string& why) {
    if (rep.ok) rep.counterexample = why;
    rep.ok = false;
  };

  for (int n = 2; n <= N_max; ++n)
    if (!(U.scale(n) > U.scale(n - 1))) {
      rep.schedule_increasing = false;
      fail("schedule is not increasing at n=" + std::to_string(n));
      break;
    }

  // (a) uniform seminorm bounds.
  for (const auto& [name, r] : r_list) {
    UnitBoundReport b;
    b.r_name = name;
    for (int n = 1; n <= N_max; ++n) b.values.push_back(r_seminorm(U.member(n), r, M, K_max).value);
    b.sup = *std::max_element(b.values.begin(), b.values.end());
    if (U.kind() == UnitKind::dilation && !U.perturbed_unit() && U.dim() == 1) {
      b.generator_norm = r_seminorm(U.generator(), r, M, K_max).value;
      for (int n = 1; n <= N_max; ++n)
        if (U.scale(n) >= 1.0 && b.values[static_cast<std::size_t>(n - 1)] > *b.generator_norm * (1.0 + 1e-12)) {
          b.holds = false;
          fail("||pi_" + std::to_string(n) + "||_(" + name + ") exceeds ||psi||");
        }
    }
    // No growth across the second half of the run.
    double first = 0.0, second = 0.0;
    for (int n = 1; n <= N_max; ++n) {
      double& half = n <= N_max / 2 ? first : second;
      half = std::max(half, b.values[static_cast<std::size_t>(n - 1)]);
    }
    if (!std::isfinite(b.sup) || second > first * (1.0 + 1e-9)) {
      b.holds = false;
      fail("(" + name + ") seminorms grow with n");
    }
    rep.bounds.push_back(std::move(b));
  }

  // (b) convergence to 1 on compact cubes.
  for (double L : box_half_widths) {
    const Box K = cube(U.dim(), L);
    const SmoothFunction diff = U.member(N_max) + SmoothFunction::constant(U.dim(), -1.0);
    const DerivativeSups s = derivative_sups(diff, K_max, K);
    const double e = *std::max_element(s.sup.begin(), s.sup.end());
    rep.final_errors.push_back(e);
    if (!(e <= 1e-8)) {
      rep.converges = false;
      fail("pi_" + std::to_string(N_max) + " - 1 has derivative size " + std::to_string(e) + " on the cube of half-width " +
           std::to_string(L));
    }
  }

  // (c) special flag.
  for (double L : box_half_widths) {
    std::optional<int> n0;
    for (int n = N_max; n >= 1 && U.inner_half(n) >= L; --n) n0 = n;
    rep.n0.push_back(n0);
    if (!U.special()) continue;
    if (!n0) {
      rep.special_ok = false;
      fail("special unit never covers the cube of half-width " + std::to_string(L));
      continue;
    }
    for (int n = *n0; n <= N_max; ++n) {
      const SmoothFunction one = U.axis_member(n);
      for (int i = 0; i <= 200; ++i) {
        const double x = -L + 2.0 * L * i / 200.0;
        if (one({x}) != Complex{1.0, 0.0}) {
          rep.special_ok = false;
          fail("pi_" + std::to_string(n) + " differs from 1 at x=" + std::to_string(x));
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace roumieu
