#pragma once

// Concrete ultradistributions (finite sums of c D^k delta_a, compactly
// supported densities and polynomial densities), their pairings with test
// functions, tensor pairings, and the sequential convolution engine.
// Convention: <c D^k delta_a, phi> = c (-1)^{|k|} (D^k phi)(a) = c i^{|k|} d^k phi(a).

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "roumieu/core.hpp"
#include "roumieu/function.hpp"
#include "roumieu/quadrature.hpp"
#include "roumieu/seminorm.hpp"
#include "roumieu/units.hpp"

namespace roumieu {

struct PointTerm {
  Complex coef{1.0, 0.0};
  MultiIndex order;
  Point at;
};

class Ultradistribution {
 public:
  explicit Ultradistribution(int dim = 1) : dim_(dim) {
    if (dim < 1) throw DomainError("dimension must be positive");
  }

  static Ultradistribution delta(const Point& at, MultiIndex order = {}, Complex coef = 1.0) {
    Ultradistribution u(static_cast<int>(at.size()));
    if (order.empty()) order = zero_index(u.dim_);
    if (order.size() != at.size()) throw DomainError("delta order and location dimensions differ");
    u.points_.push_back({coef, std::move(order), at});
    return u;
  }

  static Ultradistribution density(const SmoothFunction& f) {
    Ultradistribution u(f.dim());
    if (!bounded_support(f)) throw DomainError("density terms must have compact support; use a polynomial term");
    u.densities_.push_back(f);
    return u;
  }

  static Ultradistribution polynomial(const SmoothFunction& p) {
    Ultradistribution u(p.dim());
    u.polys_.push_back(p);
    return u;
  }

  static Ultradistribution constant(int dim, Complex c = 1.0) {
    return polynomial(SmoothFunction::constant(dim, c));
  }

  int dim() const { return dim_; }
  const std::vector<PointTerm>& points() const { return points_; }
  const std::vector<SmoothFunction>& densities() const { return densities_; }
  const std::vector<SmoothFunction>& polys() const { return polys_; }
  bool has_poly() const { return !polys_.empty(); }
  bool empty() const { return points_.empty() && densities_.empty() && polys_.empty(); }

  friend Ultradistribution operator+(const Ultradistribution& a, const Ultradistribution& b) {
    if (a.dim_ != b.dim_) throw DomainError("ultradistribution dimension mismatch");
    Ultradistribution r(a);
    r.points_.insert(r.points_.end(), b.points_.begin(), b.points_.end());
    r.densities_.insert(r.densities_.end(), b.densities_.begin(), b.densities_.end());
    r.polys_.insert(r.polys_.end(), b.polys_.begin(), b.polys_.end());
    return r;
  }

  Ultradistribution scaled(Complex c) const {
    Ultradistribution r(*this);
    for (auto& p : r.points_) p.coef *= c;
    for (auto& f : r.densities_) f = f.scaled(c);
    for (auto& f : r.polys_) f = f.scaled(c);
    return r;
  }

  /// D^k T.
  Ultradistribution D(const MultiIndex& k) const {
    Ultradistribution r(dim_);
    for (const auto& p : points_) r.points_.push_back({p.coef, p.order + k, p.at});
    for (const auto& f : densities_) r.densities_.push_back(f.D(k));
    for (const auto& f : polys_) r.polys_.push_back(f.D(k));
    return r;
  }

  /// pi T for a smooth pi; point terms by Leibniz, densities by product.
  Ultradistribution multiplied(const SmoothFunction& pi) const {
    if (pi.dim() != dim_) throw DomainError("multiplier dimension mismatch");
    Ultradistribution r(dim_);
    for (const auto& p : points_) {
      for (const auto& j : indices_below(p.order)) {
        const MultiIndex m = p.order - j;
        const Complex v = pi.partial(m)(p.at);
        if (v == Complex{}) continue;
        r.points_.push_back({p.coef * index_binomial(p.order, j) * ipow(order(m)) * v, j, p.at});
      }
    }
    for (const auto& f : densities_) push_density(r, f * pi);
    for (const auto& f : polys_) {
      const SmoothFunction g = f * pi;
      if (bounded_support(g)) push_density(r, g);
      else r.polys_.push_back(g);
    }
    return r;
  }

  /// The reflection <S^, phi> = <S, phi(-.)>.
  Ultradistribution reflected() const {
    Ultradistribution r(dim_);
    for (const auto& p : points_) {
      Point a(p.at);
      for (auto& v : a) v = -v;
      r.points_.push_back({order(p.order) % 2 ? -p.coef : p.coef, p.order, a});
    }
    for (const auto& f : densities_) r.densities_.push_back(f.reflected());
    for (const auto& f : polys_) r.polys_.push_back(f.reflected());
    return r;
  }

  /// Hull of the support when compact.
  std::optional<Box> support_box() const {
    if (has_poly()) return std::nullopt;
    Box b;
    bool first = true;
    auto join = [&](const Box& x) {
      if (first) {
        b = x;
        first = false;
      } else {
        for (std::size_t a = 0; a < b.size(); ++a) b[a] = hull(b[a], x[a]);
      }
    };
    for (const auto& p : points_) {
      Box x;
      for (double v : p.at) x.push_back(Interval{v, v});
      join(x);
    }
    for (const auto& f : densities_) join(f.support_box());
    if (first) return Box(static_cast<std::size_t>(dim_), Interval{0.0, 0.0});
    return b;
  }

  /// Highest derivative order among point terms.
  int max_point_order() const {
    int m = 0;
    for (const auto& p : points_) m = std::max(m, order(p.order));
    return m;
  }

  std::string describe() const {
    std::string s;
    for (const auto& p : points_) {
      s += "(" + std::to_string(p.coef.real()) + "," + std::to_string(p.coef.imag()) + ")D^[";
      for (int k : p.order) s += std::to_string(k) + ",";
      s += "]delta@[";
      for (double v : p.at) s += std::to_string(v) + ",";
      s += "] ";
    }
    if (!densities_.empty()) s += std::to_string(densities_.size()) + " density ";
    if (!polys_.empty()) s += std::to_string(polys_.size()) + " poly ";
    return s.empty() ? "0" : s;
  }

  static bool bounded_support(const SmoothFunction& f) {
    for (const auto& t : f.terms()) {
      std::vector<bool> covered(static_cast<std::size_t>(f.dim()), false);
      for (const auto& fc : t.factors)
        if (fc.axes.size() == 1 && bounded(fc.support())) covered[static_cast<std::size_t>(fc.axes[0])] = true;
      for (bool c : covered)
        if (!c) return false;
    }
    return true;
  }

 private:
  static void push_density(Ultradistribution& r, const SmoothFunction& f) {
    if (!f.terms().empty()) r.densities_.push_back(f);
  }

  int dim_;
  std::vector<PointTerm> points_;
  std::vector<SmoothFunction> densities_;
  std::vector<SmoothFunction> polys_;
};

namespace dist_detail {

inline std::vector<int> axes_range(int from, int count) {
  std::vector<int> a(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) a[static_cast<std::size_t>(i)] = from + i;
  return a;
}

inline Complex point_value(const PointTerm& p, const SmoothFunction& phi) {
  return p.coef * ipow(order(p.order)) * phi.partial(p.order)(p.at);
}

}  // namespace dist_detail

/// <T, phi>.
inline Complex pair(const Ultradistribution& T, const SmoothFunction& phi, const QuadratureOptions& opt = {}) {
  if (phi.dim() != T.dim()) throw DomainError("test function dimension mismatch");
  Complex v{};
  for (const auto& p : T.points()) v += dist_detail::point_value(p, phi);
  const auto axes = dist_detail::axes_range(0, T.dim());
  for (const auto& f : T.densities()) v += integrate(f * phi, axes, opt);
  for (const auto& f : T.polys()) v += integrate(f * phi, axes, opt);
  return v;
}

/// <S (x) T, Phi> for Phi on R^{2d}, x-variables first.
inline Complex tensor_pair(const Ultradistribution& S, const Ultradistribution& T, const SmoothFunction& Phi,
                           const QuadratureOptions& opt = {}) {
  const int d = S.dim();
  if (T.dim() != d || Phi.dim() != 2 * d) throw DomainError("tensor pairing dimension mismatch");
  std::vector<int> xmap = dist_detail::axes_range(0, d), ymap = dist_detail::axes_range(d, d);
  std::vector<SmoothFunction> sf, tf;
  for (const auto& f : S.densities()) sf.push_back(f.embedded(2 * d, xmap));
  for (const auto& f : S.polys()) sf.push_back(f.embedded(2 * d, xmap));
  for (const auto& f : T.densities()) tf.push_back(f.embedded(2 * d, ymap));
  for (const auto& f : T.polys()) tf.push_back(f.embedded(2 * d, ymap));

  Complex v{};
  for (const auto& p : S.points())
    for (const auto& q : T.points()) {
      MultiIndex k = p.order;
      k.insert(k.end(), q.order.begin(), q.order.end());
      Point ab = p.at;
      ab.insert(ab.end(), q.at.begin(), q.at.end());
      v += p.coef * q.coef * ipow(order(k)) * Phi.partial(k)(ab);
    }
  // Point in x against functions of y: restrict the x-derivative at a.
  for (const auto& p : S.points()) {
    if (tf.empty()) break;
    MultiIndex k = p.order;
    k.resize(static_cast<std::size_t>(2 * d), 0);
    SmoothFunction slice = Phi.partial(k);
    for (int a = 0; a < d; ++a) slice = slice.restricted(a, p.at[static_cast<std::size_t>(a)]);
    const Complex c = p.coef * ipow(order(p.order));
    for (const auto& g : tf) v += integrate((g * slice).scaled(c), ymap, opt);
  }
  for (const auto& q : T.points()) {
    if (sf.empty()) break;
    MultiIndex k(static_cast<std::size_t>(d), 0);
    k.insert(k.end(), q.order.begin(), q.order.end());
    SmoothFunction slice = Phi.partial(k);
    for (int a = 0; a < d; ++a) slice = slice.restricted(d + a, q.at[static_cast<std::size_t>(a)]);
    const Complex c = q.coef * ipow(order(q.order));
    for (const auto& f : sf) v += integrate((f * slice).scaled(c), xmap, opt);
  }
  const auto all = dist_detail::axes_range(0, 2 * d);
  for (const auto& f : sf)
    for (const auto& g : tf) v += integrate(f * g * Phi, all, opt);
  return v;
}

// ---------------------------------------------------------------------------
// Cauchy diagnostics

enum class DivergenceKind { unbounded, oscillating };

inline std::string to_string(DivergenceKind k) { return k == DivergenceKind::unbounded ? "unbounded" : "oscillating"; }

struct CauchyDiagnostics {
  std::vector<Complex> values;
  bool converged = false;
  std::optional<Complex> limit;
  double osc = 0.0;
  std::optional<DivergenceKind> divergence_kind;
  std::string note;
};

struct CauchyOptions {
  int window = 5;
  double tol = 1e-8;
  double blowup = 1e6;
};

/// Converged iff the trailing window spreads by at most tol * max(1, |c_N|).
/// Divergent sequences are unbounded when they blow past blowup * (1 + |c_1|)
/// or keep growing in modulus over the second half without decaying steps.
inline CauchyDiagnostics diagnose(std::vector<Complex> values, const CauchyOptions& opt = {}) {
  CauchyDiagnostics d;
  d.values = std::move(values);
  const auto& c = d.values;
  const std::size_t n = c.size();
  if (n == 0) {
    d.note = "empty sequence";
    return d;
  }
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(opt.window), n);
  for (std::size_t i = n - w; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.osc = std::max(d.osc, std::abs(c[i] - c[j]));
  const double tol = opt.tol * std::max(1.0, std::abs(c[n - 1]));
  if (n >= static_cast<std::size_t>(opt.window) && d.osc <= tol) {
    d.converged = true;
    d.limit = c[n - 1];
    return d;
  }
  double peak = 0.0;
  for (const auto& v : c) peak = std::max(peak, std::abs(v));
  if (peak > opt.blowup * (1.0 + std::abs(c[0]))) {
    d.divergence_kind = DivergenceKind::unbounded;
    d.note = "modulus exceeds the blow-up level";
    return d;
  }
  bool growing = n >= 4;
  const std::size_t from = n / 2;
  double first_step = 0.0, last_step = 0.0;
  for (std::size_t i = from + 1; i < n && growing; ++i) {
    const double step = std::abs(c[i]) - std::abs(c[i - 1]);
    if (!(step > 0.0)) growing = false;
    if (i == from + 1) first_step = step;
    last_step = step;
  }
  if (growing && last_step >= 0.5 * first_step) {
    d.divergence_kind = DivergenceKind::unbounded;
    d.note = "modulus grows with non-decaying increments";
  } else {
    d.divergence_kind = DivergenceKind::oscillating;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Sequential convolution

enum class ConvMode { eps, pi, pi1, pi2 };

inline std::string to_string(ConvMode m) {
  switch (m) {
    case ConvMode::eps: return "eps";
    case ConvMode::pi: return "pi";
    case ConvMode::pi1: return "pi1";
    case ConvMode::pi2: return "pi2";
  }
  return "?";
}

inline const std::vector<ConvMode>& all_modes() {
  static const std::vector<ConvMode> m{ConvMode::eps, ConvMode::pi, ConvMode::pi1, ConvMode::pi2};
  return m;
}

/// The n-th entry of the convolvability sequence.
inline Complex convolvability_entry(const Ultradistribution& S, const Ultradistribution& T, const SmoothFunction& phi,
                                    const ApproximateUnit& U, ConvMode mode, int n, const QuadratureOptions& opt = {}) {
  const int d = S.dim();
  const SmoothFunction tri = phi.diag();
  switch (mode) {
    case ConvMode::eps:
      return tensor_pair(S, T, U.with_dim(2 * d).member(n) * tri, opt);
    case ConvMode::pi: {
      const SmoothFunction p = U.with_dim(d).member(n);
      return tensor_pair(S.multiplied(p), T.multiplied(p), tri, opt);
    }
    case ConvMode::pi1:
      return tensor_pair(S.multiplied(U.with_dim(d).member(n)), T, tri, opt);
    case ConvMode::pi2:
      return tensor_pair(S, T.multiplied(U.with_dim(d).member(n)), tri, opt);
  }
  return {};
}

inline CauchyDiagnostics convolvability_sequence(const Ultradistribution& S, const Ultradistribution& T,
                                                 const SmoothFunction& phi, const ApproximateUnit& U, ConvMode mode,
                                                 int N_max, const CauchyOptions& copt = {},
                                                 const QuadratureOptions& opt = {}) {
  if (phi.dim() != S.dim() || T.dim() != S.dim()) throw DomainError("convolution dimension mismatch");
  if (N_max > U.length()) throw InsufficientPrefix("unit schedule shorter than N_max");
  std::vector<Complex> vals;
  for (int n = 1; n <= N_max; ++n) {
    try {
      vals.push_back(convolvability_entry(S, T, phi, U, mode, n, opt));
    } catch (const DivergentPairing& e) {
      CauchyDiagnostics d = diagnose(vals, copt);
      d.converged = false;
      d.limit.reset();
      d.divergence_kind = DivergenceKind::unbounded;
      d.note = std::string("pairing diverges at n=") + std::to_string(n) + ": " + e.what();
      return d;
    }
  }
  return diagnose(std::move(vals), copt);
}

struct NamedUnit {
  std::string name;
  ApproximateUnit unit;
};

struct ModeRun {
  ConvMode mode;
  std::string unit;
  CauchyDiagnostics diag;
};

struct ConvolutionResult {
  std::vector<ModeRun> runs;
  std::optional<Complex> agreed_value;
  double cross_mode_spread = 0.0;
  std::optional<double> commutativity_spread;
  bool all_converged = true;
  bool none_converged = true;
  std::string failure;
};

struct ConvolveOptions {
  std::vector<ConvMode> modes = all_modes();
  int N_max = 20;
  double tol_agree = 1e-7;
  bool check_commutativity = true;
  CauchyOptions cauchy;
  QuadratureOptions quad;
};

/// Every requested mode with every unit; the limits must agree, and the
/// swapped pair T * S must give the same value.
inline ConvolutionResult convolve(const Ultradistribution& S, const Ultradistribution& T, const SmoothFunction& phi,
                                  const std::vector<NamedUnit>& units, const ConvolveOptions& cfg = {}) {
  if (units.empty()) throw DomainError("convolve needs at least one unit");
  ConvolutionResult r;
  std::vector<Complex> limits;
  for (const auto& u : units)
    for (ConvMode m : cfg.modes) {
      ModeRun run{m, u.name, convolvability_sequence(S, T, phi, u.unit, m, cfg.N_max, cfg.cauchy, cfg.quad)};
      if (run.diag.converged) {
        limits.push_back(*run.diag.limit);
        r.none_converged = false;
      } else {
        if (r.all_converged)
          r.failure = "mode " + to_string(m) + " with unit " + u.name + " is not Cauchy (" +
                      (run.diag.divergence_kind ? to_string(*run.diag.divergence_kind) : std::string("short")) + ")";
        r.all_converged = false;
      }
      r.runs.push_back(std::move(run));
    }
  for (std::size_t i = 0; i < limits.size(); ++i)
    for (std::size_t j = i + 1; j < limits.size(); ++j)
      r.cross_mode_spread = std::max(r.cross_mode_spread, std::abs(limits[i] - limits[j]));
  if (r.all_converged && r.cross_mode_spread <= cfg.tol_agree) r.agreed_value = limits.front();
  if (r.all_converged && !r.agreed_value) r.failure = "limits disagree: spread " + std::to_string(r.cross_mode_spread);
  if (cfg.check_commutativity && r.agreed_value) {
    const auto swapped =
        convolvability_sequence(T, S, phi, units.front().unit, cfg.modes.front(), cfg.N_max, cfg.cauchy, cfg.quad);
    if (swapped.converged) {
      r.commutativity_spread = std::abs(*swapped.limit - *r.agreed_value);
    } else {
      r.commutativity_spread = kInf;
      r.failure = "swapped pair is not Cauchy";
    }
  }
  return r;
}

/// The sequential limit with a single mode and unit (used by the operator checks).
inline std::optional<Complex> sequential_value(const Ultradistribution& S, const Ultradistribution& T,
                                               const SmoothFunction& phi, const ApproximateUnit& U,
                                               ConvMode mode = ConvMode::eps, int N_max = 20,
                                               const CauchyOptions& copt = {}, const QuadratureOptions& opt = {}) {
  const auto d = convolvability_sequence(S, T, phi, U, mode, N_max, copt, opt);
  return d.converged ? d.limit : std::nullopt;
}

// ---------------------------------------------------------------------------
// Integrability

enum class IntegrabilityVerdict { integrable_evidence, not_integrable, inconclusive };

inline std::string to_string(IntegrabilityVerdict v) {
  switch (v) {
    case IntegrabilityVerdict::integrable_evidence: return "integrable_evidence";
    case IntegrabilityVerdict::not_integrable: return "not_integrable";
    case IntegrabilityVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct IntegrabilityReport {
  std::vector<std::pair<std::string, CauchyDiagnostics>> per_unit;
  IntegrabilityVerdict verdict = IntegrabilityVerdict::inconclusive;
  std::optional<Complex> value;
  double spread = 0.0;
  // max over the dictionary of |<V, phi>| / ||phi||_(r), per r.
  std::vector<std::pair<std::string, double>> dictionary_ratio;
};

/// A fixed dictionary of bump test functions in dimension d.
inline std::vector<SmoothFunction> test_dictionary(int dim) {
  std::vector<SmoothFunction> out;
  for (double c : {-2.0, 0.0, 0.5, 3.0})
    for (double r : {0.5, 1.0, 2.0}) out.push_back(SmoothFunction::atom(Point(static_cast<std::size_t>(dim), c), Point(static_cast<std::size_t>(dim), r)));
  return out;
}

inline IntegrabilityReport integrability_test(const Ultradistribution& V, const std::vector<NamedUnit>& units, int N_max,
                                              const std::vector<std::pair<std::string, RSequence>>& r_list = {},
                                              const WeightSequence& M = WeightSequence::gevrey(2.0, 64),
                                              int K_max = 12, double tol_agree = 1e-7,
                                              const CauchyOptions& copt = {}, const QuadratureOptions& opt = {}) {
  bool has_general = false, has_special = false;
  for (const auto& u : units) (u.unit.special() ? has_special : has_general) = true;
  if (!has_general || !has_special) throw DomainError("integrability test needs a general and a special unit");
  IntegrabilityReport rep;
  std::vector<Complex> limits;
  bool any_unbounded = false, all_conv = true;
  for (const auto& u : units) {
    std::vector<Complex> vals;
    for (int n = 1; n <= N_max; ++n) vals.push_back(pair(V, u.unit.with_dim(V.dim()).member(n), opt));
    auto d = diagnose(std::move(vals), copt);
    if (d.converged) limits.push_back(*d.limit);
    else all_conv = false;
    if (d.divergence_kind == DivergenceKind::unbounded) any_unbounded = true;
    rep.per_unit.emplace_back(u.name, std::move(d));
  }
  for (std::size_t i = 0; i < limits.size(); ++i)
    for (std::size_t j = i + 1; j < limits.size(); ++j) rep.spread = std::max(rep.spread, std::abs(limits[i] - limits[j]));
  if (all_conv && rep.spread <= tol_agree) {
    rep.verdict = IntegrabilityVerdict::integrable_evidence;
    rep.value = limits.front();
  } else if (any_unbounded || limits.empty()) {
    rep.verdict = IntegrabilityVerdict::not_integrable;
  }
  for (const auto& [name, r] : r_list) {
    double best = 0.0;
    for (const auto& phi : test_dictionary(V.dim())) {
      const double nrm = r_seminorm(phi, r, M, K_max).value;
      if (nrm > 0.0) best = std::max(best, std::abs(pair(V, phi, opt)) / nrm);
    }
    rep.dictionary_ratio.emplace_back(name, best);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// (S^ * phi)(T * psi) in L^1

struct C3Report {
  std::vector<double> half_widths;
  std::vector<double> integrals;
  bool converges = false;
};

inline Complex convolve_with_function(const Ultradistribution& T, const SmoothFunction& psi, const Point& x,
                                      const QuadratureOptions& opt) {
  // (T * psi)(x) = <T_y, psi(x - y)>.
  return pair(T, psi.reflected().translated(x), opt);
}

inline C3Report c3_check(const Ultradistribution& S, const Ultradistribution& T, const SmoothFunction& phi,
                         const SmoothFunction& psi, std::vector<double> half_widths = {2, 4, 8, 16, 32},
                         double tol = 1e-8) {
  if (S.dim() != 1) throw UnsupportedCombination("the c3 diagnostic is implemented for d = 1");
  C3Report rep;
  rep.half_widths = half_widths;
  QuadratureOptions inner;
  inner.use_cache = false;
  const Ultradistribution Sr = S.reflected();
  auto integrand = [&](double x) {
    const Complex u = convolve_with_function(Sr, phi, {x}, inner);
    if (u == Complex{}) return 0.0;
    return std::abs(u * convolve_with_function(T, psi, {x}, inner));
  };
  // Breakpoints where the compact pieces of u and v start or end.
  std::vector<double> bp;
  auto add_edges = [&](const Ultradistribution& D, const SmoothFunction& f) {
    const auto sb = D.support_box();
    if (!sb) return;
    const Interval g = f.support_box()[0];
    bp.push_back((*sb)[0].lo + g.lo);
    bp.push_back((*sb)[0].hi + g.hi);
  };
  add_edges(Sr, phi);
  add_edges(T, psi);
  QuadratureOptions outer;
  outer.abs_tol = 1e-10;
  outer.use_cache = false;
  for (double L : half_widths) rep.integrals.push_back(integrate_1d(integrand, -L, L, bp, outer));
  const std::size_t n = rep.integrals.size();
  rep.converges = n >= 2 && std::abs(rep.integrals[n - 1] - rep.integrals[n - 2]) <= tol * std::max(1.0, rep.integrals[n - 1]);
  return rep;
}

}  // namespace roumieu
