#pragma once

// Truncated ultradifferential operators P(D) = sum_k c_k D^k, their class
// certificates, action on functions and ultradistributions, the exchange
// identity P(D)(S * T) = (P(D)S) * T = S * (P(D)T), and the commutator
// nu_n = P(-D_x)(pi_n phi^) - pi_n P(-D_x) phi^.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "roumieu/core.hpp"
#include "roumieu/function.hpp"
#include "roumieu/komatsu.hpp"
#include "roumieu/profile.hpp"
#include "roumieu/rclass.hpp"
#include "roumieu/seminorm.hpp"
#include "roumieu/ultradist.hpp"
#include "roumieu/units.hpp"
#include "roumieu/weights.hpp"

namespace roumieu {

/// |c_k| <= C / (U_{|k|} M_k) on the stored range.
struct OperatorCertificate {
  double C = 0.0;
  RSequence u = RSequence::linear(16);
  int prefix = 0;
  std::string note;
};

class UltradiffOperator {
 public:
  using CoefRule = std::function<Complex(const MultiIndex&)>;

  /// Finite table; coefficients of order above K_op are zero.
  static UltradiffOperator from_table(int dim, std::map<MultiIndex, Complex> coeffs, int K_op, std::string name = "table") {
    UltradiffOperator P(dim, K_op, std::move(name));
    for (auto& [k, c] : coeffs) {
      if (static_cast<int>(k.size()) != dim) throw DomainError("coefficient index has wrong dimension");
      if (order(k) > K_op) throw DomainError("coefficient order exceeds K_op");
      if (c != Complex{}) P.coeffs_[k] = c;
    }
    return P;
  }

  /// Infinite-order operator given by a rule, stored up to K_op.
  static UltradiffOperator from_rule(int dim, CoefRule rule, int K_op, std::string name = "rule") {
    UltradiffOperator P(dim, K_op, std::move(name));
    for (const auto& k : indices_up_to(dim, K_op)) {
      const Complex c = rule(k);
      if (c != Complex{}) P.coeffs_[k] = c;
    }
    P.rule_ = std::move(rule);
    return P;
  }

  static UltradiffOperator identity(int dim = 1) {
    return from_table(dim, {{zero_index(dim), 1.0}}, 2, "identity");
  }
  static UltradiffOperator derivative(int dim = 1, int axis = 0) {
    return from_table(dim, {{unit_index(dim, axis), 1.0}}, 2, "D");
  }
  /// 1 + sum_i D_i^2.
  static UltradiffOperator one_plus_d2(int dim = 1) {
    std::map<MultiIndex, Complex> c{{zero_index(dim), 1.0}};
    for (int a = 0; a < dim; ++a) {
      MultiIndex k = zero_index(dim);
      k[static_cast<std::size_t>(a)] = 2;
      c[k] = 1.0;
    }
    return from_table(dim, std::move(c), 2, "1+D^2");
  }
  /// c_k = 1 / (k! M_k).
  static UltradiffOperator inv_fact_weight(const WeightSequence& M, int K_op = 24, int dim = 1) {
    return from_rule(
        dim, [M](const MultiIndex& k) { return Complex(1.0 / (index_factorial(k) * multiindex_weight(M, k)), 0.0); }, K_op,
        "inv_fact_weight");
  }
  /// c_k = 1 / M_k: not of class {M_p}.
  static UltradiffOperator inv_weight(const WeightSequence& M, int K_op = 24, int dim = 1) {
    return from_rule(
        dim, [M](const MultiIndex& k) { return Complex(1.0 / multiindex_weight(M, k), 0.0); }, K_op, "inv_weight");
  }

  int dim() const { return dim_; }
  int K_op() const { return K_op_; }
  const std::string& name() const { return name_; }
  bool infinite_order() const { return static_cast<bool>(rule_); }
  const std::map<MultiIndex, Complex>& coeffs() const { return coeffs_; }
  const std::optional<OperatorCertificate>& certificate() const { return cert_; }
  void set_certificate(OperatorCertificate c) { cert_ = std::move(c); }

  /// c_k for any k: stored value, rule value beyond K_op, or zero.
  Complex coef(const MultiIndex& k) const {
    if (order(k) > K_op_) return rule_ ? rule_(k) : Complex{};
    const auto it = coeffs_.find(k);
    return it == coeffs_.end() ? Complex{} : it->second;
  }

  /// Highest order with a nonzero stored coefficient.
  int order_used() const {
    int m = 0;
    for (const auto& [k, c] : coeffs_) m = std::max(m, order(k));
    return m;
  }

  /// P(-D): c_k -> (-1)^{|k|} c_k. The certificate carries over.
  UltradiffOperator adjoint() const {
    UltradiffOperator r(*this);
    for (auto& [k, c] : r.coeffs_)
      if (order(k) % 2) c = -c;
    if (rule_) {
      auto base = rule_;
      r.rule_ = [base](const MultiIndex& k) { return order(k) % 2 ? -base(k) : base(k); };
    }
    r.name_ = name_ + "(-D)";
    return r;
  }

  /// The same coefficients truncated at another order.
  UltradiffOperator truncated(int K) const {
    if (!rule_) throw DomainError("only rule-based operators can be re-truncated");
    UltradiffOperator r = from_rule(dim_, rule_, K, name_);
    r.cert_ = cert_;
    return r;
  }

  std::string describe() const {
    return name_ + " d=" + std::to_string(dim_) + " K_op=" + std::to_string(K_op_) +
           (infinite_order() ? " (infinite order)" : "");
  }

 private:
  UltradiffOperator(int dim, int K_op, std::string name) : dim_(dim), K_op_(K_op), name_(std::move(name)) {
    if (dim < 1) throw DomainError("operator dimension must be positive");
    if (K_op < 2) throw DomainError("K_op must be at least 2");
  }

  int dim_;
  int K_op_;
  std::string name_;
  std::map<MultiIndex, Complex> coeffs_;
  CoefRule rule_;
  std::optional<OperatorCertificate> cert_;
};

/// Certifies |c_k| <= C/(U_{|k|} M_k) through the decay classifier applied to
/// a_p = max_{|k|=p} M_p |c_k| on the prefix of W.
inline OperatorCertificate certify_class(UltradiffOperator& P, const WeightSequence& W) {
  const int N = W.prefix();
  if (N < P.K_op()) throw InsufficientPrefix("weight prefix shorter than K_op");
  std::vector<double> log_a(static_cast<std::size_t>(N) + 1, kNegInf);
  for (const auto& k : indices_up_to(P.dim(), P.infinite_order() ? N : P.K_op())) {
    const double c = std::abs(P.coef(k));
    if (c == 0.0) continue;
    auto& a = log_a[static_cast<std::size_t>(order(k))];
    a = std::max(a, W.log_at(order(k)) + std::log(c));
  }
  const DecayCertificate dc = classify_decay(log_a);
  if (dc.verdict != DecayVerdict::rapidly_decreasing) {
    int escape = N;
    if (dc.escaping_h) {
      const double lh = std::log(*dc.escaping_h);
      for (int k = 0; k <= N; ++k)
        if (log_a[static_cast<std::size_t>(k)] + k * lh > std::log(komatsu_detail::kEscapeLevel)) {
          escape = k;
          break;
        }
    }
    throw NotOfClass(P.name() + " is not of class: " + to_string(dc.verdict) + " (" + dc.note + "), h^k M_k|c_k| escapes at k=" +
                         std::to_string(escape),
                     escape);
  }
  OperatorCertificate cert;
  cert.u = *dc.r_witness;
  cert.prefix = N;
  cert.note = dc.note;
  // Direct re-verification over every stored coefficient.
  const ProductSequence U(cert.u);
  double C = 0.0;
  for (const auto& k : indices_up_to(P.dim(), P.infinite_order() ? N : P.K_op())) {
    const double c = std::abs(P.coef(k));
    if (c > 0.0) C = std::max(C, std::exp(U.log_at(order(k)) + W.log_at(order(k)) + std::log(c)));
  }
  if (!(C <= std::max(*dc.bound, 0.0) * (1.0 + 1e-9) + 1e-300) && C > 0.0)
    throw AccuracyError("certificate re-verification exceeds the classifier bound", C, *dc.bound);
  cert.C = C > 0.0 ? C : 1.0;
  P.set_certificate(cert);
  return cert;
}

/// P(D) phi = sum c_k D^k phi on the first P.dim() axes of phi.
inline SmoothFunction apply_to_function(const UltradiffOperator& P, const SmoothFunction& phi) {
  if (phi.dim() < P.dim()) throw DomainError("function has fewer variables than the operator");
  SmoothFunction r(phi.dim());
  for (const auto& [k, c] : P.coeffs()) {
    MultiIndex full = k;
    full.resize(static_cast<std::size_t>(phi.dim()), 0);
    r = r + phi.D(full).scaled(c);
  }
  return r;
}

/// P(D) T term by term. Polynomial terms need a finite-order operator.
inline Ultradistribution apply_to_distribution(const UltradiffOperator& P, const Ultradistribution& T) {
  if (T.dim() != P.dim()) throw DomainError("operator and ultradistribution dimensions differ");
  if (T.has_poly() && P.infinite_order())
    throw UnsupportedCombination("infinite-order operator applied to a polynomial density");
  Ultradistribution r(T.dim());
  for (const auto& [k, c] : P.coeffs()) r = r + T.D(k).scaled(c);
  return r;
}

// ---------------------------------------------------------------------------
// Exchange identity

struct ExchangeLeg {
  std::string name;
  Complex value;
};

struct ExchangeCase {
  std::vector<ExchangeLeg> legs;
  double spread = 0.0;
  double budget = 0.0;     // truncation remainder bound, 0 for finite order
  std::optional<double> observed_tail;  // |<S * T, (P_{K_op+tail} - P_{K_op})(-D) phi>|
  double tolerance = 0.0;
  bool ok = true;
};

struct ExchangeReport {
  std::vector<ExchangeCase> cases;
  bool ok = true;
  std::string failure;
};

struct ExchangeOptions {
  double tol_agree = 1e-7;
  int N_max = 20;
  ConvMode mode = ConvMode::eps;
  WeightSequence M = WeightSequence::gevrey(2.0, 64);
  double h = 1.0;       // scale of the derivative bound on phi
  int K_max = 16;       // truncation of the q_{inf,h}(phi) sup
  bool observe_tail = true;
  int tail_orders = 4;  // orders beyond K_op summed for the observed tail
  CauchyOptions cauchy;
};

namespace diffop_detail {

inline double sup_abs(const SmoothFunction& f) {
  const auto s = derivative_sups(f, 0, std::nullopt);
  return s.sup.empty() ? 0.0 : s.sup[0];
}

/// Bound for |<T, psi>| / max_{|m| <= order} sup |D^m psi|.
inline double mass(const Ultradistribution& T) {
  double m = 0.0;
  for (const auto& p : T.points()) m += std::abs(p.coef);
  for (const auto& f : T.densities()) {
    double vol = 1.0;
    for (const auto& iv : f.support_box()) vol *= iv.hi - iv.lo;
    m += sup_abs(f) * vol;
  }
  return m;
}

/// Number of multi-indices of total order k in d variables.
inline double grade_size(int d, int k) { return binomial(k + d - 1, d - 1); }

}  // namespace diffop_detail

/// Remainder bound for replacing P by its truncation at K_op in
/// <S * T, P(-D) phi>, using |c_k| <= C/(U_k M_k) and
/// sup|D^m phi| <= q h^{|m|} M_m with q the truncated q_{inf,h}(phi).
inline double truncation_budget(const UltradiffOperator& P, const Ultradistribution& S, const Ultradistribution& T,
                                const SmoothFunction& phi, const ExchangeOptions& opt = {}) {
  if (!P.infinite_order()) return 0.0;
  if (!P.certificate()) throw DomainError("truncation budget needs a certified operator");
  const auto& cert = *P.certificate();
  SeminormParams sp;
  sp.kind = SeminormKind::inf_h;
  sp.h = opt.h;
  sp.M = opt.M;
  sp.K_max = opt.K_max;
  const double q = seminorm(phi, sp).value;
  const int J = S.max_point_order() + T.max_point_order();
  const ProductSequence U(cert.u);
  const int d = P.dim();
  double tail = 0.0;
  for (int m = 0; m <= J; ++m) {
    double s = 0.0;
    for (int k = P.K_op() + 1; k <= cert.u.prefix() && k + m <= opt.M.prefix(); ++k)
      s += diffop_detail::grade_size(d, k) *
           std::exp(std::log(cert.C) - U.log_at(k) + (k + m) * std::log(opt.h) + opt.M.log_at(k + m) - opt.M.log_at(k));
    tail = std::max(tail, s);
  }
  return tail * q * diffop_detail::mass(S) * diffop_detail::mass(T);
}

/// Three legs <S * T, P(-D) phi>, <(P(D)S) * T, phi>, <S * (P(D)T), phi> per test function.
inline ExchangeReport exchange_check(const UltradiffOperator& P, const Ultradistribution& S, const Ultradistribution& T,
                                     const std::vector<SmoothFunction>& phis, const ApproximateUnit& U,
                                     const ExchangeOptions& opt = {}) {
  if (!P.certificate()) throw DomainError("exchange check needs a certified operator");
  const UltradiffOperator Pa = P.adjoint();
  const Ultradistribution PS = apply_to_distribution(P, S);
  const Ultradistribution PT = apply_to_distribution(P, T);
  auto leg = [&](const std::string& name, const Ultradistribution& a, const Ultradistribution& b,
                 const SmoothFunction& f) {
    const auto d = convolvability_sequence(a, b, f, U, opt.mode, opt.N_max, opt.cauchy);
    if (!d.converged)
      throw DivergentPairing("exchange leg " + name + " is not convolvable: " +
                             (d.divergence_kind ? to_string(*d.divergence_kind) : std::string("short sequence")));
    return ExchangeLeg{name, *d.limit};
  };
  ExchangeReport rep;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const SmoothFunction& phi = phis[i];
    ExchangeCase c;
    c.legs.push_back(leg("P(D)(S*T)", S, T, apply_to_function(Pa, phi)));
    c.legs.push_back(leg("(P(D)S)*T", PS, T, phi));
    c.legs.push_back(leg("S*(P(D)T)", S, PT, phi));
    for (std::size_t a = 0; a < c.legs.size(); ++a)
      for (std::size_t b = a + 1; b < c.legs.size(); ++b)
        c.spread = std::max(c.spread, std::abs(c.legs[a].value - c.legs[b].value));
    c.budget = truncation_budget(P, S, T, phi, opt);
    c.tolerance = opt.tol_agree + c.budget;
    if (P.infinite_order() && opt.observe_tail) {
      // Coefficients of order K_op+1 .. K_op+tail_orders only; their high
      // derivatives need a looser relative quadrature target.
      std::map<MultiIndex, Complex> extra;
      for (const auto& k : indices_up_to(P.dim(), P.K_op() + opt.tail_orders))
        if (order(k) > P.K_op()) extra[k] = Pa.coef(k);
      const auto Q = UltradiffOperator::from_table(P.dim(), extra, P.K_op() + opt.tail_orders, "tail");
      QuadratureOptions q;
      q.rel_tol = 1e-8;
      const auto d = convolvability_sequence(S, T, apply_to_function(Q, phi), U, opt.mode, opt.N_max, opt.cauchy, q);
      if (!d.converged) throw DivergentPairing("exchange tail leg is not convolvable");
      c.observed_tail = std::abs(*d.limit);
      if (*c.observed_tail > c.tolerance) c.ok = false;
    }
    if (!(c.spread <= c.tolerance)) c.ok = false;
    if (!c.ok && rep.ok)
      rep.failure = "test function " + std::to_string(i) + ": spread " + std::to_string(c.spread) + " exceeds " +
                    std::to_string(c.tolerance);
    rep.ok = rep.ok && c.ok;
    rep.cases.push_back(std::move(c));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The commutator nu_n

struct NuCorrection {
  SmoothFunction nu;
  double leibniz_error = 0.0;  // max over the sample grid against the direct commutator
  double scale = 0.0;          // max |direct commutator| on the grid
  bool verified = true;
};

namespace diffop_detail {

inline MultiIndex x_index(const MultiIndex& k, int total_dim) {
  MultiIndex r(k);
  r.resize(static_cast<std::size_t>(total_dim), 0);
  return r;
}

/// Sample grid over the support box of f, 21 points per axis in two variables.
inline std::vector<Point> sample_grid(const Box& b) {
  const int per = b.size() <= 2 ? 21 : 5;
  std::vector<Point> pts{Point{}};
  for (const auto& iv : b) {
    std::vector<Point> next;
    for (const auto& p : pts)
      for (int i = 0; i < per; ++i) {
        Point q = p;
        q.push_back(iv.lo + (iv.hi - iv.lo) * i / (per - 1));
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return pts;
}

}  // namespace diffop_detail

/// nu = sum_{i != 0} D_x^i pi * sum_beta (-1)^{|beta+i|} C(beta+i, i) c_{beta+i} D_x^beta phi^,
/// for pi a function of (x, y) in 2d variables and phi^ = phi(x + y).
inline NuCorrection nu_correction(const UltradiffOperator& P, const SmoothFunction& pi, const SmoothFunction& phi) {
  const int d = P.dim();
  if (phi.dim() != d || pi.dim() != 2 * d) throw DomainError("nu_correction needs pi in 2d and phi in d variables");
  using diffop_detail::x_index;
  const SmoothFunction tri = phi.diag();
  NuCorrection out{SmoothFunction(2 * d)};
  const int K = P.order_used();
  for (const auto& i : indices_up_to(d, K)) {
    if (order(i) == 0) continue;
    SmoothFunction inner(2 * d);
    for (const auto& beta : indices_up_to(d, K - order(i))) {
      const MultiIndex bi = beta + i;
      const Complex c = P.coef(bi);
      if (c == Complex{}) continue;
      const double sign = order(bi) % 2 ? -1.0 : 1.0;
      inner = inner + tri.D(x_index(beta, 2 * d)).scaled(sign * index_binomial(bi, i) * c);
    }
    if (!inner.is_zero()) out.nu = out.nu + pi.D(x_index(i, 2 * d)) * inner;
  }
  // Direct commutator P(-D_x)(pi phi^) - pi P(-D_x) phi^.
  const UltradiffOperator Pa = P.adjoint();
  const SmoothFunction direct = apply_to_function(Pa, pi * tri) - pi * apply_to_function(Pa, tri);
  Box b = (pi * tri).support_box();
  for (auto& iv : b) {
    iv.lo = std::max(iv.lo, -50.0);
    iv.hi = std::min(iv.hi, 50.0);
  }
  for (const auto& x : diffop_detail::sample_grid(b)) {
    const Complex dv = direct(x);
    out.scale = std::max(out.scale, std::abs(dv));
    out.leibniz_error = std::max(out.leibniz_error, std::abs(out.nu(x) - dv));
  }
  out.verified = out.leibniz_error <= 1e-9 * std::max(1.0, out.scale);
  return out;
}

struct ChainCheck {
  std::string name;
  long long tuples = 0;
  bool holds = true;
  std::optional<std::vector<MultiIndex>> violation;  // alpha, beta, i, j
};

struct NuBoundReport {
  std::vector<double> seminorms;  // ||nu_n||_(t), n = 1..N_semi
  double seminorm_sup = 0.0;
  bool bounded = true;
  std::vector<Complex> pairings;  // <S (x) T, nu_n>, n = 1..N_max
  std::optional<int> n0;          // pairings are exactly 0 from n0 on
  bool leibniz_ok = true;
  bool theta_ok = true;
  double H = 1.0, A = 1.0;
  double lambda = 1.0;   // scaling applied to min(t, u) after the minorant
  double C_prime = 0.0;  // re-certified constant for u' = lambda u
  double r_tilde_1 = 0.0;
  double r_bar_1 = 0.0;     // r~ / (8H)
  double r_barbar_1 = 0.0;  // r~ / (16H^2)
  std::vector<ChainCheck> chain;
  bool ok = true;
  std::string failure;
};

struct NuBoundOptions {
  int K_max = 8;
  int N_max = 20;
  int N_seminorm = 6;
  int max_order = 12;
  int samples = 5000;  // random tuples when d > 1
};

/// Checks behind the exchange proof: bounded (t_p) seminorms of nu_n, exact
/// vanishing of <S (x) T, nu_n> for large n, and the inequality chain for the
/// auxiliary sequences built from t and the certificate.
inline NuBoundReport nu_bound_check(const UltradiffOperator& P, const ApproximateUnit& unit, const Ultradistribution& S,
                                    const Ultradistribution& T, const SmoothFunction& phi, const RSequence& t,
                                    const WeightSequence& M, const NuBoundOptions& opt = {}) {
  if (!P.certificate()) throw DomainError("nu bound check needs a certified operator");
  if (!unit.special()) throw DomainError("nu bound check needs a special unit");
  const int d = P.dim();
  NuBoundReport rep;
  auto fail = [&](const std::string& why) {
    if (rep.ok) rep.failure = why;
    rep.ok = false;
  };
  const ApproximateUnit U2 = unit.with_dim(2 * d);

  // (a) seminorms of nu_n and (b) pairings.
  for (int n = 1; n <= opt.N_max; ++n) {
    const NuCorrection nc = nu_correction(P, U2.member(n), phi);
    if (!nc.verified) {
      rep.leibniz_ok = false;
      fail("nu_" + std::to_string(n) + " differs from the direct commutator by " + std::to_string(nc.leibniz_error));
    }
    if (n <= opt.N_seminorm) {
      const auto s = r_seminorm(nc.nu, t, M, opt.K_max);
      rep.seminorms.push_back(s.value);
    }
    rep.pairings.push_back(tensor_pair(S, T, nc.nu));
  }
  if (!rep.seminorms.empty()) {
    rep.seminorm_sup = *std::max_element(rep.seminorms.begin(), rep.seminorms.end());
    const std::size_t half = rep.seminorms.size() / 2;
    const double first = *std::max_element(rep.seminorms.begin(), rep.seminorms.begin() + static_cast<long>(half));
    for (std::size_t n = half; n < rep.seminorms.size(); ++n)
      if (!std::isfinite(rep.seminorms[n]) || rep.seminorms[n] > first * (1.0 + 1e-6)) {
        rep.bounded = false;
        fail("||nu_" + std::to_string(n + 1) + "|| grows beyond the first half of the run");
        break;
      }
  }
  for (int n = opt.N_max; n >= 1 && rep.pairings[static_cast<std::size_t>(n - 1)] == Complex{}; --n) rep.n0 = n;
  if (!rep.n0) fail("<S (x) T, nu_n> is not exactly 0 at n=" + std::to_string(opt.N_max));

  // theta = 1 on supp phi inflated by 0.1.
  {
    std::vector<Factor> fs;
    const Box sb = phi.support_box();
    for (int a = 0; a < d; ++a) {
      const Interval iv = sb[static_cast<std::size_t>(a)];
      fs.push_back(Factor{make_plateau(iv.lo - 0.2, iv.lo - 0.1, iv.hi + 0.1, iv.hi + 0.2), {a}, 0});
    }
    const SmoothFunction theta = SmoothFunction::from_factors(d, std::move(fs));
    rep.theta_ok = (theta * phi).key() == phi.key();
    if (!rep.theta_ok) fail("theta phi does not reduce to phi");
  }

  // (c) auxiliary sequences.
  const auto m2 = check_condition(M, Condition::M2);
  if (!m2.witness_constants) {
    fail("weight sequence has no (M.2) witness");
    return rep;
  }
  rep.A = m2.witness_constants->A;
  rep.H = m2.witness_constants->H;
  const double H = rep.H, A = rep.A;
  const auto& cert = *P.certificate();
  const int n = std::min(t.prefix(), cert.u.prefix());
  std::vector<double> sv{1.0};
  for (int p = 1; p <= n; ++p) sv.push_back(std::min(t.at(p), cert.u.at(p)));
  const RSequence r = pp_minorant(RSequence::from_values(sv));
  const double need = 16.0 * H * H;
  rep.lambda = r.at(1) > need ? 1.0 : need * (1.0 + 1e-4) / r.at(1);
  const RSequence rt = scale_lambda(r, rep.lambda);
  const RSequence ut = scale_lambda(cert.u, rep.lambda);
  rep.r_tilde_1 = rt.at(1);
  for (int p = 1; p <= rt.prefix(); ++p)
    if (!(rt.at(p) > need)) fail("r~_" + std::to_string(p) + " does not exceed 16H^2");
  if (!check_pp_inequality(rt).holds_on_prefix) fail("r~ violates the doubling product inequality");
  rep.r_bar_1 = scale_lambda(rt, 1.0 / (8.0 * H)).at(1);
  rep.r_barbar_1 = scale_lambda(rt, 1.0 / (16.0 * H * H)).at(1);

  const ProductSequence R(rt), Ut(ut);
  // Re-certify |c_k| <= C'/(U'_k M_k) on the stored range.
  for (const auto& k : indices_up_to(d, std::min(P.infinite_order() ? cert.prefix : P.K_op(), ut.prefix()))) {
    const double c = std::abs(P.coef(k));
    if (c > 0.0) rep.C_prime = std::max(rep.C_prime, std::exp(Ut.log_at(order(k)) + M.log_at(order(k)) + std::log(c)));
  }

  const double l2 = std::log(2.0), lH = std::log(H), lA = std::log(A);
  const double slack = 1e-12;
  auto leq = [&](double lhs, double rhs) { return lhs <= rhs + slack * std::max(1.0, std::abs(rhs)); };
  ChainCheck r2r{"doubling_product_shift"}, mhm{"weight_stability"}, cbei{"coefficient_bound"}, bpoi{"binomial_bound"};
  auto check_tuple = [&](const MultiIndex& al, const MultiIndex& be, const MultiIndex& i, const MultiIndex& j) {
    const int a = order(al), b = order(be), ni = order(i), nj = order(j);
    auto note = [&](ChainCheck& c, bool ok) {
      ++c.tuples;
      if (!ok && c.holds) {
        c.holds = false;
        c.violation = std::vector<MultiIndex>{al, be, i, j};
      }
    };
    // R_{|a+i-j|} R_{|b+j|} / (R_a R_b R_i) <= 2^{|b+j|} R_{|a+i|}/(R_a R_i) <= 2^{|a+i|} 2^{|b+j|}.
    const double lhs = R.log_at(a + ni - nj) + R.log_at(b + nj) - R.log_at(a) - R.log_at(b) - R.log_at(ni);
    const double mid = (b + nj) * l2 + R.log_at(a + ni) - R.log_at(a) - R.log_at(ni);
    note(r2r, leq(lhs, mid) && leq(mid, (a + ni + b + nj) * l2));
    // M_{a+i-j} M_{b+j} / (M_a M_b M_i) <= A H^{|b+j|} M_{a+i}/(M_a M_i) <= A^2 H^{|a+i|} H^{|b+j|}.
    const double ml = M.log_at(a + ni - nj) + M.log_at(b + nj) - M.log_at(a) - M.log_at(b) - M.log_at(ni);
    const double mm = lA + (b + nj) * lH + M.log_at(a + ni) - M.log_at(a) - M.log_at(ni);
    note(mhm, leq(ml, mm) && leq(mm, 2 * lA + (a + ni + b + nj) * lH));
    // |c_{b+i}| <= C'/(U'_b U'_i M_b M_i) and R_b R_i <= U'_b U'_i.
    const double c = std::abs(P.coef(be + i));
    bool cb = leq(R.log_at(b) + R.log_at(ni), Ut.log_at(b) + Ut.log_at(ni));
    if (c > 0.0)
      cb = cb && leq(std::log(c), std::log(rep.C_prime) - Ut.log_at(b) - Ut.log_at(ni) - M.log_at(b) - M.log_at(ni));
    note(cbei, cb);
    // C(b+i, i) <= 2^{|b+i|}.
    note(bpoi, leq(std::log(index_binomial(be + i, i)), (b + ni) * l2));
  };
  const int K = opt.max_order;
  const int top = 2 * K + K;
  if (R.prefix() < top || Ut.prefix() < top || M.prefix() < top)
    throw InsufficientPrefix("auxiliary sequences shorter than the sampled orders");
  if (d == 1) {
    for (int a = 0; a <= K; ++a)
      for (int b = 0; b <= K; ++b)
        for (int i = 1; i <= K; ++i)
          for (int j = 0; j <= a; ++j) check_tuple({a}, {b}, {i}, {j});
  } else {
    std::mt19937 rng(12345);
    const auto all = indices_up_to(d, K);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int s = 0; s < opt.samples; ++s) {
      const MultiIndex al = all[pick(rng)], be = all[pick(rng)];
      MultiIndex i = all[pick(rng)];
      if (order(i) == 0) i[0] = 1;
      const auto below = indices_below(al);
      std::uniform_int_distribution<std::size_t> pj(0, below.size() - 1);
      check_tuple(al, be, i, below[pj(rng)]);
    }
  }
  for (auto* c : {&r2r, &mhm, &cbei, &bpoi}) {
    if (!c->holds) fail(c->name + " fails on a sampled index tuple");
    rep.chain.push_back(*c);
  }
  return rep;
}

}  // namespace roumieu
