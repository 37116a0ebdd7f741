// Acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance <roumieu_cli> <baseline config> <scratch dir>

#include <boost/math/differentiation/autodiff.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "roumieu/roumieu.hpp"

using namespace roumieu;
using json = nlohmann::ordered_json;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) note << what;
    pass = pass && ok;
  }
};

// ---- closed-form oracles ---------------------------------------------------

constexpr double kRelTol = 1e-12;

bool log_le(double a, double b) { return a <= b + kRelTol * std::max(1.0, std::abs(b)); }

double lfact(int p) { return std::lgamma(p + 1.0); }

// Bump exp(-1/(1-u^2)) at u = (x-c)/r and its derivatives via autodiff.
double bump_value(double x, double c, double r) {
  const double u = (x - c) / r;
  return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
}

template <int N>
double bump_derivative(double x, double c, double r, int k) {
  using namespace boost::math::differentiation;
  const double u0 = (x - c) / r;
  if (std::abs(u0) >= 1.0) return 0.0;
  const auto X = make_fvar<double, N>(x);
  const auto u = (X - c) / r;
  const auto y = exp(-1.0 / (1.0 - u * u));
  return static_cast<double>(y.derivative(static_cast<std::size_t>(k)));
}

double gk(const std::function<double(double)>& f, double a, double b) {
  if (!(a < b)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-11);
}

struct Atom {
  double c = 0.0, r = 1.0;
  Complex coef = 1.0;
};

// One-dimensional ultradistribution read from the fixture config.
struct OracleDist {
  enum Kind { point, bump, poly } kind = point;
  double a = 0.0;
  int k = 0;
  Complex coef = 1.0;
  Atom atom;
  std::vector<double> poly_coeffs;
  double density(double y) const {
    if (kind == bump) return bump_value(y, atom.c, atom.r);
    double v = 0.0;
    for (std::size_t j = poly_coeffs.size(); j-- > 0;) v = v * y + poly_coeffs[j];
    return v;
  }
  double lo() const { return kind == bump ? atom.c - atom.r : -1e300; }
  double hi() const { return kind == bump ? atom.c + atom.r : 1e300; }
};

Complex ipow_(int k) {
  static const Complex p[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return p[((k % 4) + 4) % 4];
}

/// sum_m w_m phi^(shift + m)(x) with one autodiff evaluation.
template <int N>
Complex weighted_derivative(const std::vector<Complex>& w, double x, double c, double r, int shift) {
  using namespace boost::math::differentiation;
  const double u0 = (x - c) / r;
  // Beyond 1/(1-u^2) = 700 every derivative up to order 25 is below 1e-150.
  if (std::abs(u0) >= 1.0 || 1.0 / (1.0 - u0 * u0) > 700.0) return 0.0;
  const auto X = make_fvar<double, N>(x);
  const auto u = (X - c) / r;
  const auto y = exp(-1.0 / (1.0 - u * u));
  Complex s{};
  for (std::size_t m = 0; m < w.size(); ++m)
    if (w[m] != Complex{}) s += w[m] * static_cast<double>(y.derivative(static_cast<std::size_t>(shift) + m));
  return s;
}

Complex integrate_c(const std::function<Complex(double)>& f, double a, double b) {
  if (!(a < b)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-11);
}

/// <S * T, sum_m w_m d^m phi> from closed forms and nested Gauss-Kronrod.
template <int N>
Complex conv_oracle(const OracleDist& S, const OracleDist& T, const Atom& phi, const std::vector<Complex>& w) {
  auto g = [&](double x, int shift) { return weighted_derivative<N>(w, x, phi.c, phi.r, shift); };
  const double plo = phi.c - phi.r, phi_hi = phi.c + phi.r;
  if (S.kind == OracleDist::point && T.kind == OracleDist::point)
    return S.coef * T.coef * ipow_(S.k + T.k) * phi.coef * g(S.a + T.a, S.k + T.k);
  if (S.kind == OracleDist::point || T.kind == OracleDist::point) {
    const OracleDist& P = S.kind == OracleDist::point ? S : T;
    const OracleDist& F = S.kind == OracleDist::point ? T : S;
    const double lo = std::max(F.lo(), plo - P.a), hi = std::min(F.hi(), phi_hi - P.a);
    const Complex v = integrate_c([&](double y) { return F.density(y) * g(P.a + y, P.k); }, lo, hi);
    return P.coef * ipow_(P.k) * F.coef * phi.coef * v;
  }
  const Complex v = integrate_c(
      [&](double x) {
        const double lo = std::max(T.lo(), plo - x), hi = std::min(T.hi(), phi_hi - x);
        return S.density(x) * integrate_c([&](double y) { return T.density(y) * g(x + y, 0); }, lo, hi);
      },
      std::max(S.lo(), plo - T.hi()), std::min(S.hi(), phi_hi - T.lo()));
  return S.coef * T.coef * phi.coef * v;
}

Complex jcomplex(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  return {v[0].get<double>(), v[1].get<double>()};
}

Atom atom_of(const json& f) {
  Atom a;
  a.c = f.at("atom").at("center")[0].get<double>();
  a.r = f.at("atom").at("radius")[0].get<double>();
  if (f.contains("coef")) a.coef = jcomplex(f.at("coef"));
  return a;
}

OracleDist dist_of(const json& cfg, const std::string& name) {
  const json& d = cfg.at("distributions").at(name);
  OracleDist o;
  if (d.contains("delta")) {
    o.kind = OracleDist::point;
    o.a = d.at("delta").at("at")[0].get<double>();
    if (d.at("delta").contains("order")) o.k = d.at("delta").at("order")[0].get<int>();
    if (d.at("delta").contains("coef")) o.coef = jcomplex(d.at("delta").at("coef"));
  } else if (d.contains("density")) {
    o.kind = OracleDist::bump;
    o.atom = atom_of(cfg.at("functions").at(d.at("density").get<std::string>()));
    o.coef = o.atom.coef;
    o.atom.coef = 1.0;
  } else if (d.contains("poly")) {
    o.kind = OracleDist::poly;
    const json& f = cfg.at("functions").at(d.at("poly").get<std::string>());
    o.poly_coeffs = f.at("poly").at("coeffs").get<std::vector<double>>();
    if (f.contains("coef")) o.coef = jcomplex(f.at("coef"));
  } else {
    throw std::runtime_error("oracle does not model distribution " + name);
  }
  return o;
}

const json* find_check(const json& report, const std::string& suite, const std::string& id) {
  for (const auto& c : report.at("suites").at(suite).at("checks"))
    if (c.at("id") == id) return &c;
  return nullptr;
}

json without_timing(json j) {
  if (j.is_object()) {
    j.erase("timing_ms");
    for (auto& [k, v] : j.items()) v = without_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = without_timing(v);
  }
  return j;
}

// ---- criteria ---------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto M = WeightSequence::gevrey(2.0, 256);
  for (auto c : {Condition::M1, Condition::M2, Condition::M2prime, Condition::M3, Condition::M3prime})
    o.require(check_condition(M, c).holds_on_prefix, "gevrey 2 fails a condition; ");
  o.require(check_product_inequality(M).holds_on_prefix, "product inequality fails; ");
  // Independent log-domain checks with M_p = (p!)^2.
  auto lM = [](int p) { return 2.0 * lfact(p); };
  for (int p = 1; p < 256; ++p) o.require(log_le(2 * lM(p), lM(p - 1) + lM(p + 1)), "M1 oracle; ");
  const auto m2 = check_condition(M, Condition::M2);
  o.require(m2.witness_constants.has_value(), "no (A, H) for M2; ");
  if (m2.witness_constants) {
    const double lA = std::log(m2.witness_constants->A), lH = std::log(m2.witness_constants->H);
    for (int p = 0; p <= 256; ++p)
      for (int q = 0; q <= p; ++q) o.require(log_le(lM(p), lA + p * lH + lM(q) + lM(p - q)), "M2 witness; ");
  }
  for (int p = 0; p <= 256; ++p)
    for (int q = 0; p + q <= 256; ++q) o.require(log_le(lM(p) + lM(q), lM(p + q)), "product oracle; ");
  // Sum_{q > p} 1/q^2 = trigamma(p + 1) against p M_p / M_{p+1} = p/(p+1)^2.
  double worst = 0.0;
  for (int p = 1; p < 256; ++p)
    worst = std::max(worst, boost::math::trigamma(p + 1.0) * (p + 1.0) * (p + 1.0) / p);
  o.require(worst < 3.0, "M3 oracle constant unbounded; ");
  // Factorial family: harmonic partial sums first exceed 10 at n = 12367.
  const auto F = WeightSequence::factorial(256);
  const auto m3 = check_condition(F, Condition::M3prime);
  o.require(!m3.holds_on_prefix, "factorial passes M3'; ");
  int n10 = 0;
  double h = 0.0;
  for (int n = 1; !n10; ++n)
    if ((h += 1.0 / n) > 10.0) n10 = n;
  o.require(m3.first_violation && (*m3.first_violation)[0] == n10, "first violation differs from harmonic oracle; ");
  o.require(m3.partial_sum && *m3.partial_sum > 10.0, "partial sum not reported; ");
  o.note << "M2 (A, H) = (" << (m2.witness_constants ? m2.witness_constants->A : 0) << ", "
         << (m2.witness_constants ? m2.witness_constants->H : 0) << "); factorial partial sum " << std::setprecision(10)
         << (m3.partial_sum ? *m3.partial_sum : 0) << " at p = " << n10;
  return o;
}

bool pp_oracle(const RSequence& r, int N) {
  std::vector<double> lR{0.0};
  for (int p = 1; p <= N; ++p) lR.push_back(lR.back() + std::log(r.at(p)));
  for (int p = 0; p <= N; ++p)
    for (int q = 0; p + q <= N; ++q)
      if (!log_le(lR[static_cast<std::size_t>(p + q)], (p + q) * std::log(2.0) + lR[static_cast<std::size_t>(p)] +
                                                             lR[static_cast<std::size_t>(q)]))
        return false;
  return true;
}

Outcome criterion2() {
  Outcome o;
  const auto lin = RSequence::linear(256);
  o.require(check_pp_inequality(lin).holds_on_prefix, "template fails; ");
  // r_p = max(1, p): R_p = p!, so the inequality reads C(p+q, p) <= 2^{p+q}.
  for (int p = 0; p <= 256; ++p)
    for (int q = 0; p + q <= 256; ++q)
      o.require(log_le(lfact(p + q) - lfact(p) - lfact(q), (p + q) * std::log(2.0)), "binomial oracle; ");

  std::mt19937 rng(7);
  auto random_r = [&](int n) {
    std::uniform_real_distribution<double> inc(0.0, 2.0);
    std::vector<double> v{1.0, 1.0 + inc(rng)};
    for (int p = 2; p <= n; ++p) v.push_back(v.back() + inc(rng) + 1e-3);
    return RSequence::from_values(v);
  };
  std::vector<RSequence> fixtures;
  std::vector<double> slow{1.0};
  for (int p = 1; p <= 9; ++p) slow.push_back(1.0 + 0.1 * p);
  for (int p = 10; p <= 64; ++p) slow.push_back(p + 1.0);
  fixtures.push_back(RSequence::from_values(slow));
  fixtures.push_back(RSequence::linear(64));
  fixtures.push_back(RSequence::power(0.5, 64));
  while (fixtures.size() < 10) fixtures.push_back(random_r(64));
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const auto& s = fixtures[i];
    const auto r = pp_minorant(s);
    for (int p = 1; p <= s.prefix(); ++p) {
      o.require(r.at(p) <= s.at(p) * (1 + kRelTol), "minorant exceeds s; ");
      o.require(r.at(p) >= r.at(p - 1) * (1 - kRelTol), "minorant not monotone; ");
      if (p >= 2) o.require(r.at(p) / p <= r.at(p - 1) / (p - 1) * (1 + kRelTol), "r_p/p increases; ");
    }
    o.require(pp_oracle(r, r.prefix()), "minorant fails the doubling inequality; ");
    if (i == 0) {
      // Slow then linear: r_p = p min_{j <= p} s_j / j.
      double m = INFINITY;
      for (int p = 1; p <= s.prefix(); ++p) {
        m = std::min(m, s.at(p) / p);
        o.require(std::abs(r.at(p) - std::max(1.0, p * m)) <= 1e-12 * r.at(p), "slow-then-linear closed form; ");
      }
    }
  }
  for (int i = 0; i < 100; ++i) {
    const auto r = random_r(40);
    o.require(check_superadditive(ProductSequence(r), 1 + i % 3).holds_on_prefix, "superadditivity fails; ");
    std::vector<double> lR{0.0};
    for (int p = 1; p <= 40; ++p) lR.push_back(lR.back() + std::log(r.at(p)));
    for (int p = 0; p <= 40; ++p)
      for (int q = 0; p + q <= 40; ++q)
        o.require(log_le(lR[static_cast<std::size_t>(p)] + lR[static_cast<std::size_t>(q)], lR[static_cast<std::size_t>(p + q)]),
                  "superadditivity oracle; ");
  }
  o.note << "template exhaustive to p+q <= 256, 10 minorant fixtures, 100 superadditive samples";
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::vector<double> geo(257), fact(1 << 22 | 1), inv(257), zero(65, kNegInf);
  for (std::size_t k = 0; k < geo.size(); ++k) geo[k] = static_cast<double>(k) * std::log(3.0);
  for (std::size_t k = 0; k < fact.size(); ++k) fact[k] = std::lgamma(static_cast<double>(k) + 1.0);
  for (std::size_t k = 0; k < inv.size(); ++k) inv[k] = -std::lgamma(static_cast<double>(k) + 1.0);

  const auto g = classify_growth(geo);
  o.require(g.verdict == GrowthVerdict::slowly_increasing && g.h_witness && g.bound, "3^k not certified; ");
  if (g.h_witness && g.bound) {
    double sup = 0.0;
    for (std::size_t k = 0; k < geo.size(); ++k) sup = std::max(sup, std::pow(3.0 / *g.h_witness, static_cast<double>(k)));
    o.require(sup <= *g.bound * (1 + 1e-12), "h-witness fails direct sup; ");
  }
  o.require(classify_growth(fact).verdict == GrowthVerdict::not_slowly_increasing, "k! not rejected; ");

  const auto d = classify_decay(inv);
  o.require(d.verdict == DecayVerdict::rapidly_decreasing && d.r_witness && d.bound, "1/k! not certified; ");
  if (d.r_witness && d.bound) {
    double lR = 0.0, sup = 1.0;
    for (int k = 1; k < static_cast<int>(inv.size()); ++k) {
      lR += std::log(d.r_witness->at(k));
      sup = std::max(sup, std::exp(lR + inv[static_cast<std::size_t>(k)]));
    }
    o.require(sup <= *d.bound * (1 + 1e-12), "r-witness fails direct sup; ");
  }
  o.require(classify_growth(zero).verdict == GrowthVerdict::slowly_increasing, "zero growth; ");
  o.require(classify_decay(zero).verdict == DecayVerdict::rapidly_decreasing, "zero decay; ");
  o.note << "h = " << (g.h_witness ? *g.h_witness : 0) << ", decay bound " << (d.bound ? *d.bound : 0);
  return o;
}

double richardson(const std::function<double(double)>& f, double x, double h = 1e-3) {
  const double d1 = (f(x + h) - f(x - h)) / (2 * h), d2 = (f(x + h / 2) - f(x - h / 2)) / h;
  return (4 * d2 - d1) / 3;
}

Outcome criterion4() {
  Outcome o;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1.2, 1.2);
  const auto f = SmoothFunction::atom({0.1, -0.2}, {1.0, 0.7}) +
                 SmoothFunction::atom({0.3, 0.0}, {0.8, 1.1}).scaled({0.5, -1.0}) *
                     SmoothFunction::atom({-0.1, 0.2}, {0.9, 0.9});
  const auto fxy = f.partial({1, 0}).partial({0, 1}), fyx = f.partial({0, 1}).partial({1, 0});
  for (int s = 0; s < 1000; ++s) {
    const Point x{U(rng), U(rng)};
    const Complex a = fxy(x), b = fyx(x);
    o.require(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)), "mixed partials differ; ");
  }
  // Finite differences of order k-1 against exact order k, and against autodiff.
  const auto g = SmoothFunction::atom({0.0}, {1.0});
  std::uniform_real_distribution<double> X(-0.7, 0.7);
  for (int k = 1; k <= 4; ++k) {
    const auto gk1 = g.partial({k - 1}), gk_ = g.partial({k});
    double scale = 0.0;
    for (double t = -0.95; t <= 0.95; t += 0.01) scale = std::max(scale, std::abs(gk_({t})));
    for (int s = 0; s < 50; ++s) {
      const double x = X(rng);
      const double exact = gk_({x}).real();
      const double fd = richardson([&](double t) { return gk1({t}).real(); }, x);
      const double floor = std::max(std::abs(exact), 1e-3 * scale);
      o.require(std::abs(fd - exact) <= 1e-6 * floor, "finite difference mismatch; ");
      o.require(std::abs(bump_derivative<4>(x, 0.0, 1.0, k) - exact) <= 1e-10 * floor, "autodiff mismatch; ");
    }
  }
  // Product seminorm estimate for 20 random pairs, r_p = p + 2.
  std::vector<double> rv{1.0};
  for (int p = 1; p <= 64; ++p) rv.push_back(p + 2.0);
  const auto r = RSequence::from_values(rv);
  const auto M = WeightSequence::gevrey(2.0, 64);
  std::uniform_real_distribution<double> C(-0.8, 0.8), R(0.5, 1.5);
  for (int i = 0; i < 20; ++i) {
    const auto a = SmoothFunction::atom({C(rng)}, {R(rng)}), b = SmoothFunction::atom({C(rng)}, {R(rng)});
    const auto rep = check_product_seminorm(a, b, r, M, 12);
    o.require(rep.holds && rep.lhs <= rep.rhs, "product seminorm estimate fails; ");
  }
  o.note << "1000 mixed-partial points, orders 1..4 against finite differences, 20 seminorm pairs";
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto M = WeightSequence::gevrey(2.0, 64);
  std::vector<double> shifted{1.0};
  for (int p = 1; p <= 64; ++p) shifted.push_back(p + 2.0);
  const std::vector<std::pair<std::string, RSequence>> rs{
      {"linear", RSequence::linear(64)}, {"sqrt", RSequence::power(0.5, 64)}, {"shifted", RSequence::from_values(shifted)}};
  const auto sched = ApproximateUnit::linear_schedule(20);
  const auto plateau = verify_unit(ApproximateUnit::plateau(1, sched), rs, M, 12, 20);
  o.require(plateau.ok, "plateau unit rejected: " + plateau.counterexample + "; ");
  const auto dil = verify_unit(ApproximateUnit::dilation(1, sched), rs, M, 12, 20);
  o.require(dil.ok, "dilation unit rejected: " + dil.counterexample + "; ");
  for (const auto& b : dil.bounds) {
    o.require(b.generator_norm.has_value(), "dilation generator norm missing; ");
    if (b.generator_norm) o.require(b.sup <= *b.generator_norm, "dilation bound exceeds generator norm; ");
  }
  const auto bad = verify_unit(shrinking_nonexample(20), {rs.front()}, M, 12, 20);
  o.require(!bad.ok && !bad.converges, "shrinking non-example accepted or converging; ");
  o.note << "plateau and dilation accepted for 3 r-sequences; non-example does not converge to 1 (final error "
         << (bad.final_errors.empty() ? 0.0 : bad.final_errors.front()) << ")";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto M = WeightSequence::gevrey(2.0, 64);
  const auto sched = ApproximateUnit::linear_schedule(20);
  const std::vector<NamedUnit> units{{"plateau_n", ApproximateUnit::plateau(1, sched)},
                                     {"plateau_2n", ApproximateUnit::plateau(1, ApproximateUnit::linear_schedule(20, 2.0))},
                                     {"dilation", ApproximateUnit::dilation(1, sched)},
                                     {"general", ApproximateUnit::perturbed(ApproximateUnit::plateau(1, sched))}};
  const double bump_integral = boost::math::quadrature::tanh_sinh<double>().integrate(
      [](double x) { return bump_value(x, 0.3, 0.6); }, -0.3, 0.9);
  const auto b = integrability_test(Ultradistribution::density(SmoothFunction::atom({0.3}, {0.6})), units, 20);
  o.require(b.verdict == IntegrabilityVerdict::integrable_evidence && b.value, "bump not integrable; ");
  if (b.value) o.require(std::abs(*b.value - bump_integral) <= 1e-8, "bump integral mismatch; ");
  const auto d = integrability_test(Ultradistribution::delta({0.0}), units, 20);
  o.require(d.verdict == IntegrabilityVerdict::integrable_evidence && d.value && std::abs(*d.value - 1.0) <= 1e-8,
            "delta integral not 1; ");
  const auto one = integrability_test(Ultradistribution::constant(1), units, 20);
  o.require(one.verdict == IntegrabilityVerdict::not_integrable, "constant 1 not rejected; ");
  for (const auto& [u, diag] : one.per_unit)
    o.require(diag.divergence_kind && *diag.divergence_kind == DivergenceKind::unbounded, "constant 1 not unbounded; ");
  o.note << "bump integral " << std::setprecision(12) << (b.value ? b.value->real() : 0) << " vs oracle " << bump_integral;
  return o;
}

Outcome criterion7(const json& cfg, const json& report) {
  Outcome o;
  int pairs = 0, cases = 0;
  double worst_rel = 0.0;
  std::vector<std::string> phis = cfg.at("test_functions").get<std::vector<std::string>>();
  o.require(phis.size() >= 3, "fewer than 3 test functions; ");
  for (const auto& p : cfg.at("pairs")) {
    const std::string name = p.at("name");
    const bool convolvable = p.value("expect", std::string("convolvable")) == "convolvable";
    pairs += convolvable;
    for (const auto& fn : phis) {
      const json* c = find_check(report, "convolution", "convolution." + name + "." + fn);
      o.require(c != nullptr, "missing check for " + name + "; ");
      if (!c) continue;
      const json& d = c->at("detail");
      if (!convolvable) {
        o.require(d.at("none_converged").get<bool>() && d.at("all_unbounded").get<bool>(), name + " converged somewhere; ");
        continue;
      }
      ++cases;
      o.require(d.at("all_converged").get<bool>(), name + " mode did not converge; ");
      o.require(d.at("cross_mode_spread").get<double>() <= 1e-7, name + " cross-mode spread; ");
      o.require(d.contains("commutativity_spread") && d.at("commutativity_spread").get<double>() <= 1e-7,
                name + " commutativity spread; ");
      if (!d.contains("value")) continue;
      const Complex got = jcomplex(d.at("value"));
      const Complex want = conv_oracle<4>(dist_of(cfg, p.at("S")), dist_of(cfg, p.at("T")), atom_of(cfg.at("functions").at(fn)), {1.0});
      const double rel = std::abs(got - want) / std::max(std::abs(want), 1e-300);
      worst_rel = std::max(worst_rel, std::abs(want) > 1e-12 ? rel : std::abs(got - want));
      o.require(std::abs(got - want) <= 1e-6 * std::abs(want) + 1e-14, name + "/" + fn + " value differs from oracle; ");
    }
  }
  o.require(pairs >= 8, "fewer than 8 convolvable pairs; ");
  // Absolute integrability diagnostic.
  int c3 = 0;
  for (const auto& c : report.at("suites").at("convolution").at("checks")) {
    const std::string id = c.at("id");
    if (id.rfind("convolution.c3.", 0) != 0) continue;
    ++c3;
    const bool compact = id != "convolution.c3.one_one";
    o.require(c.at("detail").at("converges").get<bool>() == compact, id + " wrong c3 outcome; ");
  }
  o.require(c3 >= 2, "c3 diagnostic not run; ");
  o.note << pairs << " pairs x " << phis.size() << " test functions, worst relative oracle error " << worst_rel;
  return o;
}

Outcome criterion8(const json& cfg, const json& report) {
  Outcome o;
  const auto M = WeightSequence::gevrey(cfg.at("weight").at("s").get<double>(), 64);
  std::vector<std::string> phis = cfg.at("test_functions").get<std::vector<std::string>>();
  std::vector<std::string> conv;
  for (const auto& p : cfg.at("pairs"))
    if (p.value("expect", std::string("convolvable")) == "convolvable") conv.push_back(p.at("name"));
  auto pair_of = [&](const std::string& n) -> const json& {
    for (const auto& p : cfg.at("pairs"))
      if (p.at("name") == n) return p;
    throw std::runtime_error("unknown pair");
  };
  double worst_spread = 0.0;
  int n_inf = 0;
  for (const std::string op : {"D", "one_plus_d2", "inv_fact_weight"}) {
    const bool infinite = op == "inv_fact_weight";
    for (const auto& pn : conv) {
      const json* c = find_check(report, "exchange", "exchange." + op + "." + pn);
      if (!c) {
        o.require(infinite, "missing exchange check " + op + "." + pn + "; ");
        continue;
      }
      o.require(c->at("pass").get<bool>(), "exchange " + op + "." + pn + " failed; ");
      const json& d = c->at("detail");
      if (!d.contains("cases")) continue;
      const auto& pc = pair_of(pn);
      const auto S = dist_of(cfg, pc.at("S")), T = dist_of(cfg, pc.at("T"));
      for (std::size_t i = 0; i < d.at("cases").size(); ++i) {
        const json& k = d.at("cases")[i];
        const double spread = k.at("spread").get<double>();
        const Atom phi = atom_of(cfg.at("functions").at(phis[i]));
        Complex want{};
        double tol;
        if (!infinite) {
          o.require(spread <= 1e-7, "spread above 1e-7 for " + op + "." + pn + "; ");
          worst_spread = std::max(worst_spread, spread);
          tol = 1e-7;
          // <D^k u, phi> = i^k <u, phi^(k)>.
          if (op == "D") want = conv_oracle<4>(S, T, phi, {0.0, ipow_(1)});
          else want = conv_oracle<4>(S, T, phi, {1.0, 0.0, ipow_(2)});
        } else {
          ++n_inf;
          tol = k.at("tolerance").get<double>();
          o.require(spread <= tol, "spread exceeds truncation budget for " + pn + "; ");
          std::vector<Complex> w;
          for (int j = 0; j <= 24; ++j) w.push_back(std::exp(-lfact(j) - M.log_at(j)) * ipow_(j));
          want = conv_oracle<25>(S, T, phi, w);
        }
        for (const auto& [leg, v] : k.at("legs").items()) {
          const Complex got = jcomplex(v);
          o.require(std::abs(got - want) <= tol + 1e-6 * std::abs(want), op + "." + pn + " leg " + leg + " differs from oracle; ");
        }
      }
    }
  }
  o.require(n_inf > 0, "infinite-order operator not exercised; ");
  int nu = 0;
  for (const auto& c : report.at("suites").at("nu").at("checks")) {
    ++nu;
    const json& d = c.at("detail");
    o.require(c.at("pass").get<bool>(), c.at("id").get<std::string>() + " failed; ");
    o.require(d.contains("n0"), "no n0; ");
    if (d.contains("n0")) {
      const int n0 = d.at("n0").get<int>();
      const auto& pv = d.at("pairings");
      for (std::size_t n = static_cast<std::size_t>(n0 - 1); n < pv.size(); ++n)
        o.require(pv[n][0].get<double>() == 0.0 && pv[n][1].get<double>() == 0.0, "pairing not exactly zero after n0; ");
    }
    for (const std::string ch : {"doubling_product_shift", "weight_stability", "coefficient_bound", "binomial_bound"}) {
      o.require(d.contains("chain") && d.at("chain").contains(ch), "chain check missing; ");
      if (d.contains("chain") && d.at("chain").contains(ch))
        o.require(d.at("chain").at(ch).at("holds").get<bool>() && d.at("chain").at(ch).at("tuples").get<long>() > 0,
                  ch + " fails; ");
    }
  }
  o.require(nu > 0, "no commutator checks; ");
  o.note << "worst finite-order spread " << worst_spread << ", " << n_inf << " truncated cases, " << nu << " commutator checks";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::cerr << "usage: acceptance <roumieu_cli> <baseline config> <scratch dir>\n";
    return 2;
  }
  const std::string cli = argv[1], config = argv[2];
  const std::filesystem::path scratch = argv[3];
  std::filesystem::create_directories(scratch);
  bool all = true;
  auto report_line = [&](int n, const std::string& label, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << "exception: " << e.what();
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << label << "): " << o.note.str() << std::endl;
  };

  report_line(1, "weight conditions", criterion1);
  report_line(2, "doubling-product sequence calculus", criterion2);
  report_line(3, "growth and decay certification", criterion3);
  report_line(4, "bump calculus", criterion4);
  report_line(5, "approximate units", criterion5);
  report_line(6, "integrability", criterion6);

  json cfg, first, second;
  int rc1 = -1, rc2 = -1;
  try {
    std::ifstream in(config);
    cfg = json::parse(in);
    auto run = [&](const std::string& tag, int& rc) {
      const auto dir = scratch / tag;
      std::filesystem::remove_all(dir);
      rc = std::system((cli + " run " + config + " --out " + dir.string() + " > " + (scratch / (tag + ".log")).string()).c_str());
      std::ifstream r(dir / "report.json");
      return json::parse(r);
    };
    first = run("run1", rc1);
    second = run("run2", rc2);
  } catch (const std::exception& e) {
    std::cout << "FAIL baseline run: " << e.what() << std::endl;
    return 1;
  }
  std::cout << "baseline run exit status " << rc1 << ", report pass = " << first.value("pass", false) << std::endl;
  all = all && rc1 == 0;

  report_line(7, "convolution", [&] { return criterion7(cfg, first); });
  report_line(8, "exchange identity", [&] { return criterion8(cfg, first); });
  report_line(9, "determinism", [&] {
    Outcome o;
    o.require(rc1 == rc2, "exit status differs; ");
    o.require(without_timing(first) == without_timing(second), "reports differ outside timing fields; ");
    o.note << "two consecutive runs compared";
    return o;
  });
  return all ? 0 : 1;
}
