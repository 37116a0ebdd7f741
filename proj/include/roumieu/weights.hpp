#pragma once

// Weight sequences (M_p) defining Roumieu classes and finite-prefix certifiers
// for the standard structural conditions on them.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "roumieu/core.hpp"

namespace roumieu {

enum class WeightFamily { gevrey, factorial, explicit_table };

inline std::string to_string(WeightFamily f) {
  switch (f) {
    case WeightFamily::gevrey: return "gevrey";
    case WeightFamily::factorial: return "factorial";
    case WeightFamily::explicit_table: return "explicit";
  }
  return "?";
}

struct WeightFamilySpec {
  WeightFamily family = WeightFamily::gevrey;
  double s = 2.0;                 // gevrey exponent
  std::vector<double> table;      // explicit values M_0..M_N
};

/// Finite prefix M_0..M_N of a weight sequence, stored as logarithms.
/// M_0 is normalized to 1.
class WeightSequence {
 public:
  static WeightSequence gevrey(double s, int n) {
    if (!(s > 0.0)) throw DomainError("gevrey exponent must be positive");
    check_length(n);
    std::vector<double> logs(static_cast<std::size_t>(n) + 1);
    for (int p = 0; p <= n; ++p) logs[static_cast<std::size_t>(p)] = s * log_factorial(p);
    return WeightSequence(WeightFamily::gevrey, s, std::move(logs));
  }

  static WeightSequence factorial(int n) {
    check_length(n);
    std::vector<double> logs(static_cast<std::size_t>(n) + 1);
    for (int p = 0; p <= n; ++p) logs[static_cast<std::size_t>(p)] = log_factorial(p);
    return WeightSequence(WeightFamily::factorial, 1.0, std::move(logs));
  }

  /// Explicit table; must be positive and nondecreasing. Rescaled so M_0 = 1.
  static WeightSequence from_table(const std::vector<double>& values) {
    if (values.size() < 2) throw DomainError("weight table needs at least M_0 and M_1");
    for (std::size_t p = 0; p < values.size(); ++p) {
      if (!(values[p] > 0.0) || !std::isfinite(values[p]))
        throw DomainError("weight table entry " + std::to_string(p) + " is not a positive finite number");
      if (p > 0 && values[p] < values[p - 1])
        throw DomainError("weight table is not monotone at index " + std::to_string(p));
    }
    std::vector<double> logs(values.size());
    const double l0 = std::log(values[0]);
    for (std::size_t p = 0; p < values.size(); ++p) logs[p] = std::log(values[p]) - l0;
    return WeightSequence(WeightFamily::explicit_table, 0.0, std::move(logs));
  }

  static WeightSequence from_logs(std::vector<double> logs) {
    if (logs.size() < 2) throw DomainError("weight table needs at least M_0 and M_1");
    const double l0 = logs[0];
    for (auto& v : logs) v -= l0;
    return WeightSequence(WeightFamily::explicit_table, 0.0, std::move(logs));
  }

  /// Largest stored index N.
  int prefix() const { return static_cast<int>(logs_.size()) - 1; }
  WeightFamily family() const { return family_; }
  double gevrey_exponent() const { return s_; }

  double log_at(int p) const {
    if (p < 0 || p > prefix())
      throw OutOfRangeError("weight index " + std::to_string(p) + " outside prefix [0, " +
                            std::to_string(prefix()) + "]");
    return logs_[static_cast<std::size_t>(p)];
  }
  double at(int p) const { return std::exp(log_at(p)); }
  const std::vector<double>& logs() const { return logs_; }

  std::string describe() const {
    std::string d = to_string(family_);
    if (family_ == WeightFamily::gevrey) d += "(s=" + std::to_string(s_) + ")";
    return d + " N=" + std::to_string(prefix());
  }

 private:
  WeightSequence(WeightFamily f, double s, std::vector<double> logs) : family_(f), s_(s), logs_(std::move(logs)) {}

  static void check_length(int n) {
    if (n < 1) throw DomainError("weight prefix length must be at least 1");
  }

  WeightFamily family_;
  double s_;
  std::vector<double> logs_;
};

inline WeightSequence make_weight_sequence(const WeightFamilySpec& spec, int n) {
  switch (spec.family) {
    case WeightFamily::gevrey: return WeightSequence::gevrey(spec.s, n);
    case WeightFamily::factorial: return WeightSequence::factorial(n);
    case WeightFamily::explicit_table: {
      if (static_cast<int>(spec.table.size()) < n + 1)
        throw DomainError("explicit weight table shorter than requested prefix");
      std::vector<double> t(spec.table.begin(), spec.table.begin() + n + 1);
      return WeightSequence::from_table(t);
    }
  }
  throw DomainError("unknown weight family");
}

// ---------------------------------------------------------------------------
// Condition reports

enum class Condition { M1, M2, M2prime, M3, M3prime, Mpq, superadditive, doubling_product };

inline std::string to_string(Condition c) {
  switch (c) {
    case Condition::M1: return "M1";
    case Condition::M2: return "M2";
    case Condition::M2prime: return "M2'";
    case Condition::M3: return "M3";
    case Condition::M3prime: return "M3'";
    case Condition::Mpq: return "Mpq";
    case Condition::superadditive: return "superadditive";
    case Condition::doubling_product: return "doubling_product";
  }
  return "?";
}

struct WitnessConstants {
  double A = 1.0;
  double H = 1.0;
};

/// Outcome of a finite-prefix check. `holds_on_prefix` means "holds for every
/// index in [0, prefix_length]"; it is true exactly when first_violation is empty.
struct ConditionReport {
  Condition condition = Condition::M1;
  bool holds_on_prefix = true;
  std::optional<WitnessConstants> witness_constants;
  std::optional<std::vector<long long>> first_violation;
  int prefix_length = 0;
  std::string note;
  // Tail model for the summability conditions: ratio ~ c * p^{-exponent}.
  std::optional<double> tail_exponent;
  std::optional<double> partial_sum;

  void violate(std::vector<long long> at) {
    holds_on_prefix = false;
    first_violation = std::move(at);
  }
};

namespace detail {

/// Smallest integer j with 2^j >= exp(log_value), with slack for rounding.
inline int pow2_exponent_above(double log_value) {
  return static_cast<int>(std::ceil(log_value / std::log(2.0) - 1e-9));
}

struct TailFit {
  double log_c = 0.0;
  double gamma = 0.0;
};

/// Least-squares fit of log ratio_p = log c - gamma * log p over p in [from, to].
inline TailFit fit_power_tail(const std::vector<double>& log_ratio, int from, int to) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int p = from; p <= to; ++p) {
    const double x = std::log(static_cast<double>(p));
    const double y = log_ratio[static_cast<std::size_t>(p)];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  return {(sy - slope * sx) / n, -slope};
}

inline constexpr int kMaxConstantExponent = 20;
inline constexpr double kDivergenceThreshold = 10.0;
inline constexpr double kTailExponentMargin = 1e-6;

}  // namespace detail

/// Searches H = 2^j (j = 0..20) for the first one whose required A is the same
/// power of two on [0, N/2] and on [0, N] and at most 2^20. `need(logH, n)`
/// returns the required log A over the instances with leading index <= n.
template <class Need>
std::optional<WitnessConstants> search_stable_constants(int n, Need need) {
  const int half = std::max(1, n / 2);
  for (int j = 0; j <= detail::kMaxConstantExponent; ++j) {
    const double log_h = j * std::log(2.0);
    const int full = detail::pow2_exponent_above(need(log_h, n));
    const int partial = detail::pow2_exponent_above(need(log_h, half));
    if (full == partial && full <= detail::kMaxConstantExponent)
      return WitnessConstants{std::ldexp(1.0, full), std::ldexp(1.0, j)};
  }
  return std::nullopt;
}

namespace detail {

inline ConditionReport check_m1(const WeightSequence& w) {
  ConditionReport r{Condition::M1};
  r.prefix_length = w.prefix();
  for (int p = 1; p < w.prefix(); ++p) {
    const double lhs = 2.0 * w.log_at(p);
    const double rhs = w.log_at(p - 1) + w.log_at(p + 1);
    if (!log_leq(lhs, rhs)) {
      r.violate({p});
      return r;
    }
  }
  return r;
}

inline ConditionReport check_m2(const WeightSequence& w) {
  ConditionReport r{Condition::M2};
  r.prefix_length = w.prefix();
  auto need = [&](double log_h, int n) {
    double worst = kNegInf;
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= p; ++q)
        worst = std::max(worst, w.log_at(p) - p * log_h - w.log_at(q) - w.log_at(p - q));
    return worst;
  };
  auto constants = search_stable_constants(w.prefix(), need);
  if (constants) {
    r.witness_constants = constants;
  } else {
    // Report where the largest candidate H still needs a growing A.
    const double log_h = kMaxConstantExponent * std::log(2.0);
    double worst = kNegInf;
    std::vector<long long> at{0, 0};
    for (int p = 0; p <= w.prefix(); ++p)
      for (int q = 0; q <= p; ++q) {
        const double v = w.log_at(p) - p * log_h - w.log_at(q) - w.log_at(p - q);
        if (v > worst) {
          worst = v;
          at = {p, q};
        }
      }
    r.violate(at);
    r.note = "no stable (A, H) with H, A <= 2^20";
  }
  return r;
}

inline ConditionReport check_m2_prime(const WeightSequence& w) {
  ConditionReport r{Condition::M2prime};
  r.prefix_length = w.prefix();
  auto need = [&](double log_h, int n) {
    double worst = kNegInf;
    for (int p = 1; p <= n; ++p) worst = std::max(worst, w.log_at(p) - p * log_h - w.log_at(p - 1));
    return worst;
  };
  auto constants = search_stable_constants(w.prefix(), need);
  if (constants) {
    r.witness_constants = constants;
  } else {
    r.violate({w.prefix()});
    r.note = "no stable (A, H) with H, A <= 2^20";
  }
  return r;
}

struct TailModel {
  std::vector<double> log_ratio;  // log(M_{p-1}/M_p), index p = 1..N
  TailFit fit;
  bool convergent = false;
  double tail_beyond = kInf;      // upper bound for sum_{p>N} ratio_p
};

inline TailModel tail_model(const WeightSequence& w) {
  const int n = w.prefix();
  if (n < 16) throw DomainError("summability conditions need a prefix of length >= 16");
  TailModel m;
  m.log_ratio.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (int p = 1; p <= n; ++p) m.log_ratio[static_cast<std::size_t>(p)] = w.log_at(p - 1) - w.log_at(p);
  m.fit = fit_power_tail(m.log_ratio, n - n / 4, n);
  m.convergent = m.fit.gamma > 1.0 + kTailExponentMargin;
  if (m.convergent) {
    const double g = m.fit.gamma;
    m.tail_beyond = std::exp(m.fit.log_c + (1.0 - g) * std::log(static_cast<double>(n))) / (g - 1.0);
  }
  return m;
}

inline ConditionReport check_m3_prime(const WeightSequence& w) {
  ConditionReport r{Condition::M3prime};
  r.prefix_length = w.prefix();
  const TailModel m = tail_model(w);
  r.tail_exponent = m.fit.gamma;
  double partial = 0.0;
  long long first_exceed = -1;
  for (int p = 1; p <= w.prefix(); ++p) {
    partial += std::exp(m.log_ratio[static_cast<std::size_t>(p)]);
    if (first_exceed < 0 && partial > kDivergenceThreshold) first_exceed = p;
  }
  if (m.convergent) {
    r.partial_sum = partial + m.tail_beyond;
    r.witness_constants = WitnessConstants{std::ldexp(1.0, pow2_exponent_above(std::log(*r.partial_sum))), 1.0};
    return r;
  }
  // Divergent tail model: continue the fitted ratios until the partial sum
  // crosses the detector threshold.
  long long p = w.prefix();
  constexpr long long kMaxSteps = 100'000'000;
  while (first_exceed < 0 && p < w.prefix() + kMaxSteps) {
    ++p;
    partial += std::exp(m.fit.log_c - m.fit.gamma * std::log(static_cast<double>(p)));
    if (partial > kDivergenceThreshold) first_exceed = p;
  }
  r.partial_sum = partial;
  r.violate({first_exceed >= 0 ? first_exceed : static_cast<long long>(w.prefix())});
  r.note = "tail ratio exponent <= 1: partial sums diverge";
  return r;
}

inline ConditionReport check_m3(const WeightSequence& w) {
  ConditionReport r{Condition::M3};
  r.prefix_length = w.prefix();
  const TailModel m = tail_model(w);
  r.tail_exponent = m.fit.gamma;
  if (!m.convergent) {
    r.violate({1});
    r.note = "tail ratio exponent <= 1: the tail sums are infinite";
    return r;
  }
  const int n = w.prefix();
  // tails[q] = sum_{p>q} ratio_p, with the extrapolated remainder beyond N.
  std::vector<double> tails(static_cast<std::size_t>(n) + 1, 0.0);
  double acc = m.tail_beyond;
  for (int q = n; q >= 0; --q) {
    tails[static_cast<std::size_t>(q)] = acc;
    if (q >= 1) acc += std::exp(m.log_ratio[static_cast<std::size_t>(q)]);
  }
  auto need_up_to = [&](int upto) {
    double worst = kNegInf;
    for (int q = 1; q <= std::min(upto, n - 1); ++q)
      worst = std::max(worst, std::log(tails[static_cast<std::size_t>(q)]) - std::log(static_cast<double>(q)) -
                                  m.log_ratio[static_cast<std::size_t>(q) + 1]);
    return worst;
  };
  const int full = pow2_exponent_above(need_up_to(n));
  const int half = pow2_exponent_above(need_up_to(n / 2));
  if (full != half || full > kMaxConstantExponent) {
    r.violate({n - 1});
    r.note = "required constant A keeps growing along the prefix";
    return r;
  }
  r.witness_constants = WitnessConstants{std::ldexp(1.0, full), 1.0};
  return r;
}

}  // namespace detail

inline ConditionReport check_condition(const WeightSequence& w, Condition c);

/// M_p M_q <= M_{p+q} for all p + q <= N.
inline ConditionReport check_product_inequality(const WeightSequence& w) {
  ConditionReport r{Condition::Mpq};
  r.prefix_length = w.prefix();
  for (int total = 0; total <= w.prefix(); ++total)
    for (int p = 0; p <= total / 2; ++p) {
      const int q = total - p;
      if (!log_leq(w.log_at(p) + w.log_at(q), w.log_at(total))) {
        r.violate({p, q});
        return r;
      }
    }
  return r;
}

inline ConditionReport check_condition(const WeightSequence& w, Condition c) {
  switch (c) {
    case Condition::M1: return detail::check_m1(w);
    case Condition::M2: return detail::check_m2(w);
    case Condition::M2prime: return detail::check_m2_prime(w);
    case Condition::M3: return detail::check_m3(w);
    case Condition::M3prime: return detail::check_m3_prime(w);
    case Condition::Mpq: return check_product_inequality(w);
    default: break;
  }
  throw DomainError("condition " + to_string(c) + " does not apply to weight sequences");
}

/// M_{|k|} for a multi-index k.
inline double multiindex_weight(const WeightSequence& w, const MultiIndex& k) {
  const int n = order(k);
  if (n > w.prefix())
    throw OutOfRangeError("|k| = " + std::to_string(n) + " exceeds the weight prefix " + std::to_string(w.prefix()));
  return w.at(n);
}

inline double log_multiindex_weight(const WeightSequence& w, const MultiIndex& k) {
  const int n = order(k);
  if (n > w.prefix())
    throw OutOfRangeError("|k| = " + std::to_string(n) + " exceeds the weight prefix " + std::to_string(w.prefix()));
  return w.log_at(n);
}

/// max_p log_+(rho^p / M_p) over the stored prefix.
inline double associated_function(const WeightSequence& w, double rho) {
  if (!(rho > 0.0)) throw DomainError("associated function needs rho > 0");
  const double lr = std::log(rho);
  double best = 0.0;
  for (int p = 0; p <= w.prefix(); ++p) best = std::max(best, p * lr - w.log_at(p));
  return best;
}

}  // namespace roumieu
