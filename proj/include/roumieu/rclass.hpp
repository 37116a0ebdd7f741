#pragma once

// Monotone sequences r_0 = 1 <= r_1 <= ... increasing to infinity, their
// product sequences R_p, and the constructions used to tame them.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "roumieu/core.hpp"
#include "roumieu/weights.hpp"

namespace roumieu {

enum class RFamily { linear, power, logarithmic, explicit_values };

inline std::string to_string(RFamily f) {
  switch (f) {
    case RFamily::linear: return "linear";
    case RFamily::power: return "power";
    case RFamily::logarithmic: return "log";
    case RFamily::explicit_values: return "explicit";
  }
  return "?";
}

class RSequence {
 public:
  /// r_p = max(1, p).
  static RSequence linear(int n) {
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    for (int p = 0; p <= n; ++p) v[static_cast<std::size_t>(p)] = std::max(1.0, static_cast<double>(p));
    return RSequence(RFamily::linear, std::move(v), true);
  }

  /// r_p = max(1, p^alpha).
  static RSequence power(double alpha, int n) {
    if (!(alpha > 0.0)) throw DomainError("power family needs alpha > 0");
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    for (int p = 0; p <= n; ++p) v[static_cast<std::size_t>(p)] = std::max(1.0, std::pow(static_cast<double>(p), alpha));
    return RSequence(RFamily::power, std::move(v), true);
  }

  /// r_p = 1 + log(1 + p).
  static RSequence logarithmic(int n) {
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    for (int p = 0; p <= n; ++p) v[static_cast<std::size_t>(p)] = 1.0 + std::log1p(static_cast<double>(p));
    return RSequence(RFamily::logarithmic, std::move(v), true);
  }

  /// Explicit values. `declared_unbounded` records that the caller asserts
  /// r_p -> infinity; a sequence without that declaration is not in the class.
  static RSequence from_values(std::vector<double> values, bool declared_unbounded = true) {
    return RSequence(RFamily::explicit_values, std::move(values), declared_unbounded);
  }

  int prefix() const { return static_cast<int>(values_.size()) - 1; }
  RFamily family() const { return family_; }
  double at(int p) const {
    if (p < 0 || p > prefix()) throw OutOfRangeError("r index " + std::to_string(p) + " outside prefix");
    return values_[static_cast<std::size_t>(p)];
  }
  double log_at(int p) const { return std::log(at(p)); }
  const std::vector<double>& values() const { return values_; }

 private:
  RSequence(RFamily family, std::vector<double> values, bool declared_unbounded)
      : family_(family), values_(std::move(values)) {
    if (!declared_unbounded) throw ClassViolation("sequence is not declared to increase to infinity");
    if (values_.size() < 2) throw ClassViolation("r-sequence needs at least r_0 and r_1");
    if (std::abs(values_[0] - 1.0) > kLogRelTol) throw ClassViolation("r_0 must equal 1");
    values_[0] = 1.0;
    for (std::size_t p = 1; p < values_.size(); ++p) {
      if (!std::isfinite(values_[p])) throw ClassViolation("r_" + std::to_string(p) + " is not finite");
      if (!log_leq(std::log(values_[p - 1]), std::log(values_[p])))
        throw ClassViolation("r-sequence decreases at index " + std::to_string(p));
    }
    if (!(values_.back() > values_[0])) throw ClassViolation("r-sequence shows no growth on the prefix");
  }

  RFamily family_;
  std::vector<double> values_;
};

/// R_p = r_0 r_1 ... r_p, kept in log domain.
class ProductSequence {
 public:
  explicit ProductSequence(RSequence r) : source_(std::move(r)) {
    logs_.resize(static_cast<std::size_t>(source_.prefix()) + 1);
    double acc = 0.0;
    for (int p = 0; p <= source_.prefix(); ++p) {
      acc += source_.log_at(p);
      logs_[static_cast<std::size_t>(p)] = acc;
    }
  }

  int prefix() const { return source_.prefix(); }
  double log_at(int p) const {
    if (p < 0 || p > prefix()) throw OutOfRangeError("R index " + std::to_string(p) + " outside prefix");
    return logs_[static_cast<std::size_t>(p)];
  }
  double at(int p) const { return std::exp(log_at(p)); }
  const RSequence& source() const { return source_; }

 private:
  RSequence source_;
  std::vector<double> logs_;
};

inline ProductSequence product_sequence(const RSequence& r) { return ProductSequence(r); }

/// r̄_0 = 1, r̄_p = lambda * r_p.
inline RSequence scale_lambda(const RSequence& r, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  if (lambda < 1.0 && !(r.at(1) > 1.0 / lambda))
    throw ClassViolation("lambda < 1 requires r_1 > 1/lambda");
  std::vector<double> v(r.values());
  for (std::size_t p = 1; p < v.size(); ++p) v[p] *= lambda;
  return RSequence::from_values(std::move(v));
}

/// Drops the first p0 entries after r_0, where p0 is the smallest index with
/// r_{p0+1} > c, so every entry beyond index 0 exceeds c.
inline RSequence shift_rsequence(const RSequence& r, double c) {
  if (!(c > 0.0)) throw DomainError("shift threshold must be positive");
  int p0 = -1;
  for (int p = 0; p + 1 <= r.prefix(); ++p)
    if (r.at(p + 1) > c) {
      p0 = p;
      break;
    }
  if (p0 < 0) throw InsufficientPrefix("no entry of the prefix exceeds " + std::to_string(c));
  std::vector<double> v{1.0};
  for (int p = p0 + 1; p <= r.prefix(); ++p) v.push_back(r.at(p));
  return RSequence::from_values(std::move(v));
}

/// R_p R_q <= R_{p+q} for p + q <= N. The d-dimensional statement over
/// multi-indices reduces to this since R_k only depends on |k|.
inline ConditionReport check_superadditive(const ProductSequence& R, int d = 1) {
  if (d < 1) throw DomainError("dimension must be positive");
  ConditionReport rep{Condition::superadditive};
  rep.prefix_length = R.prefix();
  for (int total = 0; total <= R.prefix(); ++total)
    for (int p = 0; p <= total / 2; ++p) {
      const int q = total - p;
      if (!log_leq(R.log_at(p) + R.log_at(q), R.log_at(total))) {
        rep.violate({p, q});
        return rep;
      }
    }
  return rep;
}

/// R_{p+q} <= 2^{p+q} R_p R_q for p + q <= N, scanned by increasing p + q.
inline ConditionReport check_pp_inequality(const RSequence& r) {
  const ProductSequence R(r);
  ConditionReport rep{Condition::doubling_product};
  rep.prefix_length = r.prefix();
  const double l2 = std::log(2.0);
  for (int total = 0; total <= r.prefix(); ++total)
    for (int p = 0; p <= total; ++p) {
      const int q = total - p;
      if (!log_leq(R.log_at(total), total * l2 + R.log_at(p) + R.log_at(q))) {
        rep.violate({p, q});
        return rep;
      }
    }
  return rep;
}

/// r_p = p * min_{1<=j<=p} s_j / j, r_0 = 1.
inline RSequence pp_minorant(const RSequence& s) {
  std::vector<double> v(static_cast<std::size_t>(s.prefix()) + 1);
  v[0] = 1.0;
  double m = kInf;
  for (int p = 1; p <= s.prefix(); ++p) {
    m = std::min(m, s.at(p) / p);
    v[static_cast<std::size_t>(p)] = std::min(s.at(p), p * m);
  }
  return RSequence::from_values(std::move(v));
}

}  // namespace roumieu
