#pragma once

// Finite-prefix certification of slowly increasing / rapidly decreasing
// nonnegative sequences, with witnesses on both sides of the duality
//   sup a_k / h^k < inf for some h   <=>   sup a_k / R_k < inf for all r,
//   sup h^k a_k < inf for all h      <=>   sup R_k a_k < inf for some r.
// Inputs are logarithms; -inf encodes a_k = 0.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "roumieu/core.hpp"
#include "roumieu/rclass.hpp"

namespace roumieu {

enum class GrowthVerdict { slowly_increasing, not_slowly_increasing, inconclusive };
enum class DecayVerdict { rapidly_decreasing, not_rapidly_decreasing, inconclusive };

inline std::string to_string(GrowthVerdict v) {
  switch (v) {
    case GrowthVerdict::slowly_increasing: return "slowly_increasing";
    case GrowthVerdict::not_slowly_increasing: return "not_slowly_increasing";
    case GrowthVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

inline std::string to_string(DecayVerdict v) {
  switch (v) {
    case DecayVerdict::rapidly_decreasing: return "rapidly_decreasing";
    case DecayVerdict::not_rapidly_decreasing: return "not_rapidly_decreasing";
    case DecayVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

/// An index k with a_k / h^k > 1e6, one per grid value h that escapes.
struct Escape {
  double h = 0.0;
  long long k = 0;
};

struct GrowthCertificate {
  GrowthVerdict verdict = GrowthVerdict::inconclusive;
  std::optional<double> h_witness;
  std::optional<RSequence> r_witness;
  std::optional<double> bound;       // sup a_k / h^k over the prefix
  std::optional<double> r_bound;     // sup a_k / R_k over the prefix
  std::vector<Escape> escapes;
  std::string note;
};

struct DecayCertificate {
  DecayVerdict verdict = DecayVerdict::inconclusive;
  std::optional<RSequence> r_witness;
  std::optional<double> bound;       // sup R_k a_k over the prefix
  std::optional<double> escaping_h;  // for not_rapidly_decreasing: h with h^k a_k unbounded
  std::string note;
};

namespace komatsu_detail {

inline constexpr int kMaxLog2H = 20;
inline constexpr double kSlopeMargin = 0.05;
inline constexpr double kEscapeLevel = 1e6;

inline void check_input(const std::vector<double>& log_a) {
  if (log_a.size() < 16) throw DomainError("sequence prefix must have length >= 16");
  for (double v : log_a)
    if (std::isnan(v) || v == kInf) throw DomainError("sequence entries must be finite and nonnegative");
}

inline bool all_zero(const std::vector<double>& log_a) {
  for (double v : log_a)
    if (v != kNegInf) return false;
  return true;
}

/// Average slope of `env` over [from, to]; env must be finite there.
inline double slope(const std::vector<double>& env, std::size_t from, std::size_t to) {
  return (env[to] - env[from]) / static_cast<double>(to - from);
}

/// Quarter slopes of a finite envelope on the tail half.
inline std::optional<std::pair<double, double>> tail_slopes(const std::vector<double>& env) {
  const std::size_t n = env.size() - 1;
  const std::size_t a = n / 2, b = (3 * n) / 4;
  if (!std::isfinite(env[a]) || !std::isfinite(env[b]) || !std::isfinite(env[n])) return std::nullopt;
  return std::make_pair(slope(env, a, b), slope(env, b, n));
}

/// sup_k (log a_k - k log h) over [0, upto].
inline double log_sup_over_h(const std::vector<double>& log_a, double log_h, std::size_t upto) {
  double best = kNegInf;
  for (std::size_t k = 0; k <= upto; ++k) best = std::max(best, log_a[k] - static_cast<double>(k) * log_h);
  return best;
}

inline double log_sup_ratio_R(const std::vector<double>& log_a, const ProductSequence& R, bool divide,
                              std::size_t upto) {
  double best = kNegInf;
  for (std::size_t k = 0; k <= upto; ++k) {
    if (log_a[k] == kNegInf) continue;
    const double lr = R.log_at(static_cast<int>(k));
    best = std::max(best, divide ? log_a[k] - lr : log_a[k] + lr);
  }
  return best;
}

inline double safe_exp(double v) { return v == kNegInf ? 0.0 : std::exp(v); }

}  // namespace komatsu_detail

/// Decides whether a_k <= C h^k for some h on the prefix.
inline GrowthCertificate classify_growth(const std::vector<double>& log_a) {
  using namespace komatsu_detail;
  check_input(log_a);
  GrowthCertificate cert;
  const std::size_t n = log_a.size() - 1;
  const int prefix = static_cast<int>(n);
  if (all_zero(log_a)) {
    cert.verdict = GrowthVerdict::slowly_increasing;
    cert.h_witness = 1.0;
    cert.bound = 0.0;
    cert.r_witness = RSequence::linear(prefix);
    cert.r_bound = 0.0;
    return cert;
  }

  // Running-max envelope from the left; for a slowly increasing sequence it
  // grows at most geometrically.
  std::vector<double> env(log_a);
  for (std::size_t k = 1; k <= n; ++k) env[k] = std::max(env[k], env[k - 1]);
  const auto slopes = tail_slopes(env);
  if (!slopes) {
    cert.note = "sequence vanishes on the tail half";
    // Finitely supported on the prefix: trivially bounded by h = 1.
  }
  const double s1 = slopes ? slopes->first : 0.0;
  const double s2 = slopes ? slopes->second : 0.0;

  if (slopes && s2 - s1 > kSlopeMargin) {
    // Superlinear log-growth. Record escapes for every h on the grid.
    for (int j = 1; j <= kMaxLog2H; ++j) {
      const double lh = j * std::log(2.0);
      for (std::size_t k = 0; k <= n; ++k)
        if (log_a[k] - static_cast<double>(k) * lh > std::log(kEscapeLevel)) {
          cert.escapes.push_back({std::ldexp(1.0, j), static_cast<long long>(k)});
          break;
        }
    }
    if (static_cast<int>(cert.escapes.size()) == kMaxLog2H) {
      cert.verdict = GrowthVerdict::not_slowly_increasing;
      cert.note = "log a_k grows superlinearly; every h <= 2^20 escapes on the prefix";
    } else {
      cert.note = "superlinear fit, but some h <= 2^20 does not escape within the prefix";
    }
    return cert;
  }

  const double h_hat = std::max(s1, s2);
  int j = std::max(0, static_cast<int>(std::ceil(h_hat / std::log(2.0) - 1e-12)));
  for (; j <= kMaxLog2H; ++j) {
    const double lh = j * std::log(2.0);
    const double full = log_sup_over_h(log_a, lh, n);
    const double half = log_sup_over_h(log_a, lh, n / 2);
    if (log_leq(full, half)) {
      cert.verdict = GrowthVerdict::slowly_increasing;
      cert.h_witness = std::ldexp(1.0, j);
      cert.bound = safe_exp(full);
      break;
    }
  }
  if (cert.verdict != GrowthVerdict::slowly_increasing) {
    cert.note = "no h <= 2^20 gives a sup attained on the first half of the prefix";
    return cert;
  }

  // Dual side: a sample r from the class with sup a_k / R_k attained early.
  for (const RSequence& r : {RSequence::linear(prefix), RSequence::from_values([&] {
                               std::vector<double> v(n + 1);
                               v[0] = 1.0;
                               for (std::size_t k = 1; k <= n; ++k) v[k] = *cert.h_witness * static_cast<double>(k);
                               return v;
                             }())}) {
    const ProductSequence R(r);
    const double full = log_sup_ratio_R(log_a, R, true, n);
    const double half = log_sup_ratio_R(log_a, R, true, n / 2);
    if (log_leq(full, half)) {
      cert.r_witness = r;
      cert.r_bound = safe_exp(full);
      break;
    }
  }
  return cert;
}

inline GrowthCertificate classify_growth_values(const std::vector<double>& a) {
  std::vector<double> l(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < 0.0) throw DomainError("sequence entries must be nonnegative");
    l[k] = a[k] == 0.0 ? kNegInf : std::log(a[k]);
  }
  return classify_growth(l);
}

/// Decides whether h^k a_k stays bounded for every h, and if so builds r with
/// sup R_k a_k finite.
inline DecayCertificate classify_decay(const std::vector<double>& log_a) {
  using namespace komatsu_detail;
  check_input(log_a);
  DecayCertificate cert;
  const std::size_t n = log_a.size() - 1;
  const int prefix = static_cast<int>(n);

  std::size_t last_nonzero = 0;
  bool any = false;
  double log_sup_a = kNegInf;
  for (std::size_t k = 0; k <= n; ++k)
    if (log_a[k] != kNegInf) {
      last_nonzero = k;
      any = true;
      log_sup_a = std::max(log_sup_a, log_a[k]);
    }
  if (!any || last_nonzero <= n / 2) {
    const RSequence r = RSequence::linear(prefix);
    cert.verdict = DecayVerdict::rapidly_decreasing;
    cert.r_witness = r;
    cert.bound = any ? safe_exp(log_sup_ratio_R(log_a, ProductSequence(r), false, n)) : 0.0;
    cert.note = any ? "finitely supported on the prefix" : "zero sequence";
    return cert;
  }

  // Witness: log r_k = max(0, min_{j>=k, a_j>0} (-log a_j)/j), nondecreasing
  // by construction, with R_k a_k <= max(1, sup a).
  std::vector<double> rho(n + 1, kInf);
  double running = kInf;
  for (std::size_t k = n; k >= 1; --k) {
    if (log_a[k] != kNegInf) running = std::min(running, -log_a[k] / static_cast<double>(k));
    rho[k] = running;
  }
  std::vector<double> r(n + 1, 1.0);
  for (std::size_t k = 1; k <= n; ++k) {
    // Past the last nonzero entry a_k = 0, so any nondecreasing continuation works.
    r[k] = std::isfinite(rho[k]) ? std::exp(std::min(std::max(0.0, rho[k]), 700.0)) : r[k - 1];
    r[k] = std::max(r[k], r[k - 1]);
  }
  const bool grows = r[n] > r[n / 2] * (1.0 + 1e-9);

  // Envelope from the right for the fitted decay rate.
  std::vector<double> env(log_a);
  for (std::size_t k = n; k-- > 0;) env[k] = std::max(env[k], env[k + 1]);
  const auto slopes = tail_slopes(env);

  if (grows && slopes && slopes->first - slopes->second > kSlopeMargin) {
    const RSequence witness = RSequence::from_values(r);
    const double lb = log_sup_ratio_R(log_a, ProductSequence(witness), false, n);
    if (log_leq(lb, std::max(0.0, log_sup_a))) {
      cert.verdict = DecayVerdict::rapidly_decreasing;
      cert.r_witness = witness;
      cert.bound = std::exp(lb);
      return cert;
    }
    cert.note = "constructed witness failed re-verification";
    return cert;
  }
  if (slopes && std::abs(slopes->first - slopes->second) <= kSlopeMargin) {
    // Geometric decay at rate e^{s}: h = 2^{ceil(-s/log 2) + 1} makes h^k a_k grow.
    const double s = std::min(slopes->first, slopes->second);
    const int j = std::max(1, static_cast<int>(std::ceil(-s / std::log(2.0) - 1e-9)) + 1);
    const double lh = j * std::log(2.0);
    const double full = log_sup_over_h(log_a, -lh, n);
    const double half = log_sup_over_h(log_a, -lh, n / 2);
    if (!log_leq(full, half)) {
      cert.verdict = DecayVerdict::not_rapidly_decreasing;
      cert.escaping_h = std::ldexp(1.0, j);
      cert.note = "h^k a_k still growing at the end of the prefix";
      return cert;
    }
  }
  cert.note = "decay rate undetermined on the prefix";
  return cert;
}

inline DecayCertificate classify_decay_values(const std::vector<double>& a) {
  std::vector<double> l(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < 0.0) throw DomainError("sequence entries must be nonnegative");
    l[k] = a[k] == 0.0 ? kNegInf : std::log(a[k]);
  }
  return classify_decay(l);
}

struct DualityReport {
  GrowthCertificate growth;
  DecayCertificate decay;
  bool consistent = true;
  bool multiindex_consistent = true;
  int multiindex_dimension = 2;
  std::string note;
};

/// Runs both classifiers, checks they do not contradict, and repeats the
/// classification on the multi-index family a_k := a_{|k|} in two variables.
inline DualityReport cross_check_duality(const std::vector<double>& log_a) {
  DualityReport rep;
  rep.growth = classify_growth(log_a);
  rep.decay = classify_decay(log_a);
  if (rep.decay.verdict == DecayVerdict::rapidly_decreasing &&
      rep.growth.verdict == GrowthVerdict::not_slowly_increasing) {
    rep.consistent = false;
    rep.note = "rapidly decreasing but not slowly increasing";
  }
  if (rep.growth.h_witness && rep.growth.bound) {
    // Monotone closure: doubling h may not increase the bound.
    const double lh = std::log(2.0 * *rep.growth.h_witness);
    const double b2 = komatsu_detail::safe_exp(komatsu_detail::log_sup_over_h(log_a, lh, log_a.size() - 1));
    if (b2 > *rep.growth.bound * (1.0 + kLogRelTol)) {
      rep.consistent = false;
      rep.note = "larger h produced a larger bound";
    }
  }

  // Multi-index family on a bounded prefix; scalarize by max over |k| = p.
  const int p_max = std::min<int>(static_cast<int>(log_a.size()) - 1, 128);
  std::vector<double> scalar(static_cast<std::size_t>(p_max) + 1, kNegInf);
  for (const MultiIndex& k : indices_up_to(rep.multiindex_dimension, p_max)) {
    const auto p = static_cast<std::size_t>(order(k));
    scalar[p] = std::max(scalar[p], log_a[p]);
  }
  const std::vector<double> direct(log_a.begin(), log_a.begin() + p_max + 1);
  const auto g1 = classify_growth(scalar), g2 = classify_growth(direct);
  const auto d1 = classify_decay(scalar), d2 = classify_decay(direct);
  rep.multiindex_consistent = g1.verdict == g2.verdict && d1.verdict == d2.verdict && g1.h_witness == g2.h_witness &&
                              g1.bound == g2.bound && d1.bound == d2.bound;
  if (!rep.multiindex_consistent) rep.note += (rep.note.empty() ? "" : "; ") + std::string("multi-index mismatch");
  return rep;
}

}  // namespace roumieu
