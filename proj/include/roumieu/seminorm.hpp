#pragma once

// Weighted derivative seminorms
//   sup_{|k| <= K_max} sup_x w(x) |D^k f(x)| / (c_{|k|} M_k)
// with c_p = h^p or R_p, computed from dense grids of exact jets plus
// golden-section refinement of the per-index maximizers.

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "roumieu/core.hpp"
#include "roumieu/function.hpp"
#include "roumieu/rclass.hpp"
#include "roumieu/weights.hpp"

namespace roumieu {

enum class SeminormKind { qKh, inf_h, K_r, r, weighted_g_r };

inline std::string to_string(SeminormKind k) {
  switch (k) {
    case SeminormKind::qKh: return "qKh";
    case SeminormKind::inf_h: return "inf_h";
    case SeminormKind::K_r: return "K_r";
    case SeminormKind::r: return "r";
    case SeminormKind::weighted_g_r: return "weighted_g_r";
  }
  return "?";
}

struct SeminormParams {
  SeminormKind kind = SeminormKind::r;
  std::optional<Box> K;
  std::optional<double> h;
  std::optional<RSequence> r;
  std::optional<SmoothFunction> g;
  WeightSequence M = WeightSequence::gevrey(2.0, 64);
  int K_max = 16;
};

struct SeminormReport {
  double value = 0.0;
  MultiIndex k;
  Point x;
  // Largest weighted value over |k| = p, p = 0..K_max.
  std::vector<double> per_order;
  // The sup is attained strictly below K_max.
  bool stabilized = true;
};

/// Per-index sup of |d^k f| over the sampled region.
struct DerivativeSups {
  std::vector<MultiIndex> indices;
  std::vector<double> sup;
  std::vector<Point> argmax;
};

struct SupOptions {
  int points_1d = 512;
  int points_2d = 40;
  int points_hi = 12;
  double x_tol = 1e-10;
};

namespace sup_detail {

/// Grid nodes for one coordinate: cells between consecutive breakpoints
/// inside each support interval, n points per cell including both ends.
inline std::vector<double> axis_nodes(const IntervalSet& s, std::vector<double> bp, int n, double& step) {
  std::vector<double> out;
  step = 0.0;
  for (const auto& iv : s) {
    if (iv.empty() || !iv.bounded()) throw DomainError("sup over an unbounded region");
    std::vector<double> cuts{iv.lo, iv.hi};
    for (double b : bp)
      if (b > iv.lo && b < iv.hi) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double h = (cuts[c + 1] - cuts[c]) / (n - 1);
      step = std::max(step, h);
      for (int i = 0; i < n; ++i) out.push_back(cuts[c] + i * h);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline IntervalSet clip(const IntervalSet& s, const std::optional<Box>& K, int axis) {
  if (!K) return s;
  return intersect(s, IntervalSet{(*K)[static_cast<std::size_t>(axis)]});
}

/// One sampling plan per term: coordinates are the free axes plus, for each
/// coupled factor on (a, b), the sum s = x_a + x_b in place of x_b.
struct Plan {
  std::vector<std::vector<double>> nodes;  // per coordinate
  std::vector<int> coupled_with;           // -1, or the partner axis a for a summed coordinate b
  std::vector<IntervalSet> own;            // per axis support from single-axis factors
  std::vector<double> steps;
};

inline std::optional<Plan> make_plan(const Term& t, int dim, const std::optional<Box>& K, int n) {
  Plan p;
  p.own.assign(static_cast<std::size_t>(dim), whole_line());
  std::vector<std::vector<double>> bp(static_cast<std::size_t>(dim));
  std::vector<IntervalSet> coupled(static_cast<std::size_t>(dim), whole_line());
  std::vector<std::vector<double>> coupled_bp(static_cast<std::size_t>(dim));
  p.coupled_with.assign(static_cast<std::size_t>(dim), -1);
  for (const auto& f : t.factors) {
    if (f.axes.size() == 1) {
      const auto a = static_cast<std::size_t>(f.axes[0]);
      p.own[a] = intersect(p.own[a], f.support());
      for (double b : f.g->breakpoints()) bp[a].push_back(b);
    } else {
      const int a = f.axes[0], b = f.axes[1];
      const auto bi = static_cast<std::size_t>(b);
      if (p.coupled_with[bi] >= 0 && p.coupled_with[bi] != a)
        throw UnsupportedCombination("axis coupled to two different partners");
      p.coupled_with[bi] = a;
      coupled[bi] = intersect(coupled[bi], f.support());
      for (double v : f.g->breakpoints()) coupled_bp[bi].push_back(v);
    }
  }
  for (int a = 0; a < dim; ++a) {
    const auto ai = static_cast<std::size_t>(a);
    p.own[ai] = clip(p.own[ai], K, a);
    if (p.own[ai].empty()) return std::nullopt;
  }
  p.nodes.resize(static_cast<std::size_t>(dim));
  p.steps.resize(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    const auto ai = static_cast<std::size_t>(a);
    if (p.coupled_with[ai] < 0) {
      p.nodes[ai] = axis_nodes(p.own[ai], bp[ai], n, p.steps[ai]);
    } else {
      // Range of s = x_a + x_b implied by both own supports.
      const auto pa = static_cast<std::size_t>(p.coupled_with[ai]);
      IntervalSet s = coupled[ai];
      if (bounded(p.own[pa]) && bounded(p.own[ai])) {
        const Interval ha = hull(p.own[pa]), hb = hull(p.own[ai]);
        s = intersect(s, IntervalSet{Interval{ha.lo + hb.lo, ha.hi + hb.hi}});
      }
      if (s.empty()) return std::nullopt;
      std::vector<double> sbp = coupled_bp[ai];
      p.nodes[ai] = axis_nodes(s, sbp, n, p.steps[ai]);
    }
  }
  return p;
}

inline bool in_set(const IntervalSet& s, double x) {
  for (const auto& iv : s)
    if (iv.lo <= x && x <= iv.hi) return true;
  return false;
}

template <class Visit>
void visit_plan(const Plan& p, Visit&& visit) {
  const std::size_t dim = p.nodes.size();
  std::vector<std::size_t> idx(dim, 0);
  Point x(dim);
  for (;;) {
    bool ok = true;
    for (std::size_t a = 0; a < dim && ok; ++a) {
      if (p.coupled_with[a] < 0) x[a] = p.nodes[a][idx[a]];
    }
    for (std::size_t a = 0; a < dim && ok; ++a) {
      if (p.coupled_with[a] >= 0) {
        x[a] = p.nodes[a][idx[a]] - x[static_cast<std::size_t>(p.coupled_with[a])];
        ok = in_set(p.own[a], x[a]);
      }
    }
    if (ok) visit(x);
    std::size_t a = 0;
    for (; a < dim; ++a) {
      if (++idx[a] < p.nodes[a].size()) break;
      idx[a] = 0;
    }
    if (a == dim) return;
  }
}

/// Maximizes |f| along one coordinate within [lo, hi] by golden section.
inline double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol, double& best_x) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  best_x = fc >= fd ? c : d;
  return std::max(fc, fd);
}

}  // namespace sup_detail

/// sup_x |w(x) d^k f(x)| for every |k| <= K, over the support of f (clipped
/// to K when given). Indices whose weighted grid value is within a factor 2
/// of the overall best are refined; `index_weight` supplies that weighting.
inline DerivativeSups derivative_sups(const SmoothFunction& f, int K, const std::optional<Box>& box,
                                      const std::optional<SmoothFunction>& w = std::nullopt,
                                      const std::function<double(const MultiIndex&)>& index_weight = nullptr,
                                      const SupOptions& opt = {}) {
  DerivativeSups out;
  out.indices = indices_up_to(f.dim(), K);
  const std::size_t n = out.indices.size();
  out.sup.assign(n, 0.0);
  out.argmax.assign(n, Point(static_cast<std::size_t>(f.dim()), 0.0));
  if (f.terms().empty()) return out;
  const int pts = f.dim() == 1 ? opt.points_1d : f.dim() == 2 ? opt.points_2d : opt.points_hi;

  std::vector<double> step(static_cast<std::size_t>(f.dim()), 0.0);
  std::set<std::string> seen;
  for (const auto& t : f.terms()) {
    // Terms with identical grids share one pass.
    auto plan = sup_detail::make_plan(t, f.dim(), box, pts);
    if (!plan) continue;
    std::string pk;
    for (const auto& nodes : plan->nodes) pk += hex(nodes.front()) + hex(nodes.back()) + std::to_string(nodes.size()) + "/";
    for (int c : plan->coupled_with) pk += std::to_string(c) + ",";
    if (!seen.insert(pk).second) continue;
    for (std::size_t a = 0; a < step.size(); ++a) step[a] = std::max(step[a], plan->steps[a]);
    sup_detail::visit_plan(*plan, [&](const Point& x) {
      if (box)
        for (std::size_t a = 0; a < x.size(); ++a)
          if (!(*box)[a].contains(x[a])) return;
      double wx = 1.0;
      if (w) {
        wx = std::abs((*w)(x));
        if (wx == 0.0) return;
      }
      const JetValues jet = f.jet(x, K);
      for (std::size_t i = 0; i < n; ++i) {
        const double v = wx * std::abs(jet.values[i]);
        if (v > out.sup[i]) {
          out.sup[i] = v;
          out.argmax[i] = x;
        }
      }
    });
  }

  // Refinement: coordinate-wise golden section around the grid maximizer.
  double best = 0.0;
  std::vector<double> scale(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (index_weight) scale[i] = index_weight(out.indices[i]);
    best = std::max(best, out.sup[i] / scale[i]);
  }
  if (best == 0.0) return out;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.sup[i] / scale[i] < 0.5 * best) continue;
    const SmoothFunction dk = f.partial(out.indices[i]);
    Point x = out.argmax[i];
    auto value_at = [&](const Point& p) {
      if (box)
        for (std::size_t a = 0; a < p.size(); ++a)
          if (!(*box)[a].contains(p[a])) return 0.0;
      double wx = w ? std::abs((*w)(p)) : 1.0;
      return wx * std::abs(dk(p));
    };
    double v = value_at(x);
    for (int sweep = 0; sweep < 2; ++sweep)
      for (std::size_t a = 0; a < x.size(); ++a) {
        const double lo = x[a] - step[a], hi = x[a] + step[a];
        Point p = x;
        double bx = x[a];
        const double cand = sup_detail::golden_max(
            [&](double s) {
              p[a] = s;
              return value_at(p);
            },
            lo, hi, opt.x_tol, bx);
        if (cand > v) {
          v = cand;
          x[a] = bx;
        }
      }
    if (v > out.sup[i]) {
      out.sup[i] = v;
      out.argmax[i] = x;
    }
  }
  return out;
}

namespace seminorm_detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError("seminorm parameters: " + what);
}

/// log of the per-order denominator c_p for p = 0..K.
inline std::vector<double> log_denominators(const SeminormParams& p) {
  std::vector<double> out(static_cast<std::size_t>(p.K_max) + 1);
  std::optional<ProductSequence> R;
  if (p.r) R.emplace(*p.r);
  for (int q = 0; q <= p.K_max; ++q) {
    const double c = p.h ? q * std::log(*p.h) : R->log_at(q);
    out[static_cast<std::size_t>(q)] = c + p.M.log_at(q);
  }
  return out;
}

}  // namespace seminorm_detail

inline void validate(const SeminormParams& p) {
  using seminorm_detail::require;
  require(p.K_max >= 8, "K_max must be at least 8");
  require(p.K_max <= p.M.prefix(), "K_max exceeds the weight prefix");
  switch (p.kind) {
    case SeminormKind::qKh:
      require(p.K && p.h && !p.r && !p.g, "qKh needs K and h only");
      break;
    case SeminormKind::inf_h:
      require(p.h && !p.K && !p.r && !p.g, "inf_h needs h only");
      break;
    case SeminormKind::K_r:
      require(p.K && p.r && !p.h && !p.g, "K_r needs K and r only");
      break;
    case SeminormKind::r:
      require(p.r && !p.K && !p.h && !p.g, "r needs r only");
      break;
    case SeminormKind::weighted_g_r:
      require(p.r && p.g && !p.K && !p.h, "weighted_g_r needs g and r only");
      break;
  }
  if (p.h) require(*p.h > 0.0, "h must be positive");
  if (p.r) require(p.r->prefix() >= p.K_max, "r prefix shorter than K_max");
}

inline SeminormReport seminorm(const SmoothFunction& f, const SeminormParams& p, const SupOptions& opt = {}) {
  validate(p);
  SeminormReport rep;
  rep.k = zero_index(f.dim());
  rep.x = Point(static_cast<std::size_t>(f.dim()), 0.0);
  rep.per_order.assign(static_cast<std::size_t>(p.K_max) + 1, 0.0);
  if (p.kind == SeminormKind::K_r || p.kind == SeminormKind::qKh) {
    // Functions of the local spaces must live inside K.
    const Box sb = f.support_box();
    if (!f.terms().empty() && !f.has_coupled_factors() && !box_contains(*p.K, sb))
      throw DomainError("support is not contained in K");
  }
  const auto logc = seminorm_detail::log_denominators(p);
  auto weight = [&](const MultiIndex& k) { return std::exp(logc[static_cast<std::size_t>(order(k))]); };
  const DerivativeSups s = derivative_sups(f, p.K_max, p.K, p.g, weight, opt);
  for (std::size_t i = 0; i < s.indices.size(); ++i) {
    if (s.sup[i] == 0.0) continue;
    const int q = order(s.indices[i]);
    const double v = std::exp(std::log(s.sup[i]) - logc[static_cast<std::size_t>(q)]);
    rep.per_order[static_cast<std::size_t>(q)] = std::max(rep.per_order[static_cast<std::size_t>(q)], v);
    if (v > rep.value) {
      rep.value = v;
      rep.k = s.indices[i];
      rep.x = s.argmax[i];
    }
  }
  rep.stabilized = rep.value == 0.0 || order(rep.k) < p.K_max;
  return rep;
}

/// Shorthand for the (r_p) seminorm.
inline SeminormReport r_seminorm(const SmoothFunction& f, const RSequence& r, const WeightSequence& M, int K_max) {
  SeminormParams p;
  p.kind = SeminormKind::r;
  p.r = r;
  p.M = M;
  p.K_max = K_max;
  return seminorm(f, p);
}

struct ProductSeminormReport {
  double lhs = 0.0;   // ||f g||_(r)
  double rhs = 0.0;   // ||f||_(r/2) ||g||_(r/2)
  bool holds = true;
  bool stabilized = true;
};

inline SmoothFunction product(const SmoothFunction& a, const SmoothFunction& b) { return a * b; }

/// ||f g||_(r) <= ||f||_(r/2) ||g||_(r/2), which needs r_1 > 2.
inline ProductSeminormReport check_product_seminorm(const SmoothFunction& f, const SmoothFunction& g,
                                                    const RSequence& r, const WeightSequence& M, int K_max) {
  if (!(r.at(1) > 2.0)) throw DomainError("product seminorm check needs r_1 > 2");
  const RSequence half = scale_lambda(r, 0.5);
  ProductSeminormReport rep;
  const auto l = r_seminorm(f * g, r, M, K_max);
  const auto a = r_seminorm(f, half, M, K_max);
  const auto b = r_seminorm(g, half, M, K_max);
  rep.lhs = l.value;
  rep.rhs = a.value * b.value;
  rep.holds = rep.lhs <= rep.rhs;
  rep.stabilized = l.stabilized && a.stabilized && b.stabilized;
  return rep;
}

}  // namespace roumieu
