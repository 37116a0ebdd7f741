#pragma once

// Smooth functions on R^D as finite sums of terms
//   c * prod_j g_j^{(n_j)}(sum_{a in A_j} x_a),
// with complex c, one-variable profiles g_j and axis sets A_j of size 1 or 2
// (size 2 realizes compositions with x + y). Derivatives are exact: each
// partial bumps the order of the factors touching that axis (Leibniz).

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "roumieu/core.hpp"
#include "roumieu/profile.hpp"
#include "roumieu/quadrature.hpp"

namespace roumieu {

struct Factor {
  ProfilePtr g;
  std::vector<int> axes;
  int order = 0;

  double arg(const Point& x) const {
    double t = 0.0;
    for (int a : axes) t += x[static_cast<std::size_t>(a)];
    return t;
  }
  double eval(const Point& x) const { return g->value(arg(x), order); }
  bool touches(int axis) const { return std::find(axes.begin(), axes.end(), axis) != axes.end(); }
  IntervalSet support() const { return g->support(order); }

  std::string key() const {
    std::string k = g->key() + "@";
    for (int a : axes) k += std::to_string(a) + ".";
    return k + "^" + std::to_string(order);
  }
};

struct Term {
  Complex coef{1.0, 0.0};
  std::vector<Factor> factors;

  std::string key() const {
    std::string k;
    for (const auto& f : factors) k += f.key() + "|";
    return k;
  }
};

/// Derivatives d^k f(x) for all |k| <= K, listed in indices_up_to(D, K) order.
struct JetValues {
  std::vector<MultiIndex> indices;
  std::vector<Complex> values;
};

class SmoothFunction {
 public:
  SmoothFunction() = default;
  explicit SmoothFunction(int dim) : dim_(dim) {
    if (dim < 1) throw DomainError("function dimension must be positive");
  }

  static SmoothFunction constant(int dim, Complex c) {
    SmoothFunction f(dim);
    if (c != Complex{}) f.terms_.push_back(Term{c, {}});
    return f;
  }

  static SmoothFunction from_factors(int dim, std::vector<Factor> factors, Complex coef = 1.0) {
    SmoothFunction f(dim);
    for (const auto& fa : factors)
      for (int a : fa.axes)
        if (a < 0 || a >= dim) throw DomainError("factor axis outside the function dimension");
    f.terms_.push_back(Term{coef, std::move(factors)});
    f.normalize();
    return f;
  }

  /// Separable standard bump prod_i exp(-1/(1-u_i^2)), u_i = (x_i - c_i)/rho_i.
  static SmoothFunction atom(const Point& center, const Point& radius, Complex coef = 1.0) {
    if (center.size() != radius.size() || center.empty()) throw DomainError("atom center/radius dimension mismatch");
    std::vector<Factor> fs;
    for (std::size_t i = 0; i < center.size(); ++i)
      fs.push_back(Factor{make_bump(center[i], radius[i]), {static_cast<int>(i)}, 0});
    return from_factors(static_cast<int>(center.size()), std::move(fs), coef);
  }

  /// Polynomial in x_axis (other axes constant).
  static SmoothFunction poly(int dim, const std::vector<double>& coeffs, int axis = 0) {
    return from_factors(dim, {Factor{make_poly(coeffs), {axis}, 0}});
  }

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Complex operator()(const Point& x) const {
    if (static_cast<int>(x.size()) != dim_) throw DomainError("evaluation point has wrong dimension");
    Complex s{};
    for (const auto& t : terms_) {
      double p = 1.0;
      for (const auto& f : t.factors) {
        p *= f.eval(x);
        if (p == 0.0) break;
      }
      s += t.coef * p;
    }
    return s;
  }

  // ---- algebra -----------------------------------------------------------

  SmoothFunction scaled(Complex c) const {
    SmoothFunction r(*this);
    for (auto& t : r.terms_) t.coef *= c;
    r.normalize();
    return r;
  }

  friend SmoothFunction operator+(const SmoothFunction& a, const SmoothFunction& b) {
    check_same_dim(a, b);
    SmoothFunction r(a);
    r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
    r.normalize();
    return r;
  }

  friend SmoothFunction operator-(const SmoothFunction& a, const SmoothFunction& b) { return a + b.scaled(-1.0); }

  friend SmoothFunction operator*(const SmoothFunction& a, const SmoothFunction& b) {
    check_same_dim(a, b);
    SmoothFunction r(a.dim_);
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) {
        Term p{s.coef * t.coef, s.factors};
        p.factors.insert(p.factors.end(), t.factors.begin(), t.factors.end());
        r.terms_.push_back(std::move(p));
      }
    r.normalize();
    return r;
  }

  /// Real partial derivative d^k.
  SmoothFunction partial(const MultiIndex& k) const {
    if (static_cast<int>(k.size()) != dim_) throw DomainError("multi-index dimension mismatch");
    SmoothFunction r(*this);
    for (int a = 0; a < dim_; ++a)
      for (int n = 0; n < k[static_cast<std::size_t>(a)]; ++n) r = r.partial_axis(a);
    return r;
  }

  /// D^k = (1/i)^{|k|} d^k.
  SmoothFunction D(const MultiIndex& k) const { return partial(k).scaled(minus_ipow(order(k))); }

  /// Fixes x_axis = value; the axis disappears from every factor.
  SmoothFunction restricted(int axis, double value) const {
    SmoothFunction r(dim_);
    for (const auto& t : terms_) {
      Term nt{t.coef, {}};
      for (const auto& f : t.factors) {
        if (!f.touches(axis)) {
          nt.factors.push_back(f);
        } else if (f.axes.size() == 1) {
          nt.coef *= f.g->value(value, f.order);
        } else {
          Factor g{f.g->translated(-value), {}, f.order};
          for (int a : f.axes)
            if (a != axis) g.axes.push_back(a);
          nt.factors.push_back(std::move(g));
        }
      }
      r.terms_.push_back(std::move(nt));
    }
    r.normalize();
    return r;
  }

  /// Moves axis a to axis_map[a] in a space of dimension new_dim.
  SmoothFunction embedded(int new_dim, const std::vector<int>& axis_map) const {
    if (static_cast<int>(axis_map.size()) != dim_) throw DomainError("axis map size mismatch");
    SmoothFunction r(new_dim);
    for (const auto& t : terms_) {
      Term nt(t);
      for (auto& f : nt.factors)
        for (auto& a : f.axes) a = axis_map[static_cast<std::size_t>(a)];
      r.terms_.push_back(std::move(nt));
    }
    r.normalize();
    return r;
  }

  /// (x, y) -> f(x + y) on R^{2d}.
  SmoothFunction diag() const {
    SmoothFunction r(2 * dim_);
    for (const auto& t : terms_) {
      Term nt(t);
      for (auto& f : nt.factors) {
        if (f.axes.size() != 1) throw UnsupportedCombination("diagonal composition of a coupled factor");
        f.axes = {f.axes[0], f.axes[0] + dim_};
      }
      r.terms_.push_back(std::move(nt));
    }
    r.normalize();
    return r;
  }

  /// x -> f(x - s).
  SmoothFunction translated(const Point& s) const {
    if (static_cast<int>(s.size()) != dim_) throw DomainError("translation dimension mismatch");
    return map_single_axis([&](const Factor& f, Complex&) {
      return f.g->translated(s[static_cast<std::size_t>(f.axes[0])]);
    });
  }

  /// x -> f(-x).
  SmoothFunction reflected() const {
    return map_single_axis([](const Factor& f, Complex& c) {
      if (f.order % 2) c = -c;
      return f.g->reflected();
    });
  }

  /// x -> f(x / a).
  SmoothFunction dilated(double a) const {
    return map_single_axis([a](const Factor& f, Complex& c) {
      c *= std::pow(a, f.order);
      return f.g->dilated(a);
    });
  }

  // ---- geometry ----------------------------------------------------------

  /// Per-axis hull of the supports, using single-axis factors only.
  Box support_box() const {
    Box b(static_cast<std::size_t>(dim_), Interval{0.0, 0.0});
    bool first = true;
    for (const auto& t : terms_) {
      Box tb = unbounded_box(dim_);
      for (const auto& f : t.factors)
        if (f.axes.size() == 1) {
          auto& iv = tb[static_cast<std::size_t>(f.axes[0])];
          iv = intersect(iv, hull(f.support()));
        }
      for (int a = 0; a < dim_; ++a) {
        auto& dst = b[static_cast<std::size_t>(a)];
        const auto& src = tb[static_cast<std::size_t>(a)];
        dst = first ? src : Interval{std::min(dst.lo, src.lo), std::max(dst.hi, src.hi)};
      }
      first = false;
    }
    return b;
  }

  /// Breakpoints of single-axis factors, per axis.
  std::vector<std::vector<double>> breakpoints() const {
    std::vector<std::vector<double>> bp(static_cast<std::size_t>(dim_));
    for (const auto& t : terms_)
      for (const auto& f : t.factors)
        if (f.axes.size() == 1)
          for (double v : f.g->breakpoints()) bp[static_cast<std::size_t>(f.axes[0])].push_back(v);
    for (auto& v : bp) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return bp;
  }

  bool has_coupled_factors() const {
    for (const auto& t : terms_)
      for (const auto& f : t.factors)
        if (f.axes.size() > 1) return true;
    return false;
  }

  std::string key() const {
    std::string k = "F" + std::to_string(dim_) + "{";
    for (const auto& t : terms_) k += "(" + hex(t.coef.real()) + "," + hex(t.coef.imag()) + ")" + t.key() + ";";
    return k + "}";
  }

  // ---- jets --------------------------------------------------------------

  /// All partial derivatives of total order <= K at x, from products of
  /// truncated multivariate Taylor series of the factors.
  JetValues jet(const Point& x, int K) const {
    if (dim_ > 4) throw UnsupportedCombination("dense jets are limited to dimension <= 4");
    JetValues out;
    out.indices = indices_up_to(dim_, K);
    const std::size_t n = out.indices.size();
    const int base = K + 1;
    std::vector<int> pos(static_cast<std::size_t>(std::pow(base, dim_)), -1);
    std::vector<int> code(n);
    for (std::size_t i = 0; i < n; ++i) {
      int c = 0;
      for (int a = dim_ - 1; a >= 0; --a) c = c * base + out.indices[i][static_cast<std::size_t>(a)];
      code[i] = c;
      pos[static_cast<std::size_t>(c)] = static_cast<int>(i);
    }
    std::vector<int> ord(n);
    for (std::size_t i = 0; i < n; ++i) ord[i] = order(out.indices[i]);
    std::vector<Complex> acc(n, Complex{});
    std::vector<double> series(n), fs(n), prod(n);
    std::vector<int> stride(static_cast<std::size_t>(dim_));
    for (int a = 0, s = 1; a < dim_; ++a, s *= base) stride[static_cast<std::size_t>(a)] = s;

    for (const auto& t : terms_) {
      std::fill(series.begin(), series.end(), 0.0);
      series[0] = 1.0;
      bool zero = false;
      for (const auto& f : t.factors) {
        const auto d = f.g->derivatives(f.arg(x), f.order + K);
        std::fill(fs.begin(), fs.end(), 0.0);
        bool any = false;
        if (f.axes.size() == 1) {
          const int a = f.axes[0];
          double inv_fact = 1.0;
          for (int m = 0; m <= K; ++m) {
            if (m > 0) inv_fact /= m;
            const double v = d[static_cast<std::size_t>(f.order + m)] * inv_fact;
            fs[static_cast<std::size_t>(pos[static_cast<std::size_t>(m * stride[static_cast<std::size_t>(a)])])] = v;
            any = any || v != 0.0;
          }
        } else {
          const int a = f.axes[0], b = f.axes[1];
          for (int i = 0; i <= K; ++i)
            for (int j = 0; i + j <= K; ++j) {
              const double v = d[static_cast<std::size_t>(f.order + i + j)] / (factorial(i) * factorial(j));
              const int c = i * stride[static_cast<std::size_t>(a)] + j * stride[static_cast<std::size_t>(b)];
              fs[static_cast<std::size_t>(pos[static_cast<std::size_t>(c)])] += v;
              any = any || v != 0.0;
            }
        }
        if (!any) {
          zero = true;
          break;
        }
        std::fill(prod.begin(), prod.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          if (series[i] == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) {
            if (fs[j] == 0.0 || ord[i] + ord[j] > K) continue;
            prod[static_cast<std::size_t>(pos[static_cast<std::size_t>(code[i] + code[j])])] += series[i] * fs[j];
          }
        }
        series.swap(prod);
      }
      if (zero) continue;
      for (std::size_t i = 0; i < n; ++i) acc[i] += t.coef * series[i];
    }
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = acc[i] * index_factorial(out.indices[i]);
    return out;
  }

 private:
  static void check_same_dim(const SmoothFunction& a, const SmoothFunction& b) {
    if (a.dim_ != b.dim_) throw DomainError("function dimension mismatch");
  }

  template <class Map>
  SmoothFunction map_single_axis(Map map) const {
    SmoothFunction r(dim_);
    for (const auto& t : terms_) {
      Term nt{t.coef, {}};
      for (const auto& f : t.factors) {
        if (f.axes.size() != 1) throw UnsupportedCombination("operation not defined for coupled factors");
        nt.factors.push_back(Factor{map(f, nt.coef), f.axes, f.order});
      }
      r.terms_.push_back(std::move(nt));
    }
    r.normalize();
    return r;
  }

  SmoothFunction partial_axis(int axis) const {
    SmoothFunction r(dim_);
    for (const auto& t : terms_)
      for (std::size_t j = 0; j < t.factors.size(); ++j) {
        if (!t.factors[j].touches(axis)) continue;
        Term nt(t);
        nt.factors[j].order += 1;
        r.terms_.push_back(std::move(nt));
      }
    r.normalize();
    return r;
  }

  /// Canonical form: merged aligned bumps, no trivial factors, sorted factors,
  /// like terms combined, zero terms dropped.
  void normalize() {
    std::vector<Term> out;
    std::unordered_map<std::string, std::size_t> seen;
    for (auto& t : terms_) {
      if (t.coef == Complex{}) continue;
      std::vector<Factor> fs;
      bool zero = false;
      for (auto& f : t.factors) {
        std::sort(f.axes.begin(), f.axes.end());
        if (f.order == 0 && f.g->is_one()) continue;
        if (f.support().empty()) {
          zero = true;
          break;
        }
        bool merged = false;
        if (f.order == 0)
          if (const auto* b = dynamic_cast<const BumpProfile*>(f.g.get()))
            for (auto& e : fs)
              if (e.order == 0 && e.axes == f.axes)
                if (const auto* eb = dynamic_cast<const BumpProfile*>(e.g.get()); eb && eb->aligned_with(*b)) {
                  e.g = eb->times(*b);
                  merged = true;
                  break;
                }
        if (!merged) fs.push_back(f);
      }
      if (zero) continue;
      drop_covering_plateaus(fs);
      std::sort(fs.begin(), fs.end(), [](const Factor& a, const Factor& b) { return a.key() < b.key(); });
      Term nt{t.coef, std::move(fs)};
      const std::string k = nt.key();
      auto it = seen.find(k);
      if (it == seen.end()) {
        seen.emplace(k, out.size());
        out.push_back(std::move(nt));
      } else {
        out[it->second].coef += nt.coef;
      }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.coef == Complex{}; }), out.end());
    std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return a.key() < b.key(); });
    terms_ = std::move(out);
  }

  /// An order-0 plateau equal to 1 on the joint support of the other
  /// single-axis factors on its axis does not change the product.
  static void drop_covering_plateaus(std::vector<Factor>& fs) {
    for (std::size_t i = 0; i < fs.size();) {
      const auto* p = dynamic_cast<const PlateauProfile*>(fs[i].g.get());
      if (p && fs[i].order == 0 && fs[i].axes.size() == 1) {
        IntervalSet others = whole_line();
        bool any = false;
        for (std::size_t j = 0; j < fs.size(); ++j)
          if (j != i && fs[j].axes == fs[i].axes) {
            others = intersect(others, fs[j].support());
            any = true;
          }
        if (any && bounded(others) && (others.empty() || p->covers(hull(others)))) {
          fs.erase(fs.begin() + static_cast<std::ptrdiff_t>(i));
          continue;
        }
      }
      ++i;
    }
  }

  int dim_ = 1;
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Integration

class IntegralCache {
 public:
  bool lookup(const std::string& k, double& v) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(k);
    if (it == map_.end()) return false;
    v = it->second;
    return true;
  }
  void store(const std::string& k, double v) {
    std::lock_guard<std::mutex> lock(mu_);
    map_.emplace(k, v);
  }
  void clear() {
    std::lock_guard<std::mutex> lock(mu_);
    map_.clear();
  }
  std::size_t size() {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
  }

 private:
  std::mutex mu_;
  std::unordered_map<std::string, double> map_;
};

inline IntegralCache& integral_cache() {
  static IntegralCache cache;
  return cache;
}

namespace integ_detail {

inline IntervalSet support_of(const std::vector<const Factor*>& fs) {
  IntervalSet s = whole_line();
  for (const auto* f : fs) s = intersect(s, f->support());
  return s;
}

inline std::vector<double> breakpoints_of(const std::vector<const Factor*>& fs) {
  std::vector<double> bp;
  for (const auto* f : fs)
    for (double v : f->g->breakpoints()) bp.push_back(v);
  return bp;
}

/// Drops order-0 plateau factors that equal 1 on the range left by the others.
inline void drop_covering_plateaus(std::vector<const Factor*>& fs, const IntervalSet& extra) {
  for (std::size_t i = 0; i < fs.size();) {
    const auto* p = dynamic_cast<const PlateauProfile*>(fs[i]->g.get());
    if (p && fs[i]->order == 0) {
      IntervalSet others = extra;
      for (std::size_t j = 0; j < fs.size(); ++j)
        if (j != i) others = intersect(others, fs[j]->support());
      if (others.empty() || (bounded(others) && p->covers(hull(others)))) {
        fs.erase(fs.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
    }
    ++i;
  }
}

inline double product_at(const std::vector<const Factor*>& fs, double t) {
  double p = 1.0;
  for (const auto* f : fs) {
    p *= f->g->value(t, f->order);
    if (p == 0.0) return 0.0;
  }
  return p;
}

inline std::string component_key(const std::vector<const Factor*>& a, const std::vector<const Factor*>& b,
                                 const std::vector<const Factor*>& g, const QuadratureOptions& opt) {
  auto keys = [](const std::vector<const Factor*>& fs) {
    std::vector<std::string> ks;
    for (const auto* f : fs) ks.push_back(f->g->key() + "^" + std::to_string(f->order));
    std::sort(ks.begin(), ks.end());
    std::string s;
    for (auto& k : ks) s += k + "|";
    return s;
  };
  return "A[" + keys(a) + "]B[" + keys(b) + "]G[" + keys(g) + "]" + hex(opt.abs_tol) + hex(opt.rel_tol);
}

inline double integrate_single(std::vector<const Factor*> fs, const QuadratureOptions& opt) {
  drop_covering_plateaus(fs, whole_line());
  const IntervalSet s = support_of(fs);
  if (s.empty()) return 0.0;
  if (!bounded(s)) throw DivergentPairing("integrand has unbounded support along an axis");
  const std::string key = component_key(fs, {}, {}, opt);
  double v;
  if (opt.use_cache && integral_cache().lookup(key, v)) return v;
  const auto bp = breakpoints_of(fs);
  v = 0.0;
  for (const auto& iv : s) v += integrate_1d([&](double t) { return product_at(fs, t); }, iv.lo, iv.hi, bp, opt);
  if (opt.use_cache) integral_cache().store(key, v);
  return v;
}

/// int int prod A(x) prod B(y) prod G(x + y) dy dx.
inline double integrate_pair(std::vector<const Factor*> A, std::vector<const Factor*> B,
                             const std::vector<const Factor*>& G, const QuadratureOptions& opt) {
  auto implied = [&](const IntervalSet& other) {
    IntervalSet r = whole_line();
    if (!bounded(other) || other.empty()) return r;
    const Interval oh = hull(other);
    for (const auto* g : G) {
      const IntervalSet gs = g->support();
      if (!bounded(gs) || gs.empty()) continue;
      const Interval gh = hull(gs);
      r = intersect(r, IntervalSet{Interval{gh.lo - oh.hi, gh.hi - oh.lo}});
    }
    return r;
  };
  drop_covering_plateaus(A, implied(support_of(B)));
  drop_covering_plateaus(B, implied(support_of(A)));
  IntervalSet sa = intersect(support_of(A), implied(support_of(B)));
  IntervalSet sb = intersect(support_of(B), implied(support_of(A)));
  if (sa.empty() || sb.empty()) return 0.0;
  for (const auto* g : G)
    if (g->support().empty()) return 0.0;
  if (!bounded(sa) && !bounded(sb)) throw DivergentPairing("coupled integrand has non-compact support");
  if (!bounded(sa)) {
    std::swap(A, B);
    std::swap(sa, sb);
  }
  const std::string key = component_key(A, B, G, opt);
  double v;
  if (opt.use_cache && integral_cache().lookup(key, v)) return v;

  const IntervalSet b_supp = support_of(B);
  std::vector<double> b_bp = breakpoints_of(B);
  for (const auto& iv : b_supp) {
    if (std::isfinite(iv.lo)) b_bp.push_back(iv.lo);
    if (std::isfinite(iv.hi)) b_bp.push_back(iv.hi);
  }
  const std::vector<double> g_bp = breakpoints_of(G);
  std::vector<double> outer_bp = breakpoints_of(A);
  for (double g : g_bp)
    for (double b : b_bp) outer_bp.push_back(g - b);

  const Interval outer_hull = hull(sa);
  QuadratureOptions inner_opt = opt;
  inner_opt.abs_tol = 0.1 * opt.abs_tol / std::max(1.0, outer_hull.length());

  auto inner = [&](double x) {
    const double ax = product_at(A, x);
    if (ax == 0.0) return 0.0;
    IntervalSet s = b_supp;
    for (const auto* g : G) s = intersect(s, shifted(g->support(), -x));
    if (s.empty()) return 0.0;
    if (!bounded(s)) throw DivergentPairing("coupled integrand has non-compact inner support");
    std::vector<double> bp = b_bp;
    for (double gb : g_bp) bp.push_back(gb - x);
    auto h = [&](double y) {
      double p = product_at(B, y);
      if (p == 0.0) return 0.0;
      for (const auto* g : G) {
        p *= g->g->value(x + y, g->order);
        if (p == 0.0) return 0.0;
      }
      return p;
    };
    double r = 0.0;
    for (const auto& iv : s) r += integrate_1d(h, iv.lo, iv.hi, bp, inner_opt);
    return ax * r;
  };
  v = 0.0;
  for (const auto& iv : sa) v += integrate_1d(inner, iv.lo, iv.hi, outer_bp, opt);
  if (opt.use_cache) integral_cache().store(key, v);
  return v;
}

}  // namespace integ_detail

/// Integral of f over the listed axes (all other axes must be absent from f).
inline Complex integrate(const SmoothFunction& f, const std::vector<int>& axes, const QuadratureOptions& opt = {}) {
  Complex total{};
  for (const auto& t : f.terms()) {
    // Target the absolute error of t.coef * value; the scale is a power of two to keep cache keys discrete.
    QuadratureOptions topt = opt;
    const double mag = std::abs(t.coef);
    if (mag > 0.0 && mag < 1.0) topt.abs_tol = std::ldexp(opt.abs_tol, -std::ilogb(mag));
    std::vector<int> comp(static_cast<std::size_t>(f.dim()));
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int a) {
      return comp[static_cast<std::size_t>(a)] == a ? a : comp[static_cast<std::size_t>(a)] = find(comp[static_cast<std::size_t>(a)]);
    };
    for (const auto& fa : t.factors) {
      for (int a : fa.axes)
        if (std::find(axes.begin(), axes.end(), a) == axes.end())
          throw DomainError("integrand depends on an axis that is not integrated");
      for (std::size_t j = 1; j < fa.axes.size(); ++j) comp[static_cast<std::size_t>(find(fa.axes[j]))] = find(fa.axes[0]);
    }
    double value = 1.0;
    std::optional<std::string> divergent;
    std::vector<bool> done(static_cast<std::size_t>(f.dim()), false);
    for (int a : axes) {
      const int root = find(a);
      if (done[static_cast<std::size_t>(root)]) continue;
      done[static_cast<std::size_t>(root)] = true;
      std::vector<int> members;
      for (int b : axes)
        if (find(b) == root) members.push_back(b);
      if (members.size() > 2) throw UnsupportedCombination("coupled integration over more than two axes");
      std::vector<const Factor*> fa, fb, fg;
      for (const auto& fc : t.factors) {
        if (find(fc.axes[0]) != root) continue;
        if (fc.axes.size() == 2) fg.push_back(&fc);
        else if (fc.axes[0] == members[0]) fa.push_back(&fc);
        else fb.push_back(&fc);
      }
      if (fa.empty() && fb.empty() && fg.empty()) {
        if (!divergent) divergent = "integrand is constant along axis " + std::to_string(a);
        continue;
      }
      try {
        const double c = members.size() == 1 ? integ_detail::integrate_single(fa, topt)
                                             : integ_detail::integrate_pair(fa, fb, fg, topt);
        value *= c;
      } catch (const DivergentPairing& e) {
        if (!divergent) divergent = e.what();
      }
      if (value == 0.0) break;
    }
    // An identically zero component makes the term vanish even if another diverges.
    if (value == 0.0) continue;
    if (divergent) throw DivergentPairing(*divergent);
    total += t.coef * value;
  }
  return total;
}

}  // namespace roumieu
