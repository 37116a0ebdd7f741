#pragma once

// Config-driven experiment runner. A JSON config names the objects (weight
// sequence, r-sequences, functions, units, ultradistributions, operators)
// and selects check suites; run() executes them and writes a JSON report
// plus CSV dumps of the convolvability sequences.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "roumieu/roumieu.hpp"

namespace roumieu::cli {

using json = nlohmann::ordered_json;

/// Malformed config or report; `path` locates the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what) : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

inline const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> s{"weights",       "rclass",      "komatsu",  "seminorms", "units",
                                          "integrability", "convolution", "exchange", "nu"};
  return s;
}

/// Human-readable description of each check family, used by explain.
inline std::string check_label(const std::string& id) {
  static const std::vector<std::pair<std::string, std::string>> labels{
      {"weights.M1", "logarithmic convexity (M.1)"},
      {"weights.M2prime", "stability under differential operators (M.2')"},
      {"weights.M2", "stability under ultradifferential operators (M.2)"},
      {"weights.M3prime", "non-quasianalyticity (M.3')"},
      {"weights.M3", "strong non-quasianalyticity (M.3)"},
      {"weights.product", "product inequality M_p M_q <= M_{p+q}"},
      {"rclass.template", "doubling product inequality for r_p = max(1, p)"},
      {"rclass.minorant", "doubling-product minorant of a class sequence"},
      {"rclass.superadditive", "superadditivity of product sequences"},
      {"komatsu.", "growth and decay classification with witnesses"},
      {"seminorms.product", "product estimate ||fg||_(r) <= ||f||_(r/2) ||g||_(r/2)"},
      {"units.nonexample", "shrinking supports are not an approximate unit"},
      {"units.", "approximate unit: uniform seminorm bounds and convergence to 1"},
      {"integrability.", "integrability criterion via approximate units"},
      {"convolution.c3.", "absolute integrability diagnostic for the convolution"},
      {"convolution.", "equivalence of sequential convolvability modes"},
      {"exchange.", "exchange of ultradifferential operators with convolution"},
      {"nu.", "commutator correction terms vanish in the limit"},
  };
  for (const auto& [prefix, label] : labels)
    if (id.rfind(prefix, 0) == 0) return label;
  return "check";
}

struct Check {
  std::string id;
  bool holds = true;            // outcome of the mathematical check
  bool expected = true;         // expected outcome
  json detail = json::object();
  bool pass() const { return holds == expected; }
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  std::vector<std::string> artifacts;  // relative to the output directory
  double timing_ms = 0.0;
  std::string error;  // numeric exception escaping the suite
  bool pass() const {
    if (!error.empty()) return false;
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }
};

struct RunOptions {
  std::string out_dir;
  std::vector<std::string> suites;  // overrides the config when nonempty
  bool parallel = false;
};

struct RunReport {
  json report;
  bool pass = true;
  std::vector<std::string> verdict_lines;
  std::string report_path;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

inline json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline json num(double v) { return std::isfinite(v) ? json(v) : json(v > 0 ? "inf" : (v < 0 ? "-inf" : "nan")); }

inline json index_json(const MultiIndex& k) { return json(k); }

// ---- typed accessors with path-qualified errors --------------------------

inline const json& at(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(path + "." + key, "missing field");
  return j.at(key);
}

inline double get_num(const json& j, const std::string& key, const std::string& path, std::optional<double> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    throw ConfigError(path + "." + key, "missing field");
  }
  if (!j.at(key).is_number()) throw ConfigError(path + "." + key, "expected a number");
  return j.at(key).get<double>();
}

inline int get_int(const json& j, const std::string& key, const std::string& path, std::optional<int> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    throw ConfigError(path + "." + key, "missing field");
  }
  if (!j.at(key).is_number_integer()) throw ConfigError(path + "." + key, "expected an integer");
  return j.at(key).get<int>();
}

inline std::string get_str(const json& j, const std::string& key, const std::string& path,
                           std::optional<std::string> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    throw ConfigError(path + "." + key, "missing field");
  }
  if (!j.at(key).is_string()) throw ConfigError(path + "." + key, "expected a string");
  return j.at(key).get<std::string>();
}

inline std::vector<double> get_vec(const json& j, const std::string& key, const std::string& path) {
  const json& v = at(j, key, path);
  if (!v.is_array()) throw ConfigError(path + "." + key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(path + "." + key, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

inline Complex get_complex(const json& j, const std::string& key, const std::string& path, Complex def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(path + "." + key, "expected a number or [re, im]");
}

inline std::vector<std::string> get_names(const json& j, const std::string& key, const std::string& path,
                                          const std::vector<std::string>& def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (v.is_string() && v.get<std::string>() == "all") return def;
  if (!v.is_array()) throw ConfigError(path + "." + key, "expected a list of names or \"all\"");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) throw ConfigError(path + "." + key, "expected names");
    out.push_back(x.get<std::string>());
  }
  return out;
}

inline MultiIndex to_index(const std::vector<double>& v) {
  MultiIndex k;
  for (double x : v) k.push_back(static_cast<int>(x));
  return k;
}

}  // namespace detail

struct PairSpec {
  std::string name, S, T;
  bool convolvable = true;
};

/// Objects built from a config, with every reference resolved.
class Experiment {
 public:
  explicit Experiment(json cfg) : cfg_(std::move(cfg)) { build(); }

  static Experiment from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(path, std::string("parse error: ") + e.what());
    }
    return Experiment(std::move(j));
  }

  const json& config() const { return cfg_; }
  std::string name() const { return detail::get_str(cfg_, "name", "$", std::string("unnamed")); }
  std::vector<std::string> suites() const { return suites_; }
  int N_max() const { return N_max_; }
  int K_max() const { return K_max_; }
  const WeightSequence& weight() const { return *weight_; }
  const std::map<std::string, RSequence>& rsequences() const { return rseq_; }
  const std::vector<std::string>& rsequence_order() const { return rseq_order_; }
  const SmoothFunction& function(const std::string& n, const std::string& path) const {
    const auto it = functions_.find(n);
    if (it == functions_.end()) throw ConfigError(path, "unknown function '" + n + "'");
    return it->second;
  }
  const Ultradistribution& distribution(const std::string& n, const std::string& path) const {
    const auto it = dists_.find(n);
    if (it == dists_.end()) throw ConfigError(path, "unknown distribution '" + n + "'");
    return it->second;
  }
  const RSequence& rsequence(const std::string& n, const std::string& path) const {
    const auto it = rseq_.find(n);
    if (it == rseq_.end()) throw ConfigError(path, "unknown r-sequence '" + n + "'");
    return it->second;
  }
  const ApproximateUnit& unit(const std::string& n, const std::string& path) const {
    for (const auto& u : units_)
      if (u.name == n) return u.unit;
    throw ConfigError(path, "unknown unit '" + n + "'");
  }
  const std::vector<NamedUnit>& units() const { return units_; }
  const UltradiffOperator& op(const std::string& n, const std::string& path) const {
    const auto it = ops_.find(n);
    if (it == ops_.end()) throw ConfigError(path, "unknown operator '" + n + "'");
    return it->second;
  }
  const std::vector<PairSpec>& pairs() const { return pairs_; }
  const PairSpec& pair_spec(const std::string& n, const std::string& path) const {
    for (const auto& p : pairs_)
      if (p.name == n) return p;
    throw ConfigError(path, "unknown pair '" + n + "'");
  }
  const std::vector<std::string>& test_functions() const { return test_functions_; }
  double tol(const std::string& key, double def) const {
    if (!cfg_.contains("tolerances")) return def;
    const double v = detail::get_num(cfg_.at("tolerances"), key, "$.tolerances", def);
    if (!(v > 0.0)) throw ConfigError("$.tolerances." + key, "tolerances must be positive");
    return v;
  }
  const json& suite_cfg(const std::string& s) const {
    static const json empty = json::object();
    if (cfg_.contains("suite_config") && cfg_.at("suite_config").contains(s)) return cfg_.at("suite_config").at(s);
    return empty;
  }
  unsigned seed() const { return static_cast<unsigned>(detail::get_int(cfg_, "seed", "$", 12345)); }

 private:
  void build() {
    using namespace detail;
    if (!cfg_.is_object()) throw ConfigError("$", "config must be an object");
    N_max_ = get_int(cfg_, "N_max", "$", 20);
    K_max_ = get_int(cfg_, "K_max", "$", 12);
    if (N_max_ < 5) throw ConfigError("$.N_max", "N_max must be at least 5");
    if (K_max_ < 8) throw ConfigError("$.K_max", "K_max must be at least 8");

    const json& sv = at(cfg_, "suites", "$");
    if (!sv.is_array() || sv.empty()) throw ConfigError("$.suites", "suite list must be a nonempty array");
    for (const auto& s : sv) {
      if (!s.is_string()) throw ConfigError("$.suites", "suite names must be strings");
      const std::string n = s.get<std::string>();
      if (std::find(all_suites().begin(), all_suites().end(), n) == all_suites().end())
        throw ConfigError("$.suites", "unknown suite '" + n + "'");
      suites_.push_back(n);
    }

    // Weight sequence.
    const json& w = at(cfg_, "weight", "$");
    const std::string fam = get_str(w, "family", "$.weight");
    const int wn = get_int(w, "N", "$.weight", 256);
    try {
      if (fam == "gevrey") weight_ = WeightSequence::gevrey(get_num(w, "s", "$.weight"), wn);
      else if (fam == "factorial") weight_ = WeightSequence::factorial(wn);
      else if (fam == "explicit") weight_ = WeightSequence::from_table(get_vec(w, "table", "$.weight"));
      else throw ConfigError("$.weight.family", "unknown family '" + fam + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("$.weight", e.what());
    }

    // r-sequences.
    if (cfg_.contains("rsequences")) {
      for (const auto& [n, spec] : cfg_.at("rsequences").items()) {
        const std::string path = "$.rsequences." + n;
        const std::string f = get_str(spec, "family", path);
        const int len = get_int(spec, "N", path, 64);
        try {
          if (f == "linear") rseq_.emplace(n, RSequence::linear(len));
          else if (f == "power") rseq_.emplace(n, RSequence::power(get_num(spec, "alpha", path), len));
          else if (f == "logarithmic") rseq_.emplace(n, RSequence::logarithmic(len));
          else if (f == "shifted_linear") {
            const double c = get_num(spec, "c", path);
            std::vector<double> v{1.0};
            for (int p = 1; p <= len; ++p) v.push_back(c + p);
            rseq_.emplace(n, RSequence::from_values(v));
          } else if (f == "values") rseq_.emplace(n, RSequence::from_values(get_vec(spec, "values", path)));
          else throw ConfigError(path + ".family", "unknown family '" + f + "'");
        } catch (const ConfigError&) {
          throw;
        } catch (const Error& e) {
          throw ConfigError(path, e.what());
        }
        rseq_order_.push_back(n);
      }
    }

    // Functions.
    if (cfg_.contains("functions")) {
      for (const auto& [n, spec] : cfg_.at("functions").items()) {
        const std::string path = "$.functions." + n;
        const Complex c = get_complex(spec, "coef", path, 1.0);
        if (spec.contains("atom")) {
          const json& a = spec.at("atom");
          const auto center = get_vec(a, "center", path + ".atom"), radius = get_vec(a, "radius", path + ".atom");
          if (center.size() != radius.size() || center.empty())
            throw ConfigError(path + ".atom", "center and radius must have the same nonzero length");
          for (double r : radius)
            if (!(r > 0.0)) throw ConfigError(path + ".atom.radius", "radii must be positive");
          functions_.emplace(n, SmoothFunction::atom(center, radius, c));
        } else if (spec.contains("poly")) {
          const json& p = spec.at("poly");
          functions_.emplace(n, SmoothFunction::poly(get_int(p, "dim", path + ".poly", 1), get_vec(p, "coeffs", path + ".poly"))
                                    .scaled(c));
        } else {
          throw ConfigError(path, "function needs 'atom' or 'poly'");
        }
      }
    }

    // Units.
    if (cfg_.contains("units")) {
      for (const auto& [n, spec] : cfg_.at("units").items()) {
        const std::string path = "$.units." + n;
        const std::string kind = get_str(spec, "kind", path);
        const auto schedule = ApproximateUnit::linear_schedule(get_int(spec, "length", path, N_max_),
                                                               get_num(spec, "slope", path, 1.0),
                                                               get_num(spec, "offset", path, 0.0));
        const int dim = get_int(spec, "dim", path, 1);
        std::optional<ApproximateUnit> u;
        try {
          if (kind == "plateau") u = ApproximateUnit::plateau(dim, schedule, get_num(spec, "margin", path, 1.0));
          else if (kind == "dilation") u = ApproximateUnit::dilation(dim, schedule);
          else if (kind == "shrinking") u = shrinking_nonexample(get_int(spec, "length", path, N_max_), dim);
          else throw ConfigError(path + ".kind", "unknown unit kind '" + kind + "'");
          if (spec.contains("perturb")) u = ApproximateUnit::perturbed(*u, get_num(spec, "perturb", path));
        } catch (const ConfigError&) {
          throw;
        } catch (const Error& e) {
          throw ConfigError(path, e.what());
        }
        if (u->length() < N_max_) throw ConfigError(path + ".length", "unit schedule shorter than N_max");
        units_.push_back({n, *u});
      }
    }

    // Ultradistributions; "sum" may refer to earlier entries.
    if (cfg_.contains("distributions")) {
      for (const auto& [n, spec] : cfg_.at("distributions").items()) {
        const std::string path = "$.distributions." + n;
        try {
          dists_.emplace(n, make_distribution(spec, path));
        } catch (const ConfigError&) {
          throw;
        } catch (const Error& e) {
          throw ConfigError(path, e.what());
        }
      }
    }

    if (cfg_.contains("pairs")) {
      std::size_t i = 0;
      for (const auto& p : cfg_.at("pairs")) {
        const std::string path = "$.pairs[" + std::to_string(i++) + "]";
        PairSpec s;
        s.S = get_str(p, "S", path);
        s.T = get_str(p, "T", path);
        s.name = get_str(p, "name", path, s.S + "_" + s.T);
        const std::string e = get_str(p, "expect", path, std::string("convolvable"));
        if (e != "convolvable" && e != "not_convolvable")
          throw ConfigError(path + ".expect", "expected 'convolvable' or 'not_convolvable'");
        s.convolvable = e == "convolvable";
        distribution(s.S, path + ".S");
        distribution(s.T, path + ".T");
        if (distribution(s.S, path).dim() != distribution(s.T, path).dim())
          throw ConfigError(path, "pair members have different dimensions");
        pairs_.push_back(s);
      }
    }
    test_functions_ = get_names(cfg_, "test_functions", "$", {});
    for (const auto& f : test_functions_) function(f, "$.test_functions");

    if (cfg_.contains("operators")) {
      for (const auto& [n, spec] : cfg_.at("operators").items()) {
        const std::string path = "$.operators." + n;
        const int dim = get_int(spec, "dim", path, 1);
        std::optional<UltradiffOperator> P;
        if (spec.contains("coef_rule")) {
          const std::string r = get_str(spec, "coef_rule", path);
          if (r == "identity") P = UltradiffOperator::identity(dim);
          else if (r == "derivative") P = UltradiffOperator::derivative(dim, get_int(spec, "axis", path, 0));
          else if (r == "one_plus_d2") P = UltradiffOperator::one_plus_d2(dim);
          else if (r == "inv_fact_weight") P = UltradiffOperator::inv_fact_weight(*weight_, get_int(spec, "K_op", path, 24), dim);
          else if (r == "inv_weight") P = UltradiffOperator::inv_weight(*weight_, get_int(spec, "K_op", path, 24), dim);
          else throw ConfigError(path + ".coef_rule", "unknown rule '" + r + "'");
        } else if (spec.contains("table")) {
          std::map<MultiIndex, Complex> c;
          std::size_t i = 0;
          for (const auto& e : spec.at("table")) {
            const std::string ep = path + ".table[" + std::to_string(i++) + "]";
            c[to_index(get_vec(e, "k", ep))] = get_complex(e, "c", ep, 1.0);
          }
          try {
            P = UltradiffOperator::from_table(dim, c, get_int(spec, "K_op", path), n);
          } catch (const Error& e) {
            throw ConfigError(path, e.what());
          }
        } else {
          throw ConfigError(path, "operator needs 'coef_rule' or 'table'");
        }
        ops_.emplace(n, *P);
      }
    }
  }

  Ultradistribution make_distribution(const json& spec, const std::string& path) const {
    using namespace detail;
    if (spec.contains("delta")) {
      const json& d = spec.at("delta");
      const auto at_ = get_vec(d, "at", path + ".delta");
      MultiIndex k = d.contains("order") ? to_index(get_vec(d, "order", path + ".delta")) : zero_index(static_cast<int>(at_.size()));
      return Ultradistribution::delta(at_, k, get_complex(d, "coef", path + ".delta", 1.0));
    }
    if (spec.contains("density")) return Ultradistribution::density(function(get_str(spec, "density", path), path + ".density"));
    if (spec.contains("poly")) return Ultradistribution::polynomial(function(get_str(spec, "poly", path), path + ".poly"));
    if (spec.contains("constant"))
      return Ultradistribution::constant(get_int(spec, "dim", path, 1), get_complex(spec, "constant", path, 1.0));
    if (spec.contains("sum")) {
      std::optional<Ultradistribution> r;
      for (const auto& n : get_names(spec, "sum", path, {})) {
        const auto& d = distribution(n, path + ".sum");
        r = r ? *r + d : d;
      }
      if (!r) throw ConfigError(path + ".sum", "empty sum");
      return *r;
    }
    throw ConfigError(path, "distribution needs 'delta', 'density', 'poly', 'constant' or 'sum'");
  }

  json cfg_;
  std::vector<std::string> suites_;
  int N_max_ = 20, K_max_ = 12;
  std::optional<WeightSequence> weight_;
  std::map<std::string, RSequence> rseq_;
  std::vector<std::string> rseq_order_;
  std::map<std::string, SmoothFunction> functions_;
  std::vector<NamedUnit> units_;
  std::map<std::string, Ultradistribution> dists_;
  std::vector<PairSpec> pairs_;
  std::vector<std::string> test_functions_;
  std::map<std::string, UltradiffOperator> ops_;
};

// ---------------------------------------------------------------------------
// Suites

namespace suites {

using detail::num;

inline json violation_json(const ConditionReport& r) {
  json j = json::object();
  j["holds_on_prefix"] = r.holds_on_prefix;
  j["prefix"] = r.prefix_length;
  if (r.first_violation) j["first_violation"] = *r.first_violation;
  if (r.witness_constants) j["witness"] = {{"A", r.witness_constants->A}, {"H", r.witness_constants->H}};
  if (r.partial_sum) j["partial_sum"] = num(*r.partial_sum);
  if (r.tail_exponent) j["tail_exponent"] = num(*r.tail_exponent);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline void weights(const Experiment& ex, SuiteResult& out) {
  const auto& w = ex.weight();
  const std::vector<std::pair<std::string, Condition>> conds{
      {"M1", Condition::M1},       {"M2", Condition::M2}, {"M2prime", Condition::M2prime},
      {"M3", Condition::M3},       {"M3prime", Condition::M3prime}};
  for (const auto& [id, c] : conds) {
    const auto r = check_condition(w, c);
    out.checks.push_back({"weights." + id, r.holds_on_prefix, true, violation_json(r)});
  }
  const auto p = check_product_inequality(w);
  out.checks.push_back({"weights.product", p.holds_on_prefix, true, violation_json(p)});

  // Contrast families expected to fail (M.3').
  const json& cfg = ex.suite_cfg("weights");
  if (cfg.contains("contrast")) {
    std::size_t i = 0;
    for (const auto& c : cfg.at("contrast")) {
      const std::string path = "$.suite_config.weights.contrast[" + std::to_string(i++) + "]";
      const std::string fam = detail::get_str(c, "family", path);
      const int n = detail::get_int(c, "N", path, 256);
      std::optional<WeightSequence> cw;
      if (fam == "factorial") cw = WeightSequence::factorial(n);
      else if (fam == "gevrey") cw = WeightSequence::gevrey(detail::get_num(c, "s", path), n);
      else throw ConfigError(path + ".family", "unknown family '" + fam + "'");
      const auto r = check_condition(*cw, Condition::M3prime);
      out.checks.push_back({"weights.M3prime.contrast." + fam, r.holds_on_prefix, false, violation_json(r)});
    }
  }
}

inline void rclass(const Experiment& ex, SuiteResult& out) {
  const json& cfg = ex.suite_cfg("rclass");
  const int N = detail::get_int(cfg, "template_N", "$.suite_config.rclass", 256);
  const auto t = check_pp_inequality(RSequence::linear(N));
  out.checks.push_back({"rclass.template", t.holds_on_prefix, true, violation_json(t)});

  std::mt19937 rng(ex.seed());
  auto random_r = [&](int n) {
    std::uniform_real_distribution<double> inc(0.0, 2.0);
    std::vector<double> v{1.0, 1.0 + inc(rng)};
    for (int p = 2; p <= n; ++p) v.push_back(v.back() + inc(rng) + 1e-3);
    return RSequence::from_values(v);
  };
  // Minorant fixtures: slow-then-linear, the named sequences, and seeded random ones.
  std::vector<std::pair<std::string, RSequence>> fixtures;
  {
    std::vector<double> slow{1.0};
    for (int p = 1; p <= 9; ++p) slow.push_back(1.0 + 0.1 * p);
    for (int p = 10; p <= 64; ++p) slow.push_back(p + 1.0);
    fixtures.emplace_back("slow_then_linear", RSequence::from_values(slow));
  }
  for (const auto& n : ex.rsequence_order()) fixtures.emplace_back(n, ex.rsequences().at(n));
  for (int i = 0; fixtures.size() < 10; ++i) fixtures.emplace_back("random" + std::to_string(i), random_r(64));
  for (const auto& [name, s] : fixtures) {
    const RSequence r = pp_minorant(s);
    bool ok = true;
    json d = json::object();
    for (int p = 1; p <= s.prefix() && ok; ++p) {
      const double tol = 1 + 1e-12;
      if (r.at(p) > s.at(p) * tol) d["below_s"] = p, ok = false;
      else if (r.at(p - 1) > r.at(p) * tol) d["monotone"] = p, ok = false;
      else if (p >= 2 && r.at(p) / p > r.at(p - 1) / (p - 1) * tol) d["ratio_nonincreasing"] = p, ok = false;
    }
    const auto pp = check_pp_inequality(r);
    d["pp"] = violation_json(pp);
    out.checks.push_back({"rclass.minorant." + name, ok && pp.holds_on_prefix, true, d});
  }
  bool sup_ok = true;
  json sd = json::object();
  for (int i = 0; i < 100; ++i) {
    const auto r = check_superadditive(product_sequence(random_r(40)), 1 + i % 3);
    if (!r.holds_on_prefix && sup_ok) {
      sup_ok = false;
      sd = violation_json(r);
      sd["sample"] = i;
    }
  }
  sd["samples"] = 100;
  out.checks.push_back({"rclass.superadditive", sup_ok, true, sd});
}

inline std::vector<double> fixture_logs(const std::string& formula, const json& spec, const std::string& path, int n) {
  std::vector<double> la(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    double v;
    if (formula == "geometric") v = k * std::log(detail::get_num(spec, "base", path));
    else if (formula == "factorial") v = std::lgamma(k + 1.0);
    else if (formula == "inv_factorial") v = -std::lgamma(k + 1.0);
    else if (formula == "zero") v = kNegInf;
    else throw ConfigError(path + ".formula", "unknown formula '" + formula + "'");
    la[static_cast<std::size_t>(k)] = v;
  }
  return la;
}

inline void komatsu(const Experiment& ex, SuiteResult& out) {
  const json& cfg = ex.suite_cfg("komatsu");
  if (!cfg.contains("sequences")) throw ConfigError("$.suite_config.komatsu.sequences", "missing field");
  std::size_t i = 0;
  for (const auto& s : cfg.at("sequences")) {
    const std::string path = "$.suite_config.komatsu.sequences[" + std::to_string(i++) + "]";
    const std::string name = detail::get_str(s, "name", path);
    const std::string mode = detail::get_str(s, "classify", path);
    const std::string expect = detail::get_str(s, "expect", path);
    const auto la = fixture_logs(detail::get_str(s, "formula", path), s, path, detail::get_int(s, "N", path));
    json d = json::object();
    std::string verdict;
    bool verified = true;
    if (mode == "growth") {
      const auto c = classify_growth(la);
      verdict = to_string(c.verdict);
      if (c.h_witness) {
        d["h_witness"] = *c.h_witness;
        // Re-verify sup a_k / h^k directly.
        double sup = 0.0;
        for (std::size_t k = 0; k < la.size(); ++k)
          if (la[k] != kNegInf) sup = std::max(sup, std::exp(la[k] - static_cast<double>(k) * std::log(*c.h_witness)));
        d["sup"] = sup;
        verified = c.bound && sup <= *c.bound * (1 + 1e-9) + 1e-300;
      }
      d["escapes"] = c.escapes.size();
    } else if (mode == "decay") {
      const auto c = classify_decay(la);
      verdict = to_string(c.verdict);
      if (c.r_witness) {
        const ProductSequence R(*c.r_witness);
        double sup = 0.0;
        for (std::size_t k = 0; k < la.size(); ++k)
          if (la[k] != kNegInf) sup = std::max(sup, std::exp(R.log_at(static_cast<int>(k)) + la[k]));
        d["sup"] = sup;
        d["r_last"] = c.r_witness->at(c.r_witness->prefix());
        verified = c.bound && sup <= *c.bound * (1 + 1e-9) + 1e-300;
      }
      if (c.escaping_h) d["escaping_h"] = *c.escaping_h;
    } else {
      throw ConfigError(path + ".classify", "expected 'growth' or 'decay'");
    }
    d["verdict"] = verdict;
    d["expected"] = expect;
    d["witness_verified"] = verified;
    out.checks.push_back({"komatsu." + name, verdict == expect && verified, true, d});
  }
}

inline void seminorms(const Experiment& ex, SuiteResult& out) {
  const json& cfg = ex.suite_cfg("seminorms");
  const std::string path = "$.suite_config.seminorms";
  const int pairs = detail::get_int(cfg, "pairs", path, 20);
  const RSequence& r = ex.rsequence(detail::get_str(cfg, "r", path), path + ".r");
  std::mt19937 rng(ex.seed() + 1);
  std::uniform_real_distribution<double> C(-0.8, 0.8), R(0.5, 1.5);
  bool ok = true;
  json d = json::object(), worst;
  double worst_ratio = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const auto f = SmoothFunction::atom({C(rng)}, {R(rng)});
    const auto g = SmoothFunction::atom({C(rng)}, {R(rng)});
    const auto rep = check_product_seminorm(f, g, r, ex.weight(), ex.K_max());
    const double ratio = rep.lhs / rep.rhs;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst = {{"pair", i}, {"lhs", rep.lhs}, {"rhs", rep.rhs}};
    }
    ok = ok && rep.holds;
  }
  d["pairs"] = pairs;
  d["worst"] = worst;
  out.checks.push_back({"seminorms.product", ok, true, d});
}

inline void units(const Experiment& ex, SuiteResult& out) {
  const json& cfg = ex.suite_cfg("units");
  const std::string path = "$.suite_config.units";
  std::vector<std::pair<std::string, RSequence>> rs;
  for (const auto& n : detail::get_names(cfg, "r", path, ex.rsequence_order()))
    rs.emplace_back(n, ex.rsequence(n, path + ".r"));
  std::vector<std::string> names;
  for (const auto& u : ex.units()) names.push_back(u.name);
  for (const auto& n : detail::get_names(cfg, "units", path, names)) {
    const auto& U = ex.unit(n, path + ".units");
    const auto rep = verify_unit(U, rs, ex.weight(), ex.K_max(), ex.N_max());
    json d = json::object();
    for (const auto& b : rep.bounds) {
      json bj = {{"r", b.r_name}, {"sup", b.sup}, {"holds", b.holds}};
      if (b.generator_norm) bj["generator_norm"] = *b.generator_norm;
      d["bounds"].push_back(bj);
    }
    d["final_errors"] = rep.final_errors;
    d["converges"] = rep.converges;
    d["special"] = U.special();
    if (!rep.ok) d["counterexample"] = rep.counterexample;
    const bool expect_ok = U.schedule().size() < 2 || U.scale(2) > U.scale(1);
    out.checks.push_back({"units." + n, rep.ok, expect_ok, d});
  }
  if (detail::get_str(cfg, "nonexample", path, std::string("yes")) == "yes" && !rs.empty()) {
    const auto rep = verify_unit(shrinking_nonexample(ex.N_max()), {rs.front()}, ex.weight(), ex.K_max(), ex.N_max());
    out.checks.push_back({"units.nonexample", rep.ok, false,
                          {{"converges", rep.converges}, {"final_errors", rep.final_errors}, {"counterexample", rep.counterexample}}});
  }
}

inline void integrability(const Experiment& ex, SuiteResult& out) {
  const json& cfg = ex.suite_cfg("integrability");
  if (!cfg.contains("cases")) throw ConfigError("$.suite_config.integrability.cases", "missing field");
  std::vector<std::pair<std::string, RSequence>> rs;
  for (const auto& n : ex.rsequence_order()) rs.emplace_back(n, ex.rsequences().at(n));
  const double tol = ex.tol("oracle_abs", 1e-8);
  std::size_t i = 0;
  for (const auto& c : cfg.at("cases")) {
    const std::string path = "$.suite_config.integrability.cases[" + std::to_string(i++) + "]";
    const std::string vn = detail::get_str(c, "V", path);
    const std::string expect = detail::get_str(c, "expect", path);
    const auto rep = integrability_test(ex.distribution(vn, path + ".V"), ex.units(), ex.N_max(), rs, ex.weight(),
                                        ex.K_max(), ex.tol("agree", 1e-7), CauchyOptions{5, ex.tol("cauchy", 1e-8), 1e6});
    json d = json::object();
    d["verdict"] = to_string(rep.verdict);
    if (rep.value) d["value"] = detail::complex_json(*rep.value);
    d["spread"] = rep.spread;
    for (const auto& [u, diag] : rep.per_unit)
      d["per_unit"][u] = {{"converged", diag.converged},
                          {"divergence", diag.divergence_kind ? to_string(*diag.divergence_kind) : std::string("none")}};
    for (const auto& [r, v] : rep.dictionary_ratio) d["dictionary_ratio"][r] = num(v);
    bool holds;
    if (expect == "integrable") {
      holds = rep.verdict == IntegrabilityVerdict::integrable_evidence;
      if (holds && c.contains("value")) {
        const Complex want = detail::get_complex(c, "value", path, 0.0);
        d["expected_value"] = detail::complex_json(want);
        holds = std::abs(*rep.value - want) <= tol;
      }
    } else if (expect == "not_integrable") {
      holds = rep.verdict == IntegrabilityVerdict::not_integrable;
      for (const auto& [u, diag] : rep.per_unit)
        holds = holds && diag.divergence_kind && *diag.divergence_kind == DivergenceKind::unbounded;
    } else {
      throw ConfigError(path + ".expect", "expected 'integrable' or 'not_integrable'");
    }
    out.checks.push_back({"integrability." + vn, holds, true, d});
  }
}

inline std::string sanitize(std::string s) {
  for (auto& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
  return s;
}

inline void convolution(const Experiment& ex, SuiteResult& out, const std::filesystem::path& dir) {
  const json& cfg = ex.suite_cfg("convolution");
  const std::string path = "$.suite_config.convolution";
  ConvolveOptions co;
  co.N_max = ex.N_max();
  co.tol_agree = ex.tol("agree", 1e-7);
  co.cauchy.tol = ex.tol("cauchy", 1e-8);
  std::vector<std::string> pair_names;
  for (const auto& p : ex.pairs()) pair_names.push_back(p.name);
  const auto selected = detail::get_names(cfg, "pairs", path, pair_names);
  if (ex.test_functions().empty()) throw ConfigError("$.test_functions", "convolution suite needs test functions");
  for (const auto& pn : selected) {
    const PairSpec& ps = ex.pair_spec(pn, path + ".pairs");
    const auto& S = ex.distribution(ps.S, path);
    const auto& T = ex.distribution(ps.T, path);
    for (const auto& fn : ex.test_functions()) {
      const auto& phi = ex.function(fn, "$.test_functions");
      const auto r = convolve(S, T, phi, ex.units(), co);
      json d = json::object();
      d["all_converged"] = r.all_converged;
      d["none_converged"] = r.none_converged;
      d["cross_mode_spread"] = num(r.cross_mode_spread);
      if (r.agreed_value) d["value"] = detail::complex_json(*r.agreed_value);
      if (r.commutativity_spread) d["commutativity_spread"] = num(*r.commutativity_spread);
      if (!r.failure.empty()) d["failure"] = r.failure;
      bool all_unbounded = true;
      for (const auto& run : r.runs)
        all_unbounded = all_unbounded && !run.diag.converged && run.diag.divergence_kind &&
                        *run.diag.divergence_kind == DivergenceKind::unbounded;
      d["all_unbounded"] = all_unbounded;
      const bool convolvable = r.agreed_value && r.commutativity_spread && *r.commutativity_spread <= co.tol_agree;
      const bool holds = ps.convolvable ? convolvable : (r.none_converged && all_unbounded);
      if (!ps.convolvable) d["expected_failure"] = true;
      // CSV of every sequence.
      const std::string file = "convolution_" + sanitize(pn) + "_" + sanitize(fn) + ".csv";
      std::ofstream csv(dir / file);
      csv << "n,value_re,value_im,mode,unit_id\n";
      for (const auto& run : r.runs)
        for (std::size_t n = 0; n < run.diag.values.size(); ++n)
          csv << n + 1 << "," << detail::fmt(run.diag.values[n].real()) << "," << detail::fmt(run.diag.values[n].imag())
              << "," << to_string(run.mode) << "," << run.unit << "\n";
      out.artifacts.push_back(file);
      out.checks.push_back({"convolution." + pn + "." + fn, holds, true, d});
    }
  }
  // Absolute integrability diagnostic on one-dimensional pairs.
  if (cfg.contains("c3")) {
    const json& c3 = cfg.at("c3");
    const auto& psi = ex.function(detail::get_str(c3, "psi", path + ".c3"), path + ".c3.psi");
    const auto& phi = ex.function(ex.test_functions().front(), "$.test_functions");
    for (const auto& pn : detail::get_names(c3, "pairs", path + ".c3", selected)) {
      const PairSpec& ps = ex.pair_spec(pn, path + ".c3.pairs");
      const auto& S = ex.distribution(ps.S, path);
      const auto& T = ex.distribution(ps.T, path);
      if (S.dim() != 1) continue;
      const auto rep = c3_check(S, T, phi, psi);
      json d = {{"half_widths", rep.half_widths}, {"integrals", json::array()}, {"converges", rep.converges}};
      for (double v : rep.integrals) d["integrals"].push_back(num(v));
      out.checks.push_back({"convolution.c3." + pn, rep.converges, ps.convolvable, d});
    }
  }
}

inline void exchange(const Experiment& ex, SuiteResult& out) {
  const json& cfg = ex.suite_cfg("exchange");
  const std::string path = "$.suite_config.exchange";
  if (!cfg.contains("cases")) throw ConfigError(path + ".cases", "missing field");
  const auto& U = ex.unit(detail::get_str(cfg, "unit", path), path + ".unit");
  std::vector<std::string> conv;
  for (const auto& p : ex.pairs())
    if (p.convolvable) conv.push_back(p.name);
  std::vector<SmoothFunction> phis;
  for (const auto& f : ex.test_functions()) phis.push_back(ex.function(f, "$.test_functions"));
  std::size_t i = 0;
  for (const auto& c : cfg.at("cases")) {
    const std::string cp = path + ".cases[" + std::to_string(i++) + "]";
    const std::string on = detail::get_str(c, "operator", cp);
    UltradiffOperator P = ex.op(on, cp + ".operator");
    try {
      certify_class(P, ex.weight());
    } catch (const NotOfClass& e) {
      out.checks.push_back({"exchange." + on + ".certificate", false, true, {{"error", e.what()}, {"escaping_k", e.escaping_index()}}});
      continue;
    }
    ExchangeOptions eo;
    eo.tol_agree = ex.tol("agree", 1e-7);
    eo.N_max = ex.N_max();
    eo.cauchy.tol = ex.tol("cauchy", 1e-8);
    for (const auto& pn : detail::get_names(c, "pairs", cp, conv)) {
      const PairSpec& ps = ex.pair_spec(pn, cp + ".pairs");
      const auto& S = ex.distribution(ps.S, cp);
      const auto& T = ex.distribution(ps.T, cp);
      json d = json::object();
      bool holds = true;
      try {
        const auto rep = exchange_check(P, S, T, phis, U, eo);
        for (const auto& k : rep.cases) {
          json kj = {{"spread", num(k.spread)}, {"budget", num(k.budget)}, {"tolerance", num(k.tolerance)}, {"ok", k.ok}};
          for (const auto& leg : k.legs) kj["legs"][leg.name] = detail::complex_json(leg.value);
          if (k.observed_tail) kj["observed_tail"] = num(*k.observed_tail);
          d["cases"].push_back(kj);
        }
        holds = rep.ok;
        if (!rep.ok) d["failure"] = rep.failure;
      } catch (const UnsupportedCombination& e) {
        d["skipped"] = e.what();
      } catch (const DivergentPairing& e) {
        holds = false;
        d["failure"] = e.what();
      }
      out.checks.push_back({"exchange." + on + "." + pn, holds, true, d});
    }
  }
}

inline void nu(const Experiment& ex, SuiteResult& out) {
  const json& cfg = ex.suite_cfg("nu");
  const std::string path = "$.suite_config.nu";
  if (!cfg.contains("cases")) throw ConfigError(path + ".cases", "missing field");
  std::size_t i = 0;
  for (const auto& c : cfg.at("cases")) {
    const std::string cp = path + ".cases[" + std::to_string(i++) + "]";
    const std::string on = detail::get_str(c, "operator", cp);
    UltradiffOperator P = ex.op(on, cp + ".operator");
    certify_class(P, ex.weight());
    const auto& U = ex.unit(detail::get_str(c, "unit", cp), cp + ".unit");
    const auto& t = ex.rsequence(detail::get_str(c, "t", cp), cp + ".t");
    const auto& phi = ex.function(detail::get_str(c, "phi", cp, ex.test_functions().front()), cp + ".phi");
    NuBoundOptions o;
    o.K_max = detail::get_int(c, "K_max", cp, 8);
    o.N_max = detail::get_int(c, "N_max", cp, ex.N_max());
    o.N_seminorm = detail::get_int(c, "N_seminorm", cp, 6);
    for (const auto& pn : detail::get_names(c, "pairs", cp, {})) {
      const PairSpec& ps = ex.pair_spec(pn, cp + ".pairs");
      const auto rep = nu_bound_check(P, U, ex.distribution(ps.S, cp), ex.distribution(ps.T, cp), phi, t, ex.weight(), o);
      json d = json::object();
      d["seminorms"] = json::array();
      for (double v : rep.seminorms) d["seminorms"].push_back(num(v));
      d["bounded"] = rep.bounded;
      d["pairings"] = json::array();
      for (const auto& v : rep.pairings) d["pairings"].push_back(detail::complex_json(v));
      if (rep.n0) d["n0"] = *rep.n0;
      d["leibniz_ok"] = rep.leibniz_ok;
      d["theta_ok"] = rep.theta_ok;
      d["H"] = rep.H;
      d["A"] = rep.A;
      d["lambda"] = rep.lambda;
      d["r_tilde_1"] = rep.r_tilde_1;
      d["C_prime"] = num(rep.C_prime);
      for (const auto& ch : rep.chain) {
        json cj = {{"tuples", ch.tuples}, {"holds", ch.holds}};
        if (ch.violation) cj["violation"] = *ch.violation;
        d["chain"][ch.name] = cj;
      }
      if (!rep.ok) d["failure"] = rep.failure;
      out.checks.push_back({"nu." + on + "." + pn, rep.ok, true, d});
    }
  }
}

}  // namespace suites

inline SuiteResult run_suite(const Experiment& ex, const std::string& name, const std::filesystem::path& dir) {
  SuiteResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (name == "weights") suites::weights(ex, r);
    else if (name == "rclass") suites::rclass(ex, r);
    else if (name == "komatsu") suites::komatsu(ex, r);
    else if (name == "seminorms") suites::seminorms(ex, r);
    else if (name == "units") suites::units(ex, r);
    else if (name == "integrability") suites::integrability(ex, r);
    else if (name == "convolution") suites::convolution(ex, r, dir);
    else if (name == "exchange") suites::exchange(ex, r);
    else if (name == "nu") suites::nu(ex, r);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline json suite_json(const SuiteResult& s) {
  json j = json::object();
  j["pass"] = s.pass();
  j["checks"] = json::array();
  for (const auto& c : s.checks) {
    json cj = json::object();
    cj["id"] = c.id;
    cj["label"] = check_label(c.id);
    cj["outcome"] = c.holds ? "holds" : "fails";
    cj["expected"] = c.expected ? "holds" : "fails";
    cj["pass"] = c.pass();
    cj["detail"] = c.detail;
    j["checks"].push_back(cj);
  }
  for (const auto& c : s.checks)
    if (!c.pass()) {
      j["counterexample"] = {{"check", c.id}, {"detail", c.detail}};
      break;
    }
  if (!s.error.empty()) j["error"] = s.error;
  j["artifacts"] = s.artifacts;
  j["timing_ms"] = s.timing_ms;
  return j;
}

inline std::string default_out_dir() {
  const char* env = std::getenv("ROUMIEU_OUT_DIR");
  return env && *env ? env : "roumieu_out";
}

/// Runs the selected suites and writes report.json into the output directory.
/// Throws ConfigError for invalid configs.
inline RunReport run(const Experiment& ex, const RunOptions& opt) {
  std::vector<std::string> selected = opt.suites.empty() ? ex.suites() : opt.suites;
  if (selected.empty()) throw ConfigError("$.suites", "no suites selected");
  for (const auto& s : selected)
    if (std::find(all_suites().begin(), all_suites().end(), s) == all_suites().end())
      throw ConfigError("--suites", "unknown suite '" + s + "'");
  std::string out = opt.out_dir;
  if (out.empty() && ex.config().contains("output")) out = detail::get_str(ex.config().at("output"), "dir", "$.output", "");
  if (out.empty()) out = default_out_dir();
  const std::filesystem::path dir(out);
  std::filesystem::create_directories(dir);

  const auto t0 = std::chrono::steady_clock::now();
  std::map<std::string, SuiteResult> results;
  if (opt.parallel) {
    std::map<std::string, std::future<SuiteResult>> fut;
    for (const auto& s : selected) fut.emplace(s, std::async(std::launch::async, [&ex, s, dir] { return run_suite(ex, s, dir); }));
    for (auto& [s, f] : fut) results.emplace(s, f.get());
  } else {
    for (const auto& s : selected) results.emplace(s, run_suite(ex, s, dir));
  }

  RunReport rr;
  json& j = rr.report;
  j["config"] = ex.name();
  j["settings"] = {{"N_max", ex.N_max()}, {"K_max", ex.K_max()}, {"seed", ex.seed()}, {"weight", ex.weight().describe()}};
  j["suites"] = json::object();
  // Report in the canonical suite order.
  for (const auto& s : all_suites()) {
    const auto it = results.find(s);
    if (it == results.end()) continue;
    j["suites"][s] = suite_json(it->second);
    rr.pass = rr.pass && it->second.pass();
    std::string line = s + ": " + (it->second.pass() ? "PASS" : "FAIL");
    std::size_t n_pass = 0;
    for (const auto& c : it->second.checks) n_pass += c.pass();
    line += " (" + std::to_string(n_pass) + "/" + std::to_string(it->second.checks.size()) + " checks)";
    if (!it->second.error.empty()) line += " error: " + it->second.error;
    for (const auto& c : it->second.checks)
      if (!c.pass()) {
        line += " first failure: " + c.id;
        break;
      }
    rr.verdict_lines.push_back(line);
  }
  j["pass"] = rr.pass;
  j["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  rr.report_path = (dir / "report.json").string();
  std::ofstream(rr.report_path) << j.dump(2) << "\n";
  return rr;
}

/// Report without timing fields, for reproducibility comparisons.
inline json strip_timing(json j) {
  if (j.is_object()) {
    j.erase("timing_ms");
    for (auto& [k, v] : j.items()) v = strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timing(v);
  }
  return j;
}

/// Text summary of a report. Throws ConfigError for missing or corrupt reports.
inline std::string explain(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) throw ConfigError(report_path, "cannot open report");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(report_path, std::string("corrupt report: ") + e.what());
  }
  if (!j.is_object() || !j.contains("suites") || !j.at("suites").is_object())
    throw ConfigError(report_path, "report has no suites object");
  if (j.at("suites").empty()) throw ConfigError(report_path, "report lists no suites");
  std::ostringstream s;
  s << "config " << j.value("config", std::string("?")) << ": " << (j.value("pass", false) ? "PASS" : "FAIL") << "\n";
  for (const auto& [name, suite] : j.at("suites").items()) {
    s << name << ": " << (suite.value("pass", false) ? "PASS" : "FAIL") << "\n";
    if (suite.contains("error")) s << "  error: " << suite.at("error").get<std::string>() << "\n";
    for (const auto& c : suite.value("checks", json::array())) {
      const std::string id = c.value("id", std::string("?"));
      s << "  [" << (c.value("pass", false) ? "PASS" : "FAIL") << "] " << id << ": " << check_label(id);
      if (c.value("expected", std::string("holds")) == "fails") s << " (expected to fail, " << c.value("outcome", std::string("?")) << ")";
      s << "\n";
      const json& d = c.contains("detail") ? c.at("detail") : json::object();
      if (d.contains("witness")) s << "      witness (A, H) = (" << d.at("witness").at("A").dump() << ", " << d.at("witness").at("H").dump() << ")\n";
      if (d.contains("partial_sum") && d.contains("first_violation"))
        s << "      partial sum " << d.at("partial_sum").dump() << " at " << d.at("first_violation").dump() << "\n";
      if (!c.value("pass", false)) {
        if (d.contains("first_violation")) s << "      first violation at " << d.at("first_violation").dump() << "\n";
        if (d.contains("pp") && d.at("pp").contains("first_violation"))
          s << "      violating (p, q) = " << d.at("pp").at("first_violation").dump() << "\n";
        if (d.contains("failure")) s << "      " << d.at("failure").get<std::string>() << "\n";
        if (d.contains("counterexample")) s << "      " << d.at("counterexample").get<std::string>() << "\n";
      }
    }
  }
  return s.str();
}

}  // namespace roumieu::cli
