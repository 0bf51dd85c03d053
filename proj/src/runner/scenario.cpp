#include "pmelab/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "pmelab/convergence.hpp"
#include "pmelab/error.hpp"
#include "pmelab/exponents.hpp"
#include "pmelab/manufacture.hpp"

namespace pmelab {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg, const std::string& rule = "") {
  std::string text = path + ": " + msg;
  if (!rule.empty()) text += " [rule: " + rule + "]";
  throw Error(ErrorCode::ConfigError, text);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

/// Object view that tracks its path and rejects unknown keys.
class Obj {
 public:
  Obj(const Json& j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!allowed.count(it.key())) fail(at(it.key()), "unknown field");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_.contains(key); }
  const Json& raw(const std::string& key) const { return j_.at(key); }

  double num(const std::string& key, std::optional<double> def = std::nullopt, bool allow_inf = false) const {
    if (!has(key)) {
      if (def) return *def;
      fail(at(key), "missing required number");
    }
    const Json& v = j_.at(key);
    if (v.is_string()) {
      if (allow_inf && v.get<std::string>() == "inf") return kInfiniteM;
      fail(at(key), "expected a number" + std::string(allow_inf ? " or \"inf\"" : ""));
    }
    if (!v.is_number()) fail(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at(key), "must be finite");
    return x;
  }
  std::optional<double> opt_num(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return num(key);
  }
  int integer(const std::string& key, int def) const {
    if (!has(key)) return def;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<int>();
  }
  std::string str(const std::string& key, std::optional<std::string> def = std::nullopt) const {
    if (!has(key)) {
      if (def) return *def;
      fail(at(key), "missing required string");
    }
    const Json& v = j_.at(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }
  std::vector<double> nums(const std::string& key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    const Json& v = j_.at(key);
    if (!v.is_array()) fail(at(key), "expected an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(at(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }
  std::vector<int> ints(const std::string& key, std::vector<int> def) const {
    if (!has(key)) return def;
    const Json& v = j_.at(key);
    if (!v.is_array()) fail(at(key), "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer()) fail(at(key) + "[" + std::to_string(i) + "]", "expected an integer");
      out.push_back(v[i].get<int>());
    }
    return out;
  }

 private:
  const Json& j_;
  std::string path_;
};

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail(path, e.what());
  }
}

std::vector<int> checked_levels(const Obj& o, const std::string& key, std::vector<int> def) {
  std::vector<int> lv = o.ints(key, std::move(def));
  for (std::size_t i = 0; i < lv.size(); ++i) {
    if (lv[i] < 8) fail(o.at(key), "grid levels must be at least 8");
    if (i && lv[i] <= lv[i - 1]) fail(o.at(key), "grid levels must increase");
  }
  return lv;
}

Vec3 point_of(const Obj& o, const std::string& key, int n) {
  Vec3 x{0.0, 0.0, 0.0};
  if (!o.has(key)) return x;
  const std::vector<double> v = o.nums(key);
  if (static_cast<int>(v.size()) != n) fail(o.at(key), "expected " + std::to_string(n) + " coordinates");
  for (int i = 0; i < n; ++i) x[i] = v[i];
  return x;
}

GeometrySpec parse_geometry(const Json& j, const std::string& path) {
  Obj o(j, path,
        {"n", "chart", "lo", "hi", "topology", "resolution", "metric", "metric_scale", "metric_rate", "metric_amp",
         "radius", "theta_min", "potential", "potential_amp", "potential_axis", "potential_k", "potential_vector", "m"});
  GeometrySpec g;
  g.n = o.integer("n", 1);
  if (g.n < 1 || g.n > 3) fail(o.at("n"), "dimension must be 1, 2 or 3");
  g.chart = o.str("chart", "torus");
  g.lo = o.nums("lo");
  g.hi = o.nums("hi");
  g.topology = o.str("topology", "periodic");
  g.resolution = o.integer("resolution", 64);
  if (g.resolution < 8) fail(o.at("resolution"), "resolution must be at least 8");
  g.metric = o.str("metric", "flat");
  g.metric_scale = o.num("metric_scale", 1.0);
  if (!(g.metric_scale > 0.0)) fail(o.at("metric_scale"), "must be positive");
  g.metric_rate = o.num("metric_rate", 0.0);
  g.metric_amp = o.num("metric_amp", 0.1);
  g.radius = o.num("radius", 1.0);
  if (!(g.radius > 0.0)) fail(o.at("radius"), "must be positive");
  g.theta_min = o.num("theta_min", 0.1);
  g.potential = o.str("potential", "zero");
  g.potential_amp = o.num("potential_amp", 0.0);
  g.potential_axis = o.integer("potential_axis", 0);
  if (g.potential_axis < 0 || g.potential_axis >= g.n) fail(o.at("potential_axis"), "axis outside the dimension");
  g.potential_k = o.num("potential_k", 1.0);
  g.potential_vector = o.nums("potential_vector");
  g.m = o.num("m", static_cast<double>(g.n) + 1.0, true);
  if (!(g.m >= g.n)) fail(o.at("m"), "m = " + fmt(g.m) + " is below n = " + std::to_string(g.n), "m-at-least-n");
  const bool nonconstant_f = g.potential != "zero" && g.potential != "constant";
  if (g.m == g.n && nonconstant_f) fail(o.at("m"), "m = n needs a constant potential", "m-equals-n-constant-f");
  wrap(path, [&] {
    g.build(8);
    return 0;
  });
  return g;
}

Coefficient parse_coefficient(const Json& j, const std::string& path) {
  if (j.is_number()) return Coefficient::constant(j.get<double>());
  Obj o(j, path, {"c0", "amp", "axis", "k"});
  return Coefficient{o.num("c0", 0.0), o.num("amp", 0.0), o.integer("axis", 0), o.num("k", 1.0)};
}

std::vector<PowerTerm> parse_terms(const Obj& o, const std::string& key) {
  std::vector<PowerTerm> out;
  if (!o.has(key)) return out;
  const Json& arr = o.raw(key);
  if (!arr.is_array()) fail(o.at(key), "expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = o.at(key) + "[" + std::to_string(i) + "]";
    Obj t(arr[i], p, {"coeff", "exponent"});
    out.push_back({t.has("coeff") ? parse_coefficient(t.raw("coeff"), t.at("coeff")) : Coefficient::constant(1.0),
                   t.num("exponent")});
  }
  return out;
}

NonlinearitySpec parse_nonlinearity(const Json& j, const std::string& path) {
  Obj o(j, path, {"kind", "a", "coeff", "a_terms", "b_terms", "alpha", "b", "beta"});
  const std::string kind = o.str("kind", "zero");
  return wrap(path, [&]() -> NonlinearitySpec {
    if (kind == "zero") return NonlinearitySpec::zero();
    if (kind == "constant") return NonlinearitySpec::constant(o.num("a"));
    if (kind == "log")
      return NonlinearitySpec::log(o.has("coeff") ? parse_coefficient(o.raw("coeff"), o.at("coeff"))
                                                  : Coefficient::constant(1.0));
    if (kind == "power-sum") return NonlinearitySpec::power_sum(parse_terms(o, "a_terms"), parse_terms(o, "b_terms"));
    if (kind == "yamabe") {
      if (!o.has("a") || !o.has("b")) fail(path, "yamabe needs coefficients a and b");
      return NonlinearitySpec::yamabe(parse_coefficient(o.raw("a"), o.at("a")), o.num("alpha"),
                                      parse_coefficient(o.raw("b"), o.at("b")), o.num("beta"));
    }
    fail(o.at("kind"), "unknown nonlinearity '" + kind + "' (zero, constant, log, power-sum, yamabe)");
  });
}

SolverSection parse_solver(const Json& j, const std::string& path) {
  Obj o(j, path, {"p", "initial", "nonlinearity", "t_start", "t_end", "stepper", "policy", "dt", "safety", "stride",
                  "outputs", "floor"});
  SolverSection s;
  s.present = true;
  SolverConfig& c = s.cfg;
  c.p = o.num("p");
  if (!(c.p > 1.0)) fail(o.at("p"), "p = " + fmt(c.p) + " must exceed 1", "p-above-one");
  c.t_start = o.num("t_start", 0.0);
  c.t_end = o.num("t_end", 1.0);
  const std::string st = o.str("stepper", "rk4");
  if (st == "rk2")
    c.stepper = Stepper::RK2;
  else if (st == "rk4")
    c.stepper = Stepper::RK4;
  else
    fail(o.at("stepper"), "unknown stepper '" + st + "' (rk2, rk4)");
  const std::string pol = o.str("policy", "cfl");
  if (pol == "cfl")
    c.policy.mode = StepPolicy::Mode::Cfl;
  else if (pol == "fixed")
    c.policy.mode = StepPolicy::Mode::Fixed;
  else
    fail(o.at("policy"), "unknown step policy '" + pol + "' (cfl, fixed)");
  c.policy.dt = o.num("dt", 1e-3);
  c.policy.safety = o.num("safety", 0.4);
  c.stride = o.integer("stride", 8);
  c.outputs = o.integer("outputs", 0);
  if (c.outputs < 0) fail(o.at("outputs"), "must be non-negative");
  c.floor = o.num("floor", 1e-10);
  wrap(path, [&] {
    c.validate();
    return 0;
  });
  if (o.has("initial")) {
    Obj i(o.raw("initial"), o.at("initial"),
          {"tag", "c0", "amp", "k", "phase", "amp2", "width", "barenblatt_c", "barenblatt_t"});
    InitialData& d = s.initial;
    d.tag = i.str("tag", "sine");
    d.c0 = i.num("c0", 1.0);
    d.amp = i.num("amp", 0.5);
    d.k = i.num("k", 1.0);
    d.phase = i.num("phase", 0.0);
    d.amp2 = i.num("amp2", 0.0);
    d.width = i.num("width", 1.0);
    d.barenblatt_c = i.num("barenblatt_c", 1.0);
    d.barenblatt_t = i.num("barenblatt_t", 1.0);
    d.barenblatt_p = c.p;
    static const std::set<std::string> tags{"constant", "sine", "cosine-2d", "barenblatt", "bump"};
    if (!tags.count(d.tag)) fail(i.at("tag"), "unknown initial data '" + d.tag + "'");
  }
  if (o.has("nonlinearity")) s.nonlinearity = parse_nonlinearity(o.raw("nonlinearity"), o.at("nonlinearity"));
  return s;
}

Cylinder parse_cylinder(const Json& j, const std::string& path, int n) {
  Obj o(j, path, {"x0", "t0", "R", "T"});
  Cylinder c;
  c.x0 = point_of(o, "x0", n);
  c.t0 = o.num("t0", 1.0);
  c.R = o.num("R", 1.0);
  c.T = o.num("T", 1.0);
  if (!(c.R > 0.0)) fail(o.at("R"), "R must be positive");
  if (!(c.T > 0.0)) fail(o.at("T"), "T must be positive");
  return c;
}

Zeta parse_zeta(const Json& j, const std::string& path, double s) {
  Obj o(j, path, {"kind", "kappa", "a"});
  const std::string kind = o.str("kind", "one");
  if (kind == "one") return Zeta::one();
  if (kind == "exponential") return Zeta::exponential(s, o.num("kappa", 0.0), o.num("a", 0.0));
  if (kind == "decay") return Zeta::decay(o.num("kappa", 0.0));
  fail(o.at("kind"), "unknown time weight '" + kind + "' (one, exponential, decay)");
}

GammaAux parse_gamma(const Json& j, const std::string& path, double p) {
  Obj o(j, path, {"kind", "v", "values"});
  const std::string kind = o.str("kind", "zero");
  if (kind == "zero") return GammaAux::zero();
  if (kind == "linear") return GammaAux::linear();
  if (kind == "power") return GammaAux::power(p);
  if (kind == "tabulated") return wrap(path, [&] { return GammaAux::tabulated(o.nums("v"), o.nums("values")); });
  fail(o.at("kind"), "unknown auxiliary function '" + kind + "' (zero, linear, power, tabulated)");
}

void check_beta_family(const std::string& path, double p, double m) {
  const double lim = first_family_p_limit(m);
  if (!std::isfinite(m)) fail(path, "the beta family needs a finite m", "beta-family-finite-m");
  if (!(p > 1.0 && p < lim))
    fail(path, "p = " + fmt(p) + " outside (1, " + fmt(lim) + ") for m = " + fmt(m), "beta-family-p-interval");
}

void check_beta(const std::string& path, double p, double m, double beta) {
  const BetaRange r = beta_admissible_range(p, m);
  if (!(beta > r.beta1 && beta < r.beta2))
    fail(path, "beta = " + fmt(beta) + " outside (" + fmt(r.beta1) + ", " + fmt(r.beta2) + ")", "beta-interval");
}

void check_optimal_family(const std::string& path, double p, double m) {
  const double lim = second_family_p_limit(m);
  if (!(p > 1.0 && p < lim))
    fail(path, "p = " + fmt(p) + " outside (1, " + fmt(lim) + ") for m = " + fmt(m), "optimal-family-p-interval");
}

template <class F>
void each(const Json& root, const std::string& key, F&& f) {
  if (!root.contains(key)) return;
  const Json& arr = root.at(key);
  if (!arr.is_array()) fail(key, "expected an array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = key + "[" + std::to_string(i) + "]";
    const std::string name = f(arr[i], path);
    if (!names.insert(name).second) fail(path + ".name", "duplicate check name '" + name + "'");
  }
}

std::string name_of(const Obj& o, const std::string& fallback) { return o.str("name", fallback); }

}  // namespace

std::size_t Scenario::check_count() const {
  return estimates.size() + identities.size() + inequalities.size() + corollaries.size() + liouville.size() +
         matrix_lemma.size() + cutoffs.size() + max_points.size() + operators.size();
}

bool Scenario::needs_solution() const {
  if (!inequalities.empty() || !corollaries.empty() || !max_points.empty()) return true;
  for (const auto& e : estimates)
    if (e.levels.empty()) return true;
  return false;
}

Scenario parse_scenario(const Json& j, const std::string& source) {
  Obj root(j, "",
           {"name", "seed", "output", "golden", "geometry", "solver", "certify", "estimates", "identities",
            "inequalities", "corollaries", "liouville", "matrix_lemma", "cutoffs", "max_points", "operators",
            "tolerances"});
  Scenario sc;
  sc.source = source;
  sc.name = root.str("name");
  if (sc.name.empty() || sc.name.find_first_of("/\\ ") != std::string::npos)
    fail("name", "scenario names must be non-empty without spaces or slashes");
  if (root.has("seed")) {
    const Json& s = root.raw("seed");
    if (!s.is_number_unsigned()) fail("seed", "seed must be a non-negative integer");
    sc.seed = s.get<std::uint64_t>();
  }
  sc.output = root.str("output", "");
  if (root.has("golden")) {
    const std::filesystem::path g(root.str("golden"));
    const std::filesystem::path base = std::filesystem::path(source).parent_path();
    sc.golden = (g.is_absolute() || source == "<memory>" ? g : base / g).lexically_normal().string();
  }
  if (root.has("geometry")) {
    sc.geometry = parse_geometry(root.raw("geometry"), "geometry");
    sc.has_geometry = true;
  }
  if (root.has("solver")) {
    if (!sc.has_geometry) fail("solver", "a solver section needs a geometry section");
    sc.solver = parse_solver(root.raw("solver"), "solver");
  }
  if (root.has("certify")) {
    Obj o(root.raw("certify"), "certify", {"samples_per_axis", "time_samples"});
    sc.certify.samples_per_axis = o.integer("samples_per_axis", 16);
    sc.certify.time_samples = o.integer("time_samples", 4);
    if (sc.certify.samples_per_axis < 2 || sc.certify.time_samples < 1) fail("certify", "sample counts too small");
  }
  if (root.has("tolerances")) {
    Obj o(root.raw("tolerances"), "tolerances", {"inequality", "stability", "golden"});
    sc.tol.inequality = o.num("inequality", 1e-6);
    sc.tol.stability = o.num("stability", 0.02);
    sc.tol.golden = o.num("golden", 1e-6);
  }
  const double m = sc.geometry.m;
  const int n = sc.geometry.n;
  const double p = sc.solver.cfg.p;
  auto need_solution = [&](const std::string& path) {
    if (!sc.solver.present) fail(path, "this check needs a solver section");
  };

  each(j, "estimates", [&](const Json& e, const std::string& path) {
    Obj o(e, path, {"name", "theorem", "beta", "cylinder", "c", "k", "h", "levels"});
    EstimateSection s;
    s.name = name_of(o, path);
    need_solution(path);
    s.theorem = wrap(o.at("theorem"), [&] { return parse_theorem(o.str("theorem")); });
    if (is_beta_family(s.theorem)) {
      check_beta_family(o.at("theorem"), p, m);
      if (o.has("beta") && !(o.raw("beta").is_string() && o.raw("beta").get<std::string>() == "midpoint")) {
        s.beta = o.num("beta");
        check_beta(o.at("beta"), p, m, *s.beta);
      }
    } else {
      check_optimal_family(o.at("theorem"), p, m);
    }
    if (is_static(s.theorem) && sc.has_geometry && !sc.geometry.build(8).is_static())
      fail(o.at("theorem"), "static forms need a time-independent metric and potential", "static-geometry");
    s.cyl = o.has("cylinder") ? parse_cylinder(o.raw("cylinder"), o.at("cylinder"), n) : Cylinder{};
    if (o.has("c")) {
      const Json& c = o.raw("c");
      if (c.is_string()) {
        s.c_mode = c.get<std::string>();
        if (s.c_mode != "calibrate" && s.c_mode != "golden") fail(o.at("c"), "expected calibrate, golden or a number");
        if (s.c_mode == "golden" && sc.golden.empty()) fail(o.at("c"), "golden mode needs a scenario golden file");
      } else {
        s.c_mode = "fixed";
        s.c = o.num("c");
        if (!(s.c > 0.0)) fail(o.at("c"), "C must be positive");
      }
    }
    s.k = o.opt_num("k");
    s.h = o.opt_num("h");
    if ((s.k && *s.k < 0.0) || (s.h && *s.h < 0.0)) fail(path, "k and h must be non-negative");
    s.levels = checked_levels(o, "levels", {});
    sc.estimates.push_back(s);
    return s.name;
  });

  each(j, "identities", [&](const Json& e, const std::string& path) {
    Obj o(e, path, {"name", "lemma", "geometry", "pressure", "second", "coefficient_v", "p", "beta", "eps", "s", "q",
                    "zeta", "gamma", "t", "levels"});
    IdentitySection s;
    s.name = name_of(o, path);
    IdentityCase& c = s.c;
    c.lemma = wrap(o.at("lemma"), [&] { return parse_lemma(o.str("lemma")); });
    if (o.has("geometry"))
      c.geometry = parse_geometry(o.raw("geometry"), o.at("geometry"));
    else if (sc.has_geometry)
      c.geometry = sc.geometry;
    else
      fail(path, "needs a geometry (its own or the scenario's)");
    c.pressure = o.str("pressure", "decaying-sine");
    c.second = o.str("second", "cosine-static");
    wrap(o.at("pressure"), [&] { return pressure_catalog(c.pressure); });
    wrap(o.at("second"), [&] { return pressure_catalog(c.second); });
    c.coefficient_v = o.num("coefficient_v", 3.0);
    c.p = o.num("p", 2.0);
    if (!(c.p > 1.0)) fail(o.at("p"), "p must exceed 1", "p-above-one");
    c.beta = o.num("beta", -1.0);
    c.eps = o.num("eps", 0.0);
    c.s = o.num("s", 2.0);
    if (!(c.s >= 2.0)) fail(o.at("s"), "s = " + fmt(c.s) + " below 2", "s-at-least-two");
    c.q = o.num("q", c.beta);
    if (o.has("zeta")) c.zeta = parse_zeta(o.raw("zeta"), o.at("zeta"), c.s);
    if (o.has("gamma")) c.gamma = parse_gamma(o.raw("gamma"), o.at("gamma"), c.p);
    c.t = o.num("t", 0.5);
    c.levels = checked_levels(o, "levels", {64, 128, 256});
    wrap(path, [&] {
      c.validate();
      return 0;
    });
    sc.identities.push_back(s);
    return s.name;
  });

  each(j, "inequalities", [&](const Json& e, const std::string& path) {
    Obj o(e, path, {"name", "kind", "beta", "eps", "kappa", "s", "q", "zeta", "gamma"});
    InequalitySection s;
    s.name = name_of(o, path);
    need_solution(path);
    if (!std::isfinite(m)) fail(path, "the inequalities need a finite m", "finite-m");
    s.kind = wrap(o.at("kind"), [&] { return parse_inequality(o.str("kind")); });
    InequalityParams& ip = s.params;
    ip.p = p;
    ip.tol = sc.tol.inequality;
    if (o.has("beta") && o.raw("beta").is_string()) {
      if (o.raw("beta").get<std::string>() != "midpoint") fail(o.at("beta"), "expected a number or \"midpoint\"");
      check_beta_family(o.at("beta"), p, m);
      s.beta_midpoint = true;
    } else {
      ip.beta = o.num("beta", -1.0);
    }
    ip.eps = o.num("eps", s.kind == InequalityKind::HBound ? p : 0.0);
    if (o.has("kappa") && o.raw("kappa").is_string()) {
      if (o.raw("kappa").get<std::string>() != "auto") fail(o.at("kappa"), "expected a number or \"auto\"");
      s.kappa_auto = true;
    } else {
      ip.kappa = o.num("kappa", 0.0);
      if (ip.kappa < 0.0) fail(o.at("kappa"), "kappa must be non-negative");
    }
    ip.s = o.num("s", 2.0);
    if (!(ip.s >= 2.0)) fail(o.at("s"), "s = " + fmt(ip.s) + " below 2", "s-at-least-two");
    ip.q = o.num("q", -ip.s / (2.0 * (ip.s - 1.0) * (p - 1.0)));
    if (o.has("zeta")) ip.zeta = parse_zeta(o.raw("zeta"), o.at("zeta"), ip.s);
    if (o.has("gamma")) ip.gamma = parse_gamma(o.raw("gamma"), o.at("gamma"), p);
    sc.inequalities.push_back(s);
    return s.name;
  });

  each(j, "corollaries", [&](const Json& e, const std::string& path) {
    Obj o(e, path, {"name", "bound", "s", "a", "kappa", "gamma"});
    CorollarySection s;
    s.name = name_of(o, path);
    need_solution(path);
    s.bound = wrap(o.at("bound"), [&] { return parse_closed_bound(o.str("bound")); });
    CorollaryParams& cp = s.params;
    cp.p = p;
    cp.tol = sc.tol.inequality;
    cp.s = o.num("s", 2.0);
    if (!(cp.s >= 2.0)) fail(o.at("s"), "s = " + fmt(cp.s) + " below 2", "s-at-least-two");
    cp.a = o.num("a", 0.0);
    cp.kappa = o.num("kappa", 0.0);
    if (cp.kappa < 0.0) fail(o.at("kappa"), "kappa must be non-negative");
    if (o.has("gamma")) cp.gamma = parse_gamma(o.raw("gamma"), o.at("gamma"), p);
    const double sx = s.bound == ClosedBound::Decay ? 2.0 : cp.s;
    const double lim = s.bound == ClosedBound::Decay ? second_family_p_limit(m) : closed_bound_p_limit(sx, m);
    if (!(p > 1.0 && p <= lim))
      fail(o.at("bound"), "p = " + fmt(p) + " outside (1, " + fmt(lim) + "]", "closed-bound-p-interval");
    if (sc.has_geometry && (sc.geometry.chart != "torus" && sc.geometry.topology != "periodic"))
      fail(o.at("bound"), "closed bounds need a periodic chart", "closed-manifold");
    sc.corollaries.push_back(s);
    return s.name;
  });

  each(j, "liouville", [&](const Json& e, const std::string& path) {
    Obj o(e, path, {"name", "theorem", "p", "m", "beta", "nonlinearity", "u0", "t_back", "a", "ladder", "samples", "expect",
                    "expect_violation", "time_tol"});
    LiouvilleSection s;
    s.name = name_of(o, path);
    LiouvilleCase& c = s.c;
    c.theorem = wrap(o.at("theorem"), [&] { return parse_liouville(o.str("theorem")); });
    c.p = o.num("p");
    c.m = o.num("m", 2.0);
    c.beta = o.num("beta", 0.0);
    if (c.theorem == LiouvilleTheorem::BetaAncient) {
      check_beta_family(o.at("p"), c.p, c.m);
      check_beta(o.at("beta"), c.p, c.m, c.beta);
    } else {
      check_optimal_family(o.at("p"), c.p, c.m);
    }
    if (o.has("nonlinearity")) c.spec = parse_nonlinearity(o.raw("nonlinearity"), o.at("nonlinearity"));
    c.u0 = o.num("u0", 1.0);
    if (!(c.u0 > 0.0)) fail(o.at("u0"), "u0 must be positive");
    c.t_back = o.num("t_back", -10.0);
    if (!(c.t_back < 0.0)) fail(o.at("t_back"), "t_back must be negative");
    c.a = o.opt_num("a");
    if (c.a && !(*c.a > 0.0)) fail(o.at("a"), "a must be positive");
    if (o.has("ladder")) {
      const Json& l = o.raw("ladder");
      if (!l.is_array()) fail(o.at("ladder"), "expected [[R, M], ...]");
      for (std::size_t i = 0; i < l.size(); ++i) {
        const std::string lp = o.at("ladder") + "[" + std::to_string(i) + "]";
        if (!l[i].is_array() || l[i].size() != 2 || !l[i][0].is_number() || !l[i][1].is_number())
          fail(lp, "expected [R, M]");
        c.ladder.emplace_back(l[i][0].get<double>(), l[i][1].get<double>());
      }
      if (c.ladder.size() < 3) fail(o.at("ladder"), "growth ladders need at least three entries");
    }
    c.u_samples = log_uniform_samples(1e-6, 1e6, o.integer("samples", 1000));
    s.expect = o.str("expect", "");
    if (!s.expect.empty() && s.expect != "no-ancient-solution" && s.expect != "hypotheses-not-met" &&
        s.expect != "inconclusive")
      fail(o.at("expect"), "unknown verdict '" + s.expect + "'");
    s.expect_violation = o.opt_num("expect_violation");
    s.time_tol = o.num("time_tol", 1e-8);
    sc.liouville.push_back(s);
    return s.name;
  });

  each(j, "matrix_lemma", [&](const Json& e, const std::string& path) {
    Obj o(e, path, {"name", "a", "b", "n", "trials", "steps"});
    MatrixLemmaSection s;
    s.name = name_of(o, path);
    s.a = o.num("a");
    s.b = o.num("b");
    s.n = o.integer("n", 2);
    if (s.n < 1 || s.n > 3) fail(o.at("n"), "n must be 1, 2 or 3");
    s.trials = o.integer("trials", 10000);
    if (s.trials < 1000) fail(o.at("trials"), "at least 1000 trials");
    s.steps = o.integer("steps", 200);
    if (s.steps < 1) fail(o.at("steps"), "at least one ascent step");
    sc.matrix_lemma.push_back(s);
    return s.name;
  });

  auto parse_cutoff_params = [&](const Obj& o) {
    CutoffParams cp;
    cp.R = o.num("R", 1.0);
    cp.T = o.num("T", 1.0);
    cp.t0 = o.num("t0", 1.0);
    cp.tau = o.num("tau", cp.t0);
    cp.a = o.num("a", 0.75);
    if (!(cp.R > 0.0) || !(cp.T > 0.0)) fail(o.path(), "R and T must be positive");
    if (!(cp.tau > cp.t0 - cp.T && cp.tau <= cp.t0)) fail(o.at("tau"), "tau outside (t0 - T, t0]", "cutoff-window");
    if (!(cp.a > 0.0 && cp.a < 1.0)) fail(o.at("a"), "a outside (0, 1)", "cutoff-exponent");
    return cp;
  };

  each(j, "cutoffs", [&](const Json& e, const std::string& path) {
    Obj o(e, path, {"name", "R", "T", "t0", "tau", "a", "samples"});
    CutoffSection s;
    s.name = name_of(o, path);
    s.params = parse_cutoff_params(o);
    s.samples = o.integer("samples", 100);
    if (s.samples < 10) fail(o.at("samples"), "at least 10 samples per axis");
    sc.cutoffs.push_back(s);
    return s.name;
  });

  each(j, "max_points", [&](const Json& e, const std::string& path) {
    Obj o(e, path, {"name", "beta", "x0", "R", "T", "t0", "tau", "a"});
    MaxPointSection s;
    s.name = name_of(o, path);
    need_solution(path);
    s.beta = o.opt_num("beta");
    s.cutoff = parse_cutoff_params(o);
    s.x0 = point_of(o, "x0", n);
    sc.max_points.push_back(s);
    return s.name;
  });

  each(j, "operators", [&](const Json& e, const std::string& path) {
    Obj o(e, path, {"name", "op", "case", "levels", "floor"});
    OperatorSection s;
    s.name = name_of(o, path);
    s.op = o.str("op");
    static const std::set<std::string> ops{"gradient", "f_laplacian", "hessian", "bochner_residual"};
    if (!ops.count(s.op)) fail(o.at("op"), "unknown operator '" + s.op + "'");
    s.analytic_case = o.str("case");
    const auto cases = convergence_cases();
    if (std::find(cases.begin(), cases.end(), s.analytic_case) == cases.end())
      fail(o.at("case"), "unknown analytic case '" + s.analytic_case + "'");
    s.levels = checked_levels(o, "levels", {32, 64, 128});
    if (s.levels.size() < 2) fail(o.at("levels"), "at least two levels");
    s.floor = o.num("floor", 1.9);
    sc.operators.push_back(s);
    return s.name;
  });

  // check names must be unique across sections too
  std::set<std::string> all;
  auto add = [&](const std::string& kind, const std::string& name) {
    if (!all.insert(name).second) fail(kind, "check name '" + name + "' used twice");
  };
  for (const auto& s : sc.estimates) add("estimates", s.name);
  for (const auto& s : sc.identities) add("identities", s.name);
  for (const auto& s : sc.inequalities) add("inequalities", s.name);
  for (const auto& s : sc.corollaries) add("corollaries", s.name);
  for (const auto& s : sc.liouville) add("liouville", s.name);
  for (const auto& s : sc.matrix_lemma) add("matrix_lemma", s.name);
  for (const auto& s : sc.cutoffs) add("cutoffs", s.name);
  for (const auto& s : sc.max_points) add("max_points", s.name);
  for (const auto& s : sc.operators) add("operators", s.name);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::ConfigError, path + ": cannot read scenario file");
  }
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw Error(ErrorCode::ConfigError, path + ":" + std::to_string(line) + ": JSON syntax error: " + e.what());
  }
  Scenario sc = parse_scenario(j, path);
  sc.hash = fnv1a(text);
  return sc;
}

Json catalog_listing() {
  Json c;
  c["metrics"] = metric_catalog();
  c["potentials"] = potential_catalog();
  c["pressures"] = pressure_catalog_tags();
  c["initial_data"] = {"constant", "sine", "cosine-2d", "barenblatt", "bump"};
  c["nonlinearities"] = {"zero", "constant", "log", "power-sum", "yamabe"};
  c["theorems"] = {"beta-local", "beta-global", "beta-static", "optimal-local", "optimal-global", "optimal-static"};
  c["identities"] = {"pressure-evolution", "w-evolution", "product-rule", "h-functional", "shifted-w"};
  c["inequalities"] = {"superflow-w", "shifted-w", "optimal-w", "h-bound"};
  c["closed_bounds"] = {"closed-general", "closed-decay"};
  c["ancient"] = {"beta-ancient", "optimal-ancient"};
  c["zeta"] = {"one", "exponential", "decay"};
  c["gamma_aux"] = {"zero", "linear", "power", "tabulated"};
  c["operators"] = {"gradient", "f_laplacian", "hessian", "bochner_residual"};
  c["analytic_cases"] = convergence_cases();
  c["steppers"] = {"rk2", "rk4"};
  return c;
}

}  // namespace pmelab
