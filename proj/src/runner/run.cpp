#include "pmelab/run.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "pmelab/convergence.hpp"
#include "pmelab/curvature.hpp"
#include "pmelab/distance.hpp"
#include "pmelab/error.hpp"
#include "pmelab/exponents.hpp"
#include "pmelab/history.hpp"
#include "pmelab/matrix_lemma.hpp"
#include "pmelab/max_point.hpp"
#include "pmelab/operators.hpp"
#include "pmelab/pressure.hpp"

namespace fs = std::filesystem;

namespace pmelab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Artifact {
  std::string rel;
  std::string content;
};

struct Outcome {
  Json entry;
  std::vector<Artifact> files;
  double seconds = 0.0;
  std::optional<double> cstar;
};

template <class F>
void parallel_for(std::size_t count, int jobs, F&& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

Json series(const std::vector<double>& x, const std::vector<double>& y) {
  return Json{{"x", json_array(x)}, {"y", json_array(y)}};
}

std::vector<double> to_doubles(const std::vector<int>& xs) { return {xs.begin(), xs.end()}; }

Json residual_json(const ResidualReport& r) {
  return Json{{"lemma", r.lemma},
              {"levels", r.levels},
              {"residual_max", json_array(r.residual_max)},
              {"scaled_max", json_array(r.scaled_max)},
              {"orders", json_array(r.orders)},
              {"observed_order", json_number(r.observed_order)},
              {"order_floor", json_number(r.order_floor)},
              {"exact", r.exact}};
}

std::string safe_name(const std::string& name) {
  std::string s = name;
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  return s;
}

/// Shared inputs computed before the checks.
struct Shared {
  const Scenario* sc = nullptr;
  std::optional<CurvatureReport> cert;
  std::map<int, GeometryContext> ctx;
  std::map<int, SolveResult> sol;
  Json golden;  // values by check name, or null
  std::uint64_t seed = 1;
  int jobs = 1;

  const GeometryContext& context(int res) const { return ctx.at(res); }
  const SolveResult& solution(int res) const { return sol.at(res); }
  int base() const { return sc->geometry.resolution; }
  std::optional<double> golden_value(const std::string& name) const {
    if (golden.is_object() && golden.contains("values") && golden["values"].contains(name) &&
        golden["values"][name].is_number())
      return golden["values"][name].get<double>();
    return std::nullopt;
  }
};

std::string estimate_csv(const EstimateReport& r, int n) {
  std::ostringstream os;
  os << "frame,t";
  for (int i = 0; i < n; ++i) os << ",x" << (i + 1);
  os << ",lhs,rhs,ratio\n";
  for (const EstimateSample& s : r.samples) {
    os << s.frame << "," << csv_number(s.t);
    for (int i = 0; i < n; ++i) os << "," << csv_number(s.x[i]);
    os << "," << csv_number(s.lhs) << "," << csv_number(s.rhs) << "," << csv_number(s.ratio) << "\n";
  }
  return os.str();
}

Outcome run_estimate(const Shared& sh, const EstimateSection& e) {
  const Scenario& sc = *sh.sc;
  const double p = sc.solver.cfg.p;
  const double m = sc.geometry.m;
  const bool beta_family = is_beta_family(e.theorem);
  const double beta = beta_family ? e.beta.value_or(beta_admissible_range(p, m).midpoint) : -1.0 / (p - 1.0);
  check_estimate_exponents(e.theorem, p, m, beta);
  const double k = e.k.value_or(sh.cert ? sh.cert->k : 0.0);
  const double h = e.h.value_or(sh.cert ? sh.cert->h : 0.0);
  const std::vector<int> levels = e.levels.empty() ? std::vector<int>{sh.base()} : e.levels;

  Outcome out;
  std::vector<double> cstars;
  EstimateReport top;
  EstimateContext top_ctx;
  for (int L : levels) {
    EstimateContext ectx = make_estimate_context(sh.context(L), sh.solution(L).u, sc.solver.nonlinearity, p, beta,
                                                 e.cyl, k, h, is_global(e.theorem));
    EstimateReport rep = verify_estimate(ectx, hsz_rhs(e.theorem, ectx), CMode::calibrated());
    cstars.push_back(rep.c);
    top = std::move(rep);
    top_ctx = std::move(ectx);
  }
  const double cstar = cstars.back();
  Json d{{"theorem", theorem_tag(e.theorem)},
         {"p", json_number(p)},
         {"m", json_number(m)},
         {"beta", json_number(beta)},
         {"k", json_number(k)},
         {"h", json_number(h)},
         {"M", json_number(top.M)},
         {"cylinder",
          {{"x0", json_point(e.cyl.x0, sc.geometry.n)},
           {"t0", json_number(e.cyl.t0)},
           {"R", json_number(e.cyl.R)},
           {"T", json_number(e.cyl.T)}}},
         {"levels", levels},
         {"c_star", json_array(cstars)},
         {"c_mode", e.c_mode},
         {"sup_sigma_x", json_number(top.sup_sigma_x)},
         {"sup_sigma_v", json_number(top.sup_sigma_v)},
         {"samples", top.samples.size()},
         {"argsup",
          {{"t", json_number(top.argsup.t)},
           {"x", json_point(top.argsup.x, sc.geometry.n)},
           {"lhs", json_number(top.argsup.lhs)},
           {"rhs", json_number(top.argsup.rhs)}}}};

  bool pass = std::all_of(cstars.begin(), cstars.end(), [](double c) { return std::isfinite(c); });
  if (cstars.size() >= 2) {
    const double a = cstars[cstars.size() - 2];
    const double spread = std::abs(cstar - a) / std::max(std::abs(cstar), 1e-300);
    d["spread"] = json_number(spread);
    d["stable"] = spread <= sc.tol.stability;
    pass = pass && spread <= sc.tol.stability;
  }
  const std::optional<double> golden = sh.golden_value(e.name);
  d["golden"] = golden ? json_number(*golden) : Json(nullptr);
  if (e.c_mode == "calibrate") {
    const EstimateReport fixed = verify_estimate(top_ctx, top, CMode::fixed(cstar));
    d["fixed_rerun_pass"] = fixed.pass;
    pass = pass && fixed.pass;
    if (golden) {
      const double drift = std::abs(cstar - *golden) / std::max(std::abs(*golden), 1e-300);
      d["golden_drift"] = json_number(drift);
      d["golden_ok"] = drift <= sc.tol.golden;
      pass = pass && drift <= sc.tol.golden;
    }
    out.cstar = cstar;
  } else {
    double c = e.c;
    if (e.c_mode == "golden") {
      if (!golden) throw Error(ErrorCode::MissingArtifact, "no golden C* for '" + e.name + "' in " + sc.golden);
      c = *golden * (1.0 + sc.tol.golden);
    }
    const EstimateReport fixed = verify_estimate(top_ctx, top, CMode::fixed(c));
    d["c"] = json_number(c);
    d["sup_ratio"] = json_number(fixed.sup_ratio);
    d["fixed_pass"] = fixed.pass;
    pass = pass && fixed.pass;
  }

  // largest ratio per stored time at the finest level
  std::map<double, double> per_t;
  for (const EstimateSample& s : top.samples) {
    auto [it, fresh] = per_t.emplace(s.t, s.ratio);
    if (!fresh) it->second = std::max(it->second, s.ratio);
  }
  std::vector<double> ts, rs;
  for (const auto& [t, r] : per_t) {
    ts.push_back(t);
    rs.push_back(r);
  }
  const std::string csv = "samples/" + safe_name(e.name) + ".csv";
  out.files.push_back({csv, estimate_csv(top, sc.geometry.n)});
  out.entry = Json{{"kind", "estimate"},
                   {"pass", pass},
                   {"detail", d},
                   {"samples_csv", csv},
                   {"series",
                    {{"C*-vs-resolution", series(to_doubles(levels), cstars)}, {"ratio-vs-t", series(ts, rs)}}}};
  return out;
}

Outcome run_identity(const IdentitySection& s) {
  const ResidualReport r = check_identity(s.c);
  Json d = residual_json(r);
  d["geometry"] = {{"metric", s.c.geometry.metric}, {"potential", s.c.geometry.potential}, {"n", s.c.geometry.n}};
  d["pressure"] = s.c.pressure;
  d["p"] = json_number(s.c.p);
  Outcome out;
  out.entry = Json{{"kind", "identity"},
                   {"pass", r.pass},
                   {"detail", d},
                   {"series", {{"residual-vs-resolution", series(to_doubles(r.levels), r.residual_max)}}}};
  return out;
}

Json histogram(const std::vector<double>& xs, int bins) {
  if (xs.empty()) return series({}, {});
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it, hi = *hi_it;
  const double width = hi > lo ? (hi - lo) / bins : 1.0;
  std::vector<double> centers(bins), counts(bins, 0.0);
  for (int b = 0; b < bins; ++b) centers[b] = lo + (b + 0.5) * width;
  for (double x : xs) {
    const int b = std::clamp(static_cast<int>((x - lo) / width), 0, bins - 1);
    counts[b] += 1.0;
  }
  return series(centers, counts);
}

Outcome run_inequality(const Shared& sh, const InequalitySection& s) {
  const Scenario& sc = *sh.sc;
  const GeometryContext& ctx = sh.context(sh.base());
  const auto slices = solver_history(ctx, sh.solution(sh.base()).u, sc.solver.nonlinearity, sc.solver.cfg.p,
                                     sc.solver.cfg.floor);
  InequalityParams ip = s.params;
  if (s.beta_midpoint) ip.beta = beta_admissible_range(ip.p, sc.geometry.m).midpoint;
  if (s.kappa_auto) ip.kappa = minimal_kappa(ctx, slices, ip.p);
  const ResidualReport r = check_inequality(s.kind, ctx, slices, ip);

  std::vector<double> scaled, ts, mins;
  for (const PressureSlice& sl : slices) {
    const SlackField f = inequality_slack(s.kind, ctx, sl, ip);
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t q : ctx.chart().interior_indices()) {
      scaled.push_back(f.slack[q] / f.scale[q]);
      mn = std::min(mn, f.slack[q] / f.scale[q]);
    }
    ts.push_back(sl.t);
    mins.push_back(mn);
  }
  Json d{{"inequality", inequality_tag(s.kind)},
         {"p", json_number(ip.p)},
         {"beta", json_number(ip.beta)},
         {"eps", json_number(ip.eps)},
         {"kappa", json_number(ip.kappa)},
         {"s", json_number(ip.s)},
         {"q", json_number(ip.q)},
         {"zeta", ip.zeta.tag()},
         {"gamma", ip.gamma.tag()},
         {"slack_min", json_number(r.slack_min)},
         {"scaled_slack_min", json_number(r.scaled_slack_min)},
         {"tolerance", json_number(ip.tol)},
         {"argmin_t", json_number(r.argmin_t)},
         {"argmin_x", json_point(r.argmin_x, ctx.n())},
         {"slices", slices.size()}};
  Outcome out;
  out.entry = Json{{"kind", "inequality"},
                   {"pass", r.pass},
                   {"detail", d},
                   {"series", {{"slack-histogram", histogram(scaled, 20)}, {"slack-vs-t", series(ts, mins)}}}};
  return out;
}

Outcome run_corollary(const Shared& sh, const CorollarySection& s) {
  const Scenario& sc = *sh.sc;
  const CorollaryReport r = corollary_bound_check(s.bound, sh.context(sh.base()), sh.solution(sh.base()).u,
                                                  sc.solver.nonlinearity, s.params);
  Json hyp = Json::array();
  for (const HypothesisCheck& h : r.hypotheses)
    hyp.push_back({{"name", h.name}, {"worst", json_number(h.worst)}, {"holds", h.holds}});
  Json d{{"bound", closed_bound_tag(s.bound)},
         {"p", json_number(s.params.p)},
         {"s", json_number(s.params.s)},
         {"a", json_number(s.params.a)},
         {"kappa", json_number(s.params.kappa)},
         {"hypotheses", hyp},
         {"min_slack", json_number(r.min_slack)},
         {"min_scaled_slack", json_number(r.min_scaled_slack)},
         {"tolerance", json_number(s.params.tol)},
         {"worst_t", json_number(r.worst_t)},
         {"worst_x", json_point(r.worst_x, sc.geometry.n)}};
  Outcome out;
  out.entry = Json{{"kind", "corollary"},
                   {"pass", r.pass},
                   {"detail", d},
                   {"series", {{"slack-vs-t", series(r.times, r.min_slack_per_time)}}}};
  return out;
}

Outcome run_liouville(const LiouvilleSection& s) {
  const LiouvilleVerdict v = liouville_verdict(s.c);
  bool pass = s.expect.empty() ? v.verdict != "hypotheses-not-met" : v.verdict == s.expect;
  Json d{{"theorem", liouville_tag(s.c.theorem)},
         {"p", json_number(s.c.p)},
         {"m", json_number(s.c.m)},
         {"beta", json_number(s.c.beta)},
         {"verdict", v.verdict},
         {"expect", s.expect},
         {"exponents_ok", v.exponents_ok},
         {"exponent_message", v.exponent_message},
         {"sign",
          {{"min_expression", json_number(v.sign.min_expression)},
           {"argmin_u", json_number(v.sign.argmin_u)},
           {"holds", v.sign.holds},
           {"equivalence_error", json_number(v.sign.equivalence_error)},
           {"equivalence_ok", v.sign.equivalence_ok},
           {"samples", v.sign.samples}}},
         {"positivity_ok", v.positivity_ok},
         {"a", json_number(v.a)},
         {"ode_steps", v.ode.steps},
         {"violation_time", v.ode.violation_time ? json_number(*v.ode.violation_time) : Json(nullptr)},
         {"bound_time", v.bound_time ? json_number(*v.bound_time) : Json(nullptr)},
         {"bound_consistent", v.bound_consistent}};
  if (s.expect_violation) {
    const bool ok = v.ode.violation_time && std::abs(*v.ode.violation_time - *s.expect_violation) <= s.time_tol;
    d["expect_violation"] = json_number(*s.expect_violation);
    d["violation_ok"] = ok;
    pass = pass && ok;
  }
  Json ser = Json::object();
  std::vector<double> ts, us;
  for (const auto& [t, u] : v.ode.trajectory) {
    ts.push_back(t);
    us.push_back(u);
  }
  ser["ode-trajectory"] = series(ts, us);
  if (v.growth) {
    std::vector<double> rs, qs;
    for (const GrowthRung& g : v.growth->rungs) {
      rs.push_back(g.R);
      qs.push_back(g.quotient);
    }
    d["growth"] = {{"exponent", json_number(v.growth->exponent)},
                   {"slope", json_number(v.growth->slope)},
                   {"pass", v.growth->pass}};
    ser["growth-quotient-vs-R"] = series(rs, qs);
  }
  Outcome out;
  out.entry = Json{{"kind", "liouville"}, {"pass", pass}, {"detail", d}, {"series", ser}};
  return out;
}

Outcome run_matrix_lemma(const Shared& sh, const MatrixLemmaSection& s) {
  const MatrixLemmaResult r = matrix_lemma_bruteforce(s.a, s.b, s.n, s.trials, s.steps, sh.seed, sh.jobs);
  const double rel = std::abs(r.empirical - r.closed_form) / std::max(r.closed_form, 1e-300);
  const bool below = r.empirical <= r.closed_form * (1.0 + 1e-9);
  const bool pass = rel <= 1e-6 && below;
  Outcome out;
  out.entry = Json{{"kind", "matrix-lemma"},
                   {"pass", pass},
                   {"detail",
                    {{"a", json_number(s.a)},
                     {"b", json_number(s.b)},
                     {"n", s.n},
                     {"trials", r.trials},
                     {"steps", r.steps},
                     {"empirical", json_number(r.empirical)},
                     {"closed_form", json_number(r.closed_form)},
                     {"relative_gap", json_number(rel)},
                     {"never_above", below}}},
                   {"series", Json::object()}};
  return out;
}

Outcome run_cutoff(const CutoffSection& s) {
  const CutoffSpec spec = build_cutoff(s.params, 1000);
  const CutoffCheck c = check_cutoff(spec, s.samples);
  Json props = Json::array();
  for (const CutoffProperty& p : c.properties)
    props.push_back({{"name", p.name}, {"holds", p.holds}, {"worst", json_number(p.worst)}});
  // profile along rho at t0 and along t at rho = 0
  std::vector<double> rho, phi, ts, psi;
  const CutoffParams& cp = s.params;
  for (int i = 0; i <= 100; ++i) {
    rho.push_back(1.25 * cp.R * i / 100.0);
    phi.push_back(spec.value(rho.back(), cp.t0));
    ts.push_back(cp.t0 - cp.T + cp.T * i / 100.0);
    psi.push_back(spec.value(0.0, ts.back()));
  }
  Outcome out;
  out.entry = Json{{"kind", "cutoff"},
                   {"pass", c.pass},
                   {"detail",
                    {{"R", json_number(cp.R)},
                     {"T", json_number(cp.T)},
                     {"t0", json_number(cp.t0)},
                     {"tau", json_number(cp.tau)},
                     {"a", json_number(cp.a)},
                     {"c", json_number(c.c)},
                     {"c_a", json_number(c.c_a)},
                     {"properties", props}}},
                   {"series", {{"profile-vs-rho", series(rho, phi)}, {"profile-vs-t", series(ts, psi)}}}};
  return out;
}

Outcome run_max_point(const Shared& sh, const MaxPointSection& s) {
  const Scenario& sc = *sh.sc;
  const GeometryContext& ctx = sh.context(sh.base());
  const SpaceTimeField& u = sh.solution(sh.base()).u;
  const double p = sc.solver.cfg.p;
  const double beta = s.beta.value_or(beta_admissible_range(p, sc.geometry.m).midpoint);
  const SpaceTimeField w = w_field(ctx, pressure_transform(u, p), beta);
  const MaxPointReport r = replay_maximum_point(ctx, w, build_cutoff(s.cutoff, 200), model_distance_for(ctx, s.x0));
  const bool pass = r.first_order_ok && r.second_order_ok && r.time_order_ok;
  Outcome out;
  out.entry = Json{{"kind", "max-point"},
                   {"pass", pass},
                   {"detail",
                    {{"beta", json_number(beta)},
                     {"branch", r.branch},
                     {"value", json_number(r.value)},
                     {"x", json_point(r.x, ctx.n())},
                     {"t", json_number(r.t)},
                     {"at_start_time", r.at_start_time},
                     {"grad_norm", json_number(r.grad_norm)},
                     {"grad_tol", json_number(r.grad_tol)},
                     {"lap_f", json_number(r.lap_f)},
                     {"lap_tol", json_number(r.lap_tol)},
                     {"dt_backward", json_number(r.dt_backward)},
                     {"first_order_ok", r.first_order_ok},
                     {"second_order_ok", r.second_order_ok},
                     {"time_order_ok", r.time_order_ok}}},
                   {"series", Json::object()}};
  return out;
}

Outcome run_operator(const OperatorSection& s) {
  const DiffReport r = convergence_order(s.op, s.analytic_case, s.levels);
  const bool pass = r.exact || r.observed_order >= s.floor;
  Outcome out;
  out.entry = Json{{"kind", "operator"},
                   {"pass", pass},
                   {"detail",
                    {{"op", s.op},
                     {"case", s.analytic_case},
                     {"levels", s.levels},
                     {"error_max", json_array(r.error_max)},
                     {"error_l2", json_array(r.error_l2)},
                     {"orders", json_array(r.orders)},
                     {"observed_order", json_number(r.observed_order)},
                     {"floor", json_number(s.floor)},
                     {"exact", r.exact}}},
                   {"series", {{"error-vs-resolution", series(to_doubles(s.levels), r.error_max)}}}};
  return out;
}

class DirLock {
 public:
  explicit DirLock(const fs::path& dir) {
    const std::string path = (dir / ".lock").string();
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0 || ::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      if (fd_ >= 0) ::close(fd_);
      throw Error(ErrorCode::InvalidArgument, "output directory " + dir.string() + " is in use by another run");
    }
  }
  ~DirLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace

int exit_code_for(const Error& e) { return e.code() == ErrorCode::ConfigError ? 2 : 3; }

RunResult run_scenario(const Scenario& sc, const RunOptions& opts) {
  const auto t_start = Clock::now();
  Json timings = Json::object();
  Shared sh;
  sh.sc = &sc;
  sh.seed = opts.seed.value_or(sc.seed);
  sh.jobs = std::max(opts.jobs, 1);
  if (!sc.golden.empty() && fs::exists(sc.golden)) sh.golden = Json::parse(read_file(sc.golden));

  std::vector<Artifact> shared_files;
  if (sc.has_geometry) {
    auto t0 = Clock::now();
    const GeometryContext ctx = sc.geometry.build();
    const double lo = sc.solver.present ? sc.solver.cfg.t_start : 0.0;
    const double hi = sc.solver.present ? sc.solver.cfg.t_end : 1.0;
    sh.cert = certify_lower_bounds(
        ctx, chart_region(ctx.chart(), lo, hi, sc.certify.samples_per_axis, sc.certify.time_samples));
    std::ostringstream os;
    write_curvature_csv(*sh.cert, os);
    shared_files.push_back({"samples/curvature.csv", os.str()});
    timings["certify"] = seconds_since(t0);

    std::vector<int> levels;
    if (sc.solver.present && sc.needs_solution()) levels.push_back(sc.geometry.resolution);
    if (sc.solver.present)
      for (const auto& e : sc.estimates)
        for (int L : e.levels) levels.push_back(L);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (int L : levels) sh.ctx.emplace(L, sc.geometry.build(L));
    if (!sh.ctx.count(sc.geometry.resolution)) sh.ctx.emplace(sc.geometry.resolution, ctx);

    t0 = Clock::now();
    std::vector<SolveResult> sols(levels.size());
    parallel_for(levels.size(), sh.jobs, [&](std::size_t i) {
      const GeometryContext& c = sh.ctx.at(levels[i]);
      sols[i] = solve(c, make_initial_data(c.chart(), sc.solver.initial, sc.solver.cfg.floor),
                      sc.solver.nonlinearity, sc.solver.cfg);
    });
    for (std::size_t i = 0; i < levels.size(); ++i) {
      std::ostringstream tr;
      write_solve_trace_csv(sols[i], tr);
      shared_files.push_back({"samples/solve_" + std::to_string(levels[i]) + ".csv", tr.str()});
      timings["solve_" + std::to_string(levels[i])] = sols[i].wall_time;
      sh.sol.emplace(levels[i], std::move(sols[i]));
    }
    timings["solve"] = seconds_since(t0);
  }

  // every check as (name, task), in configuration order
  std::vector<std::pair<std::string, std::function<Outcome()>>> tasks;
  for (const auto& s : sc.operators) tasks.emplace_back(s.name, [&s] { return run_operator(s); });
  for (const auto& s : sc.identities) tasks.emplace_back(s.name, [&s] { return run_identity(s); });
  for (const auto& s : sc.cutoffs) tasks.emplace_back(s.name, [&s] { return run_cutoff(s); });
  for (const auto& s : sc.matrix_lemma) tasks.emplace_back(s.name, [&] { return run_matrix_lemma(sh, s); });
  for (const auto& s : sc.estimates) tasks.emplace_back(s.name, [&] { return run_estimate(sh, s); });
  for (const auto& s : sc.inequalities) tasks.emplace_back(s.name, [&] { return run_inequality(sh, s); });
  for (const auto& s : sc.corollaries) tasks.emplace_back(s.name, [&] { return run_corollary(sh, s); });
  for (const auto& s : sc.max_points) tasks.emplace_back(s.name, [&] { return run_max_point(sh, s); });
  for (const auto& s : sc.liouville) tasks.emplace_back(s.name, [&s] { return run_liouville(s); });

  std::vector<Outcome> outcomes(tasks.size());
  // the matrix lemma already uses the pool internally
  parallel_for(tasks.size(), sh.jobs, [&](std::size_t i) {
    const auto t0 = Clock::now();
    try {
      outcomes[i] = tasks[i].second();
    } catch (const Error& e) {
      outcomes[i].entry = Json{{"kind", "error"},
                               {"pass", false},
                               {"detail", {{"error", error_name(e.code())}, {"message", e.what()}}},
                               {"series", Json::object()}};
    }
    outcomes[i].seconds = seconds_since(t0);
  });

  RunResult res;
  Json checks = Json::array();
  Json verdicts = Json::object();
  std::size_t passed = 0;
  std::vector<Artifact> files = shared_files;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    Json entry = outcomes[i].entry;
    entry["name"] = tasks[i].first;
    const bool pass = entry["pass"].get<bool>();
    passed += pass;
    verdicts[tasks[i].first] = pass;
    timings["check:" + tasks[i].first] = outcomes[i].seconds;
    checks.push_back(entry);
    for (auto& f : outcomes[i].files) files.push_back(std::move(f));
    if (outcomes[i].cstar) res.calibrated.emplace_back(tasks[i].first, *outcomes[i].cstar);
  }
  res.all_pass = passed == tasks.size();
  const Json summary{{"checks", tasks.size()},
                     {"passed", passed},
                     {"failed", tasks.size() - passed},
                     {"verdict", res.all_pass ? "pass" : "fail"}};
  res.report = Json{{"scenario", sc.name},
                    {"hash", hex64(sc.hash)},
                    {"seed", sh.seed},
                    {"checks", checks},
                    {"summary", summary}};
  if (sh.cert)
    res.report["certification"] = {{"k", json_number(sh.cert->k)},
                                   {"h", json_number(sh.cert->h)},
                                   {"lambda_min", json_number(sh.cert->lambda_min)},
                                   {"lambda_dt_min", json_number(sh.cert->lambda_dt_min)}};
  timings["total"] = seconds_since(t_start);

  Json artifacts = Json::array({"manifest.json", "report.json"});
  for (const Artifact& a : files) artifacts.push_back(a.rel);
  const Json versions{{"geom_kernel", kVersion},     {"discrete_fields", kVersion}, {"pme_solver", kVersion},
                      {"estimate_engine", kVersion}, {"evolution_lab", kVersion},   {"liouville_probe", kVersion},
                      {"cli_runner", kVersion}};
  res.manifest = Json{{"scenario", sc.name},
                      {"source", sc.source},
                      {"hash", hex64(sc.hash)},
                      {"seed", sh.seed},
                      {"versions", versions},
                      {"verdicts", verdicts},
                      {"summary", summary},
                      {"timings", timings},
                      {"report", "report.json"},
                      {"artifacts", artifacts}};

  if (opts.write) {
    fs::path dir = !opts.out.empty() ? fs::path(opts.out)
                   : !sc.output.empty() ? fs::path(sc.output)
                                        : fs::path("runs") / sc.name;
    fs::create_directories(dir);
    DirLock lock(dir);
    res.out_dir = dir.string();
    for (const Artifact& a : files) write_file((dir / a.rel).string(), a.content);
    write_file((dir / "report.json").string(), canonical_dump(res.report));
    write_file((dir / "manifest.json").string(), canonical_dump(res.manifest));
  }
  return res;
}

std::string update_golden(const Scenario& sc, bool force, int jobs) {
  if (sc.golden.empty()) throw Error(ErrorCode::ConfigError, "golden: scenario names no golden file");
  if (fs::exists(sc.golden) && !force)
    throw Error(ErrorCode::ConfigError, "golden: " + sc.golden + " exists; pass --force to overwrite");
  RunOptions opts;
  opts.write = false;
  opts.jobs = jobs;
  Scenario calib = sc;
  calib.golden.clear();  // compare nothing while recording
  for (auto& e : calib.estimates) e.c_mode = "calibrate";
  const RunResult r = run_scenario(calib, opts);
  Json values = Json::object();
  for (const auto& [name, c] : r.calibrated) values[name] = json_number(c);
  const Json g{{"scenario", sc.name}, {"hash", hex64(sc.hash)}, {"values", values}};
  write_file(sc.golden, canonical_dump(g));
  return sc.golden;
}

}  // namespace pmelab
