#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "builtins.hpp"
#include "lrg/clifford.hpp"
#include "lrg/dirac.hpp"
#include "lrg/doubling.hpp"
#include "lrg/lrgf.hpp"
#include "lrg/maps.hpp"
#include "lrg/pipeline.hpp"
#include "lrg/scal_dist.hpp"
#include "svg.hpp"

namespace cli {

namespace fs = std::filesystem;
using namespace lrg;

namespace {

template <class T>
T get(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key) || cfg[key].is_null()) return fallback;
  try {
    return cfg[key].get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("config key '") + key + "': " + e.what());
  }
}

std::string resolve(const Context& ctx, const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) path = ctx.cfg_dir / path;
  if (!fs::exists(path)) throw InputError("referenced file does not exist: " + path.string());
  return path.string();
}

std::string status(bool ok) { return ok ? "pass" : "fail"; }

json stage_json(const std::string& name, const std::string& st, json values, const std::string& detail = {}) {
  json s;
  s["name"] = name;
  s["status"] = st;
  s["values"] = std::move(values);
  if (!detail.empty()) s["detail"] = detail;
  return s;
}

json stage_json(const Stage& s) {
  json v = json::object();
  for (const auto& [k, x] : s.values) v[k] = x;
  return stage_json(s.name, s.status, v, s.detail);
}

void set_outcome(ScenarioResult& r, Outcome o, std::string stage, std::string hyp = {}) {
  r.outcome = o;
  r.stage = std::move(stage);
  r.hypothesis = std::move(hyp);
}

void plot_heatmap(const Context& ctx, ScenarioResult& r, const std::string& name, const Field<double>& f, int comp,
                  const std::string& title, bool diverging = false) {
  if (!ctx.plots) return;
  write_heatmap((ctx.out_dir / name).string(), f, comp, title, diverging);
  r.files.push_back(name);
}

void plot_lines(const Context& ctx, ScenarioResult& r, const std::string& name, const std::vector<Series>& s,
                const std::string& title, const std::string& xl, const std::string& yl, bool log_y) {
  if (!ctx.plots) return;
  write_line_plot((ctx.out_dir / name).string(), s, title, xl, yl, log_y);
  r.files.push_back(name);
}

ChartGrid default_grid(const json& cfg, const std::string& metric, int res) {
  if (cfg.contains("lo") || cfg.contains("hi"))
    return ChartGrid::cube(2, get(cfg, "lo", -1.0), get(cfg, "hi", 1.0), res, get(cfg, "periodic", false));
  if (metric == "round") return atlas::chart_grid(res);
  if (metric == "wavy-torus") return ChartGrid::cube(2, 0.0, 1.0, res, true);
  return ChartGrid::cube(2, -1.0, 1.0, res);
}

MetricField load_metric_file(const std::string& path) {
  const LrgfFile f = read_lrgf(path);
  const int d = f.field.grid.dim();
  if (f.field.components != d * (d + 1) / 2)
    throw InputError("metric file " + path + ": expected n(n+1)/2 packed components");
  return metric_from_packed(f.field, f.derivatives ? &*f.derivatives : nullptr);
}

/// Metric from a file (`metric_file`) or a builtin name (`metric`).
MetricField config_metric(const Context& ctx, const std::string& fallback, int res, std::string* name = nullptr) {
  if (ctx.metric_file) return load_metric_file(resolve(ctx, *ctx.metric_file));
  if (ctx.cfg.contains("metric_file")) return load_metric_file(resolve(ctx, ctx.cfg["metric_file"].get<std::string>()));
  const std::string m = get<std::string>(ctx.cfg, "metric", fallback);
  if (name) *name = m;
  const BuiltinMetric b = builtin_metric(m);
  return metric_from_function(default_grid(ctx.cfg, m, res), b.g, b.dg);
}

Field<double> det_sign_field(const MapField& f) {
  Field<double> out(f.grid(), 1);
  for (std::size_t s = 0; s < f.grid().size(); ++s)
    out.values[s] = f.mask[s] ? std::numeric_limits<double>::quiet_NaN() : double(f.det_sign[s]);
  return out;
}

Field<double> singular_value_field(const MapField& f) {
  Field<double> out(f.grid(), f.n);
  for (std::size_t s = 0; s < f.grid().size(); ++s)
    for (int i = 0; i < f.n; ++i)
      out(s, i) = f.mask[s] ? std::numeric_limits<double>::quiet_NaN() : f.sv[s * f.n + i];
  return out;
}

// ---------------------------------------------------------------------------------------------

ScenarioResult mollify_demo(const Context& ctx) {
  ScenarioResult r;
  const int levels = get(ctx.cfg, "levels", 14);
  const int per_radius = get(ctx.cfg, "samples_per_radius", 64);
  const double lip = 1.0;
  if (levels < 1 || levels > 20) throw InputError("mollify-demo: levels must lie in [1, 20]");
  const int finest = levels + 4;
  json rows = json::array();
  std::vector<double> norms;
  double max_grad = 0.0;
  Series s_norm{"C0 + H1 error", {}}, s_grad{"max |df|", {}};
  for (int nu = 1; nu <= levels; ++nu) {
    const double eps = std::ldexp(1.0, -nu);
    const int cells = std::min(int(std::lround(4.0 * per_radius / eps)), 1 << finest);
    const ChartGrid g = ChartGrid::cube(1, -2.0, 2.0, cells + 1);
    const ScalarField hat = sample(g, [](auto x) { return std::max(0.0, 1.0 - std::abs(x[0])); });
    const Field<double> dhat = fd_gradient(hat);
    const ScalarField fm = mollify(hat, eps);
    const Field<double> dm = fd_gradient(fm);
    double sup = 0.0, l2 = 0.0, d2 = 0.0, grad = 0.0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      const double e = fm.values[s] - hat.values[s], de = dm.values[s] - dhat.values[s];
      sup = std::max(sup, std::abs(e));
      l2 += g.weight(s) * e * e;
      d2 += g.weight(s) * de * de;
      grad = std::max(grad, std::abs(dm.values[s]));
    }
    max_grad = std::max(max_grad, grad);
    norms.push_back(sup + std::sqrt(l2 + d2));
    rows.push_back({{"nu", nu},
                    {"eps", eps},
                    {"h", g.spacing(0)},
                    {"sup_error", sup},
                    {"h1_error", std::sqrt(l2 + d2)},
                    {"max_gradient", grad}});
    s_norm.points.emplace_back(nu, norms.back());
    s_grad.points.emplace_back(nu, grad);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < norms.size(); ++i) monotone = monotone && norms[i] < norms[i - 1];
  const bool small = norms.back() < 1e-2, bounded = max_grad <= lip + 1e-6;
  r.results["function"] = "hat max(0, 1 - |x|) on [-2, 2]";
  r.results["levels"] = rows;
  r.stages.push_back(stage_json("monotone_decay", status(monotone), {{"final_error", norms.back()}}));
  r.stages.push_back(stage_json("final_error", status(small), {{"final_error", norms.back()}, {"threshold", 1e-2}}));
  r.stages.push_back(stage_json("gradient_bound", status(bounded), {{"max_gradient", max_grad}, {"lipschitz", lip}}));
  if (!monotone) set_outcome(r, Outcome::fail, "monotone_decay", "mollification convergence");
  else if (!small) set_outcome(r, Outcome::fail, "final_error", "mollification convergence");
  else if (!bounded) set_outcome(r, Outcome::fail, "gradient_bound", "uniform derivative bound");
  else set_outcome(r, Outcome::pass, "gradient_bound");
  plot_lines(ctx, r, "mollify_norms.svg", {s_norm}, "mollified hat: error norms", "nu (eps = 2^-nu)", "error", true);
  return r;
}

ScenarioResult scal_pair(const Context& ctx) {
  ScenarioResult r;
  std::string mname = "file";
  const MetricField m = config_metric(ctx, "round", get(ctx.cfg, "res", 129), &mname);
  const ChartGrid& g = m.grid;

  std::vector<ScalarField> tests;
  std::vector<std::string> ids;
  const std::optional<std::string> test_file =
      ctx.test_file ? ctx.test_file
                    : (ctx.cfg.contains("test_file") ? std::optional(ctx.cfg["test_file"].get<std::string>()) : std::nullopt);
  if (test_file) {
    LrgfFile f = read_lrgf(resolve(ctx, *test_file));
    if (!(f.field.grid == g)) throw InputError("scal-pair: test function grid differs from the metric grid");
    for (int c = 0; c < f.field.components; ++c) {
      ScalarField u(g, 1);
      for (std::size_t s = 0; s < g.size(); ++s) u.values[s] = f.field(s, c);
      tests.push_back(std::move(u));
      ids.push_back(fs::path(*test_file).filename().string() + "[" + std::to_string(c) + "]");
    }
  } else {
    const double radius = get(ctx.cfg, "bump_radius", 0.4);
    const double region_radius = get(ctx.cfg, "region_radius", mname == "round" ? 0.8 : 1e300);
    const ScalarField region =
        sample(g, [&](auto x) { return std::hypot(x[0], x[1]) <= region_radius ? 1.0 : 0.0; });
    tests = bump_tests(g, region, radius, get(ctx.cfg, "bumps_per_axis", 5), &ids);
    if (tests.empty()) throw InputError("scal-pair: no bump test function fits in the chart");
  }

  ScalarField theta(g, 1, 0.0);
  std::string theta_desc = "0";
  const std::optional<std::string> th =
      ctx.theta ? ctx.theta
                : (ctx.cfg.contains("theta") ? std::optional(ctx.cfg["theta"].is_string()
                                                                ? ctx.cfg["theta"].get<std::string>()
                                                                : ctx.cfg["theta"].dump())
                                             : std::nullopt);
  if (th) {
    theta_desc = *th;
    char* end = nullptr;
    const double c = std::strtod(th->c_str(), &end);
    if (end && *end == '\0' && !th->empty()) {
      theta = ScalarField(g, 1, c);
    } else {
      LrgfFile f = read_lrgf(resolve(ctx, *th));
      if (!(f.field.grid == g) || f.field.components != 1)
        throw InputError("scal-pair: theta file must be a scalar field on the metric grid");
      theta = f.field;
    }
  }

  const VkF vf = vk_f_fields(m);
  json pairs = json::array();
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const ScalarPairing p = pair_scal(m, vf, tests[i], nullptr, ids[i]);
    pairs.push_back({{"id", ids[i]}, {"value", p.value}, {"v_term", p.v_term}, {"f_term", p.f_term}});
  }
  const CertificateReport cr = lower_bound_certificate(m, theta, tests, ids);
  json entries = json::array();
  for (const auto& e : cr.entries)
    entries.push_back({{"id", e.id},
                       {"pairing", e.pairing},
                       {"theta_integral", e.theta_integral},
                       {"slack", e.slack},
                       {"tol", e.tol},
                       {"ok", e.ok}});
  r.results["metric"] = mname;
  r.results["theta"] = theta_desc;
  r.results["pairings"] = pairs;
  r.results["certificate"] = {{"entries", entries}, {"min_slack", cr.min_slack}, {"worst_witness", cr.worst_witness}};
  r.stages.push_back(stage_json("certificate", status(cr.passed),
                                {{"min_slack", cr.min_slack}, {"tests", int(tests.size())}},
                                "worst witness " + cr.worst_witness));
  if (cr.passed) set_outcome(r, Outcome::pass, "certificate");
  else set_outcome(r, Outcome::fail, "certificate", "curvature bound scal >= theta");

  if (ctx.plots && g.dim() == 2) {
    plot_heatmap(ctx, r, "scal_F_mu.svg", vf.F_mu, 0, "zero-order coefficient F_mu", true);
    plot_heatmap(ctx, r, "scal_V1.svg", vf.V, 0, "V^1", true);
  }
  return r;
}

Eigen::MatrixXd pinched(int n, double delta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N;
  Eigen::MatrixXd X(n, n);
  for (int i = 0; i < n * n; ++i) X(i % n, i / n) = N(rng);
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(X).householderQ();
  Eigen::VectorXd lam(n);
  for (int i = 0; i < n; ++i) {
    const double s = U(rng) < 0.3 ? (U(rng) < 0.5 ? 0.0 : 1.0) : U(rng);
    lam(i) = std::pow(1 - delta + 2 * delta * s, 2);
  }
  const Eigen::MatrixXd g = Q * lam.asDiagonal() * Q.transpose();
  return 0.5 * (g + g.transpose());
}

Eigen::MatrixXd sym_power(const Eigen::MatrixXd& g, double p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  return es.eigenvectors() * es.eigenvalues().array().pow(p).matrix().asDiagonal() * es.eigenvectors().transpose();
}

ScenarioResult clifford_bounds(const Context& ctx) {
  ScenarioResult r;
  const auto dims = get<std::vector<int>>(ctx.cfg, "dims", {2, 4, 6});
  const int trials = get(ctx.cfg, "trials", 1000), linalg_trials = get(ctx.cfg, "linalg_trials", 1000);
  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  bool bound_ok = true, eq_ok = true;
  json per_dim = json::array();
  for (int n : dims) {
    const CliffordModule cm = build_module(n);
    const double floor = -n * (n - 1) / 4.0;
    double min_gap = std::numeric_limits<double>::infinity();
    int below = 0, attained = 0;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> mu(n);
      for (double& v : mu) v = U(rng);
      const double lam = spectrum(curvature_endo(cm, mu))(0);
      below += lam < floor - 1e-12;
      attained += lam <= floor + 1e-10;
      min_gap = std::min(min_gap, lam - floor);
    }
    const CurvatureEndo ones = curvature_endo(cm, std::vector<double>(n, 1.0));
    const double eq_gap = spectrum(ones)(0) - floor;
    const EqualitySpace es = equality_space(cm, ones);
    bound_ok = bound_ok && below == 0;
    eq_ok = eq_ok && attained == 0 && std::abs(eq_gap) <= 1e-10 && es.dimension > 0;
    per_dim.push_back({{"n", n},
                       {"module_dim", cm.dim},
                       {"relation_defect", clifford_relation_defect(cm)},
                       {"floor", floor},
                       {"min_gap_random", min_gap},
                       {"violations", below},
                       {"attained_by_random", attained},
                       {"equality_gap_all_ones", eq_gap},
                       {"equality_space_dim", es.dimension}});
  }
  int violations = 0, hyp_fail = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int t = 0; t < linalg_trials; ++t) {
    const int n = t % 2 == 0 ? 2 : 4;
    const double delta = std::max(1e-6, 0.5 * U(rng));
    const Eigen::MatrixXd g1 = pinched(n, delta, rng), g2 = pinched(n, delta, rng);
    std::normal_distribution<double> N;
    Eigen::MatrixXd X(n, n);
    for (int i = 0; i < n * n; ++i) X(i % n, i / n) = N(rng);
    Eigen::MatrixXd O = Eigen::HouseholderQR<Eigen::MatrixXd>(X).householderQ();
    if (U(rng) < 0.5) O.col(0) *= -1;
    const LinalgVerdict v = linalg_bound_check(g1, g2, sym_power(g2, -0.5) * O * sym_power(g1, 0.5), delta);
    if (!v.hypotheses_ok) {
      ++hyp_fail;
      continue;
    }
    violations += !v.passed;
    min_ratio = std::min(min_ratio, v.slack / v.bound);
  }
  r.results["curvature_endomorphism"] = per_dim;
  r.results["linalg"] = {{"trials", linalg_trials},
                         {"violations", violations},
                         {"hypothesis_failures", hyp_fail},
                         {"min_slack_over_bound", min_ratio}};
  r.stages.push_back(stage_json("lower_bound", status(bound_ok), {{"trials_per_dim", trials}}));
  r.stages.push_back(stage_json("equality_case", status(eq_ok), json::object()));
  r.stages.push_back(stage_json("linalg", status(violations == 0 && hyp_fail == 0), {{"violations", violations}}));
  if (!bound_ok) set_outcome(r, Outcome::fail, "lower_bound", "curvature endomorphism bound");
  else if (!eq_ok) set_outcome(r, Outcome::fail, "equality_case", "equality case of the curvature endomorphism bound");
  else if (violations || hyp_fail) set_outcome(r, Outcome::fail, "linalg", "pinched-metric linear algebra bound");
  else set_outcome(r, Outcome::pass, "linalg");
  return r;
}

ScenarioResult lichnerowicz(const Context& ctx) {
  ScenarioResult r;
  const CliffordModule cm = build_module(2);
  const std::string geometry = get<std::string>(ctx.cfg, "geometry", "torus");
  if (geometry == "torus") {
    const int res = get(ctx.cfg, "res", 128), pairs = get(ctx.cfg, "pairs", 20);
    const double tol = get(ctx.cfg, "tol", 1e-4);
    const std::string mname = get<std::string>(ctx.cfg, "metric", "flat");
    const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, res, true);
    const MetricField m = metric_from_function(g, builtin_metric(mname).g);
    const ChartDirac D = assemble_chart(m, cm, trivial_twist(g));
    double worst = 0.0;
    json rows = json::array();
    for (int t = 0; t < pairs; ++t) {
      const SpinorField a = random_torus_section(g, D.d, ctx.seed * 1000 + 2 * t),
                        b = random_torus_section(g, D.d, ctx.seed * 1000 + 2 * t + 1);
      const LichnerowiczTerms lt = lichnerowicz_residual({&D}, {ScalarField(g, 1, 1.0)}, {a}, {b});
      worst = std::max(worst, lt.residual);
      rows.push_back({{"dirac", std::abs(lt.dirac)},
                      {"gradient", std::abs(lt.gradient)},
                      {"scalar", std::abs(lt.scalar)},
                      {"twist", std::abs(lt.twist)},
                      {"residual", lt.residual}});
    }
    r.results = {{"geometry", "torus"}, {"metric", mname}, {"h", 1.0 / res}, {"pairs", rows}};
    // the tolerance is stated for the flat torus
    const bool ok = mname != "flat" || worst <= tol;
    r.stages.push_back(stage_json("residual", status(ok), {{"max_residual", worst}, {"tol", tol}}));
    set_outcome(r, ok ? Outcome::pass : Outcome::fail, "residual", ok ? "" : "integral Lichnerowicz identity");
    return r;
  }
  if (geometry != "sphere") throw InputError("lichnerowicz: geometry must be torus or sphere");
  const auto resolutions = get<std::vector<int>>(ctx.cfg, "resolutions", {33, 65, 129});
  const double angle = get(ctx.cfg, "twist_angle", 0.5);
  const int pairs = get(ctx.cfg, "pairs", 3);
  const SphereBundle bundle(cm, Eigen::Matrix3d(Eigen::AngleAxisd(angle, Eigen::Vector3d(1, 0.3, 0).normalized())));
  std::vector<double> res_worst;
  json rows = json::array();
  Series s{"max residual", {}};
  for (int res : resolutions) {
    const ChartGrid g = atlas::chart_grid(res);
    const MetricField m = atlas::round_metric(g);
    const ChartDirac Nc = assemble_chart(m, cm, bundle.twist(atlas::N, g));
    const ChartDirac Sc = assemble_chart(m, cm, bundle.twist(atlas::S, g));
    const ScalarField pou = atlas::pou_field(g);
    double worst = 0.0;
    for (int t = 0; t < pairs; ++t) {
      const auto a = random_sphere_section(bundle, g, ctx.seed * 100 + 2 * t + 1),
                 b = random_sphere_section(bundle, g, ctx.seed * 100 + 2 * t + 2);
      worst = std::max(worst, lichnerowicz_residual({&Nc, &Sc}, {pou, pou}, a, b).residual);
    }
    res_worst.push_back(worst);
    rows.push_back({{"res", res}, {"h", g.spacing(0)}, {"max_residual", worst}});
    s.points.emplace_back(g.spacing(0), worst);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < res_worst.size(); ++i) monotone = monotone && res_worst[i] < res_worst[i - 1];
  r.results = {{"geometry", "sphere"}, {"twist_angle", angle}, {"grids", rows}};
  r.stages.push_back(stage_json("monotone_refinement", status(monotone), {{"grids", int(resolutions.size())}}));
  set_outcome(r, monotone ? Outcome::pass : Outcome::fail, "monotone_refinement", monotone ? "" : "integral Lichnerowicz identity");
  plot_lines(ctx, r, "lichnerowicz_residuals.svg", {s}, "integral Lichnerowicz residual", "h", "residual", true);
  return r;
}

std::vector<double> torus_symbol(int N, int count) {
  const double h = 1.0 / N;
  std::vector<double> all;
  for (int k1 = 0; k1 < N; ++k1)
    for (int k2 = 0; k2 < N; ++k2) {
      const double a = std::sin(2 * std::numbers::pi * k1 / N) / h, b = std::sin(2 * std::numbers::pi * k2 / N) / h;
      all.push_back(a * a + b * b);
    }
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double v : all)
    if (out.empty() || v - out.back() > 1e-7 * std::max(1.0, v)) out.push_back(v);
  out.resize(std::min<std::size_t>(out.size(), count));
  return out;
}

ScenarioResult spectrum_scenario(const Context& ctx) {
  ScenarioResult r;
  const CliffordModule cm = build_module(2);
  const std::string geometry = get<std::string>(ctx.cfg, "geometry", "torus");
  if (geometry == "torus") {
    const int res = get(ctx.cfg, "res", 65), count = get(ctx.cfg, "count", 10);
    const std::string mname = get<std::string>(ctx.cfg, "metric", "flat");
    const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, res, true);
    const MetricField m = metric_from_function(g, builtin_metric(mname).g);
    const DiracSystem sys = assemble_torus(m, cm, trivial_twist(g));
    const Eigen::VectorXd ev = dirac_squared_spectrum(sys, count, 1.0, 160, ctx.seed);
    const KernelReport kr = kernel_and_constancy(sys, 2, 1e-6, 1e-10, 300, ctx.seed);
    json vals = json::array();
    for (int i = 0; i < ev.size(); ++i) vals.push_back(ev(i));
    r.results = {{"geometry", "torus"}, {"metric", mname}, {"res", res}, {"distinct_eigenvalues", vals}};
    bool oracle_ok = true;
    Series s_ev{"computed", {}}, s_or{"discrete Fourier symbol", {}};
    for (int i = 0; i < ev.size(); ++i) s_ev.points.emplace_back(i, ev(i));
    if (mname == "flat") {
      const std::vector<double> sym = torus_symbol(res, count);
      json o = json::array();
      double worst = 0.0;
      for (std::size_t i = 0; i < sym.size() && i < std::size_t(ev.size()); ++i) {
        o.push_back(sym[i]);
        worst = std::max(worst, std::abs(ev(i) - sym[i]) / std::max(1.0, sym[i]));
        s_or.points.emplace_back(double(i), sym[i]);
      }
      oracle_ok = worst <= 1e-6 && sym.size() == std::size_t(ev.size());
      r.results["fourier_symbol"] = o;
      r.stages.push_back(stage_json("fourier_oracle", status(oracle_ok), {{"max_relative_error", worst}}));
    }
    const bool kernel_ok = mname != "flat" || (kr.eigenvalues(0) <= 1e-8 && kr.eigenvalues(1) <= 1e-8 &&
                                               kr.norm_variation[0] <= 1e-6 && kr.norm_variation[1] <= 1e-6);
    r.results["kernel"] = {{"eigenvalues", {kr.eigenvalues(0), kr.eigenvalues(1)}},
                           {"norm_variation", kr.norm_variation}};
    r.stages.push_back(stage_json("kernel_constancy", status(kernel_ok),
                                  {{"lambda_max", std::max(kr.eigenvalues(0), kr.eigenvalues(1))}},
                                  res % 2 == 0 ? "even resolution: doubler modes join the kernel" : ""));
    set_outcome(r, oracle_ok && kernel_ok ? Outcome::pass : Outcome::fail,
                oracle_ok ? "kernel_constancy" : "fourier_oracle",
                oracle_ok && kernel_ok ? "" : (oracle_ok ? "harmonic spinors of constant norm" : "discrete spectrum"));
    plot_lines(ctx, r, "spectrum.svg", mname == "flat" ? std::vector<Series>{s_ev, s_or} : std::vector<Series>{s_ev},
               "distinct eigenvalues of D*D", "index", "eigenvalue", false);
    return r;
  }
  if (geometry != "sphere") throw InputError("spectrum: geometry must be torus or sphere");
  const auto resolutions = get<std::vector<int>>(ctx.cfg, "resolutions", {33, 65, 129});
  const std::string twist = get<std::string>(ctx.cfg, "twist", "rotation");
  std::optional<Eigen::Matrix3d> R;
  if (twist == "rotation")
    R = Eigen::Matrix3d(
        Eigen::AngleAxisd(get(ctx.cfg, "twist_angle", 0.7), Eigen::Vector3d(1, 0.3, 0).normalized()));
  else if (twist != "none") throw InputError("spectrum: twist must be rotation or none");
  const int count = get(ctx.cfg, "count", 2);
  const SphereBundle bundle(cm, R);
  json rows = json::array();
  std::vector<double> lam, var;
  Series s_l{"largest kernel eigenvalue", {}}, s_v{"norm variation", {}};
  for (int res : resolutions) {
    const DiracSystem sys = assemble_sphere(res, bundle);
    const KernelReport kr = kernel_and_constancy(sys, count, 1e-6, 1e-10, 300, ctx.seed);
    double l = 0.0, v = 0.0;
    for (int i = 0; i < std::min<int>(2, count); ++i) {
      l = std::max(l, std::abs(kr.eigenvalues(i)));
      v = std::max(v, kr.norm_variation[i]);
    }
    json evs = json::array();
    for (int i = 0; i < kr.eigenvalues.size(); ++i) evs.push_back(kr.eigenvalues(i));
    rows.push_back({{"res", res},
                    {"gluing_residual", sys.gluing_residual},
                    {"eigenvalues", evs},
                    {"norm_variation", kr.norm_variation}});
    lam.push_back(l);
    var.push_back(v);
    const double h = 2 * atlas::half_width / (res - 1);
    s_l.points.emplace_back(h, l);
    s_v.points.emplace_back(h, v);
  }
  r.results = {{"geometry", "sphere"}, {"twist", twist}, {"grids", rows}};
  bool ok = R.has_value();
  for (std::size_t i = 1; i < lam.size(); ++i) ok = ok && lam[i - 1] >= 1.5 * lam[i] && var[i - 1] >= 1.5 * var[i];
  r.stages.push_back(stage_json("kernel_refinement", status(ok), {{"grids", int(resolutions.size())}},
                                R ? "" : "untwisted sphere has no harmonic spinors; reported only"));
  if (!R) set_outcome(r, Outcome::refused, "kernel_refinement", "non-zero index (twist bundle)");
  else set_outcome(r, ok ? Outcome::pass : Outcome::fail, "kernel_refinement", ok ? "" : "harmonic spinors of constant norm");
  plot_lines(ctx, r, "sphere_kernel.svg", {s_l, s_v}, "twisted sphere kernel under refinement", "h", "value", true);
  return r;
}

ScenarioResult quasiregular_scenario(const Context& ctx) {
  ScenarioResult r;
  const std::string map = get<std::string>(ctx.cfg, "map", "linear");
  const int res = get(ctx.cfg, "res", 65);
  const MetricFn flat = builtin_metric("flat").g;
  std::vector<MapField> pieces;
  if (map == "linear") {
    const auto a = get<std::vector<double>>(ctx.cfg, "matrix", {1.3, 0.4, -0.2, 0.7});
    if (a.size() != 4) throw InputError("quasiregular: matrix must have 4 entries (row-major 2x2)");
    Eigen::Matrix2d A;
    A << a[0], a[1], a[2], a[3];
    const MetricField m = flat_metric(ChartGrid::cube(2, -1.0, 1.0, res));
    MapOptions opt;
    opt.analytic_jac = [A](const Eigen::VectorXd&) -> Eigen::MatrixXd { return A; };
    pieces.push_back(sample_map(m, flat, [A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; }, opt));
    r.results["brute_force_K"] = A.determinant() > 0 ? brute_force_K(A) : std::numeric_limits<double>::infinity();
  } else if (map == "z2-annulus") {
    const ChartGrid g = ChartGrid::cube(2, -1.0, 1.0, res);
    MapOptions opt;
    opt.region = sample(g, [](auto x) {
      const double q = std::hypot(x[0], x[1]);
      return q >= 0.5 && q <= 1.0 ? 1.0 : 0.0;
    });
    pieces.push_back(sample_map(
        flat_metric(g), flat,
        [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
          return Eigen::Vector2d(x(0) * x(0) - x(1) * x(1), 2 * x(0) * x(1));
        },
        opt));
  } else if (map == "file") {
    const LrgfFile mf = read_lrgf(resolve(ctx, get<std::string>(ctx.cfg, "map_file", "")));
    const MetricField src = ctx.cfg.contains("metric_file")
                                ? load_metric_file(resolve(ctx, ctx.cfg["metric_file"].get<std::string>()))
                                : flat_metric(mf.field.grid);
    if (!(src.grid == mf.field.grid)) throw InputError("quasiregular: map and metric grids differ");
    const std::string target = get<std::string>(ctx.cfg, "target_metric", "flat");
    pieces.push_back(make_map_field(src, builtin_metric(target).g, mf.field));
  } else {
    // sphere maps on both stereographic charts
    const RigidityInput in = sphere_rigidity_input(res, builtin_sphere_map(map, get(ctx.cfg, "angle", 0.5)), map == "fold");
    pieces = in.pieces;
  }
  std::vector<const MapField*> ptr;
  for (const auto& p : pieces) ptr.push_back(&p);
  const QuasiregularityReport q = quasiregularity(ptr, get(ctx.cfg, "tol_measure", 1e-2));
  r.results["map"] = map;
  r.results["K_min"] = q.K_min;
  r.results["positive_fraction"] = q.positive_fraction;
  r.results["negative_fraction"] = q.negative_fraction;
  r.results["degenerate_fraction"] = q.degenerate_fraction;
  r.results["verdict"] = q.verdict;
  r.stages.push_back(stage_json("quasiregular", status(q.quasiregular), {{"K_min", q.K_min}}, q.verdict));
  if (q.quasiregular) set_outcome(r, Outcome::pass, "quasiregular");
  else set_outcome(r, Outcome::fail, "quasiregular", "orientation: det df > 0 a.e.");
  plot_heatmap(ctx, r, "det_sign.svg", det_sign_field(pieces[0]), 0, "sign of det df (chart 0)", true);
  return r;
}

ScenarioResult distance_scenario(const Context& ctx) {
  ScenarioResult r;
  std::string mname = "file";
  const MetricField m = config_metric(ctx, "round", get(ctx.cfg, "res", 257), &mname);
  const ChartGrid& g = m.grid;
  PathOptions po;
  po.directions = get(ctx.cfg, "directions", 16);
  po.refine = get(ctx.cfg, "refine", true);
  std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> pairs;
  std::mt19937_64 rng(ctx.seed);
  if (ctx.cfg.contains("pairs")) {
    for (const auto& p : ctx.cfg["pairs"]) {
      const auto a = p.at(0).get<std::vector<double>>(), b = p.at(1).get<std::vector<double>>();
      if (a.size() != 2 || b.size() != 2) throw InputError("distance: each pair is [[x, y], [x, y]]");
      pairs.emplace_back(Eigen::Vector2d(a[0], a[1]), Eigen::Vector2d(b[0], b[1]));
    }
  } else {
    const double span = get(ctx.cfg, "sample_radius", mname == "round" ? 0.7 : 0.8);
    std::uniform_real_distribution<double> U(-span, span);
    for (int i = 0; i < get(ctx.cfg, "random_pairs", 10); ++i) {
      const Eigen::Vector2d a(U(rng), U(rng)), b(U(rng), U(rng));
      pairs.emplace_back(a, b);
    }
  }
  const double tol = get(ctx.cfg, "tol", 0.01);
  json rows = json::array();
  double worst = 0.0;
  for (const auto& [a, b] : pairs) {
    const PathResult p = path_distance(m, a, b, po);
    json row = {{"x", {a(0), a(1)}}, {"y", {b(0), b(1)}}, {"graph_length", p.graph_length}, {"length", p.length}};
    if (mname == "round") {
      const double exact = std::acos(std::clamp(
          atlas::to_sphere(atlas::N, a(0), a(1)).dot(atlas::to_sphere(atlas::N, b(0), b(1))), -1.0, 1.0));
      row["great_circle"] = exact;
      if (exact > 0) worst = std::max(worst, std::abs(p.length - exact) / exact);
    }
    rows.push_back(row);
  }
  r.results["metric"] = mname;
  r.results["pairs"] = rows;
  if (mname == "round")
    r.stages.push_back(stage_json("great_circles", status(worst <= tol), {{"max_relative_error", worst}, {"tol", tol}}));

  const int triples = get(ctx.cfg, "triangle_triples", 200);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  int violations = 0;
  for (int t = 0; t < triples; ++t) {
    const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
    const std::vector<double> da = graph_distance_field(m, a, po.directions), db = graph_distance_field(m, b, po.directions);
    violations += da[c] > da[b] + db[c];
  }
  r.results["triangle"] = {{"triples", triples}, {"violations", violations}};
  r.stages.push_back(stage_json("triangle_inequality", status(violations == 0), {{"violations", violations}}));
  const bool ok = violations == 0 && (mname != "round" || worst <= tol);
  set_outcome(r, ok ? Outcome::pass : Outcome::fail, violations ? "triangle_inequality" : "great_circles",
              ok ? "" : (violations ? "metric triangle inequality" : "length metric of the continuous metric"));
  if (ctx.plots && !pairs.empty()) {
    const double x0[2] = {pairs[0].first(0), pairs[0].first(1)};
    const std::vector<double> d = graph_distance_field(m, g.nearest(x0), po.directions);
    plot_heatmap(ctx, r, "distance_field.svg", ScalarField(g, 1, d), 0, "graph distance from the first point");
  }
  return r;
}

ScenarioResult isometry_scenario(const Context& ctx) {
  ScenarioResult r;
  const std::string map = get<std::string>(ctx.cfg, "map", "rotation");
  const int res = get(ctx.cfg, "res", 129);
  const RigidityInput in =
      sphere_rigidity_input(res, builtin_sphere_map(map, get(ctx.cfg, "angle", 0.5)), map == "fold");
  std::vector<const MapField*> pieces;
  std::vector<const MetricField*> targets;
  for (std::size_t i = 0; i < in.pieces.size(); ++i) {
    pieces.push_back(&in.pieces[i]);
    targets.push_back(&in.targets[i]);
  }
  const double iso_tol = get(ctx.cfg, "iso_tol", 1e-2), tol_measure = get(ctx.cfg, "tol_measure", 1e-2);
  const IsometryReport iso = isometry_ae_check(pieces, iso_tol, tol_measure);
  const LipschitzProfile lp = lipschitz_profile(pieces);
  const MetricIsometryVerdict mv = metric_isometry_verdict(pieces, targets, get(ctx.cfg, "distance_pairs", 12), ctx.seed,
                                                           get(ctx.cfg, "distance_tol", 0.015), iso_tol, tol_measure);
  r.results = {{"map", map},
               {"lipschitz_ess_sup", lp.ess_sup},
               {"isometric_fraction", iso.isometric_fraction},
               {"positive_fraction", iso.positive_fraction},
               {"negative_fraction", iso.negative_fraction},
               {"orientation_flipped", iso.flipped},
               {"area_nonincreasing_fraction", area_nonincreasing_check(pieces)},
               {"max_rel_distance_discrepancy", mv.max_rel_discrepancy},
               {"distance_pairs", mv.pairs}};
  r.stages.push_back(stage_json("isometry_ae", status(iso.isometric), {{"isometric_fraction", iso.isometric_fraction}}));
  r.stages.push_back(stage_json("orientation", status(iso.orientation_ok),
                                {{"positive_fraction", iso.positive_fraction}, {"negative_fraction", iso.negative_fraction}},
                                iso.verdict));
  r.stages.push_back(stage_json("metric_isometry", status(mv.passed),
                                {{"max_rel_discrepancy", mv.max_rel_discrepancy}, {"tolerance", mv.tolerance}},
                                mv.stage1_reason));
  if (!iso.isometric) set_outcome(r, Outcome::fail, "isometry_ae", "isometry a.e.");
  else if (!iso.orientation_ok) set_outcome(r, Outcome::fail, "orientation", "orientation-preserving isometry a.e.");
  else if (!mv.passed) set_outcome(r, Outcome::fail, "metric_isometry", "metric isometry");
  else set_outcome(r, Outcome::pass, "metric_isometry");
  if (ctx.plots) {
    const Field<double> sv = singular_value_field(in.pieces[0]);
    plot_heatmap(ctx, r, "singular_value_max.svg", sv, 0, "largest metric singular value (chart N)");
    plot_heatmap(ctx, r, "singular_value_min.svg", sv, 1, "smallest metric singular value (chart N)");
    plot_heatmap(ctx, r, "det_sign.svg", det_sign_field(in.pieces[0]), 0, "sign of det df (chart N)", true);
  }
  return r;
}

ScenarioResult double_scenario(const Context& ctx) {
  ScenarioResult r;
  const std::string mname = get<std::string>(ctx.cfg, "metric", "round");
  const std::string fname = get<std::string>(ctx.cfg, "disk_map", "stereographic");
  const int res = get(ctx.cfg, "res", 129);
  const BuiltinMetric b = builtin_metric(mname);
  const std::vector<double> H = mean_curvature(b.g, b.dg, Eigen::Vector2d::Zero(), 1.0, 64);
  const double hmin = *std::min_element(H.begin(), H.end());
  r.stages.push_back(stage_json("mean_curvature", status(hmin >= -1e-6), {{"min_H", hmin}}));
  const DoubledMetric dm = double_metric(b.g, res);
  r.stages.push_back(stage_json("double", "pass", {{"c1_defect", dm.c1_defect}, {"boundary_cross", dm.boundary_cross}}));
  json files = json::array();
  for (int c = 0; c < 2; ++c) {
    const std::string name = std::string("doubled_metric_") + (c == 0 ? "A" : "B") + ".lrgf";
    const Field<double> pk = packed_metric(dm.chart[c]), dpk = packed_metric_derivatives(dm.chart[c]);
    write_lrgf((ctx.out_dir / name).string(), pk, &dpk);
    r.files.push_back(name);
    files.push_back(name);
  }
  json fold_info = json::object();
  bool fold_ok = true;
  try {
    const FoldedMap fm = fold_map(dm, builtin_disk_map(fname));
    for (int c = 0; c < 2; ++c) {
      const std::string name = std::string("folded_map_") + (c == 0 ? "A" : "B") + ".lrgf";
      write_lrgf((ctx.out_dir / name).string(), fm.piece[c].values);
      r.files.push_back(name);
      files.push_back(name);
    }
    fold_info = {{"interface_jump", fm.interface_jump}, {"degree", mapping_degree(fm.atlas_map)}};
    r.stages.push_back(stage_json("fold", "pass", {{"interface_jump", fm.interface_jump}}));
  } catch (const InputError& e) {
    fold_ok = false;
    r.stages.push_back(stage_json("fold", "fail", json::object(), e.what()));
  }
  const RelativeDegree rd = relative_degree(builtin_disk_map(fname));
  r.stages.push_back(stage_json("relative_degree", status(rd.degree != 0), {{"degree", rd.degree}, {"raw", rd.raw}}));

  json manifest = {{"schema", "double_manifest_v1"},
                   {"metric", mname},
                   {"disk_map", fname},
                   {"grid", {{"res", res}, {"lo", dm.grid.lo()}, {"hi", dm.grid.hi()}}},
                   {"charts",
                    {{{"name", "A"}, {"first_copy", "|x| <= 1"}, {"metric", files[0]}},
                     {{"name", "B"}, {"first_copy", "|y| >= 1"}, {"metric", files[1]}}}},
                   {"transition", "w = 1/z"},
                   {"second_copy_attachment", "inversion x -> x/|x|^2"},
                   {"interface",
                    {{"circle", "|x| = 1"},
                     {"c1_defect", dm.c1_defect},
                     {"boundary_cross", dm.boundary_cross},
                     {"min_mean_curvature", hmin}}},
                   {"fold", fold_info},
                   {"relative_degree", {{"degree", rd.degree}, {"raw", rd.raw}}},
                   {"files", files}};
  {
    std::ofstream os(ctx.out_dir / "double_manifest.json");
    os << manifest.dump(2) << "\n";
    r.files.push_back("double_manifest.json");
  }
  r.results = manifest;
  if (hmin < -1e-6) set_outcome(r, Outcome::refused, "mean_curvature", "non-negative boundary mean curvature");
  else if (!fold_ok) set_outcome(r, Outcome::refused, "fold", "boundary mapped into the lower hemisphere");
  else if (rd.degree == 0) set_outcome(r, Outcome::refused, "relative_degree", "non-zero relative degree");
  else set_outcome(r, Outcome::pass, "relative_degree");
  if (ctx.plots) {
    Field<double> g00(dm.grid, 1);
    for (std::size_t s = 0; s < dm.grid.size(); ++s) g00.values[s] = dm.chart[0].at(s)(0, 0);
    plot_heatmap(ctx, r, "doubled_g11.svg", g00, 0, "g_11 of the double (chart A)");
  }
  return r;
}

RigidityInput torus_input(int res, double side, const SphereValuedFn& f) {
  const ChartGrid g = ChartGrid::cube(2, 0.0, side, res, true);
  RigidityInput in;
  in.charts.push_back(flat_metric(g));
  in.tests_region.push_back(ScalarField(g, 1, 1.0));
  Field<double> vals(g, 2);
  int target = atlas::N;
  std::vector<Eigen::Vector3d> img(g.size());
  for (std::size_t s = 0; s < g.size(); ++s) {
    const auto x = g.point(s);
    img[s] = f(0, {x[0], x[1]});
    if (img[s].z() < -1 + 1e-9) target = atlas::S;
  }
  for (std::size_t s = 0; s < g.size(); ++s) {
    const auto y = atlas::from_sphere(target, img[s]);
    vals(s, 0) = y[0];
    vals(s, 1) = y[1];
  }
  in.pieces.push_back(make_map_field(in.charts[0], atlas::round_metric_fn(), vals));
  in.targets.push_back(atlas::round_metric(g));
  in.atlas_map = sample_atlas_map({g}, {ScalarField(g, 1, 1.0)}, f);
  return in;
}

ScenarioResult llarull(const Context& ctx) {
  ScenarioResult r;
  const std::string geometry = get<std::string>(ctx.cfg, "geometry", "sphere");
  RigidityOptions opt;
  opt.seed = ctx.seed;
  opt.lip_tol = get(ctx.cfg, "lip_tol", opt.lip_tol);
  opt.iso_tol = get(ctx.cfg, "iso_tol", opt.iso_tol);
  opt.tol_measure = get(ctx.cfg, "tol_measure", opt.tol_measure);
  opt.distance_tol = get(ctx.cfg, "distance_tol", opt.distance_tol);
  opt.distance_pairs = get(ctx.cfg, "distance_pairs", opt.distance_pairs);
  PipelineReport rep;
  std::optional<RigidityInput> in;
  if (geometry == "sphere") {
    const std::string map = get<std::string>(ctx.cfg, "map", "identity");
    in = sphere_rigidity_input(get(ctx.cfg, "res", 97), builtin_sphere_map(map, get(ctx.cfg, "angle", 0.5)),
                               map == "fold");
    rep = rigidity_pipeline(*in, opt);
    r.results["map"] = map;
  } else if (geometry == "torus") {
    const double side = get(ctx.cfg, "side", 2.0);
    const std::string map = get<std::string>(ctx.cfg, "map", "constant");
    opt.bump_radius = std::min(opt.bump_radius, side / 8);
    in = torus_input(get(ctx.cfg, "res", 32), side, builtin_sphere_map(map));
    rep = rigidity_pipeline(*in, opt);
    r.results["map"] = map;
    r.results["diameter"] = side / std::sqrt(2.0);
  } else if (geometry == "disk") {
    const std::string mname = get<std::string>(ctx.cfg, "metric", "round");
    const std::string fname = get<std::string>(ctx.cfg, "disk_map", "stereographic");
    const BuiltinMetric b = builtin_metric(mname);
    rep = disk_pipeline(b.g, b.dg, builtin_disk_map(fname), get(ctx.cfg, "res", 97), opt);
    r.results["metric"] = mname;
    r.results["disk_map"] = fname;
  } else {
    throw InputError("llarull: geometry must be sphere, torus or disk");
  }
  r.results["geometry"] = geometry;
  for (const auto& s : rep.stages) r.stages.push_back(stage_json(s));
  const Outcome o = rep.verdict == Verdict::pass ? Outcome::pass
                    : rep.verdict == Verdict::fail ? Outcome::fail
                                                   : Outcome::refused;
  set_outcome(r, o, rep.stage, rep.hypothesis);
  if (ctx.plots && in) {
    plot_heatmap(ctx, r, "det_sign.svg", det_sign_field(in->pieces[0]), 0, "sign of det df (chart 0)", true);
    plot_heatmap(ctx, r, "singular_value_max.svg", singular_value_field(in->pieces[0]), 0,
                 "largest metric singular value (chart 0)");
  }
  return r;
}

ScenarioResult index_scenario(const Context& ctx) {
  ScenarioResult r;
  const std::string map = get<std::string>(ctx.cfg, "map", "identity");
  const int res = get(ctx.cfg, "res", 129);
  const double max_distance = get(ctx.cfg, "max_distance", 0.02);
  const AtlasMap am = sphere_atlas_map(res, builtin_sphere_map(map, get(ctx.cfg, "angle", 0.5)), map == "fold");
  const IndexResult ir = index_topological(am, 0.1);
  r.results = {{"map", map},
               {"index", ir.index},
               {"degree", ir.degree},
               {"raw_degree", ir.raw_degree},
               {"distance_to_integer", ir.distance_to_integer}};
  const bool near = ir.distance_to_integer < max_distance;
  r.stages.push_back(stage_json("integrality", status(near),
                                {{"distance_to_integer", ir.distance_to_integer}, {"max_distance", max_distance}}));
  bool ok = near;
  if (ctx.cfg.contains("expect")) {
    const int expect = ctx.cfg["expect"].get<int>();
    ok = ok && ir.index == expect;
    r.stages.push_back(stage_json("expected_index", status(ir.index == expect), {{"expected", expect}, {"index", ir.index}}));
  }
  set_outcome(r, ok ? Outcome::pass : Outcome::fail, ok ? "integrality" : (near ? "expected_index" : "integrality"),
              ok ? "" : (near ? "index equals twice the degree" : "integral degree"));
  if (ctx.plots) {
    const auto& p = am.pieces[0];
    Field<double> jac(p.grid, 1);
    for (std::size_t s = 0; s < p.grid.size(); ++s) {
      Eigen::Vector3d v, d1, d2;
      for (int a = 0; a < 3; ++a) {
        v(a) = p.p(s, a);
        d1(a) = p.dp(s, a * 2);
        d2(a) = p.dp(s, a * 2 + 1);
      }
      jac.values[s] = p.weight.values[s] * v.dot(d1.cross(d2));
    }
    plot_heatmap(ctx, r, "degree_density.svg", jac, 0, "weighted Jacobian density (chart N)", true);
  }
  return r;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"mollify-demo", "scal-pair", "clifford-bounds", "lichnerowicz",
                                              "spectrum",     "quasiregular", "distance",      "isometry",
                                              "double",       "llarull",  "index"};
  return names;
}

std::string scenario_module(const std::string& s) {
  static const std::map<std::string, std::string> m{
      {"mollify-demo", "chart_grid"}, {"scal-pair", "scal_dist"}, {"clifford-bounds", "clifford"},
      {"lichnerowicz", "dirac"},      {"spectrum", "dirac"},      {"quasiregular", "maps"},
      {"distance", "maps"},           {"isometry", "maps"},       {"double", "doubling"},
      {"llarull", "pipeline"},        {"index", "dirac"}};
  const auto it = m.find(s);
  return it == m.end() ? "cli" : it->second;
}

ScenarioResult run_scenario(const Context& ctx) {
  const std::string& s = ctx.scenario;
  if (s == "mollify-demo") return mollify_demo(ctx);
  if (s == "scal-pair") return scal_pair(ctx);
  if (s == "clifford-bounds") return clifford_bounds(ctx);
  if (s == "lichnerowicz") return lichnerowicz(ctx);
  if (s == "spectrum") return spectrum_scenario(ctx);
  if (s == "quasiregular") return quasiregular_scenario(ctx);
  if (s == "distance") return distance_scenario(ctx);
  if (s == "isometry") return isometry_scenario(ctx);
  if (s == "double") return double_scenario(ctx);
  if (s == "llarull") return llarull(ctx);
  if (s == "index") return index_scenario(ctx);
  throw InputError("unknown scenario '" + s + "'");
}

}  // namespace cli
