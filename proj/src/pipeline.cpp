#include "lrg/pipeline.hpp"

#include <cmath>
#include <sstream>

namespace lrg {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    default: return "REFUSED";
  }
}

const Stage* PipelineReport::find(const std::string& name) const {
  for (const auto& s : stages)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<ScalarField> bump_tests(const ChartGrid& grid, const ScalarField& region, double radius, int per_axis,
                                    std::vector<std::string>* ids, const std::string& prefix) {
  const int n = grid.dim();
  std::vector<ScalarField> out;
  std::vector<int> idx(n, 0);
  const int total = static_cast<int>(std::pow(per_axis, n));
  for (int t = 0; t < total; ++t) {
    std::vector<double> c(n);
    int rem = t;
    bool inside = true;
    for (int a = 0; a < n; ++a) {
      const int i = rem % per_axis;
      rem /= per_axis;
      c[a] = grid.lo()[a] + (grid.hi()[a] - grid.lo()[a]) * (i + 0.5) / per_axis;
      if (!grid.periodic()[a]) {
        const double margin = radius + 3 * grid.spacing(a);
        inside = inside && c[a] - margin >= grid.lo()[a] && c[a] + margin <= grid.hi()[a];
      }
    }
    if (!inside || region.values[grid.nearest(c)] <= 0.0) continue;
    ScalarField u = sample(grid, [&](std::span<const double> x) {
      double q = 0.0;
      for (int a = 0; a < n; ++a) {
        double dx = x[a] - c[a];
        if (grid.periodic()[a]) {
          const double L = grid.hi()[a] - grid.lo()[a];
          dx -= L * std::round(dx / L);
        }
        q += dx * dx;
      }
      q /= radius * radius;
      return q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0;
    });
    out.push_back(std::move(u));
    if (ids) {
      std::ostringstream os;
      os << prefix << "bump(";
      for (int a = 0; a < n; ++a) os << (a ? "," : "") << c[a];
      os << ")";
      ids->push_back(os.str());
    }
  }
  return out;
}

namespace {

Stage make_stage(std::string name, bool ok, std::vector<std::pair<std::string, double>> values,
                 std::string detail = {}) {
  return {std::move(name), ok ? "pass" : "fail", std::move(values), std::move(detail)};
}

}  // namespace

PipelineReport rigidity_pipeline(const RigidityInput& in, const RigidityOptions& opt) {
  PipelineReport rep;
  const std::size_t C = in.charts.size();
  if (in.tests_region.size() != C) throw InputError("rigidity: one test region per chart");

  // curvature certificate scal >= theta
  bool curv_ok = true;
  double min_slack = std::numeric_limits<double>::infinity();
  std::string witness;
  int ntests = 0;
  for (std::size_t c = 0; c < C; ++c) {
    std::vector<std::string> ids;
    const auto tests = bump_tests(in.charts[c].grid, in.tests_region[c], opt.bump_radius, opt.bumps_per_axis, &ids,
                                  "chart" + std::to_string(c) + ":");
    if (tests.empty()) continue;
    const ScalarField theta(in.charts[c].grid, 1, opt.theta);
    const CertificateReport cr = lower_bound_certificate(in.charts[c], theta, tests, ids);
    curv_ok = curv_ok && cr.passed;
    ntests += static_cast<int>(tests.size());
    if (cr.min_slack < min_slack) {
      min_slack = cr.min_slack;
      witness = cr.worst_witness;
    }
  }
  if (ntests == 0) throw InputError("rigidity: no certificate test function fits in the charts");
  rep.stages.push_back(make_stage("curvature", curv_ok, {{"theta", opt.theta}, {"min_slack", min_slack}, {"tests", ntests}},
                                  "worst witness " + witness));

  std::vector<const MapField*> pieces;
  for (const auto& p : in.pieces) pieces.push_back(&p);
  const LipschitzProfile lp = lipschitz_profile(pieces);
  const bool lip_ok = lp.ess_sup <= 1.0 + opt.lip_tol;
  rep.stages.push_back(make_stage("lipschitz", lip_ok, {{"ess_sup", lp.ess_sup}}));

  const double raw = mapping_degree(in.atlas_map);
  const int deg = static_cast<int>(std::lround(raw));
  rep.stages.push_back(make_stage("degree", deg != 0,
                                  {{"degree", deg}, {"raw_degree", raw}, {"index", 2.0 * deg},
                                   {"distance_to_integer", std::abs(raw - deg)}}));

  const IsometryReport iso = isometry_ae_check(pieces, opt.iso_tol, opt.tol_measure);
  rep.stages.push_back(make_stage("isometry_ae", iso.isometric, {{"isometric_fraction", iso.isometric_fraction}}));
  rep.stages.push_back(make_stage("orientation", iso.orientation_ok,
                                  {{"positive_fraction", iso.positive_fraction},
                                   {"negative_fraction", iso.negative_fraction},
                                   {"flipped", iso.flipped ? 1.0 : 0.0}},
                                  iso.verdict));

  std::vector<const MetricField*> targets;
  for (const auto& t : in.targets) targets.push_back(&t);
  const MetricIsometryVerdict mv = metric_isometry_verdict(pieces, targets, opt.distance_pairs, opt.seed,
                                                           opt.distance_tol, opt.iso_tol, opt.tol_measure);
  rep.stages.push_back(make_stage("metric_isometry", mv.passed,
                                  {{"max_rel_discrepancy", mv.max_rel_discrepancy},
                                   {"tolerance", mv.tolerance},
                                   {"pairs", mv.pairs}},
                                  mv.stage1_reason));

  auto decide = [&](Verdict v, const char* stage, const char* hyp) {
    rep.verdict = v;
    rep.stage = stage;
    rep.hypothesis = hyp;
  };
  if (iso.isometric) {
    if (!curv_ok) decide(Verdict::fail, "curvature", "curvature bound scal >= n(n-1)");
    else if (!lip_ok) decide(Verdict::fail, "lipschitz", "Lipschitz bound |df| <= 1");
    else if (!iso.orientation_ok) decide(Verdict::fail, "orientation", "orientation-preserving isometry a.e.");
    else if (!mv.passed) decide(Verdict::fail, "metric_isometry", "metric isometry");
    else decide(Verdict::pass, "metric_isometry", "");
  } else {
    if (deg == 0) decide(Verdict::refused, "degree", "non-zero degree");
    else if (!curv_ok) decide(Verdict::refused, "curvature", "curvature bound scal >= n(n-1)");
    else if (!lip_ok) decide(Verdict::refused, "lipschitz", "Lipschitz bound |df| <= 1");
    else decide(Verdict::fail, "isometry_ae", "isometry a.e.");
  }
  return rep;
}

RigidityInput sphere_rigidity_input(int res, const SphereValuedFn& f, bool kink_at_equator) {
  RigidityInput in;
  const ChartGrid grid = atlas::chart_grid(res);
  const MetricField round = atlas::round_metric(grid);
  const ScalarField pou = atlas::pou_field(grid);
  const ScalarField core = sample(grid, [](std::span<const double> x) { return std::hypot(x[0], x[1]) <= 0.8 ? 1.0 : 0.0; });
  SideMask sides;
  if (kink_at_equator) {
    sides.resize(grid.size());
    for (std::size_t s = 0; s < grid.size(); ++s) {
      const auto x = grid.point(s);
      sides[s] = std::hypot(x[0], x[1]) < 1.0 ? -1 : 1;
    }
  }
  for (int c = 0; c < 2; ++c) {
    in.charts.push_back(round);
    in.tests_region.push_back(core);
    // target chart: the source chart when the image avoids its missing pole, else the other
    double zmin = 1.0, zmax = -1.0;
    std::vector<Eigen::Vector3d> img(grid.size());
    for (std::size_t s = 0; s < grid.size(); ++s) {
      const auto x = grid.point(s);
      img[s] = f(c, {x[0], x[1]});
      zmin = std::min(zmin, img[s].z());
      zmax = std::max(zmax, img[s].z());
    }
    const bool n_ok = zmin > -1.0 + 1e-9, s_ok = zmax < 1.0 - 1e-9;
    int tc = c;
    if (tc == atlas::N && !n_ok) tc = atlas::S;
    if (tc == atlas::S && !s_ok) tc = atlas::N;
    if ((tc == atlas::N && !n_ok) || (tc == atlas::S && !s_ok))
      throw InputError("sphere map: image of a chart covers both poles; refine the atlas");
    Field<double> vals(grid, 2);
    for (std::size_t s = 0; s < grid.size(); ++s) {
      const auto y = atlas::from_sphere(tc, img[s]);
      vals(s, 0) = y[0];
      vals(s, 1) = y[1];
    }
    MapOptions mo;
    mo.sides = sides;
    mo.region = pou;
    in.pieces.push_back(make_map_field(round, atlas::round_metric_fn(), std::move(vals), mo));
    in.targets.push_back(round);
  }
  in.atlas_map = sphere_atlas_map(res, f, kink_at_equator);
  return in;
}

PipelineReport disk_pipeline(const MetricFn& g, const MetricDerivFn& dg, const DiskMapFn& f, int res,
                             const RigidityOptions& opt) {
  PipelineReport rep;
  const std::vector<double> H = mean_curvature(g, dg, Eigen::Vector2d::Zero(), 1.0, 64);
  const double hmin = *std::min_element(H.begin(), H.end());
  Stage hs = make_stage("mean_curvature", hmin >= -1e-6, {{"min_H", hmin}});
  if (hmin < -1e-6) {
    rep.stages.push_back(hs);
    rep.verdict = Verdict::refused;
    rep.stage = "mean_curvature";
    rep.hypothesis = "non-negative boundary mean curvature";
    return rep;
  }

  const DoubledMetric dm = double_metric(g, res);
  Stage ds = make_stage("double", true, {{"c1_defect", dm.c1_defect}, {"boundary_cross", dm.boundary_cross}});

  FoldedMap fm;
  try {
    fm = fold_map(dm, f);
  } catch (const InputError& e) {
    rep.stages = {hs, ds, make_stage("fold", false, {}, e.what())};
    rep.verdict = Verdict::refused;
    rep.stage = "fold";
    rep.hypothesis = "boundary mapped into the lower hemisphere";
    return rep;
  }
  Stage fs = make_stage("fold", true, {{"interface_jump", fm.interface_jump}});

  const RelativeDegree rd = relative_degree(f);
  Stage rs = make_stage("relative_degree", rd.degree != 0, {{"degree", rd.degree}, {"raw", rd.raw}});
  if (rd.degree == 0) {
    rep.stages = {hs, ds, fs, rs};
    rep.verdict = Verdict::refused;
    rep.stage = "relative_degree";
    rep.hypothesis = "non-zero relative degree";
    return rep;
  }

  RigidityInput in;
  const ScalarField core =
      sample(dm.grid, [](std::span<const double> x) { return std::hypot(x[0], x[1]) <= 0.8 ? 1.0 : 0.0; });
  const MetricField round = atlas::round_metric(dm.grid);
  for (int c = 0; c < 2; ++c) {
    in.charts.push_back(dm.chart[c]);
    in.tests_region.push_back(core);
    in.pieces.push_back(fm.piece[c]);
    in.targets.push_back(round);
  }
  in.atlas_map = fm.atlas_map;
  rep = rigidity_pipeline(in, opt);
  rep.stages.insert(rep.stages.begin(), {hs, ds, fs, rs});
  return rep;
}

}  // namespace lrg
