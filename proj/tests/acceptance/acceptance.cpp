#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "classical.hpp"
#include "lrg/clifford.hpp"
#include "lrg/dirac.hpp"
#include "lrg/doubling.hpp"
#include "lrg/maps.hpp"
#include "lrg/pipeline.hpp"
#include "lrg/scal_dist.hpp"

using namespace lrg;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ScalarField bump(const ChartGrid& g, double cx, double cy, double r) {
  return sample(g, [=](auto x) {
    const double q = ((x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy)) / (r * r);
    return q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0;
  });
}

MetricFn flat_fn() {
  return [](const Eigen::VectorXd& x) -> Eigen::MatrixXd { return Eigen::MatrixXd::Identity(x.size(), x.size()); };
}

Eigen::Vector3d sphere_id(int c, const Eigen::Vector2d& x) { return atlas::to_sphere(c, x(0), x(1)); }

Eigen::Vector3d degree_two(int c, const Eigen::Vector2d& x) {
  const Eigen::Vector3d p = atlas::to_sphere(c, x(0), x(1));
  const double rho = std::hypot(p.x(), p.y());
  if (rho == 0.0) return p;
  const double u = p.x() / rho, v = p.y() / rho;
  return {rho * (u * u - v * v), rho * 2 * u * v, p.z()};
}

Outcome scalar_pairing_consistency() {
  std::ostringstream os;
  bool ok = true;
  for (const auto& nm : oracle::analytic_metrics()) {
    std::vector<double> C;
    double t256 = 0.0;
    for (int res : {65, 129, 257}) {
      const ChartGrid g = ChartGrid::cube(2, -1.0, 1.0, res);
      const auto t0 = std::chrono::steady_clock::now();
      const MetricField m = metric_from_function(g, nm.g);
      const ScalarField u = bump(g, 0.1, 0.05, 0.7);
      const double value = pair_scal(m, u).value;
      if (res == 257) t256 = seconds_since(t0);
      const ScalarField mu = volume_density(m);
      ScalarField su = u;
      for (std::size_t s = 0; s < g.size(); ++s)
        if (u.values[s] != 0.0) su.values[s] *= oracle::scalar_curvature(nm.g, Eigen::Vector2d(g.point(s)[0], g.point(s)[1]));
      const double h = g.spacing(0);
      C.push_back((value - quadrature(su, mu)) / (h * h));
    }
    const double lo = std::min({std::abs(C[0]), std::abs(C[1]), std::abs(C[2])});
    const double hi = std::max({std::abs(C[0]), std::abs(C[1]), std::abs(C[2])});
    const bool same_sign = (C[0] > 0) == (C[1] > 0) && (C[1] > 0) == (C[2] > 0);
    const bool m_ok = lo > 0.0 && same_sign && hi / lo <= 1.5 && t256 < 10.0;
    ok = ok && m_ok;
    os << nm.name << " C=" << C[0] << "," << C[1] << "," << C[2] << " t256=" << t256 << "s; ";
  }
  return {ok, os.str()};
}

Outcome round_sphere_equality() {
  const ChartGrid g = atlas::chart_grid(257);
  const MetricField m = atlas::round_metric(g);
  const ScalarField core = sample(g, [](auto x) { return std::hypot(x[0], x[1]) <= 0.8 ? 1.0 : 0.0; });
  std::vector<std::string> ids;
  const auto tests = bump_tests(g, core, 0.4, 5, &ids);
  const ScalarField theta(g, 1, 2.0);
  const CertificateReport cr = lower_bound_certificate(m, theta, tests, ids);
  const ScalarField mu = volume_density(m);
  double worst = 0.0;
  for (const auto& u : tests) {
    const double expect = 2 * quadrature(u, mu);
    worst = std::max(worst, std::abs(pair_scal(m, u).value - expect) / expect);
  }
  std::ostringstream os;
  os << tests.size() << " bumps, min slack " << cr.min_slack << ", max relative pairing error " << worst;
  return {cr.min_slack >= -1e-3 && worst <= 0.01 && !tests.empty(), os.str()};
}

Outcome clifford_bound() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  bool ok = true;
  std::ostringstream os;
  for (int n : {2, 4, 6}) {
    const CliffordModule cm = build_module(n);
    const double floor = -n * (n - 1) / 4.0;
    double min_gap = std::numeric_limits<double>::infinity();
    int attained = 0;
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> mu(n);
      for (double& v : mu) v = U(rng);
      const double lam = spectrum(curvature_endo(cm, mu))(0);
      if (lam < floor - 1e-12) ok = false;
      if (lam <= floor + 1e-10) ++attained;
      min_gap = std::min(min_gap, lam - floor);
    }
    const double ones = spectrum(curvature_endo(cm, std::vector<double>(n, 1.0)))(0);
    const bool eq = std::abs(ones - floor) <= 1e-10;
    ok = ok && attained == 0 && eq;
    os << "n=" << n << " min gap " << min_gap << ", attained by random mu " << attained << ", all ones "
       << ones - floor << "; ";
  }
  const double t = seconds_since(t0);
  os << "time " << t << "s";
  return {ok && t < 60.0, os.str()};
}

Eigen::MatrixXd pinched_inner_product(int n, double delta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N;
  Eigen::MatrixXd X(n, n);
  for (int i = 0; i < n * n; ++i) X(i % n, i / n) = N(rng);
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(X).householderQ();
  Eigen::VectorXd lam(n);
  for (int i = 0; i < n; ++i) {
    // extremes of the pinching band are drawn often
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

Outcome linalg_lemma() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N;
  int violations = 0, hyp_fail = 0;
  double min_slack_ratio = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 1000; ++t) {
    const int n = t % 2 == 0 ? 2 : 4;
    const double delta = std::max(1e-6, 0.5 * U(rng));
    const Eigen::MatrixXd g1 = pinched_inner_product(n, delta, rng), g2 = pinched_inner_product(n, delta, rng);
    Eigen::MatrixXd X(n, n);
    for (int i = 0; i < n * n; ++i) X(i % n, i / n) = N(rng);
    Eigen::MatrixXd O = Eigen::HouseholderQR<Eigen::MatrixXd>(X).householderQ();
    if (U(rng) < 0.5) O.col(0) *= -1;
    const Eigen::MatrixXd A = sym_power(g2, -0.5) * O * sym_power(g1, 0.5);
    const LinalgVerdict v = linalg_bound_check(g1, g2, A, delta);
    if (!v.hypotheses_ok) {
      ++hyp_fail;
      continue;
    }
    if (!v.passed) ++violations;
    min_slack_ratio = std::min(min_slack_ratio, v.slack / v.bound);
  }
  std::ostringstream os;
  os << "violations " << violations << ", generator hypothesis failures " << hyp_fail << ", min slack/bound "
     << min_slack_ratio;
  return {violations == 0 && hyp_fail == 0, os.str()};
}

Outcome integral_lichnerowicz() {
  const CliffordModule cm = build_module(2);
  const ChartGrid tg = ChartGrid::cube(2, 0.0, 1.0, 128, true);
  const ChartDirac T = assemble_chart(flat_metric(tg), cm, trivial_twist(tg));
  double torus = 0.0;
  for (int t = 0; t < 20; ++t) {
    const SpinorField a = random_torus_section(tg, T.d, 1000 + 2 * t), b = random_torus_section(tg, T.d, 1001 + 2 * t);
    torus = std::max(torus, lichnerowicz_residual({&T}, {ScalarField(tg, 1, 1.0)}, {a}, {b}).residual);
  }
  const SphereBundle bundle(cm, Eigen::Matrix3d(Eigen::AngleAxisd(0.5, Eigen::Vector3d(1, 0.3, 0).normalized())));
  std::vector<double> r;
  for (int res : {33, 65, 129}) {
    const ChartGrid g = atlas::chart_grid(res);
    const MetricField m = atlas::round_metric(g);
    const ChartDirac Nc = assemble_chart(m, cm, bundle.twist(atlas::N, g));
    const ChartDirac Sc = assemble_chart(m, cm, bundle.twist(atlas::S, g));
    const ScalarField pou = atlas::pou_field(g);
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
      const auto a = random_sphere_section(bundle, g, 2 * t + 1), b = random_sphere_section(bundle, g, 2 * t + 2);
      worst = std::max(worst, lichnerowicz_residual({&Nc, &Sc}, {pou, pou}, a, b).residual);
    }
    r.push_back(worst);
  }
  std::ostringstream os;
  os << "torus max residual " << torus << "; sphere residuals " << r[0] << ", " << r[1] << ", " << r[2];
  return {torus <= 1e-4 && r[0] > r[1] && r[1] > r[2], os.str()};
}

Outcome topological_index() {
  const int res = 129;
  const SphereValuedFn anti = [](int c, const Eigen::Vector2d& x) { return Eigen::Vector3d(-sphere_id(c, x)); };
  const std::vector<std::pair<SphereValuedFn, int>> cases{{sphere_id, 2}, {anti, -2}, {degree_two, 4}};
  bool ok = true;
  std::ostringstream os;
  for (const auto& [f, expect] : cases) {
    const IndexResult r = index_topological(sphere_atlas_map(res, f));
    ok = ok && r.index == expect && r.distance_to_integer < 0.02;
    os << "index " << r.index << " (expected " << expect << ", raw degree " << r.raw_degree << "); ";
  }
  return {ok, os.str()};
}

Outcome kernel_constancy() {
  const CliffordModule cm = build_module(2);
  const ChartGrid tg = ChartGrid::cube(2, 0.0, 1.0, 65, true);
  const KernelReport kt = kernel_and_constancy(assemble_torus(flat_metric(tg), cm, trivial_twist(tg)), 3);
  const bool torus_ok = kt.eigenvalues(0) <= 1e-8 && kt.eigenvalues(1) <= 1e-8 && kt.eigenvalues(2) > 1e-8 &&
                        kt.norm_variation[0] <= 1e-6 && kt.norm_variation[1] <= 1e-6;
  const SphereBundle bundle(cm, Eigen::Matrix3d(Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 0.3, 0).normalized())));
  std::vector<KernelReport> ks;
  for (int res : {33, 65, 129}) ks.push_back(kernel_and_constancy(assemble_sphere(res, bundle), 2));
  bool sphere_ok = true;
  std::ostringstream os;
  os << "torus eigenvalues " << kt.eigenvalues(0) << ", " << kt.eigenvalues(1) << " (next " << kt.eigenvalues(2)
     << "), variation " << std::max(kt.norm_variation[0], kt.norm_variation[1]) << "; sphere";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double lam = std::max(std::abs(ks[i].eigenvalues(0)), std::abs(ks[i].eigenvalues(1)));
    const double var = std::max(ks[i].norm_variation[0], ks[i].norm_variation[1]);
    os << " [lambda " << lam << ", variation " << var << "]";
    if (i > 0) {
      const double lp = std::max(std::abs(ks[i - 1].eigenvalues(0)), std::abs(ks[i - 1].eigenvalues(1)));
      const double vp = std::max(ks[i - 1].norm_variation[0], ks[i - 1].norm_variation[1]);
      sphere_ok = sphere_ok && lp >= 1.5 * lam && vp >= 1.5 * var;
    }
  }
  return {torus_ok && sphere_ok, os.str()};
}

Outcome quasiregular_oracle() {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> N;
  const MetricField m = flat_metric(ChartGrid::cube(2, -1.0, 1.0, 9));
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    Eigen::Matrix2d A;
    for (int i = 0; i < 4; ++i) A(i / 2, i % 2) = N(rng);
    if (A.determinant() < 0) A.col(0) *= -1;
    MapOptions opt;
    opt.analytic_jac = [A](const Eigen::VectorXd&) -> Eigen::MatrixXd { return A; };
    const MapField f = sample_map(m, flat_fn(), [A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; }, opt);
    const double K = quasiregularity({&f}).K_min, B = brute_force_K(A);
    worst = std::max(worst, std::abs(K - B) / B);
  }
  std::ostringstream os;
  os << "max relative difference " << worst;
  return {worst <= 1e-9, os.str()};
}

Outcome folding_rejection() {
  const SphereValuedFn rho = [](int c, const Eigen::Vector2d& x) { return fold(sphere_id(c, x)); };
  const PipelineReport r = rigidity_pipeline(sphere_rigidity_input(97, rho, true));
  const Stage* iso = r.find("isometry_ae");
  std::ostringstream os;
  os << "verdict " << to_string(r.verdict) << " at " << r.stage << " (" << r.hypothesis << "), isometry_ae "
     << (iso ? iso->status : "missing");
  return {r.verdict == Verdict::fail && r.stage == "orientation" && iso && iso->status == "pass", os.str()};
}

Outcome disk_pipeline_check() {
  const DiskMapFn stereo = [](const Eigen::Vector2d& x) { return atlas::to_sphere(atlas::N, x(0), x(1)); };
  const PipelineReport hemi = disk_pipeline(atlas::round_metric_fn(), atlas::round_metric_deriv_fn(), stereo, 97);
  const PipelineReport flat = disk_pipeline(flat_fn(), nullptr, stereo, 97);
  const Stage* fc = flat.find("curvature");
  double herr = 0.0;
  for (double H : mean_curvature(flat_fn(), nullptr, Eigen::Vector2d::Zero(), 1.0)) herr = std::max(herr, std::abs(H - 1));
  std::ostringstream os;
  os << "hemisphere " << to_string(hemi.verdict) << "; flat disk " << to_string(flat.verdict) << " at " << flat.stage
     << ", curvature " << (fc ? fc->status : "missing") << "; |H - 1| " << herr;
  return {hemi.verdict == Verdict::pass && fc && fc->status == "fail" && flat.verdict != Verdict::pass && herr <= 1e-6,
          os.str()};
}

Outcome distance_engine() {
  const ChartGrid g = ChartGrid::cube(2, -1.5, 1.5, 512);
  const MetricField m = atlas::round_metric(g);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-0.7, 0.7);
  double worst = 0.0;
  int count = 0;
  while (count < 10) {
    const Eigen::Vector2d a(U(rng), U(rng)), b(U(rng), U(rng));
    const double exact = std::acos(
        std::clamp(atlas::to_sphere(atlas::N, a(0), a(1)).dot(atlas::to_sphere(atlas::N, b(0), b(1))), -1.0, 1.0));
    if (exact < 0.3) continue;
    const PathResult p = path_distance(m, a, b);
    worst = std::max(worst, std::abs(p.length - exact) / exact);
    ++count;
  }
  const ChartGrid gs = ChartGrid::cube(2, -1.5, 1.5, 64);
  const MetricField ms = atlas::round_metric(gs);
  std::uniform_int_distribution<std::size_t> pick(0, gs.size() - 1);
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
    const std::vector<double> da = graph_distance_field(ms, a), db = graph_distance_field(ms, b);
    if (da[c] > da[b] + db[c]) ++violations;
  }
  std::ostringstream os;
  os << "great circles max relative error " << worst << " over " << count << " pairs; triangle violations " << violations
     << " / 1000";
  return {worst <= 0.01 && violations == 0, os.str()};
}

Outcome mollification() {
  // each eps on its own grid with at least 64 samples per radius, down to eps = 4h on 2^18 cells
  const int finest = 18;
  std::vector<double> norms;
  double max_grad = 0.0;
  std::ostringstream os;
  for (int nu = 1; nu <= finest - 4; ++nu) {
    const double eps = std::ldexp(1.0, -nu);
    const ChartGrid g = ChartGrid::cube(1, -2.0, 2.0, (1 << std::min(nu + 8, finest)) + 1);
    const ScalarField hat = sample(g, [](auto x) { return std::max(0.0, 1.0 - std::abs(x[0])); });
    const Field<double> dhat = fd_gradient(hat);
    const ScalarField fm = mollify(hat, eps);
    const Field<double> dm = fd_gradient(fm);
    double sup = 0.0, l2 = 0.0, d2 = 0.0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      const double e = fm.values[s] - hat.values[s], de = dm.values[s] - dhat.values[s];
      sup = std::max(sup, std::abs(e));
      l2 += g.weight(s) * e * e;
      d2 += g.weight(s) * de * de;
      max_grad = std::max(max_grad, std::abs(dm.values[s]));
    }
    norms.push_back(sup + std::sqrt(l2 + d2));
    os << "eps=2^-" << nu << " (eps/h=" << eps / g.spacing(0) << "): " << norms.back() << "; ";
  }
  bool monotone = true;
  for (std::size_t i = 1; i < norms.size(); ++i) monotone = monotone && norms[i] < norms[i - 1];
  os << "max |df| " << max_grad;
  return {monotone && !norms.empty() && norms.back() < 1e-2 && max_grad <= 1.0 + 1e-6, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"scalar pairing consistency", scalar_pairing_consistency},
      {"round sphere equality case", round_sphere_equality},
      {"Clifford curvature bound", clifford_bound},
      {"linear algebra lemma", linalg_lemma},
      {"integral Lichnerowicz identity", integral_lichnerowicz},
      {"topological index", topological_index},
      {"kernel constancy", kernel_constancy},
      {"quasiregularity oracle", quasiregular_oracle},
      {"folding map rejection", folding_rejection},
      {"disk doubling pipeline", disk_pipeline_check},
      {"distance engine", distance_engine},
      {"mollification", mollification},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
