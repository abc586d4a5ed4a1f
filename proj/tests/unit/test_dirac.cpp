#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "lrg/dirac.hpp"

using namespace lrg;
using std::numbers::pi;
using Vec = Eigen::VectorXcd;

namespace {

ChartGrid unit_torus(int res) { return ChartGrid::cube(2, 0.0, 1.0, res, true); }

MetricField wavy_torus_metric(const ChartGrid& g) {
  return metric_from_function(g, [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    const double f = std::exp(0.4 * std::sin(2 * pi * x(0)) * std::cos(2 * pi * x(1)));
    Eigen::MatrixXd a(2, 2);
    a << f, 0.1 * std::sin(2 * pi * x(1)), 0.1 * std::sin(2 * pi * x(1)), 1.0 / f + 0.2;
    return a;
  });
}

cplx inner(const ChartDirac& D, const SpinorField& a, const SpinorField& b) {
  cplx acc = 0.0;
  for (std::size_t s = 0; s < a.grid.size(); ++s) {
    const double w = a.grid.weight(s) * D.density.values[s];
    for (int c = 0; c < D.d; ++c) acc += w * std::conj(a(s, c)) * b(s, c);
  }
  return acc;
}

double norm(const ChartDirac& D, const SpinorField& a) { return std::sqrt(std::abs(inner(D, a, a))); }

// distinct values of sum_a sin^2(2 pi k_a / N) / h^2 (+ shift on the first axis)
std::vector<double> fourier_oracle(int N, double shift, int count) {
  const double h = 1.0 / N;
  std::vector<double> all;
  for (int k1 = 0; k1 < N; ++k1)
    for (int k2 = 0; k2 < N; ++k2) {
      const double a = std::sin(2 * pi * k1 / N) / h + shift, b = std::sin(2 * pi * k2 / N) / h;
      all.push_back(a * a + b * b);
    }
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double v : all)
    if (out.empty() || v - out.back() > 1e-7 * std::max(1.0, v)) out.push_back(v);
  out.resize(count);
  return out;
}

Eigen::Vector3d degree_two(int chart, const Eigen::Vector2d& x) {
  const Eigen::Vector3d p = atlas::to_sphere(chart, x(0), x(1));
  const double rho = std::hypot(p.x(), p.y());
  if (rho == 0.0) return p;
  const double c = p.x() / rho, s = p.y() / rho;
  return {rho * (c * c - s * s), rho * 2 * s * c, p.z()};
}

}  // namespace

TEST_SUITE("dirac") {

TEST_CASE("spin connection term") {
  const CliffordModule cm = build_module(2);
  const MatrixField flat = spin_connection_term(flat_metric(unit_torus(16)), cm);
  for (const auto& m : flat.data) CHECK(m.norm() == 0.0);

  std::vector<double> err;
  for (int res : {65, 129}) {
    const ChartGrid g = ChartGrid::cube(2, -1.5, 1.5, res);
    const MatrixField om = spin_connection_term(atlas::round_metric(g), cm);
    const Eigen::MatrixXcd J = cm.gamma[0] * cm.gamma[1];
    double e = 0.0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      const int i = g.index_along(s, 0), j = g.index_along(s, 1);
      if (i < 2 || j < 2 || i > res - 3 || j > res - 3) continue;
      const auto x = g.point(s);
      const double q = 1 + x[0] * x[0] + x[1] * x[1];
      e = std::max(e, (om(s, 0) - 0.5 * (2 * x[1] / q) * J).norm());
      e = std::max(e, (om(s, 1) - 0.5 * (-2 * x[0] / q) * J).norm());
    }
    err.push_back(e);
  }
  CHECK(err[0] < 1e-12);
  CHECK(err[1] < 1e-12);
}

TEST_CASE("assembled coefficients") {
  const CliffordModule cm = build_module(2);
  const ChartGrid g = unit_torus(128);
  const MetricField m = wavy_torus_metric(g);
  const ChartDirac D = assemble_chart(m, cm, trivial_twist(g));
  for (std::size_t s = 0; s < g.size(); s += 37) {
    const auto eg = D.frame.gframe(s);
    for (int k = 0; k < 2; ++k) {
      Eigen::MatrixXcd expect = eg(k, 0) * cm.gamma[0] + eg(k, 1) * cm.gamma[1];
      CHECK((D.a[s * 2 + k] - expect).norm() < 1e-14);
    }
  }
  std::vector<Eigen::MatrixXcd> A{Eigen::MatrixXcd::Constant(1, 1, cplx(0.3, 0.0)), Eigen::MatrixXcd::Zero(1, 1)};
  CHECK_THROWS_AS(assemble_chart(m, cm, constant_twist(g, A)), InputError);
}

TEST_CASE("constant spinors are harmonic on the flat torus") {
  const CliffordModule cm = build_module(2);
  const ChartGrid g = unit_torus(32);
  const ChartDirac D = assemble_chart(flat_metric(g), cm, trivial_twist(g));
  SpinorField psi(g, 2);
  for (std::size_t s = 0; s < g.size(); ++s) {
    psi(s, 0) = cplx(1.0, 0.5);
    psi(s, 1) = cplx(-0.25, 2.0);
  }
  for (const cplx& v : lrg::apply(D, psi).values) CHECK(std::abs(v) < 1e-12);
  const LichnerowiczTerms t = lichnerowicz_residual({&D}, {ScalarField(g, 1, 1.0)}, {psi}, {psi});
  CHECK(std::abs(t.dirac) < 1e-20);
  CHECK(std::abs(t.gradient) < 1e-20);
  CHECK(std::abs(t.scalar) < 1e-20);
  CHECK(std::abs(t.twist) < 1e-20);
}

TEST_CASE("reference and parallel operator application agree") {
  const CliffordModule cm = build_module(2);
  const ChartGrid g = unit_torus(128);
  const ChartDirac D = assemble_chart(wavy_torus_metric(g), cm, trivial_twist(g));
  const SpinorField psi = random_torus_section(g, D.d, 3);
  const SpinorField a = lrg::apply(D, psi), b = ref::apply(D, psi);
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-13);
}

TEST_CASE("flat torus spectrum matches the discrete Fourier oracle") {
  const CliffordModule cm = build_module(2);
  const ChartGrid g = unit_torus(64);
  const DiracSystem sys = assemble_torus(flat_metric(g), cm, trivial_twist(g));
  const Eigen::VectorXd ev = dirac_squared_spectrum(sys, 10);
  const std::vector<double> oracle = fourier_oracle(64, 0.0, 10);
  REQUIRE(ev.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(std::abs(ev(i) - oracle[i]) <= 1e-6 * std::max(1.0, oracle[i]));
}

TEST_CASE("flat holonomy twist shifts the discrete spectrum") {
  const CliffordModule cm = build_module(2);
  const ChartGrid g = unit_torus(33);
  // A = i pi dx^1: holonomy -1 around the first circle, zero curvature
  const std::vector<Eigen::MatrixXcd> A{Eigen::MatrixXcd::Constant(1, 1, cplx(0.0, pi)),
                                        Eigen::MatrixXcd::Zero(1, 1)};
  const DiracSystem sys = assemble_torus(flat_metric(g), cm, constant_twist(g, A));
  const Eigen::VectorXd ev = dirac_squared_spectrum(sys, 1);
  const double expect = fourier_oracle(33, pi, 1)[0];
  CHECK(ev(0) == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("formal self-adjointness defect decays at second order") {
  const CliffordModule cm = build_module(2);
  std::vector<double> defect;
  for (int res : {128, 256}) {
    const ChartGrid g = unit_torus(res);
    const ChartDirac D = assemble_chart(wavy_torus_metric(g), cm, trivial_twist(g));
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const SpinorField a = random_torus_section(g, D.d, 100 + 2 * t), b = random_torus_section(g, D.d, 101 + 2 * t);
      const cplx l = inner(D, lrg::apply(D, a), b), r = inner(D, a, lrg::apply(D, b));
      worst = std::max(worst, std::abs(l - r) / (norm(D, a) * norm(D, b)));
    }
    defect.push_back(worst);
  }
  CHECK(defect[0] < 0.05);
  CHECK(defect[0] / defect[1] > 3.0);
}

TEST_CASE("operator is odd for the grading") {
  const CliffordModule cm = build_module(2);
  const ChartGrid g = unit_torus(128);
  const ChartDirac D = assemble_chart(wavy_torus_metric(g), cm, trivial_twist(g));
  const SpinorField psi = random_torus_section(g, D.d, 9);
  const SpinorField a = lrg::apply(D, apply_grading(D, psi)), b = apply_grading(D, lrg::apply(D, psi));
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(std::abs(a.values[i] + b.values[i]) < 1e-10);
}

TEST_CASE("integral Lichnerowicz identity") {
  const CliffordModule cm = build_module(2);
  SUBCASE("flat torus") {
    const ChartGrid g = unit_torus(64);
    const ChartDirac D = assemble_chart(flat_metric(g), cm, trivial_twist(g));
    for (int t = 0; t < 5; ++t) {
      const SpinorField a = random_torus_section(g, D.d, 2 * t + 1), b = random_torus_section(g, D.d, 2 * t + 2);
      CHECK(lichnerowicz_residual({&D}, {ScalarField(g, 1, 1.0)}, {a}, {b}).residual < 1e-9);
    }
  }
  SUBCASE("round sphere twisted by its own spinor bundle") {
    const SphereBundle bundle(cm, Eigen::Matrix3d::Identity());
    std::vector<double> r;
    for (int res : {33, 65, 129}) {
      const ChartGrid g = atlas::chart_grid(res);
      const MetricField m = atlas::round_metric(g);
      const ChartDirac N = assemble_chart(m, cm, bundle.twist(atlas::N, g));
      const ChartDirac S = assemble_chart(m, cm, bundle.twist(atlas::S, g));
      const ScalarField pou = atlas::pou_field(g);
      double worst = 0.0;
      for (int t = 0; t < 3; ++t) {
        const auto a = random_sphere_section(bundle, g, 2 * t + 1), b = random_sphere_section(bundle, g, 2 * t + 2);
        worst = std::max(worst, lichnerowicz_residual({&N, &S}, {pou, pou}, a, b).residual);
      }
      r.push_back(worst);
    }
    CHECK(r[0] > r[1]);
    CHECK(r[1] > r[2]);
    // at least the h^{3/2} rate
    CHECK(r[1] / r[2] > 2.8);
  }
}

TEST_CASE("random sphere sections satisfy the transition") {
  const CliffordModule cm = build_module(2);
  const SphereBundle bundle(cm, Eigen::Matrix3d(Eigen::AngleAxisd(0.5, Eigen::Vector3d::UnitX())));
  const ChartGrid g = atlas::chart_grid(61);
  const auto psi = random_sphere_section(bundle, g, 4);
  double worst = 0.0;
  int matched = 0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    const auto x = g.point(s);
    const double r = std::hypot(x[0], x[1]);
    if (r < 0.8 || r > 1.25) continue;
    const auto w = atlas::transition(x[0], x[1]);
    const double q[2] = {w[0], w[1]};
    const std::size_t t = g.nearest(q);
    const auto y = g.point(t);
    if (std::hypot(y[0] - w[0], y[1] - w[1]) > 1e-12) continue;
    const Vec a = Eigen::Map<const Vec>(psi[atlas::S].values.data() + t * bundle.fiber_dim(), bundle.fiber_dim());
    const Vec b = bundle.transition(x[0], x[1]) *
                  Eigen::Map<const Vec>(psi[atlas::N].values.data() + s * bundle.fiber_dim(), bundle.fiber_dim());
    worst = std::max(worst, (a - b).norm());
    ++matched;
  }
  CHECK(matched > 8);
  CHECK(worst < 1e-12);
}

TEST_CASE("sphere assembly glues the charts consistently") {
  const CliffordModule cm = build_module(2);
  for (bool twisted : {false, true}) {
    std::optional<Eigen::Matrix3d> R;
    if (twisted) R = Eigen::Matrix3d(Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 0.3, 0).normalized()));
    const DiracSystem sys = assemble_sphere(33, SphereBundle(cm, R));
    CHECK(sys.gluing_residual < 1e-6);
    CHECK(sys.D.rows() == sys.blocks() * sys.d);
  }
}

TEST_CASE("kernels") {
  const CliffordModule cm = build_module(2);
  SUBCASE("flat torus: constant spinors") {
    const ChartGrid g = unit_torus(33);
    const KernelReport kr = kernel_and_constancy(assemble_torus(flat_metric(g), cm, trivial_twist(g)), 3);
    CHECK(kr.eigenvalues(0) <= 1e-8);
    CHECK(kr.eigenvalues(1) <= 1e-8);
    CHECK(kr.eigenvalues(2) > 1.0);
    CHECK(kr.norm_variation[0] <= 1e-6);
    CHECK(kr.norm_variation[1] <= 1e-6);
  }
  SUBCASE("round sphere twisted by the identity") {
    const KernelReport kr = kernel_and_constancy(assemble_sphere(33, SphereBundle(cm, Eigen::Matrix3d::Identity())), 3);
    CHECK(kr.eigenvalues(0) <= 1e-8);
    CHECK(kr.eigenvalues(1) <= 1e-8);
    CHECK(kr.norm_variation[0] <= 1e-6);
  }
}

TEST_CASE("topological index") {
  const int res = 129;
  auto idx = [&](const SphereValuedFn& f) { return index_topological(sphere_atlas_map(res, f)); };
  const IndexResult id = idx([](int c, const Eigen::Vector2d& x) { return atlas::to_sphere(c, x(0), x(1)); });
  CHECK(id.index == 2);
  CHECK(id.distance_to_integer < 0.02);
  const IndexResult anti = idx([](int c, const Eigen::Vector2d& x) { return Eigen::Vector3d(-atlas::to_sphere(c, x(0), x(1))); });
  CHECK(anti.index == -2);
  const IndexResult two = idx(degree_two);
  CHECK(two.index == 4);
  CHECK(two.distance_to_integer < 0.02);
  const IndexResult zero = idx([](int, const Eigen::Vector2d&) { return Eigen::Vector3d(0, 0, 1); });
  CHECK(zero.index == 0);
}

}
