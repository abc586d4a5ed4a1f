#include <cmath>

#include "doctest.h"
#include "lrg/sphere.hpp"
#include "lrg/weak_metric.hpp"

using namespace lrg;

namespace {

MetricFn conformal(std::function<double(double, double)> phi) {
  return [phi](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    return std::exp(2 * phi(x(0), x(1))) * Eigen::MatrixXd::Identity(2, 2);
  };
}

double phi_c(double x, double y) { return 0.3 * std::sin(x) * std::cos(2 * y); }
double phi_cx(double x, double y) { return 0.3 * std::cos(x) * std::cos(2 * y); }
double phi_cy(double x, double y) { return -0.6 * std::sin(x) * std::sin(2 * y); }

bool interior(const ChartGrid& g, std::size_t s, int margin) {
  for (int a = 0; a < g.dim(); ++a) {
    const int i = g.index_along(s, a);
    if (i < margin || i >= g.res()[a] - margin) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("weak_metric") {

TEST_CASE("flat metric has vanishing Christoffel symbols") {
  const MetricField m = flat_metric(ChartGrid::cube(2, 0.0, 1.0, 9));
  for (double v : christoffel(m).data) CHECK(v == 0.0);
  CHECK(m.lambda_min == doctest::Approx(1.0));
}

TEST_CASE("polar-type metric diag(1, x^2) with analytic derivatives") {
  const ChartGrid g({0.5, -1.0}, {1.5, 1.0}, {17, 17});
  const MetricField m = metric_from_function(
      g,
      [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
        a(1, 1) = x(0) * x(0);
        return a;
      },
      [](const Eigen::VectorXd& x) {
        std::vector<double> d(8, 0.0);
        d[(0 * 2 + 1) * 2 + 1] = 2 * x(0);
        return d;
      });
  const ChristoffelField G = christoffel(m);
  for (std::size_t s = 0; s < g.size(); ++s) {
    const double x = g.point(s)[0];
    CHECK(std::abs(G(s, 0, 1, 1) + x) < 1e-8);
    CHECK(std::abs(G(s, 1, 0, 1) - 1 / x) < 1e-8);
    CHECK(G(s, 1, 0, 1) == G(s, 1, 1, 0));
  }
}

TEST_CASE("round metric Christoffel symbols converge at second order") {
  std::vector<double> err;
  for (int res : {65, 129}) {
    const ChartGrid g = ChartGrid::cube(2, -1.0, 1.0, res);
    const MetricField m = metric_from_function(g, atlas::round_metric_fn());
    const ChristoffelField G = christoffel(m);
    double e = 0.0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      const auto x = g.point(s);
      // Gamma^k_ij = d_i phi delta_jk + d_j phi delta_ik - d_k phi delta_ij, phi = log(2/(1+r^2))
      const double q = 1 + x[0] * x[0] + x[1] * x[1];
      const double p[2] = {-2 * x[0] / q, -2 * x[1] / q};
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const double ex = p[i] * (j == k) + p[j] * (i == k) - p[k] * (i == j);
            e = std::max(e, std::abs(G(s, k, i, j) - ex));
          }
    }
    err.push_back(e);
  }
  CHECK(err[0] / err[1] > 3.5);
}

TEST_CASE("singular metric is rejected") {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, 8);
  CHECK_THROWS_AS(metric_from_function(g, [](const Eigen::VectorXd&) -> Eigen::MatrixXd {
                    Eigen::MatrixXd a(2, 2);
                    a << 1, 1, 1, 1;
                    return a;
                  }),
                  InputError);
}

TEST_CASE("square-root endomorphism closed forms") {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, 5);
  auto constant = [&](double a, double b) {
    return metric_from_function(g, [=](const Eigen::VectorXd&) -> Eigen::MatrixXd {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
      m(0, 0) = a;
      m(1, 1) = b;
      return m;
    });
  };
  const FrameField id = sqrt_endomorphism(flat_metric(g));
  CHECK((id.root(0) - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);

  const FrameField four = sqrt_endomorphism(constant(4, 4));
  CHECK((four.root(3) - 0.5 * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);

  const MetricField m49 = constant(4, 9);
  const FrameField f49 = sqrt_endomorphism(m49);
  CHECK(f49.root(7)(0, 0) == doctest::Approx(0.5));
  CHECK(f49.root(7)(1, 1) == doctest::Approx(1.0 / 3));
  CHECK(volume_density(m49).values[2] == doctest::Approx(6.0));
}

TEST_CASE("g-frames are orthonormal and the density matches the closed form") {
  const ChartGrid g = ChartGrid::cube(2, -1.5, 1.5, 33);
  const MetricField m = metric_from_function(g, [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    Eigen::MatrixXd a(2, 2);
    a << 2 + std::sin(x(0)), 0.4 * std::cos(x(1)), 0.4 * std::cos(x(1)), 1.5 + x(0) * x(0);
    return a;
  });
  const FrameField f = sqrt_endomorphism(m);
  for (std::size_t s = 0; s < g.size(); ++s) {
    const Eigen::MatrixXd E = f.gframe(s);
    CHECK((E.transpose() * m.at(s) * E - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
  }
  const MetricField round = atlas::round_metric(g);
  const ScalarField mu = volume_density(round);
  for (std::size_t s = 0; s < g.size(); ++s) {
    const auto x = g.point(s);
    const double q = 1 + x[0] * x[0] + x[1] * x[1];
    CHECK(mu.values[s] == doctest::Approx(4 / (q * q)).epsilon(1e-13));
  }
}

TEST_CASE("square root depends continuously on the metric") {
  const ChartGrid g = ChartGrid::cube(2, -1.5, 1.5, 33);
  const MetricField a = atlas::round_metric(g);
  MetricField b = a;
  for (std::size_t s = 0; s < g.size(); ++s) b.g[s * 4 + 1] = b.g[s * 4 + 2] = 1e-6;
  const FrameField fa = sqrt_endomorphism(a), fb = sqrt_endomorphism(b);
  double diff = 0.0;
  for (std::size_t i = 0; i < fa.b.size(); ++i) diff = std::max(diff, std::abs(fa.b[i] - fb.b[i]));
  CHECK(diff <= 1e-3);
}

TEST_CASE("connection forms") {
  SUBCASE("flat metric") {
    const MetricField m = flat_metric(ChartGrid::cube(2, 0.0, 1.0, 16, true));
    const ConnectionForms w = connection_one_forms(sqrt_endomorphism(m), m);
    for (double v : w.omega) CHECK(v == 0.0);
  }
  SUBCASE("conformal metric matches the closed form at second order") {
    std::vector<double> err;
    for (int res : {129, 257}) {
      const ChartGrid g = ChartGrid::cube(2, -1.0, 1.0, res);
      const MetricField m = metric_from_function(g, conformal(phi_c));
      const ConnectionForms w = connection_one_forms(sqrt_endomorphism(m), m);
      double e = 0.0;
      for (std::size_t s = 0; s < g.size(); ++s) {
        if (!interior(g, s, 2)) continue;
        const auto x = g.point(s);
        // omega_21 = -d_2 phi dx^1 + d_1 phi dx^2
        e = std::max(e, std::abs(w(s, 0, 1, 0) + phi_cy(x[0], x[1])));
        e = std::max(e, std::abs(w(s, 1, 1, 0) - phi_cx(x[0], x[1])));
        e = std::max(e, std::abs(w(s, 0, 1, 0) + w(s, 0, 0, 1)));
      }
      err.push_back(e);
    }
    CHECK(err[0] < 1e-3);
    CHECK(err[0] / err[1] > 3.5);
  }
  SUBCASE("round sphere chart") {
    const ChartGrid g = ChartGrid::cube(2, -1.5, 1.5, 97);
    const MetricField m = atlas::round_metric(g);
    const ConnectionForms w = connection_one_forms(sqrt_endomorphism(m), m);
    double e = 0.0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (!interior(g, s, 2)) continue;
      const auto x = g.point(s);
      const double q = 1 + x[0] * x[0] + x[1] * x[1];
      e = std::max(e, std::abs(w(s, 0, 1, 0) - 2 * x[1] / q));
      e = std::max(e, std::abs(w(s, 1, 1, 0) + 2 * x[0] / q));
    }
    CHECK(e < 5e-3);
  }
}

}
