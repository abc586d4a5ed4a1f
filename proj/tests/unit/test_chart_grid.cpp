#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lrg/chart_grid.hpp"

using namespace lrg;
using std::numbers::pi;

namespace {

double max_abs_diff(const Field<double>& a, const Field<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

double bump(double q) { return q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0; }

}  // namespace

TEST_SUITE("chart_grid") {

TEST_CASE("grid geometry") {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, 65);
  CHECK(g.size() == 65u * 65u);
  CHECK(g.spacing(0) == doctest::Approx(1.0 / 64));
  const ChartGrid p = ChartGrid::cube(2, 0.0, 1.0, 64, true);
  CHECK(p.spacing(1) == doctest::Approx(1.0 / 64));
  CHECK(p.shift(0, 0, -1) == 63u * p.stride(0));
  CHECK(g.shift(0, 0, -1) == ChartGrid::npos);
  CHECK_THROWS_AS(ChartGrid::cube(2, 0.0, 1.0, 3), InputError);
}

TEST_CASE("gradient of a constant vanishes") {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, 33);
  const Field<double> d = fd_gradient(ScalarField(g, 1, 3.5));
  for (double v : d.values) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("gradient of a linear function is exact") {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, 65);
  const Field<double> d = fd_gradient(sample(g, [](auto x) { return x[0]; }));
  for (std::size_t s = 0; s < g.size(); ++s) {
    CHECK(std::abs(d(s, 0) - 1.0) < 1e-10);
    CHECK(std::abs(d(s, 1)) < 1e-10);
  }
}

TEST_CASE("periodic gradient converges at second order") {
  std::vector<double> err;
  for (int res : {128, 256, 512}) {
    const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, res, true);
    const Field<double> d = fd_gradient(sample(g, [](auto x) { return std::sin(2 * pi * x[0]); }));
    double e = 0.0;
    for (std::size_t s = 0; s < g.size(); ++s)
      e = std::max(e, std::abs(d(s, 0) - 2 * pi * std::cos(2 * pi * g.point(s)[0])));
    err.push_back(e * res * res);
  }
  CHECK(err[1] / err[0] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(err[2] / err[1] == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("one-sided edge stencils are second order") {
  std::vector<double> err;
  for (int res : {65, 129}) {
    const ChartGrid g = ChartGrid::cube(1, 0.0, 1.0, res);
    const Field<double> d = fd_gradient(sample(g, [](auto x) { return std::exp(x[0]); }));
    err.push_back(std::abs(d(0, 0) - 1.0));
  }
  CHECK(err[0] / err[1] > 3.5);
}

TEST_CASE("side mask keeps stencils on one side of a kink") {
  const ChartGrid g = ChartGrid::cube(1, -1.0, 1.0, 65);
  SideMask sides(g.size());
  for (std::size_t s = 0; s < g.size(); ++s) sides[s] = g.point(s)[0] < 0.0 ? -1 : 1;
  const Field<double> d = fd_gradient(sample(g, [](auto x) { return std::abs(x[0]); }), &sides);
  for (std::size_t s = 0; s < g.size(); ++s) CHECK(std::abs(std::abs(d(s, 0)) - 1.0) < 1e-10);
}

TEST_CASE("non-finite input is rejected") {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, 8);
  ScalarField f(g, 1, 0.0);
  f.values[5] = std::nan("");
  CHECK_THROWS_AS(fd_gradient(f), InputError);
}

TEST_CASE("reference and parallel kernels agree") {
  const ChartGrid g = ChartGrid::cube(2, -1.0, 1.0, 97);
  const ScalarField f = sample(g, [](auto x) { return bump(4 * (x[0] * x[0] + x[1] * x[1])) * (1 + x[0]); });
  CHECK(max_abs_diff(fd_gradient(f), ref::fd_gradient(f)) == 0.0);
  CHECK(max_abs_diff(mollify(f, 0.1), ref::mollify(f, 0.1)) < 1e-15);
}

TEST_CASE("quadrature") {
  const ChartGrid unit = ChartGrid::cube(2, 0.0, 1.0, 17);
  CHECK(quadrature(ScalarField(unit, 1, 1.0), ScalarField(unit, 1, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));

  const double R = 40.0;
  const ChartGrid big = ChartGrid::cube(2, -R, R, 1025);
  const ScalarField dens = sample(big, [](auto x) {
    const double q = 1 + x[0] * x[0] + x[1] * x[1];
    return 4.0 / (q * q);
  });
  CHECK(std::abs(quadrature(ScalarField(big, 1, 1.0), dens) / (4 * pi) - 1.0) < 0.01);

  // trapezoid against an independent midpoint rule of a compact bump
  const ChartGrid g = ChartGrid::cube(2, -1.0, 1.0, 129);
  auto u = [](double x, double y) { return bump(2 * (x * x + y * y)); };
  const double trap = quadrature(sample(g, [&](auto x) { return u(x[0], x[1]); }));
  double mid = 0.0;
  const int m = 2000;
  const double hm = 2.0 / m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) mid += u(-1 + (i + 0.5) * hm, -1 + (j + 0.5) * hm) * hm * hm;
  // |f''| of the bump is below 60 on its support
  CHECK(std::abs(trap - mid) <= 2 * g.spacing(0) * g.spacing(0) * 60 * 4);
}

TEST_CASE("quadrature is linear and monotone") {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, 33);
  const ScalarField a = sample(g, [](auto x) { return x[0] * x[1]; });
  const ScalarField b = sample(g, [](auto x) { return std::cos(x[0]); });
  ScalarField c = a;
  for (std::size_t s = 0; s < g.size(); ++s) c.values[s] = 2 * a.values[s] - 3 * b.values[s];
  CHECK(quadrature(c) == doctest::Approx(2 * quadrature(a) - 3 * quadrature(b)).epsilon(1e-12));
  ScalarField d = a;
  for (auto& v : d.values) v += 0.1;
  CHECK(quadrature(d) > quadrature(a));
  CHECK_THROWS_AS(quadrature(a, ScalarField(ChartGrid::cube(2, 0.0, 1.0, 17), 1, 1.0)), InputError);
}

TEST_CASE("mollification") {
  const ChartGrid g = ChartGrid::cube(2, -1.0, 1.0, 129);
  SUBCASE("constants are reproduced inside their support") {
    const ScalarField f = sample(g, [](auto x) { return std::hypot(x[0], x[1]) < 0.6 ? 2.5 : 0.0; });
    const ScalarField m = mollify(f, 0.1);
    for (std::size_t s = 0; s < g.size(); ++s)
      if (std::hypot(g.point(s)[0], g.point(s)[1]) < 0.45) CHECK(m.values[s] == doctest::Approx(2.5).epsilon(1e-12));
  }
  SUBCASE("mass of nonnegative data is preserved") {
    const ScalarField f = sample(g, [](auto x) { return bump(3 * (x[0] * x[0] + x[1] * x[1])); });
    const double m0 = quadrature(f), m1 = quadrature(mollify(f, 0.15));
    CHECK(std::abs(m1 - m0) <= 1e-12 * m0);
  }
  SUBCASE("kernel has unit discrete mass") {
    const MollifierKernel k = mollifier_kernel(g, 0.07);
    double sum = 0.0;
    for (double w : k.weights) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("preconditions") {
    const ScalarField f = sample(g, [](auto x) { return std::hypot(x[0], x[1]) < 0.3 ? 1.0 : 0.0; });
    CHECK_THROWS_AS(mollify(f, g.spacing(0)), InputError);
    const ScalarField edge = sample(g, [](auto x) { return x[0] > 0.95 ? 1.0 : 0.0; });
    CHECK_THROWS_AS(mollify(edge, 0.1), InputError);
    CHECK_NOTHROW(mollify(edge, 0.1, EdgePolicy::renormalize));
  }
}

TEST_CASE("hat function mollification error is bounded by Lip * eps") {
  const ChartGrid g = ChartGrid::cube(1, -2.0, 2.0, 801);
  const ScalarField hat = sample(g, [](auto x) { return std::max(0.0, 1.0 - std::abs(x[0])); });
  const ScalarField m = mollify(hat, 0.1);
  double err = 0.0;
  for (std::size_t s = 0; s < g.size(); ++s) err = std::max(err, std::abs(m.values[s] - hat.values[s]));
  CHECK(err <= 0.1);
  const Field<double> d = fd_gradient(m);
  for (double v : d.values) CHECK(std::abs(v) <= 1.0 + 1e-6);
}

TEST_CASE("cubic interpolation reproduces cubics") {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, 17);
  auto f = [](double x, double y) { return x * x * x - 2 * x * y * y + y; };
  const ScalarField s = sample(g, [&](auto x) { return f(x[0], x[1]); });
  const double p[2] = {0.3712, 0.6543};
  double out = 0.0;
  interpolate(s, p, {&out, 1});
  CHECK(out == doctest::Approx(f(p[0], p[1])).epsilon(1e-12));
}

}
