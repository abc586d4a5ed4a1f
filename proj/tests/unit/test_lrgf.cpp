#include <sstream>

#include "doctest.h"
#include "lrg/lrgf.hpp"
#include "lrg/weak_metric.hpp"

using namespace lrg;

TEST_SUITE("lrgf") {

TEST_CASE("round trip preserves grid, values and derivative block") {
  const ChartGrid g({-1.0, 0.0}, {1.0, 2.0}, {9, 12}, {false, true});
  Field<double> f(g, 3);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = 0.1 * i - 7.25;
  Field<double> d(g, 6);
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] = 1.0 / (i + 1);
  std::stringstream ss;
  write_lrgf(ss, f, &d);
  const LrgfFile back = read_lrgf(ss);
  CHECK(back.field.grid == g);
  CHECK(back.field.components == 3);
  CHECK(back.field.values == f.values);
  REQUIRE(back.derivatives.has_value());
  CHECK(back.derivatives->values == d.values);
}

TEST_CASE("header is the documented text line") {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, 4);
  std::stringstream ss;
  write_lrgf(ss, Field<double>(g, 1, 1.0));
  std::string line;
  std::getline(ss, line);
  CHECK(line.rfind("LRGF1 2 4 4 0 0 1 1 00 1", 0) == 0);
}

TEST_CASE("malformed files are rejected") {
  std::stringstream bad("LRGF2 1 4 0 1 0 1\n");
  CHECK_THROWS_AS(read_lrgf(bad), InputError);
  std::stringstream shortfile("LRGF1 1 4 0 1 0 1\n");
  CHECK_THROWS_AS(read_lrgf(shortfile), InputError);
}

TEST_CASE("packed metric round trip") {
  const ChartGrid g = ChartGrid::cube(2, -1.0, 1.0, 17);
  const MetricField m = metric_from_function(g, [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd a(2, 2);
    a << 2 + x(0), 0.3 * x(1), 0.3 * x(1), 1.5;
    return a;
  });
  const Field<double> p = packed_metric(m), dp = packed_metric_derivatives(m);
  std::stringstream ss;
  write_lrgf(ss, p, &dp);
  const LrgfFile back = read_lrgf(ss);
  const MetricField m2 = metric_from_packed(back.field, back.derivatives ? &*back.derivatives : nullptr);
  CHECK(m2.g == m.g);
  CHECK(m2.dg == m.dg);
}

}
