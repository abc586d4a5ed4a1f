#include <cmath>

#include "doctest.h"
#include "lrg/pipeline.hpp"

using namespace lrg;

namespace {

Eigen::Vector3d identity(int c, const Eigen::Vector2d& x) { return atlas::to_sphere(c, x(0), x(1)); }

Eigen::Vector3d folded(int c, const Eigen::Vector2d& x) { return fold(atlas::to_sphere(c, x(0), x(1))); }

MetricFn flat_fn() {
  return [](const Eigen::VectorXd& x) -> Eigen::MatrixXd { return Eigen::MatrixXd::Identity(x.size(), x.size()); };
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("bump tests stay inside the region") {
  const ChartGrid g = atlas::chart_grid(65);
  const ScalarField core = sample(g, [](auto x) { return std::hypot(x[0], x[1]) <= 0.8 ? 1.0 : 0.0; });
  std::vector<std::string> ids;
  const auto t = bump_tests(g, core, 0.4, 3, &ids);
  REQUIRE(t.size() == ids.size());
  REQUIRE_FALSE(t.empty());
  for (const auto& u : t)
    for (double v : u.values) CHECK(v >= 0.0);
}

TEST_CASE("round sphere, identity map") {
  const PipelineReport r = rigidity_pipeline(sphere_rigidity_input(97, identity));
  CHECK(r.verdict == Verdict::pass);
  CHECK(r.hypothesis.empty());
  REQUIRE(r.find("degree"));
  CHECK(r.find("curvature")->status == "pass");
  CHECK(r.find("lipschitz")->status == "pass");
}

TEST_CASE("folding map fails at orientation") {
  const PipelineReport r = rigidity_pipeline(sphere_rigidity_input(97, folded, true));
  CHECK(r.verdict == Verdict::fail);
  CHECK(r.stage == "orientation");
  CHECK(r.find("isometry_ae")->status == "pass");
  CHECK(r.find("lipschitz")->status == "pass");
}

TEST_CASE("flat torus with a degree zero map is refused") {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, 32, true);
  RigidityInput in;
  in.charts.push_back(flat_metric(g));
  in.tests_region.push_back(ScalarField(g, 1, 1.0));
  Field<double> vals(g, 2, 0.0);
  in.pieces.push_back(make_map_field(in.charts[0], atlas::round_metric_fn(), vals));
  in.targets.push_back(atlas::round_metric(g));
  in.atlas_map = sample_atlas_map({g}, {ScalarField(g, 1, 1.0)},
                                  [](int, const Eigen::Vector2d&) { return Eigen::Vector3d(0, 0, 1); });
  const PipelineReport r = rigidity_pipeline(in);
  CHECK(r.verdict == Verdict::refused);
  CHECK(r.stage == "degree");
  CHECK(r.find("curvature")->status == "fail");
}

TEST_CASE("disk pipeline") {
  const DiskMapFn stereo = [](const Eigen::Vector2d& x) { return atlas::to_sphere(atlas::N, x(0), x(1)); };
  SUBCASE("hemisphere") {
    const PipelineReport r = disk_pipeline(atlas::round_metric_fn(), atlas::round_metric_deriv_fn(), stereo, 97);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.find("mean_curvature")->status == "pass");
  }
  SUBCASE("flat disk") {
    const DiskMapFn hemi_like = [](const Eigen::Vector2d& x) {
      return atlas::to_sphere(atlas::N, x(0), x(1));
    };
    const PipelineReport r = disk_pipeline(flat_fn(), nullptr, hemi_like, 97);
    CHECK(r.verdict != Verdict::pass);
    CHECK(r.find("curvature")->status == "fail");
  }
  SUBCASE("boundary outside the lower hemisphere") {
    const DiskMapFn up = [](const Eigen::Vector2d&) { return Eigen::Vector3d(0, 0, 1); };
    const PipelineReport r = disk_pipeline(atlas::round_metric_fn(), nullptr, up, 97);
    CHECK(r.verdict == Verdict::refused);
    CHECK(r.stage == "fold");
  }
}

}
