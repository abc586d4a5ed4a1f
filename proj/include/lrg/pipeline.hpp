#pragma once

#include <string>
#include <vector>

#include "lrg/doubling.hpp"
#include "lrg/maps.hpp"
#include "lrg/scal_dist.hpp"
#include "lrg/sphere.hpp"

namespace lrg {

enum class Verdict { pass, fail, refused };
const char* to_string(Verdict v);

struct Stage {
  std::string name;
  std::string status;  // pass | fail | info
  std::vector<std::pair<std::string, double>> values;
  std::string detail;
};

struct PipelineReport {
  Verdict verdict = Verdict::fail;
  std::string stage;       // first decisive stage
  std::string hypothesis;  // violated hypothesis, empty on pass
  std::vector<Stage> stages;
  const Stage* find(const std::string& name) const;
};

/// Everything the rigidity check needs about (M, g) and f : M -> S^n.
struct RigidityInput {
  std::vector<MetricField> charts;      // source metric per chart
  std::vector<ScalarField> tests_region;  // per chart: where certificate bumps may sit (> 0)
  std::vector<MapField> pieces;          // f on each chart
  std::vector<MetricField> targets;      // target metric on the target chart of each piece
  AtlasMap atlas_map;                    // f in ambient coordinates, for the degree
};

struct RigidityOptions {
  double theta = 2.0;
  double bump_radius = 0.4;
  int bumps_per_axis = 3;
  double lip_tol = 1e-2;
  double iso_tol = 1e-2;
  double tol_measure = 1e-2;
  int distance_pairs = 12;
  double distance_tol = 0.015;
  std::uint64_t seed = 1;
};

/// Nonnegative bumps of the given radius centred on a regular lattice of points where
/// region > 0 and the bump stays two cells inside the chart.
std::vector<ScalarField> bump_tests(const ChartGrid& grid, const ScalarField& region, double radius, int per_axis,
                                    std::vector<std::string>* ids = nullptr, const std::string& prefix = "");

/// Curvature certificate, Lipschitz bound, degree, isometry a.e., orientation and path-metric
/// comparison, combined into one verdict.
PipelineReport rigidity_pipeline(const RigidityInput& in, const RigidityOptions& opt = {});

/// Builds the rigidity input for a map of the round two-sphere given on both stereographic charts.
RigidityInput sphere_rigidity_input(int res, const SphereValuedFn& f, bool kink_at_equator = false);

/// Doubles (D, g), folds f and runs the rigidity pipeline on the double, after checking the
/// boundary mean curvature and the relative degree.
PipelineReport disk_pipeline(const MetricFn& g, const MetricDerivFn& dg, const DiskMapFn& f, int res,
                             const RigidityOptions& opt = {});

}  // namespace lrg
