#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "lrg/maps.hpp"
#include "lrg/sphere.hpp"
#include "lrg/weak_metric.hpp"

namespace lrg {

/// Double of the closed unit disk (D, g).  The second copy is attached through the inversion
/// x -> x/|x|^2, so a single planar chart carries g on |x| <= 1 and the reflected metric on
/// |x| >= 1.  Two such charts, glued by w = 1/z, cover the double; chart A owns |x| <= 1
/// (first copy), chart B owns |y| < 1 (second copy).
struct DoubledMetric {
  ChartGrid grid;
  MetricFn base;
  std::array<MetricFn, 2> closed_form;
  std::array<MetricField, 2> chart;
  SideMask sides;              // -1 inside the unit circle, +1 outside, per chart
  ScalarField pou;             // same partition of unity in both charts
  double c1_defect = 0.0;      // jump of the radial derivative of g across the interface
  double boundary_cross = 0.0; // max |g(radial, tangential)| on the boundary circle
};

/// Requires g(radial, tangential) = 0 on the unit circle so that the double is continuous.
DoubledMetric double_metric(const MetricFn& g, int res, double c1_step = 1e-5);

/// Geodesic curvature H = g(nabla_T T, nu) of the circle |x - center| = radius with respect to
/// the inward unit normal, at `samples` equally spaced points.
std::vector<double> mean_curvature(const MetricFn& g, const MetricDerivFn& dg, const Eigen::Vector2d& center,
                                   double radius, int samples = 64);

using DiskMapFn = std::function<Eigen::Vector3d(const Eigen::Vector2d&)>;

/// Reflection of the upper hemisphere onto the lower one: (X, Y, Z) -> (X, Y, -|Z|).
Eigen::Vector3d fold(const Eigen::Vector3d& p);

struct FoldedMap {
  AtlasMap atlas_map;             // ambient values on both charts, for the degree
  std::array<MapField, 2> piece;  // chart A -> target chart N, chart B -> target chart S
  double interface_jump = 0.0;    // |f - rho f| on the boundary circle
};

/// f on the first copy, fold(f) on the second.  Requires f(boundary) in the closed lower
/// hemisphere.
FoldedMap fold_map(const DoubledMetric& dm, const DiskMapFn& f);

struct RelativeDegree {
  int degree = 0;
  double raw = 0.0;
  double distance_to_integer = 0.0;
};

/// (1/2pi) int_{f^{-1}(upper hemisphere)} f^*dA.  Throws when the integral is not near an integer.
RelativeDegree relative_degree(const DiskMapFn& f, int res = 401, double max_distance = 0.1);

}  // namespace lrg
