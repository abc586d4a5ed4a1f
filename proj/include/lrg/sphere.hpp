#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>

#include "lrg/chart_grid.hpp"
#include "lrg/weak_metric.hpp"

namespace lrg {

/// Two planar charts glued along w = 1/z (complex inversion), each sampled on [-L, L]^2.
/// For the unit sphere these are the stereographic charts from the south (N, z = 0 at the
/// north pole) and north (S) poles.  Chart N owns |z| <= 1, chart S owns |w| < 1.
namespace atlas {

enum Chart : int { N = 0, S = 1 };

constexpr double half_width = 1.5;

ChartGrid chart_grid(int res);

/// (X, Y, Z) on the unit sphere for chart coordinates (x, y).
Eigen::Vector3d to_sphere(int chart, double x, double y);
/// Chart coordinates of a point on the unit sphere.
std::array<double, 2> from_sphere(int chart, const Eigen::Vector3d& p);
/// The other chart's coordinates of the same point: (x, y) / (x^2 + y^2) with y negated.
std::array<double, 2> transition(double x, double y);

/// Conformal factor lambda = 2/(1+r^2) of the round metric lambda^2 delta.
double round_factor(double x, double y);
MetricFn round_metric_fn();
MetricDerivFn round_metric_deriv_fn();
MetricField round_metric(const ChartGrid& grid);

/// Smooth cutoff of r = |x|: 1 for r <= 0.8, 0 for r >= 1.25, chi(r) + chi(1/r) = 1.
double pou(double r);
ScalarField pou_field(const ChartGrid& grid);
bool owned(int chart, double x, double y);

/// Spinor frame change psi_S = U psi_N at the N-chart point z = (x, y):
/// U = cos t + sin t gamma_1 gamma_2 with t = pi/2 - arg z.
Eigen::MatrixXcd spin_transition(const Eigen::MatrixXcd& g1g2, double x, double y);

}  // namespace atlas

/// A map into the unit sphere sampled on one or more source charts, in ambient coordinates.
/// Each chart carries a quadrature weight (partition of unity, ownership or 1).
struct AtlasMap {
  struct Piece {
    ChartGrid grid;
    ScalarField weight;
    Field<double> p;   // 3 components
    Field<double> dp;  // 3*dim components: d_k p^a at index a*dim + k
  };
  std::vector<Piece> pieces;
};

using SphereValuedFn = std::function<Eigen::Vector3d(int chart, const Eigen::Vector2d& x)>;

/// Samples f on every piece and differentiates it with fd_gradient (with optional side masks).
AtlasMap sample_atlas_map(const std::vector<ChartGrid>& grids, const std::vector<ScalarField>& weights,
                          const SphereValuedFn& f, const std::vector<SideMask>& sides = {});

/// Sphere atlas (two charts, partition of unity) with map f.
AtlasMap sphere_atlas_map(int res, const SphereValuedFn& f, bool fold_sides = false);

/// (1/4pi) sum_pieces int weight * p . (d_1 p x d_2 p) dx
double mapping_degree(const AtlasMap& f);

}  // namespace lrg
