#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lrg/chart_grid.hpp"
#include "lrg/weak_metric.hpp"

namespace lrg {

using PointMapFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// A map between charts sampled on the source grid.
///
/// jac(s) is d f^a / d x^k (column-major n*n).  sv(s) are the singular values of
/// h(f(x))^{1/2} df g(x)^{-1/2}, i.e. of df measured in the metric inner products.
/// Samples next to a declared kink interface are masked out of a.e. statistics.
struct MapField {
  MetricField source;
  MetricFn target_metric;
  int n = 0;
  Field<double> values;
  std::vector<double> jac;
  std::vector<std::uint8_t> mask;
  std::vector<double> sv;            // [s][i], descending
  std::vector<std::int8_t> det_sign;
  ScalarField region;                // weight of each sample in the statistics (0 = ignored)

  const ChartGrid& grid() const { return source.grid; }
  Eigen::Map<const Eigen::MatrixXd> jacobian(std::size_t s) const { return {jac.data() + s * n * n, n, n}; }
  /// mu_g-weighted statistical weight of a sample (zero when masked or outside the region).
  double stat_weight(std::size_t s) const;
};

struct MapOptions {
  SideMask sides;          // kink interface labels on the source grid
  JacobianFn analytic_jac;  // overrides finite differences when set
  ScalarField region;      // empty: all samples count
};

MapField make_map_field(const MetricField& source, MetricFn target_metric, Field<double> values,
                        const MapOptions& opt = {});
MapField sample_map(const MetricField& source, MetricFn target_metric, const PointMapFn& f,
                    const MapOptions& opt = {});

/// Singular values and orientation of one linear map between inner-product spaces.
Eigen::VectorXd metric_singular_values(const Eigen::MatrixXd& J, const Eigen::MatrixXd& g, const Eigen::MatrixXd& h);

struct LipschitzProfile {
  double ess_sup = 0.0;
  double pair_ratio = std::numeric_limits<double>::quiet_NaN();
  int pairs = 0;
};

/// ess sup of |df| over unmasked samples; when target metrics (one per piece) are given, also
/// the largest d_h(f x, f y) / d_g(x, y) over `pairs` random sample pairs.
LipschitzProfile lipschitz_profile(const std::vector<const MapField*>& f,
                                   const std::vector<const MetricField*>& targets = {}, int pairs = 0,
                                   std::uint64_t seed = 1);

struct QuasiregularityReport {
  double K_min = 0.0;
  double positive_fraction = 0.0;
  double negative_fraction = 0.0;
  double degenerate_fraction = 0.0;
  bool quasiregular = false;
  std::string verdict;
};

/// K_min = ess sup |df|^n / det df (Euclidean chart Jacobians) over samples with det > 0.
QuasiregularityReport quasiregularity(const std::vector<const MapField*>& f, double tol_measure = 1e-2);
double brute_force_K(const Eigen::MatrixXd& A);

struct IsometryReport {
  double isometric_fraction = 0.0;
  double positive_fraction = 0.0;
  double negative_fraction = 0.0;
  bool flipped = false;
  bool isometric = false;
  bool orientation_ok = false;
  bool passed = false;
  std::string verdict;
};

IsometryReport isometry_ae_check(const std::vector<const MapField*>& f, double tol = 1e-2,
                                 double tol_measure = 1e-2);

/// Fraction of samples with mu_1 mu_2 <= 1 + tol.
double area_nonincreasing_check(const std::vector<const MapField*>& f, double tol = 1e-2);

struct PathOptions {
  int directions = 16;  // 8 or 16
  bool refine = true;   // relax the graph path towards a geodesic
  int refine_vertices = 64;
};

struct PathResult {
  double graph_length = 0.0;  // shortest path in the stencil graph
  double length = 0.0;        // refined polyline length (== graph_length when refine is off)
  std::vector<Eigen::VectorXd> polyline;
};

/// Shortest path between the grid samples nearest to x and y.
PathResult path_distance(const MetricField& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                         const PathOptions& opt = {});

/// Graph distances from the sample nearest to x to every sample (infinity where masked).
std::vector<double> graph_distance_field(const MetricField& m, std::size_t source, int directions = 16,
                                         const std::vector<std::uint8_t>* blocked = nullptr);

struct MetricIsometryVerdict {
  bool stage1 = false;
  std::string stage1_reason;
  double max_rel_discrepancy = 0.0;
  double tolerance = 0.0;
  int pairs = 0;
  bool passed = false;
};

/// Stage 1: orientation-preserving isometry a.e.  Stage 2: path distances through f
/// agree within `tolerance` on random pairs.  Stage 2 alone never passes.
MetricIsometryVerdict metric_isometry_verdict(const std::vector<const MapField*>& f,
                                              const std::vector<const MetricField*>& targets,
                                              int samples, std::uint64_t seed = 1, double tolerance = 0.015,
                                              double iso_tol = 1e-2, double tol_measure = 1e-2);

}  // namespace lrg
