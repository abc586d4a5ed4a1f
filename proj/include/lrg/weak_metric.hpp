#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "lrg/chart_grid.hpp"

namespace lrg {

using MetricFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
/// Returns the n*n*n array d_k g_ij, layout [k][i][j].
using MetricDerivFn = std::function<std::vector<double>(const Eigen::VectorXd&)>;

/// Sampled Riemannian metric g_ij on a chart together with its weak first derivatives.
///
/// `dg` is either supplied (analytic) or obtained from fd_gradient; when `sides` is
/// non-empty, derivative stencils never straddle the declared kink interface.
struct MetricField {
  ChartGrid grid;
  int n = 0;
  std::vector<double> g;    // [s][i][j]
  std::vector<double> dg;   // [s][k][i][j]
  SideMask sides;           // empty: smooth metric
  double lambda_min = 0.0;  // smallest eigenvalue over all samples
  double sobolev_p = 0.0;   // W^{1,p} exponent metadata, > n

  Eigen::Map<const Eigen::MatrixXd> at(std::size_t s) const {
    return {g.data() + s * n * n, n, n};
  }
  double d(std::size_t s, int k, int i, int j) const { return dg[((s * n + k) * n + i) * n + j]; }
  const SideMask* side_mask() const { return sides.empty() ? nullptr : &sides; }
};

/// Validates symmetry and positive definiteness, records lambda_min.
void validate_metric(MetricField& m);

MetricField metric_from_function(const ChartGrid& grid, const MetricFn& g,
                                 const MetricDerivFn& dg = nullptr, SideMask sides = {},
                                 double sobolev_p = std::numeric_limits<double>::infinity());

/// Builds a metric from n*n samples per point; derivatives are finite-differenced.
MetricField metric_from_samples(const ChartGrid& grid, int n, std::vector<double> g, SideMask sides = {},
                                double sobolev_p = std::numeric_limits<double>::infinity());

/// Flat metric delta_ij on the grid.
MetricField flat_metric(const ChartGrid& grid);

/// Replaces every metric component by its mollification (kernel renormalized at the chart edge),
/// then re-differentiates.  Side labels are dropped: the result is smooth.
MetricField mollify_metric(const MetricField& m, double eps);

/// Field of g_ij as n(n+1)/2 packed components (i <= j), for LRGF1 export.
Field<double> packed_metric(const MetricField& m);
Field<double> packed_metric_derivatives(const MetricField& m);
MetricField metric_from_packed(const Field<double>& packed, const Field<double>* dpacked);

/// Christoffel symbols of the second kind, layout [s][k][i][j] for Gamma^k_ij.
struct ChristoffelField {
  ChartGrid grid;
  int n = 0;
  std::vector<double> data;
  double operator()(std::size_t s, int k, int i, int j) const {
    return data[((s * n + k) * n + i) * n + j];
  }
};

ChristoffelField christoffel(const MetricField& m);

/// Background-orthonormal frame e_i, the square-root endomorphism b_g and e_i^g = b_g e_i.
/// All three are n*n matrices per sample (columns are vectors).
struct FrameField {
  ChartGrid grid;
  int n = 0;
  std::vector<double> e, b, eg;
  Eigen::Map<const Eigen::MatrixXd> frame(std::size_t s) const { return {e.data() + s * n * n, n, n}; }
  Eigen::Map<const Eigen::MatrixXd> root(std::size_t s) const { return {b.data() + s * n * n, n, n}; }
  Eigen::Map<const Eigen::MatrixXd> gframe(std::size_t s) const { return {eg.data() + s * n * n, n, n}; }
};

/// Solves gamma(v, w) = g(B v, w) per sample and takes the gamma-self-adjoint positive square
/// root b_g of B.  The default background is the flat chart metric with the standard frame.
FrameField sqrt_endomorphism(const MetricField& m, const MetricField* background = nullptr);

/// Density d mu_g / d mu_gamma = sqrt(det g / det gamma).
ScalarField volume_density(const MetricField& m, const MetricField* background = nullptr);

/// Connection 1-forms omega^g_ji(d_k) of the Levi-Civita connection in the frame e^g.
struct ConnectionForms {
  ChartGrid grid;
  int n = 0;
  std::vector<double> omega;  // [s][k][j][i]
  double max_residual = 0.0;  // largest |symmetric part| removed by antisymmetrisation
  double max_norm = 0.0;
  double operator()(std::size_t s, int k, int j, int i) const {
    return omega[((s * n + k) * n + j) * n + i];
  }
};

/// Throws NumericalError when the antisymmetrisation residual exceeds rel_tol * max |omega|.
ConnectionForms connection_one_forms(const FrameField& ff, const MetricField& m, double rel_tol = 1e-3);

/// SPD square root of a symmetric matrix.
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& a);
Eigen::MatrixXd spd_inv_sqrt(const Eigen::MatrixXd& a);

}  // namespace lrg
