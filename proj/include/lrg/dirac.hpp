#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "lrg/chart_grid.hpp"
#include "lrg/clifford.hpp"
#include "lrg/eigs.hpp"
#include "lrg/sphere.hpp"
#include "lrg/weak_metric.hpp"

namespace lrg {

using cplx = std::complex<double>;
using SpinorField = Field<cplx>;

/// Per-sample, per-coordinate-direction complex matrices.
struct MatrixField {
  ChartGrid grid;
  int n = 0;
  std::vector<Eigen::MatrixXcd> data;  // [s*n + k]
  const Eigen::MatrixXcd& operator()(std::size_t s, int k) const { return data[s * n + k]; }
  Eigen::MatrixXcd& operator()(std::size_t s, int k) { return data[s * n + k]; }
};

/// (1/2) sum_{i<j} omega_ji(d_k) gamma_i gamma_j per sample and direction.
MatrixField spin_connection_term(const MetricField& m, const CliffordModule& cm);

/// Metric connection d + A on a trivialised twist bundle of the given rank.
struct Twist {
  int rank = 1;
  MatrixField A;                       // empty data: trivial connection
  std::vector<Eigen::MatrixXcd> F;     // [s*n*n + k*n + l]; empty: derived from A by differences
};

Twist trivial_twist(const ChartGrid& grid, int rank = 1);
/// Constant connection matrices A_k (skew-Hermitian).
Twist constant_twist(const ChartGrid& grid, const std::vector<Eigen::MatrixXcd>& A);

/// Local coefficients of D = a^k d_k + b on one chart acting on W (x) C^rank.
struct ChartDirac {
  MetricField metric;
  CliffordModule cm;
  int n = 0, rank = 1, d = 0;
  FrameField frame;
  std::vector<Eigen::MatrixXcd> a;     // [s*n + k]
  std::vector<Eigen::MatrixXcd> conn;  // [s*n + k]  Omega_k (x) 1 + 1 (x) A_k
  std::vector<Eigen::MatrixXcd> b;     // [s]
  std::vector<Eigen::MatrixXcd> curv;  // [s] twist curvature endomorphism
  ScalarField density;                 // sqrt det g
  double max_twist_skew = 0.0;         // |A + A^H|, must vanish for a metric twist
};

ChartDirac assemble_chart(const MetricField& m, const CliffordModule& cm, const Twist& twist);

/// D psi on one chart with second-order differences (one-sided at non-periodic edges).
SpinorField apply(const ChartDirac& D, const SpinorField& psi);
/// nabla_{e_i^g} psi, component i*d + c.
SpinorField covariant_derivative(const ChartDirac& D, const SpinorField& psi);
/// Chirality (x) 1 applied samplewise.
SpinorField apply_grading(const ChartDirac& D, const SpinorField& psi);

namespace ref {
SpinorField apply(const ChartDirac& D, const SpinorField& psi);
}

/// Discrete operator on the unknowns of a chart atlas.
struct DiracSystem {
  std::vector<ChartDirac> charts;
  std::vector<std::vector<long>> unknown;        // per chart: sample -> unknown block, -1 if not owned
  std::vector<std::vector<std::size_t>> owned;   // per chart: owned samples in unknown order
  std::vector<long> offset;                      // first unknown block of each chart
  int d = 0;
  SpMat D;
  Eigen::VectorXd weight;  // quadrature weight mu_g h^n per scalar unknown
  double gluing_residual = 0.0;

  long blocks() const { return static_cast<long>(weight.size()) / d; }
  /// Weighted D^dagger D, similarity-transformed to a Hermitian matrix.
  SpMat normal_operator() const;
};

/// Single periodic chart (torus); every sample is an unknown.
DiracSystem assemble_torus(const MetricField& m, const CliffordModule& cm, const Twist& twist);

/// Spinor bundle of the round sphere twisted by the pull-back of the sphere's own spinor bundle
/// along a rotation R (R = 1 is the identity map), or untwisted.
class SphereBundle {
 public:
  SphereBundle(const CliffordModule& cm, std::optional<Eigen::Matrix3d> twist_rotation);
  int rank() const { return twisted_ ? cm_.dim : 1; }
  int fiber_dim() const { return cm_.dim * rank(); }
  const CliffordModule& module() const { return cm_; }
  /// psi_S = T psi_N at the chart-N point (x, y).
  Eigen::MatrixXcd transition(double x, double y) const;
  /// Twist connection and curvature sampled on a chart grid.
  Twist twist(int chart, const ChartGrid& grid) const;
  /// Target chart coordinates of the twist map and its Jacobian.
  Eigen::Vector2d target(int chart, const Eigen::Vector2d& x) const;
  Eigen::Matrix2d target_jacobian(int chart, const Eigen::Vector2d& x) const;

 private:
  CliffordModule cm_;
  bool twisted_ = false;
  Eigen::Matrix3d R_ = Eigen::Matrix3d::Identity();
  Eigen::MatrixXcd g12_;
};

/// Two stereographic charts, unknowns on the owned discs; derivative stencils reaching into
/// the other chart's disc use cubic interpolation there composed with the transition.
DiracSystem assemble_sphere(int res, const SphereBundle& bundle);

struct KernelReport {
  Eigen::VectorXd eigenvalues;              // of the weighted D^dagger D
  std::vector<double> norm_variation;       // sup - inf of |psi| with mean |psi| = 1
  double max_residual = 0.0;
  int iterations = 0;
};

KernelReport kernel_and_constancy(const DiracSystem& sys, int k, double sigma = 1e-6, double tol = 1e-10,
                                  int max_iter = 300, std::uint64_t seed = 1);

/// Smallest k distinct eigenvalues of D^dagger D.
Eigen::VectorXd dirac_squared_spectrum(const DiracSystem& sys, int k, double sigma = 1.0, int steps = 160,
                                       std::uint64_t seed = 1);

struct LichnerowiczTerms {
  cplx dirac;     // (D psi1, D psi2)
  cplx gradient;  // (nabla psi1, nabla psi2)
  cplx scalar;    // (1/4) <<scal, <psi1, psi2>>>
  cplx twist;     // (R psi1, psi2)
  double residual = 0.0;
};

/// Both sides of the integral identity, each chart weighted by its partition-of-unity field.
LichnerowiczTerms lichnerowicz_residual(const std::vector<const ChartDirac*>& charts,
                                        const std::vector<ScalarField>& pou,
                                        const std::vector<SpinorField>& psi1,
                                        const std::vector<SpinorField>& psi2);

/// Random smooth periodic section (few Fourier modes) on a torus chart.
SpinorField random_torus_section(const ChartGrid& grid, int d, std::uint64_t seed, int modes = 3);

/// Random smooth global section of the sphere bundle sampled on both full chart grids.
std::vector<SpinorField> random_sphere_section(const SphereBundle& bundle, const ChartGrid& grid,
                                               std::uint64_t seed);

struct IndexResult {
  int index = 0;
  int degree = 0;
  double raw_degree = 0.0;
  double distance_to_integer = 0.0;
};

/// 2 deg f, with deg f from the Jacobian integral; throws when the integral is not near an integer.
IndexResult index_topological(const AtlasMap& f, double max_distance = 0.1);

}  // namespace lrg
