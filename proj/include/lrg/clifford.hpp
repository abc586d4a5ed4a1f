#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "lrg/chart_grid.hpp"

namespace lrg {

/// Irreducible complex Cl_n module for even n, built as a tensor product of Pauli matrices.
/// Generators are skew-adjoint with gamma_i^2 = -1; the chirality is diagonal.
struct CliffordModule {
  int n = 0;
  int dim = 0;  // 2^{n/2}
  std::vector<Eigen::MatrixXcd> gamma;
  Eigen::MatrixXcd chirality;
};

CliffordModule build_module(int n);

/// Largest deviation from the Clifford relations, skew-adjointness and chirality relations.
double clifford_relation_defect(const CliffordModule& cm);

/// (1/4) sum_{i != j} mu_i mu_j (gamma_i gamma_j (x) gamma_j gamma_i) acting on W (x) W.
struct CurvatureEndo {
  int n = 0;
  std::vector<double> mu;
  Eigen::MatrixXcd matrix;
};

CurvatureEndo curvature_endo(const CliffordModule& cm, const std::vector<double>& mu);

/// Ascending spectrum of the (Hermitian) operator.
Eigen::VectorXd spectrum(const CurvatureEndo& ce);

/// -(1/4) sum_{i != j} mu_i mu_j
double curvature_lower_bound(const std::vector<double>& mu);

struct EqualitySpace {
  int dimension = 0;
  Eigen::MatrixXcd basis;     // orthonormal columns
  std::string certificate;    // why the space is empty when mu is not all ones
  double max_defect = 0.0;    // max | <R w, w> + n(n-1)/4 | over basis vectors
};

/// Common eigenspace on which every gamma_i gamma_j (x) gamma_j gamma_i (i != j) acts by -1;
/// this is exactly where <R w, w> = -n(n-1)/4 |w|^2 when all mu_i = 1.
EqualitySpace equality_space(const CliffordModule& cm, const CurvatureEndo& ce);

struct LinalgVerdict {
  bool hypotheses_ok = false;
  std::string hypothesis_failure;
  double norm_pow_n = 0.0;  // |A|^n (Euclidean operator norm)
  double abs_det = 0.0;
  double bound = 0.0;       // (1 + 3^{2(n+1)} delta) |det A|
  double slack = 0.0;       // bound - |A|^n
  bool passed = false;
};

/// Checks |A|^n <= (1 + 3^{2(n+1)} delta) |det A| for an isometry A : (R^n, g1) -> (R^n, g2)
/// between delta-pinched inner products.
LinalgVerdict linalg_bound_check(const Eigen::MatrixXd& g1, const Eigen::MatrixXd& g2, const Eigen::MatrixXd& A,
                                 double delta);

}  // namespace lrg
