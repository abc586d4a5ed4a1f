#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>

namespace lrg {

using SpMat = Eigen::SparseMatrix<std::complex<double>>;

struct EigenPairs {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // orthonormal columns
  double max_residual = 0.0;  // max |H x - lambda x| / |H|_inf
  int iterations = 0;
};

/// k smallest eigenpairs of a Hermitian positive semidefinite H by block subspace iteration
/// on (H + sigma)^{-1} with Rayleigh-Ritz.  Throws NumericalError when the relative residual
/// does not reach `tol` within max_iter sweeps.
EigenPairs smallest_eigenpairs(const SpMat& H, int k, double sigma, double tol = 1e-10, int max_iter = 200,
                               std::uint64_t seed = 1);

/// Smallest k distinct eigenvalues by shift-invert Lanczos with full reorthogonalisation.
/// A single Krylov sequence sees each eigenspace once, so multiplicities are not resolved.
Eigen::VectorXd smallest_distinct_eigenvalues(const SpMat& H, int k, double sigma, int steps = 120,
                                              std::uint64_t seed = 1, double merge_tol = 1e-8);

double inf_norm(const SpMat& H);

}  // namespace lrg
