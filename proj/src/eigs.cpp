#include "lrg/eigs.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <random>
#include <sstream>

#include "lrg/chart_grid.hpp"

namespace lrg {

namespace {

using cd = std::complex<double>;

Eigen::MatrixXcd random_block(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd x(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) x(i, j) = cd(nd(rng), nd(rng));
  return x;
}

Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(y);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(y.rows(), y.cols());
}

struct ShiftInvert {
  Eigen::SimplicialLDLT<SpMat> solver;
  ShiftInvert(const SpMat& H, double sigma) {
    SpMat I(H.rows(), H.cols());
    I.setIdentity();
    SpMat A = H + sigma * I;
    solver.compute(A);
    if (solver.info() != Eigen::Success) throw NumericalError("shift-invert factorisation failed");
  }
  Eigen::MatrixXcd operator()(const Eigen::MatrixXcd& x) const { return solver.solve(x); }
};

}  // namespace

double inf_norm(const SpMat& H) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(H.rows());
  for (int k = 0; k < H.outerSize(); ++k)
    for (SpMat::InnerIterator it(H, k); it; ++it) rows(it.row()) += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

EigenPairs smallest_eigenpairs(const SpMat& H, int k, double sigma, double tol, int max_iter, std::uint64_t seed) {
  const Eigen::Index N = H.rows();
  if (H.cols() != N || k < 1 || k > N) throw InputError("smallest_eigenpairs: bad sizes");
  const int p = static_cast<int>(std::min<Eigen::Index>(N, k + 4));
  const ShiftInvert op(H, sigma);
  const double hn = std::max(inf_norm(H), 1e-300);
  Eigen::MatrixXcd X = orthonormalize(random_block(N, p, seed));
  EigenPairs out;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::MatrixXcd Y = orthonormalize(op(X));
    const Eigen::MatrixXcd HY = H * Y;
    Eigen::MatrixXcd small = Y.adjoint() * HY;
    small = 0.5 * (small + small.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(small);
    X = Y * es.eigenvectors();
    const Eigen::MatrixXcd HX = HY * es.eigenvectors();
    double res = 0.0;
    for (int i = 0; i < k; ++i) res = std::max(res, (HX.col(i) - es.eigenvalues()(i) * X.col(i)).norm() / hn);
    out.iterations = it;
    out.max_residual = res;
    out.values = es.eigenvalues().head(k);
    out.vectors = X.leftCols(k);
    if (res <= tol) return out;
  }
  std::ostringstream os;
  os << "smallest_eigenpairs: residual " << out.max_residual << " after " << max_iter << " sweeps";
  throw NumericalError(os.str());
}

Eigen::VectorXd smallest_distinct_eigenvalues(const SpMat& H, int k, double sigma, int steps, std::uint64_t seed,
                                              double merge_tol) {
  const Eigen::Index N = H.rows();
  steps = static_cast<int>(std::min<Eigen::Index>(steps, N));
  const ShiftInvert op(H, sigma);
  Eigen::MatrixXcd Q(N, steps + 1);
  Q.col(0) = random_block(N, 1, seed).col(0).normalized();
  Eigen::VectorXd alpha(steps), beta(steps);
  int m = 0;
  for (; m < steps; ++m) {
    Eigen::VectorXcd w = op(Q.col(m));
    alpha(m) = Q.col(m).dot(w).real();
    // full reorthogonalisation, twice
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(m + 1) * (Q.leftCols(m + 1).adjoint() * w);
    beta(m) = w.norm();
    if (beta(m) < 1e-14 * std::abs(alpha(m))) {
      ++m;
      break;
    }
    Q.col(m + 1) = w / beta(m);
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    T(i, i) = alpha(i);
    if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  std::vector<double> lam;
  for (int i = 0; i < m; ++i) {
    const double theta = es.eigenvalues()(i);
    const double est = std::abs(beta(m - 1) * es.eigenvectors()(m - 1, i));
    if (theta <= 0.0 || est > 1e-10 * theta) continue;  // unconverged Ritz value
    lam.push_back(1.0 / theta - sigma);
  }
  std::sort(lam.begin(), lam.end());
  std::vector<double> distinct;
  for (double v : lam)
    if (distinct.empty() || std::abs(v - distinct.back()) > merge_tol * std::max(1.0, std::abs(v)))
      distinct.push_back(v);
  if (static_cast<int>(distinct.size()) < k) throw NumericalError("lanczos: fewer converged distinct values than requested");
  Eigen::VectorXd out(k);
  for (int i = 0; i < k; ++i) out(i) = distinct[i];
  return out;
}

}  // namespace lrg
