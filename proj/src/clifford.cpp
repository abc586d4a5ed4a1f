#include "lrg/clifford.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "lrg/chart_grid.hpp"

namespace lrg {

namespace {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

Mat pauli(char c) {
  Mat m(2, 2);
  switch (c) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
  }
  return m;
}

Mat kron_chain(const std::vector<Mat>& fs) {
  Mat out = Mat::Identity(1, 1);
  for (const Mat& f : fs) out = Eigen::kroneckerProduct(out, f).eval();
  return out;
}

}  // namespace

CliffordModule build_module(int n) {
  if (n < 2 || n > 8 || n % 2 != 0) throw InputError("build_module: n must be even with 2 <= n <= 8");
  const int m = n / 2;
  CliffordModule cm;
  cm.n = n;
  cm.dim = 1 << m;
  for (int a = 0; a < m; ++a) {
    for (char p : {'x', 'y'}) {
      std::vector<Mat> fs;
      for (int b = 0; b < m; ++b) fs.push_back(b < a ? pauli('z') : b == a ? pauli(p) : pauli('1'));
      cm.gamma.push_back(cd(0, 1) * kron_chain(fs));
    }
  }
  std::vector<Mat> zs(m, pauli('z'));
  cm.chirality = kron_chain(zs);
  return cm;
}

double clifford_relation_defect(const CliffordModule& cm) {
  const Mat id = Mat::Identity(cm.dim, cm.dim);
  double d = 0.0;
  for (int i = 0; i < cm.n; ++i) {
    d = std::max(d, (cm.gamma[i].adjoint() + cm.gamma[i]).cwiseAbs().maxCoeff());
    d = std::max(d, (cm.chirality * cm.gamma[i] + cm.gamma[i] * cm.chirality).cwiseAbs().maxCoeff());
    for (int j = 0; j < cm.n; ++j) {
      Mat r = cm.gamma[i] * cm.gamma[j] + cm.gamma[j] * cm.gamma[i];
      if (i == j) r += 2.0 * id;
      d = std::max(d, r.cwiseAbs().maxCoeff());
    }
  }
  d = std::max(d, (cm.chirality * cm.chirality - id).cwiseAbs().maxCoeff());
  d = std::max(d, std::abs(cm.chirality.trace()));
  return d;
}

CurvatureEndo curvature_endo(const CliffordModule& cm, const std::vector<double>& mu) {
  if (static_cast<int>(mu.size()) != cm.n) throw InputError("curvature_endo: need n singular values");
  for (double v : mu)
    if (!(v >= 0.0)) throw InputError("curvature_endo: singular values must be nonnegative");
  CurvatureEndo ce;
  ce.n = cm.n;
  ce.mu = mu;
  const int D = cm.dim * cm.dim;
  ce.matrix = Mat::Zero(D, D);
  for (int i = 0; i < cm.n; ++i)
    for (int j = 0; j < cm.n; ++j) {
      if (i == j || mu[i] * mu[j] == 0.0) continue;
      ce.matrix += 0.25 * mu[i] * mu[j] *
                   Eigen::kroneckerProduct(Mat(cm.gamma[i] * cm.gamma[j]), Mat(cm.gamma[j] * cm.gamma[i])).eval();
    }
  return ce;
}

Eigen::VectorXd spectrum(const CurvatureEndo& ce) {
  Eigen::SelfAdjointEigenSolver<Mat> es(ce.matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double curvature_lower_bound(const std::vector<double>& mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < mu.size(); ++j)
      if (i != j) s += mu[i] * mu[j];
  return -0.25 * s;
}

EqualitySpace equality_space(const CliffordModule& cm, const CurvatureEndo& ce) {
  EqualitySpace out;
  for (int i = 0; i < ce.n; ++i) {
    if (std::abs(ce.mu[i] - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "mu_" << i + 1 << " = " << ce.mu[i] << " != 1";
      out.certificate = os.str();
      out.basis = Mat::Zero(ce.matrix.rows(), 0);
      return out;
    }
  }
  const int D = cm.dim * cm.dim;
  // w lies in every -1 eigenspace iff sum_{i<j} |(P_ij + 1) w|^2 = 0
  Mat q = Mat::Zero(D, D);
  for (int i = 0; i < cm.n; ++i)
    for (int j = i + 1; j < cm.n; ++j) {
      Mat p = Eigen::kroneckerProduct(Mat(cm.gamma[i] * cm.gamma[j]), Mat(cm.gamma[j] * cm.gamma[i])).eval();
      p += Mat::Identity(D, D);
      q += p.adjoint() * p;
    }
  Eigen::SelfAdjointEigenSolver<Mat> es(q);
  std::vector<int> keep;
  for (int k = 0; k < D; ++k)
    if (es.eigenvalues()(k) < 1e-10) keep.push_back(k);
  out.dimension = static_cast<int>(keep.size());
  out.basis.resize(D, out.dimension);
  const double target = -0.25 * ce.n * (ce.n - 1);
  for (int c = 0; c < out.dimension; ++c) {
    out.basis.col(c) = es.eigenvectors().col(keep[c]);
    const cd r = out.basis.col(c).dot(ce.matrix * out.basis.col(c));
    out.max_defect = std::max(out.max_defect, std::abs(r - target));
  }
  return out;
}

LinalgVerdict linalg_bound_check(const Eigen::MatrixXd& g1, const Eigen::MatrixXd& g2, const Eigen::MatrixXd& A,
                                 double delta) {
  LinalgVerdict v;
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || g1.rows() != n || g2.rows() != n || g1.cols() != n || g2.cols() != n)
    throw InputError("linalg_bound_check: dimension mismatch");
  std::ostringstream why;
  if (!(delta > 0.0 && delta <= 0.5)) why << "delta outside (0, 1/2]; ";
  const double lo = (1 - delta) * (1 - delta) * (1 - 1e-12), hi = (1 + delta) * (1 + delta) * (1 + 1e-12);
  for (const auto* g : {&g1, &g2}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*g);
    if (es.eigenvalues().minCoeff() < lo || es.eigenvalues().maxCoeff() > hi)
      why << (g == &g1 ? "g1" : "g2") << " not delta-pinched; ";
  }
  const double iso = (A.transpose() * g2 * A - g1).cwiseAbs().maxCoeff();
  if (iso > 1e-10) why << "A is not an isometry (defect " << iso << "); ";
  v.hypothesis_failure = why.str();
  v.hypotheses_ok = v.hypothesis_failure.empty();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  v.norm_pow_n = std::pow(svd.singularValues()(0), n);
  v.abs_det = std::abs(A.determinant());
  v.bound = (1.0 + std::pow(3.0, 2 * (n + 1)) * delta) * v.abs_det;
  v.slack = v.bound - v.norm_pow_n;
  v.passed = v.hypotheses_ok && v.slack >= 0.0;
  return v;
}

}  // namespace lrg
