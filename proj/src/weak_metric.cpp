#include "lrg/weak_metric.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lrg {

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd spd_inv_sqrt(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

void validate_metric(MetricField& m) {
  const int n = m.n;
  if (m.g.size() != m.grid.size() * n * n) throw InputError("metric: sample count mismatch");
  if (m.dg.size() != m.grid.size() * n * n * n) throw InputError("metric: derivative count mismatch");
  double lmin = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < m.grid.size(); ++s) {
    const auto g = m.at(s);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (!std::isfinite(g(i, j))) throw InputError("metric: non-finite sample");
        if (std::abs(g(i, j) - g(j, i)) > 1e-12 * (1 + std::abs(g(i, j))))
          throw InputError("metric: not symmetric at sample " + std::to_string(s));
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    if (!(lo > 0)) {
      std::ostringstream os;
      os << "metric: not positive definite at sample " << s << " (lambda_min = " << lo << ")";
      throw InputError(os.str());
    }
    lmin = std::min(lmin, lo);
  }
  m.lambda_min = lmin;
}

namespace {

std::vector<double> reorder_gradient(const Field<double>& grad, int n) {
  // fd_gradient layout [s][(i*n+j)][k] -> [s][k][i][j]
  const std::size_t N = grad.grid.size();
  std::vector<double> dg(N * n * n * n);
  for (std::size_t s = 0; s < N; ++s)
    for (int ij = 0; ij < n * n; ++ij)
      for (int k = 0; k < n; ++k)
        dg[(s * n + k) * n * n + ij] = grad.values[(s * n * n + ij) * n + k];
  return dg;
}

void symmetrize_dg(std::vector<double>& dg, int n, std::size_t N) {
  for (std::size_t s = 0; s < N; ++s)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double& a = dg[((s * n + k) * n + i) * n + j];
          double& b = dg[((s * n + k) * n + j) * n + i];
          a = b = 0.5 * (a + b);
        }
}

}  // namespace

MetricField metric_from_function(const ChartGrid& grid, const MetricFn& gfn, const MetricDerivFn& dgfn,
                                 SideMask sides, double sobolev_p) {
  const int n = grid.dim();
  std::vector<double> g(grid.size() * n * n);
  Eigen::VectorXd x(n);
  for (std::size_t s = 0; s < grid.size(); ++s) {
    grid.point(s, x.data());
    const Eigen::MatrixXd gs = gfn(x);
    if (gs.rows() != n || gs.cols() != n) throw InputError("metric: callable returned wrong shape");
    std::copy(gs.data(), gs.data() + n * n, g.begin() + s * n * n);
  }
  if (!dgfn) return metric_from_samples(grid, n, std::move(g), std::move(sides), sobolev_p);
  MetricField m;
  m.grid = grid;
  m.n = n;
  m.g = std::move(g);
  m.sides = std::move(sides);
  m.sobolev_p = sobolev_p;
  m.dg.resize(grid.size() * n * n * n);
  for (std::size_t s = 0; s < grid.size(); ++s) {
    grid.point(s, x.data());
    const std::vector<double> d = dgfn(x);
    if (static_cast<int>(d.size()) != n * n * n) throw InputError("metric: derivative callable wrong size");
    std::copy(d.begin(), d.end(), m.dg.begin() + s * n * n * n);
  }
  validate_metric(m);
  return m;
}

MetricField metric_from_samples(const ChartGrid& grid, int n, std::vector<double> g, SideMask sides,
                                double sobolev_p) {
  if (n != grid.dim()) throw InputError("metric: matrix size must equal chart dimension");
  MetricField m;
  m.grid = grid;
  m.n = n;
  m.sides = std::move(sides);
  m.sobolev_p = sobolev_p;
  Field<double> gf(grid, n * n, std::move(g));
  m.dg = reorder_gradient(fd_gradient(gf, m.side_mask()), n);
  symmetrize_dg(m.dg, n, grid.size());
  m.g = std::move(gf.values);
  validate_metric(m);
  return m;
}

MetricField flat_metric(const ChartGrid& grid) {
  const int n = grid.dim();
  MetricField m;
  m.grid = grid;
  m.n = n;
  m.g.assign(grid.size() * n * n, 0.0);
  m.dg.assign(grid.size() * n * n * n, 0.0);
  for (std::size_t s = 0; s < grid.size(); ++s)
    for (int i = 0; i < n; ++i) m.g[s * n * n + i * n + i] = 1.0;
  m.sobolev_p = std::numeric_limits<double>::infinity();
  m.lambda_min = 1.0;
  return m;
}

MetricField mollify_metric(const MetricField& m, double eps) {
  Field<double> gf(m.grid, m.n * m.n, m.g);
  Field<double> sm = mollify(gf, eps, EdgePolicy::renormalize);
  return metric_from_samples(m.grid, m.n, std::move(sm.values), {}, m.sobolev_p);
}

Field<double> packed_metric(const MetricField& m) {
  const int n = m.n;
  const int c = n * (n + 1) / 2;
  Field<double> out(m.grid, c);
  for (std::size_t s = 0; s < m.grid.size(); ++s) {
    int t = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) out(s, t++) = m.at(s)(i, j);
  }
  return out;
}

Field<double> packed_metric_derivatives(const MetricField& m) {
  const int n = m.n;
  const int c = n * (n + 1) / 2;
  Field<double> out(m.grid, c * n);
  for (std::size_t s = 0; s < m.grid.size(); ++s) {
    int t = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++t)
        for (int k = 0; k < n; ++k) out(s, t * n + k) = m.d(s, k, i, j);
  }
  return out;
}

MetricField metric_from_packed(const Field<double>& packed, const Field<double>* dpacked) {
  const ChartGrid& grid = packed.grid;
  const int n = grid.dim();
  const int c = n * (n + 1) / 2;
  if (packed.components != c) throw InputError("metric file: expected n(n+1)/2 components");
  std::vector<double> g(grid.size() * n * n);
  for (std::size_t s = 0; s < grid.size(); ++s) {
    int t = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++t) g[s * n * n + i * n + j] = g[s * n * n + j * n + i] = packed(s, t);
  }
  if (!dpacked) return metric_from_samples(grid, n, std::move(g));
  if (!(dpacked->grid == grid) || dpacked->components != c * n)
    throw InputError("metric file: derivative block shape mismatch");
  MetricField m;
  m.grid = grid;
  m.n = n;
  m.g = std::move(g);
  m.sobolev_p = std::numeric_limits<double>::infinity();
  m.dg.resize(grid.size() * n * n * n);
  for (std::size_t s = 0; s < grid.size(); ++s) {
    int t = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++t)
        for (int k = 0; k < n; ++k)
          m.dg[((s * n + k) * n + i) * n + j] = m.dg[((s * n + k) * n + j) * n + i] =
              (*dpacked)(s, t * n + k);
  }
  validate_metric(m);
  return m;
}

ChristoffelField christoffel(const MetricField& m) {
  const int n = m.n;
  ChristoffelField out{m.grid, n, std::vector<double>(m.grid.size() * n * n * n)};
  const long long N = static_cast<long long>(m.grid.size());
  bool singular = false;
#pragma omp parallel for schedule(static) reduction(|| : singular)
  for (long long ss = 0; ss < N; ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    const Eigen::MatrixXd g = m.at(s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const double cond = es.eigenvalues()(n - 1) / es.eigenvalues()(0);
    if (!(cond < 1e12)) {
      singular = true;
      continue;
    }
    const Eigen::MatrixXd gi = g.inverse();
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l)
            acc += gi(k, l) * (m.d(s, i, l, j) + m.d(s, j, i, l) - m.d(s, l, i, j));
          out.data[((s * n + k) * n + i) * n + j] = out.data[((s * n + k) * n + j) * n + i] = 0.5 * acc;
        }
  }
  if (singular) throw NumericalError("christoffel: metric not invertible (condition number above 1e12)");
  return out;
}

FrameField sqrt_endomorphism(const MetricField& m, const MetricField* background) {
  const int n = m.n;
  if (background && !(background->grid == m.grid)) throw InputError("sqrt_endomorphism: grid mismatch");
  FrameField ff;
  ff.grid = m.grid;
  ff.n = n;
  const std::size_t N = m.grid.size();
  ff.e.resize(N * n * n);
  ff.b.resize(N * n * n);
  ff.eg.resize(N * n * n);
  double worst = 0.0;
  const long long NN = static_cast<long long>(N);
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (long long ss = 0; ss < NN; ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    const Eigen::MatrixXd g = m.at(s);
    Eigen::MatrixXd b, e;
    if (background) {
      const Eigen::MatrixXd gam = background->at(s);
      const Eigen::MatrixXd r = spd_sqrt(gam), ri = spd_inv_sqrt(gam);
      // gamma^{1/2} B gamma^{-1/2} = gamma^{1/2} g^{-1} gamma^{1/2} is symmetric positive.
      const Eigen::MatrixXd sym = r * g.inverse() * r;
      b = ri * spd_sqrt(0.5 * (sym + sym.transpose())) * r;
      e = ri;
    } else {
      b = spd_inv_sqrt(g);
      e = Eigen::MatrixXd::Identity(n, n);
    }
    const Eigen::MatrixXd eg = b * e;
    const double res = (eg.transpose() * g * eg - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    worst = std::max(worst, res);
    std::copy(e.data(), e.data() + n * n, ff.e.begin() + s * n * n);
    std::copy(b.data(), b.data() + n * n, ff.b.begin() + s * n * n);
    std::copy(eg.data(), eg.data() + n * n, ff.eg.begin() + s * n * n);
  }
  if (!(worst <= 1e-10)) {
    std::ostringstream os;
    os << "sqrt_endomorphism: frame orthonormality residual " << worst << " above 1e-10";
    throw NumericalError(os.str());
  }
  return ff;
}

ScalarField volume_density(const MetricField& m, const MetricField* background) {
  if (background && !(background->grid == m.grid)) throw InputError("volume_density: grid mismatch");
  ScalarField out(m.grid, 1);
  for (std::size_t s = 0; s < m.grid.size(); ++s) {
    const double dg = m.at(s).determinant();
    const double db = background ? background->at(s).determinant() : 1.0;
    out.values[s] = std::sqrt(dg / db);
  }
  return out;
}

ConnectionForms connection_one_forms(const FrameField& ff, const MetricField& m, double rel_tol) {
  const int n = m.n;
  const ChristoffelField gam = christoffel(m);
  Field<double> egf(ff.grid, n * n, ff.eg);
  // component index of eg: column-major (l + n*i) is e_i^l
  const Field<double> deg = fd_gradient(egf, m.side_mask());
  ConnectionForms out;
  out.grid = m.grid;
  out.n = n;
  const std::size_t N = m.grid.size();
  out.omega.assign(N * n * n * n, 0.0);
  double worst = 0.0, big = 0.0;
  for (std::size_t s = 0; s < N; ++s) {
    const auto g = m.at(s);
    const auto eg = ff.gframe(s);
    for (int k = 0; k < n; ++k) {
      Eigen::MatrixXd w(n, n);  // w(j, i) = g(nabla_k e_i, e_j)
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd nab(n);
        for (int l = 0; l < n; ++l) {
          double acc = deg.values[(s * n * n + (l + n * i)) * n + k];
          for (int q = 0; q < n; ++q) acc += gam(s, l, k, q) * eg(q, i);
          nab(l) = acc;
        }
        const Eigen::VectorXd gn = g * nab;
        for (int j = 0; j < n; ++j) w(j, i) = eg.col(j).dot(gn);
      }
      const Eigen::MatrixXd anti = 0.5 * (w - w.transpose());
      worst = std::max(worst, (0.5 * (w + w.transpose())).cwiseAbs().maxCoeff());
      big = std::max(big, anti.cwiseAbs().maxCoeff());
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out.omega[((s * n + k) * n + j) * n + i] = anti(j, i);
    }
  }
  out.max_residual = worst;
  out.max_norm = big;
  if (worst > rel_tol * std::max(big, 1e-300) && worst > 1e-12) {
    std::ostringstream os;
    os << "connection_one_forms: metricity residual " << worst << " exceeds " << rel_tol
       << " * |omega| = " << rel_tol * big << "; metric under-resolved";
    throw NumericalError(os.str());
  }
  return out;
}

}  // namespace lrg
