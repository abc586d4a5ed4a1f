#include "lrg/dirac.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unsupported/Eigen/KroneckerProduct>

#include "lrg/scal_dist.hpp"

namespace lrg {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct Tap {
  std::size_t s;
  double w;
};

// Second-order first-derivative stencil: central where both neighbours exist, else one-sided.
int stencil(const ChartGrid& g, std::size_t s, int axis, Tap* out) {
  const double h = g.spacing(axis);
  const std::size_t m = g.shift(s, axis, -1), p = g.shift(s, axis, 1);
  if (m != ChartGrid::npos && p != ChartGrid::npos) {
    out[0] = {m, -0.5 / h};
    out[1] = {p, 0.5 / h};
    return 2;
  }
  if (p != ChartGrid::npos) {
    out[0] = {s, -1.5 / h};
    out[1] = {p, 2.0 / h};
    out[2] = {g.shift(s, axis, 2), -0.5 / h};
    return 3;
  }
  out[0] = {s, 1.5 / h};
  out[1] = {m, -2.0 / h};
  out[2] = {g.shift(s, axis, -2), 0.5 / h};
  return 3;
}

Vec value(const SpinorField& f, std::size_t s) {
  return Eigen::Map<const Vec>(f.values.data() + s * f.components, f.components);
}

Vec derivative(const SpinorField& f, std::size_t s, int axis) {
  Tap taps[3];
  const int nt = stencil(f.grid, s, axis, taps);
  Vec out = Vec::Zero(f.components);
  for (int t = 0; t < nt; ++t) out += taps[t].w * value(f, taps[t].s);
  return out;
}

Vec apply_at(const ChartDirac& D, const SpinorField& psi, std::size_t s) {
  Vec out = D.b[s] * value(psi, s);
  for (int k = 0; k < D.n; ++k) out += D.a[s * D.n + k] * derivative(psi, s, k);
  return out;
}

void check_spinor(const ChartDirac& D, const SpinorField& psi) {
  if (!(psi.grid == D.metric.grid) || psi.components != D.d)
    throw InputError("spinor field does not live on this chart bundle");
}

Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

// Four-point Lagrange weights at fractional position u relative to nodes 0..3.
std::array<double, 4> lagrange4(double u) {
  std::array<double, 4> w{};
  for (int i = 0; i < 4; ++i) {
    double v = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != i) v *= (u - j) / double(i - j);
    w[i] = v;
  }
  return w;
}

}  // namespace

MatrixField spin_connection_term(const MetricField& m, const CliffordModule& cm) {
  if (m.n != cm.n) throw InputError("spin_connection_term: dimension mismatch");
  const FrameField ff = sqrt_endomorphism(m);
  const ConnectionForms om = connection_one_forms(ff, m);
  MatrixField out{m.grid, m.n, {}};
  out.data.assign(m.grid.size() * m.n, Mat::Zero(cm.dim, cm.dim));
  for (std::size_t s = 0; s < m.grid.size(); ++s)
    for (int k = 0; k < m.n; ++k) {
      Mat acc = Mat::Zero(cm.dim, cm.dim);
      for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j) acc += 0.5 * om(s, k, j, i) * cm.gamma[i] * cm.gamma[j];
      out(s, k) = acc;
    }
  return out;
}

Twist trivial_twist(const ChartGrid& grid, int rank) {
  (void)grid;
  Twist t;
  t.rank = rank;
  return t;
}

Twist constant_twist(const ChartGrid& grid, const std::vector<Eigen::MatrixXcd>& A) {
  Twist t;
  t.rank = static_cast<int>(A.at(0).rows());
  t.A = {grid, static_cast<int>(A.size()), {}};
  for (std::size_t s = 0; s < grid.size(); ++s)
    for (const auto& a : A) t.A.data.push_back(a);
  return t;
}

ChartDirac assemble_chart(const MetricField& m, const CliffordModule& cm, const Twist& twist) {
  const int n = m.n;
  if (n != cm.n) throw InputError("assemble: metric and Clifford module dimensions differ");
  ChartDirac D;
  D.metric = m;
  D.cm = cm;
  D.n = n;
  D.rank = twist.rank;
  D.d = cm.dim * twist.rank;
  D.frame = sqrt_endomorphism(m);
  D.density = volume_density(m);
  const MatrixField omega = spin_connection_term(m, cm);
  const std::size_t N = m.grid.size();
  const Mat IW = Mat::Identity(cm.dim, cm.dim), IE = Mat::Identity(twist.rank, twist.rank);
  const bool has_A = !twist.A.data.empty();
  if (has_A && (!(twist.A.grid == m.grid) || twist.A.n != n)) throw InputError("assemble: twist grid mismatch");

  // twist curvature, from A when not given
  std::vector<Mat> F = twist.F;
  if (F.empty()) {
    F.assign(N * n * n, Mat::Zero(twist.rank, twist.rank));
    if (has_A) {
      for (std::size_t s = 0; s < N; ++s)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            if (k == l) continue;
            Tap taps[3];
            Mat dkAl = Mat::Zero(twist.rank, twist.rank), dlAk = dkAl;
            int nt = stencil(m.grid, s, k, taps);
            for (int t = 0; t < nt; ++t) dkAl += taps[t].w * twist.A(taps[t].s, l);
            nt = stencil(m.grid, s, l, taps);
            for (int t = 0; t < nt; ++t) dlAk += taps[t].w * twist.A(taps[t].s, k);
            F[(s * n + k) * n + l] = dkAl - dlAk + twist.A(s, k) * twist.A(s, l) - twist.A(s, l) * twist.A(s, k);
          }
    }
  } else if (F.size() != N * n * n) {
    throw InputError("assemble: twist curvature has the wrong size");
  }

  D.a.resize(N * n);
  D.conn.resize(N * n);
  D.b.resize(N);
  D.curv.resize(N);
  double skew = 0.0;
#pragma omp parallel for schedule(static) reduction(max : skew)
  for (long long ss = 0; ss < static_cast<long long>(N); ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    const auto eg = D.frame.gframe(s);
    Mat b = Mat::Zero(D.d, D.d);
    for (int k = 0; k < n; ++k) {
      Mat ak = Mat::Zero(cm.dim, cm.dim);
      for (int i = 0; i < n; ++i) ak += eg(k, i) * cm.gamma[i];
      D.a[s * n + k] = kron(ak, IE);
      Mat c = kron(omega(s, k), IE);
      if (has_A) {
        c += kron(IW, twist.A(s, k));
        skew = std::max(skew, (twist.A(s, k) + twist.A(s, k).adjoint()).cwiseAbs().maxCoeff());
      }
      D.conn[s * n + k] = c;
      b += D.a[s * n + k] * c;
    }
    D.b[s] = b;
    Mat R = Mat::Zero(D.d, D.d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        Mat e = Mat::Zero(twist.rank, twist.rank);
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) e += eg(k, i) * eg(l, j) * F[(s * n + k) * n + l];
        R += 0.5 * kron(cm.gamma[i] * cm.gamma[j], e);
      }
    D.curv[s] = R;
  }
  D.max_twist_skew = skew;
  if (skew > 1e-10) throw InputError("assemble: twist connection is not skew-Hermitian (not metric)");
  return D;
}

SpinorField apply(const ChartDirac& D, const SpinorField& psi) {
  check_spinor(D, psi);
  SpinorField out(psi.grid, D.d);
  const long long N = static_cast<long long>(psi.grid.size());
#pragma omp parallel for schedule(static)
  for (long long ss = 0; ss < N; ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    Eigen::Map<Vec>(out.values.data() + s * D.d, D.d) = apply_at(D, psi, s);
  }
  return out;
}

namespace ref {
SpinorField apply(const ChartDirac& D, const SpinorField& psi) {
  check_spinor(D, psi);
  SpinorField out(psi.grid, D.d);
  for (std::size_t s = 0; s < psi.grid.size(); ++s)
    Eigen::Map<Vec>(out.values.data() + s * D.d, D.d) = apply_at(D, psi, s);
  return out;
}
}  // namespace ref

SpinorField covariant_derivative(const ChartDirac& D, const SpinorField& psi) {
  check_spinor(D, psi);
  const int n = D.n, d = D.d;
  SpinorField out(psi.grid, d * n);
  const long long N = static_cast<long long>(psi.grid.size());
#pragma omp parallel for schedule(static)
  for (long long ss = 0; ss < N; ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    const Vec v = value(psi, s);
    std::vector<Vec> nk(n);
    for (int k = 0; k < n; ++k) nk[k] = derivative(psi, s, k) + D.conn[s * n + k] * v;
    const auto eg = D.frame.gframe(s);
    for (int i = 0; i < n; ++i) {
      Vec acc = Vec::Zero(d);
      for (int k = 0; k < n; ++k) acc += eg(k, i) * nk[k];
      Eigen::Map<Vec>(out.values.data() + (s * n + i) * d, d) = acc;
    }
  }
  return out;
}

SpinorField apply_grading(const ChartDirac& D, const SpinorField& psi) {
  check_spinor(D, psi);
  const Mat G = kron(D.cm.chirality, Mat::Identity(D.rank, D.rank));
  SpinorField out(psi.grid, D.d);
  for (std::size_t s = 0; s < psi.grid.size(); ++s)
    Eigen::Map<Vec>(out.values.data() + s * D.d, D.d) = G * value(psi, s);
  return out;
}

SpMat DiracSystem::normal_operator() const {
  const Eigen::Index M = weight.size();
  SpMat Wh(M, M), Wi(M, M);
  std::vector<Eigen::Triplet<cplx>> th, ti;
  for (Eigen::Index i = 0; i < M; ++i) {
    th.emplace_back(i, i, std::sqrt(weight(i)));
    ti.emplace_back(i, i, 1.0 / std::sqrt(weight(i)));
  }
  Wh.setFromTriplets(th.begin(), th.end());
  Wi.setFromTriplets(ti.begin(), ti.end());
  const SpMat K = Wh * D * Wi;
  SpMat H = SpMat(K.adjoint()) * K;
  return H;
}

namespace {

void add_block(std::vector<Eigen::Triplet<cplx>>& trips, long row, long col, const Mat& m, int d) {
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (m(i, j) != cplx(0.0)) trips.emplace_back(row * d + i, col * d + j, m(i, j));
}

}  // namespace

DiracSystem assemble_torus(const MetricField& m, const CliffordModule& cm, const Twist& twist) {
  for (bool p : m.grid.periodic())
    if (!p) throw InputError("assemble_torus: every axis must be periodic");
  DiracSystem sys;
  sys.charts.push_back(assemble_chart(m, cm, twist));
  const ChartDirac& D = sys.charts[0];
  const std::size_t N = m.grid.size();
  sys.d = D.d;
  sys.unknown.assign(1, std::vector<long>(N));
  sys.owned.assign(1, std::vector<std::size_t>(N));
  sys.offset = {0};
  for (std::size_t s = 0; s < N; ++s) {
    sys.unknown[0][s] = static_cast<long>(s);
    sys.owned[0][s] = s;
  }
  std::vector<Eigen::Triplet<cplx>> trips;
  for (std::size_t s = 0; s < N; ++s) {
    add_block(trips, s, s, D.b[s], D.d);
    for (int k = 0; k < D.n; ++k) {
      Tap taps[3];
      const int nt = stencil(m.grid, s, k, taps);
      for (int t = 0; t < nt; ++t) add_block(trips, s, taps[t].s, taps[t].w * D.a[s * D.n + k], D.d);
    }
  }
  const Eigen::Index M = static_cast<Eigen::Index>(N) * D.d;
  sys.D.resize(M, M);
  sys.D.setFromTriplets(trips.begin(), trips.end());
  sys.weight.resize(M);
  for (std::size_t s = 0; s < N; ++s)
    for (int c = 0; c < D.d; ++c) sys.weight(s * D.d + c) = D.density.values[s] * m.grid.cell_volume();
  return sys;
}

SphereBundle::SphereBundle(const CliffordModule& cm, std::optional<Eigen::Matrix3d> twist_rotation) : cm_(cm) {
  if (cm.n != 2) throw InputError("SphereBundle: two-dimensional module required");
  g12_ = cm.gamma[0] * cm.gamma[1];
  if (twist_rotation) {
    twisted_ = true;
    R_ = *twist_rotation;
    if ((R_.transpose() * R_ - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-12 || R_.determinant() < 0)
      throw InputError("SphereBundle: twist map must be a rotation");
  }
}

Eigen::Vector2d SphereBundle::target(int chart, const Eigen::Vector2d& x) const {
  const Eigen::Vector3d q = R_ * atlas::to_sphere(chart, x(0), x(1));
  const auto y = atlas::from_sphere(chart, q);
  return {y[0], y[1]};
}

Eigen::Matrix2d SphereBundle::target_jacobian(int chart, const Eigen::Vector2d& x) const {
  const double h = 1e-4;
  Eigen::Matrix2d J;
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2d e = Eigen::Vector2d::Zero();
    e(k) = h;
    J.col(k) = (-target(chart, x + 2 * e) + 8 * target(chart, x + e) - 8 * target(chart, x - e) +
                target(chart, x - 2 * e)) /
               (12 * h);
  }
  return J;
}

Eigen::MatrixXcd SphereBundle::transition(double x, double y) const {
  const Mat U = atlas::spin_transition(g12_, x, y);
  if (!twisted_) return U;
  const Eigen::Vector2d t = target(atlas::N, {x, y});
  return kron(U, atlas::spin_transition(g12_, t(0), t(1)));
}

Twist SphereBundle::twist(int chart, const ChartGrid& grid) const {
  if (!twisted_) return trivial_twist(grid, 1);
  Twist tw;
  tw.rank = cm_.dim;
  tw.A = {grid, 2, std::vector<Mat>(grid.size() * 2)};
  tw.F.assign(grid.size() * 4, Mat::Zero(cm_.dim, cm_.dim));
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const auto p = grid.point(s);
    const Eigen::Vector2d x(p[0], p[1]);
    const Eigen::Vector2d y = target(chart, x);
    const Eigen::Matrix2d J = target_jacobian(chart, x);
    const double q = 1.0 + y.squaredNorm();
    // round-sphere spin connection in target coordinates: (1/2) omega_21 gamma_1 gamma_2,
    // omega_21 = -phi_2 dy^1 + phi_1 dy^2 with phi = log(2/(1+|y|^2))
    const Eigen::Vector2d phi = -2.0 * y / q;
    const Eigen::Vector2d w(-phi(1), phi(0));
    for (int k = 0; k < 2; ++k) tw.A(s, k) = 0.5 * (w(0) * J(0, k) + w(1) * J(1, k)) * g12_;
    const double lam = 2.0 / q;
    const Mat F12 = -0.5 * lam * lam * J.determinant() * g12_;
    tw.F[s * 4 + 1] = F12;
    tw.F[s * 4 + 2] = -F12;
  }
  return tw;
}

DiracSystem assemble_sphere(int res, const SphereBundle& bundle) {
  const ChartGrid grid = atlas::chart_grid(res);
  const CliffordModule& cm = bundle.module();
  DiracSystem sys;
  const MetricField g = atlas::round_metric(grid);
  for (int c = 0; c < 2; ++c) sys.charts.push_back(assemble_chart(g, cm, bundle.twist(c, grid)));
  const int d = sys.charts[0].d;
  sys.d = d;
  sys.unknown.assign(2, std::vector<long>(grid.size(), -1));
  sys.owned.resize(2);
  sys.offset = {0, 0};
  long next = 0;
  for (int c = 0; c < 2; ++c) {
    sys.offset[c] = next;
    for (std::size_t s = 0; s < grid.size(); ++s) {
      const auto x = grid.point(s);
      if (atlas::owned(c, x[0], x[1])) {
        sys.unknown[c][s] = next++;
        sys.owned[c].push_back(s);
      }
    }
  }

  // value of chart c at a non-owned sample, as a combination of the other chart's unknowns
  struct Ext {
    std::vector<std::pair<long, double>> taps;
    Mat T;
  };
  std::vector<std::unordered_map<std::size_t, Ext>> cache(2);
  const double h = grid.spacing(0), lo = grid.lo()[0];
  const int R = grid.res()[0];
  auto extension = [&](int c, std::size_t t) -> const Ext& {
    auto it = cache[c].find(t);
    if (it != cache[c].end()) return it->second;
    const int o = 1 - c;
    const auto xt = grid.point(t);
    const auto xo = atlas::transition(xt[0], xt[1]);
    const double u = (xo[0] - lo) / h, v = (xo[1] - lo) / h;
    const int i0 = static_cast<int>(std::floor(u)) - 1, j0 = static_cast<int>(std::floor(v)) - 1;
    int best = -1, bi = 0, bj = 0;
    for (int di = -2; di <= 2; ++di)
      for (int dj = -2; dj <= 2; ++dj) {
        const int cost = std::abs(di) + std::abs(dj);
        if (best >= 0 && cost >= best) continue;
        bool ok = i0 + di >= 0 && j0 + dj >= 0 && i0 + di + 3 < R && j0 + dj + 3 < R;
        for (int a = 0; ok && a < 4; ++a)
          for (int b = 0; ok && b < 4; ++b) {
            const std::size_t q = (i0 + di + a) * grid.stride(0) + (j0 + dj + b) * grid.stride(1);
            ok = sys.unknown[o][q] >= 0;
          }
        if (ok) {
          best = cost;
          bi = i0 + di;
          bj = j0 + dj;
        }
      }
    if (best < 0) throw NumericalError("assemble_sphere: no owned interpolation stencil; grid too coarse");
    Ext e;
    const auto wu = lagrange4(u - bi), wv = lagrange4(v - bj);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const std::size_t q = (bi + a) * grid.stride(0) + (bj + b) * grid.stride(1);
        e.taps.emplace_back(sys.unknown[o][q], wu[a] * wv[b]);
      }
    // psi_N = T(z)^{-1} psi_S at z in chart N; psi_S = T(z) psi_N with z the N coordinates
    e.T = c == atlas::N ? Mat(bundle.transition(xt[0], xt[1]).adjoint()) : bundle.transition(xo[0], xo[1]);
    return cache[c].emplace(t, std::move(e)).first->second;
  };

  std::vector<Eigen::Triplet<cplx>> trips;
  for (int c = 0; c < 2; ++c) {
    const ChartDirac& D = sys.charts[c];
    for (std::size_t s : sys.owned[c]) {
      const long row = sys.unknown[c][s];
      add_block(trips, row, row, D.b[s], d);
      for (int k = 0; k < 2; ++k) {
        Tap taps[3];
        const int nt = stencil(grid, s, k, taps);
        for (int ti = 0; ti < nt; ++ti) {
          const Mat M = taps[ti].w * D.a[s * 2 + k];
          const long col = sys.unknown[c][taps[ti].s];
          if (col >= 0) {
            add_block(trips, row, col, M, d);
          } else {
            const Ext& e = extension(c, taps[ti].s);
            const Mat MT = M * e.T;
            for (const auto& [q, w] : e.taps) add_block(trips, row, q, w * MT, d);
          }
        }
      }
    }
  }
  const Eigen::Index M = static_cast<Eigen::Index>(next) * d;
  sys.D.resize(M, M);
  sys.D.setFromTriplets(trips.begin(), trips.end());
  sys.weight.resize(M);
  for (int c = 0; c < 2; ++c)
    for (std::size_t s : sys.owned[c])
      for (int i = 0; i < d; ++i)
        sys.weight(sys.unknown[c][s] * d + i) = sys.charts[c].density.values[s] * grid.cell_volume();

  // Gluing check on closed forms: principal symbol and connection must transform under T.
  const Mat g12 = cm.gamma[0] * cm.gamma[1];
  const int r = bundle.rank();
  auto conn = [&](int c, const Eigen::Vector2d& x, int k) {
    const double q = 1.0 + x.squaredNorm();
    const Eigen::Vector2d phi = -2.0 * x / q;
    const double om = k == 0 ? -phi(1) : phi(0);
    Mat C = kron(0.5 * om * g12, Mat::Identity(r, r));
    if (r > 1) {
      const Eigen::Vector2d y = bundle.target(c, x);
      const Eigen::Matrix2d J = bundle.target_jacobian(c, x);
      const double qy = 1.0 + y.squaredNorm();
      const Eigen::Vector2d py = -2.0 * y / qy;
      C += kron(Mat::Identity(cm.dim, cm.dim), 0.5 * (-py(1) * J(0, k) + py(0) * J(1, k)) * g12);
    }
    return C;
  };
  double worst = 0.0;
  for (double rad : {0.85, 1.0, 1.15})
    for (int a = 0; a < 16; ++a) {
      const double th = 2 * std::numbers::pi * (a + 0.5) / 16;
      const Eigen::Vector2d z(rad * std::cos(th), rad * std::sin(th));
      const auto wa = atlas::transition(z(0), z(1));
      const Eigen::Vector2d w(wa[0], wa[1]);
      const Mat T = bundle.transition(z(0), z(1));
      const Mat Ti = T.adjoint();
      // dw^l/dz^k
      const double r2 = z.squaredNorm();
      Eigen::Matrix2d dw;
      dw << (z(1) * z(1) - z(0) * z(0)) / (r2 * r2), -2 * z(0) * z(1) / (r2 * r2), 2 * z(0) * z(1) / (r2 * r2),
          (z(1) * z(1) - z(0) * z(0)) / (r2 * r2);
      const double lz = atlas::round_factor(z(0), z(1)), lw = atlas::round_factor(w(0), w(1));
      for (int l = 0; l < 2; ++l) {
        Mat sN = Mat::Zero(cm.dim, cm.dim);
        for (int k = 0; k < 2; ++k) sN += dw(l, k) / lz * cm.gamma[k];
        const Mat lhs = T * kron(sN, Mat::Identity(r, r)) * Ti;
        const Mat rhs = kron(cm.gamma[l] / lw, Mat::Identity(r, r));
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
      }
      const double hh = 1e-5;
      for (int k = 0; k < 2; ++k) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e(k) = hh;
        const Mat dT = (-bundle.transition(z(0) + 2 * e(0), z(1) + 2 * e(1)) +
                        8.0 * bundle.transition(z(0) + e(0), z(1) + e(1)) -
                        8.0 * bundle.transition(z(0) - e(0), z(1) - e(1)) +
                        bundle.transition(z(0) - 2 * e(0), z(1) - 2 * e(1))) /
                       (12 * hh);
        Mat cs = Mat::Zero(T.rows(), T.cols());
        for (int l = 0; l < 2; ++l) cs += dw(l, k) * conn(atlas::S, w, l);
        const Mat expect = T * conn(atlas::N, z, k) * Ti - dT * Ti;
        worst = std::max(worst, (cs - expect).cwiseAbs().maxCoeff());
      }
    }
  sys.gluing_residual = worst;
  if (worst > 1e-6) {
    std::ostringstream os;
    os << "assemble_sphere: overlap gluing residual " << worst << " > 1e-6";
    throw NumericalError(os.str());
  }
  return sys;
}

KernelReport kernel_and_constancy(const DiracSystem& sys, int k, double sigma, double tol, int max_iter,
                                  std::uint64_t seed) {
  const SpMat H = sys.normal_operator();
  const EigenPairs ep = smallest_eigenpairs(H, k, sigma, tol, max_iter, seed);
  KernelReport rep;
  rep.eigenvalues = ep.values;
  rep.max_residual = ep.max_residual;
  rep.iterations = ep.iterations;
  const long B = sys.blocks();
  for (int j = 0; j < k; ++j) {
    std::vector<double> nrm(B);
    double mean = 0.0;
    for (long b = 0; b < B; ++b) {
      double acc = 0.0;
      for (int c = 0; c < sys.d; ++c) acc += std::norm(ep.vectors(b * sys.d + c, j)) / sys.weight(b * sys.d + c);
      nrm[b] = std::sqrt(acc);
      mean += nrm[b];
    }
    mean /= double(B);
    const auto [mn, mx] = std::minmax_element(nrm.begin(), nrm.end());
    rep.norm_variation.push_back((*mx - *mn) / mean);
  }
  return rep;
}

Eigen::VectorXd dirac_squared_spectrum(const DiracSystem& sys, int k, double sigma, int steps, std::uint64_t seed) {
  return smallest_distinct_eigenvalues(sys.normal_operator(), k, sigma, steps, seed);
}

LichnerowiczTerms lichnerowicz_residual(const std::vector<const ChartDirac*>& charts,
                                        const std::vector<ScalarField>& pou,
                                        const std::vector<SpinorField>& psi1,
                                        const std::vector<SpinorField>& psi2) {
  if (pou.size() != charts.size() || psi1.size() != charts.size() || psi2.size() != charts.size())
    throw InputError("lichnerowicz_residual: need one section and weight per chart");
  LichnerowiczTerms out;
  for (std::size_t c = 0; c < charts.size(); ++c) {
    const ChartDirac& D = *charts[c];
    const ChartGrid& g = D.metric.grid;
    const SpinorField D1 = apply(D, psi1[c]), D2 = apply(D, psi2[c]);
    const SpinorField N1 = covariant_derivative(D, psi1[c]), N2 = covariant_derivative(D, psi2[c]);
    ScalarField re(g, 1), im(g, 1);
    cplx dd = 0, nn = 0, rr = 0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      const double chi = pou[c].values[s];
      const Vec a = value(psi1[c], s), b = value(psi2[c], s);
      const cplx ip = a.dot(b);
      re.values[s] = chi * ip.real();
      im.values[s] = chi * ip.imag();
      if (chi == 0.0) continue;
      const double w = chi * g.weight(s) * D.density.values[s];
      dd += w * value(D1, s).dot(value(D2, s));
      for (int i = 0; i < D.n; ++i)
        nn += w * Eigen::Map<const Vec>(N1.values.data() + (s * D.n + i) * D.d, D.d)
                      .dot(Eigen::Map<const Vec>(N2.values.data() + (s * D.n + i) * D.d, D.d));
      rr += w * (D.curv[s] * a).dot(b);
    }
    const VkF vf = vk_f_fields(D.metric);
    out.dirac += dd;
    out.gradient += nn;
    out.twist += rr;
    out.scalar += 0.25 * cplx(pair_scal(D.metric, vf, re).value, pair_scal(D.metric, vf, im).value);
  }
  out.residual = std::abs(out.dirac - out.gradient - out.scalar - out.twist);
  return out;
}

SpinorField random_torus_section(const ChartGrid& grid, int d, std::uint64_t seed, int modes) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> kd(-2, 2);
  const int n = grid.dim();
  SpinorField out(grid, d);
  for (int m = 0; m < modes; ++m) {
    std::vector<int> k(n);
    for (auto& v : k) v = kd(rng);
    Vec coef(d);
    for (int c = 0; c < d; ++c) coef(c) = cplx(nd(rng), nd(rng));
    for (std::size_t s = 0; s < grid.size(); ++s) {
      const auto x = grid.point(s);
      double ph = 0.0;
      for (int a = 0; a < n; ++a) ph += 2 * std::numbers::pi * k[a] * (x[a] - grid.lo()[a]) / (grid.hi()[a] - grid.lo()[a]);
      const cplx e = std::polar(1.0, ph);
      for (int c = 0; c < d; ++c) out(s, c) += coef(c) * e;
    }
  }
  return out;
}

namespace {

double cutoff(double r) {
  auto bump = [](double u) { return u > 0 ? std::exp(-1.0 / u) : 0.0; };
  const double t = (r - 1.1) / 0.3;
  const double p = bump(1.0 - t), q = bump(t);
  return p / (p + q);
}

}  // namespace

std::vector<SpinorField> random_sphere_section(const SphereBundle& bundle, const ChartGrid& grid,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(-0.8, 0.8), sd(0.3, 0.6);
  const int d = bundle.fiber_dim();
  struct Blob {
    Eigen::Vector2d c;
    double s;
    Vec v;
  };
  std::vector<Blob> blobs[2];
  for (int c = 0; c < 2; ++c)
    for (int m = 0; m < 3; ++m) {
      Blob b{{ud(rng), ud(rng)}, sd(rng), Vec(d)};
      for (int i = 0; i < d; ++i) b.v(i) = cplx(nd(rng), nd(rng));
      blobs[c].push_back(b);
    }
  auto local = [&](int c, double x, double y) {
    Vec out = Vec::Zero(d);
    const double r = std::hypot(x, y);
    const double cut = cutoff(r);
    if (cut == 0.0) return out;
    for (const Blob& b : blobs[c]) {
      const double q = (Eigen::Vector2d(x, y) - b.c).squaredNorm();
      out += cut * std::exp(-q / (2 * b.s * b.s)) * b.v;
    }
    return out;
  };
  std::vector<SpinorField> out(2, SpinorField(grid, d));
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const auto x = grid.point(s);
    const double r2 = x[0] * x[0] + x[1] * x[1];
    for (int c = 0; c < 2; ++c) {
      Vec v = local(c, x[0], x[1]);
      if (r2 > 1.0 / (1.4 * 1.4)) {
        const auto xo = atlas::transition(x[0], x[1]);
        const Vec other = local(1 - c, xo[0], xo[1]);
        if (other.squaredNorm() > 0.0) {
          const Mat T = c == atlas::N ? Mat(bundle.transition(x[0], x[1]).adjoint()) : bundle.transition(xo[0], xo[1]);
          v += T * other;
        }
      }
      Eigen::Map<Vec>(out[c].values.data() + s * d, d) = v;
    }
  }
  return out;
}

IndexResult index_topological(const AtlasMap& f, double max_distance) {
  IndexResult r;
  r.raw_degree = mapping_degree(f);
  r.degree = static_cast<int>(std::lround(r.raw_degree));
  r.distance_to_integer = std::abs(r.raw_degree - r.degree);
  if (r.distance_to_integer > max_distance) {
    std::ostringstream os;
    os << "index_topological: degree integral " << r.raw_degree << " is " << r.distance_to_integer
       << " from an integer; map under-resolved";
    throw NumericalError(os.str());
  }
  r.index = 2 * r.degree;
  return r;
}

}  // namespace lrg
