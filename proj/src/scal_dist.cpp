#include "lrg/scal_dist.hpp"

#include <cmath>
#include <sstream>

#include "lrg/maps.hpp"

namespace lrg {

VkF vk_f_fields(const MetricField& m) {
  const int n = m.n;
  const ChristoffelField gam = christoffel(m);
  VkF out{Field<double>(m.grid, n), ScalarField(m.grid, 1), ScalarField(m.grid, 1)};
  const long long N = static_cast<long long>(m.grid.size());
#pragma omp parallel for schedule(static)
  for (long long ss = 0; ss < N; ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    const Eigen::MatrixXd gi = Eigen::MatrixXd(m.at(s)).inverse();
    // trace Gamma^j_{ji} for each i
    Eigen::VectorXd tr = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) tr(i) += gam(s, j, j, i);
    // d_k g^{ij} = -g^{ia} d_k g_ab g^{bj}
    std::vector<Eigen::MatrixXd> dgi(n);
    for (int k = 0; k < n; ++k) {
      Eigen::MatrixXd d(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) d(a, b) = m.d(s, k, a, b);
      dgi[k] = -gi * d * gi;
    }
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) {
        v -= gi(i, k) * tr(i);
        for (int j = 0; j < n; ++j) v += gi(i, j) * gam(s, k, i, j);
      }
      out.V(s, k) = v;
    }
    double f = 0.0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) {
        f += dgi[k](i, k) * tr(i);
        for (int j = 0; j < n; ++j) f -= dgi[k](i, j) * gam(s, k, i, j);
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double q = 0.0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) q += gam(s, k, k, l) * gam(s, l, i, j) - gam(s, k, j, l) * gam(s, l, i, k);
        f += gi(i, j) * q;
      }
    out.F.values[s] = f;
    double div = 0.0;
    for (int k = 0; k < n; ++k) div += out.V(s, k) * tr(k);
    out.F_mu.values[s] = f - div;
  }
  return out;
}

namespace {

void require_interior_support(const ScalarField& u) {
  const ChartGrid& g = u.grid;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (u.values[s] == 0.0) continue;
    for (int a = 0; a < g.dim(); ++a) {
      if (g.periodic()[a]) continue;
      const int i = g.index_along(s, a);
      if (i < 2 || i > g.res()[a] - 3) {
        std::ostringstream os;
        os << "pair_scal: test function support reaches the chart boundary at sample " << s;
        throw InputError(os.str());
      }
    }
  }
}

}  // namespace

ScalarPairing pair_scal(const MetricField& m, const VkF& vf, const ScalarField& u, const Field<double>* grad_u,
                        std::string id) {
  if (!(u.grid == m.grid)) throw InputError("pair_scal: test function grid differs from metric grid");
  require_finite(u, "pair_scal");
  require_interior_support(u);
  Field<double> du_local;
  if (!grad_u) {
    du_local = fd_gradient(u);
    grad_u = &du_local;
  }
  const int n = m.n;
  double vt = 0.0, ft = 0.0;
  const long long N = static_cast<long long>(m.grid.size());
#pragma omp parallel for schedule(static) reduction(+ : vt, ft)
  for (long long ss = 0; ss < N; ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    const double w = m.grid.weight(s) * std::sqrt(m.at(s).determinant());
    double vd = 0.0;
    for (int k = 0; k < n; ++k) vd += vf.V(s, k) * (*grad_u)(s, k);
    vt -= vd * w;
    ft += vf.F_mu.values[s] * u.values[s] * w;
  }
  return {vt + ft, vt, ft, std::move(id)};
}

ScalarPairing pair_scal(const MetricField& m, const ScalarField& u, const Field<double>* grad_u, std::string id) {
  return pair_scal(m, vk_f_fields(m), u, grad_u, std::move(id));
}

CertificateReport lower_bound_certificate(const MetricField& m, const ScalarField& theta,
                                          const std::vector<ScalarField>& tests, const std::vector<std::string>& ids) {
  if (!(theta.grid == m.grid)) throw InputError("certificate: theta grid mismatch");
  const VkF vf = vk_f_fields(m);
  const ScalarField dens = volume_density(m);
  const double h = m.grid.max_spacing();
  CertificateReport rep;
  rep.passed = true;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < tests.size(); ++t) {
    const ScalarField& u = tests[t];
    for (double v : u.values)
      if (v < 0) throw InputError("certificate: test function " + std::to_string(t) + " is negative somewhere");
    CertificateEntry e;
    e.id = t < ids.size() ? ids[t] : "u" + std::to_string(t);
    e.pairing = pair_scal(m, vf, u, nullptr, e.id).value;
    ScalarField tu = u;
    for (std::size_t s = 0; s < tu.values.size(); ++s) tu.values[s] *= theta.values[s];
    e.theta_integral = quadrature(tu, dens);
    e.slack = e.pairing - e.theta_integral;
    e.tol = std::max(1e-3, 10.0 * h * h) * quadrature(u, dens);
    e.ok = e.slack >= -e.tol;
    rep.passed = rep.passed && e.ok;
    if (e.slack < rep.min_slack) {
      rep.min_slack = e.slack;
      rep.worst_witness = e.id;
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

double pullback_invariance_check(const MetricField& g, const MetricField& h, const MapField& phi,
                                 const ScalarField& u, double pullback_tol) {
  if (!(phi.grid() == g.grid)) throw InputError("pullback check: map grid differs from source metric grid");
  if (!(u.grid == h.grid)) throw InputError("pullback check: test function must live on the target grid");
  const int n = g.n;
  double worst = 0.0;
  ScalarField uphi(g.grid, 1);
  std::vector<double> y(n), val(1);
  for (std::size_t s = 0; s < g.grid.size(); ++s) {
    for (int a = 0; a < n; ++a) y[a] = phi.values(s, a);
    const Eigen::Map<const Eigen::MatrixXd> J = phi.jacobian(s);
    const Eigen::MatrixXd hy = phi.target_metric(Eigen::Map<const Eigen::VectorXd>(y.data(), n));
    const Eigen::MatrixXd pb = J.transpose() * hy * J;
    worst = std::max(worst, (pb - Eigen::MatrixXd(g.at(s))).cwiseAbs().maxCoeff());
    if (!h.grid.contains(y)) {
      uphi.values[s] = 0.0;
      continue;
    }
    interpolate(u, y, val);
    uphi.values[s] = val[0];
  }
  if (worst > pullback_tol) {
    std::ostringstream os;
    os << "pullback check: phi^*h differs from g by " << worst << " > " << pullback_tol;
    throw InputError(os.str());
  }
  const double a = pair_scal(g, uphi).value;
  const double b = pair_scal(h, u).value;
  return std::abs(a - b);
}

}  // namespace lrg
