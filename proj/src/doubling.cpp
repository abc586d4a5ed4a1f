#include "lrg/doubling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace lrg {

namespace {

// Jacobian of the inversion x -> x/|x|^2
Eigen::Matrix2d inversion_jacobian(const Eigen::Vector2d& x) {
  const double r2 = x.squaredNorm();
  return (r2 * Eigen::Matrix2d::Identity() - 2.0 * x * x.transpose()) / (r2 * r2);
}

Eigen::Vector2d invert(const Eigen::Vector2d& x) { return x / x.squaredNorm(); }

const Eigen::Matrix2d kConj = (Eigen::Matrix2d() << 1, 0, 0, -1).finished();

Eigen::MatrixXd chart_a(const MetricFn& g, const Eigen::Vector2d& x) {
  if (x.squaredNorm() <= 1.0) return g(x);
  const Eigen::Matrix2d J = inversion_jacobian(x);
  return J.transpose() * g(invert(x)) * J;
}

Eigen::MatrixXd chart_b(const MetricFn& g, const Eigen::Vector2d& y) {
  if (y.squaredNorm() <= 1.0) return kConj * g(kConj * y) * kConj;
  const Eigen::Matrix2d J = kConj * inversion_jacobian(y);
  return J.transpose() * g(kConj * invert(y)) * J;
}

SideMask interface_sides(const ChartGrid& grid) {
  SideMask m(grid.size());
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const auto x = grid.point(s);
    m[s] = x[0] * x[0] + x[1] * x[1] < 1.0 ? -1 : 1;
  }
  return m;
}

}  // namespace

DoubledMetric double_metric(const MetricFn& g, int res, double c1_step) {
  DoubledMetric dm;
  dm.grid = atlas::chart_grid(res);
  // the partition of unity changes over 0.8 < r < 1.25; stencils need a few samples inside it
  if (4 * dm.grid.spacing(0) > 0.2) throw InputError("double: collar too thin for the difference stencils");
  dm.base = g;

  for (int a = 0; a < 64; ++a) {
    const double th = 2 * std::numbers::pi * a / 64;
    const Eigen::Vector2d rad(std::cos(th), std::sin(th)), tan(-std::sin(th), std::cos(th));
    const Eigen::MatrixXd gb = g(rad);
    dm.boundary_cross = std::max(dm.boundary_cross, std::abs(rad.dot(gb * tan)));
  }
  if (dm.boundary_cross > 1e-10) {
    std::ostringstream os;
    os << "double: g(radial, tangential) = " << dm.boundary_cross
       << " on the boundary; the reflected metric would be discontinuous";
    throw InputError(os.str());
  }

  dm.closed_form[0] = [g](const Eigen::VectorXd& x) { return chart_a(g, x.head<2>()); };
  dm.closed_form[1] = [g](const Eigen::VectorXd& y) { return chart_b(g, y.head<2>()); };
  dm.sides = interface_sides(dm.grid);
  dm.pou = atlas::pou_field(dm.grid);
  for (int c = 0; c < 2; ++c)
    dm.chart[c] = metric_from_function(dm.grid, dm.closed_form[c], nullptr, dm.sides);

  // one-sided second-order radial derivatives on both sides of the interface
  const double t = c1_step;
  for (int a = 0; a < 64; ++a) {
    const double th = 2 * std::numbers::pi * (a + 0.25) / 64;
    const Eigen::Vector2d u(std::cos(th), std::sin(th));
    auto G = [&](double r) { return chart_a(g, r * u); };
    const Eigen::MatrixXd in = (3.0 * G(1.0) - 4.0 * G(1.0 - t) + G(1.0 - 2 * t)) / (2 * t);
    const Eigen::MatrixXd out = (-3.0 * G(1.0 + 1e-15) + 4.0 * G(1.0 + t) - G(1.0 + 2 * t)) / (2 * t);
    dm.c1_defect = std::max(dm.c1_defect, (in - out).cwiseAbs().maxCoeff());
  }
  return dm;
}

std::vector<double> mean_curvature(const MetricFn& g, const MetricDerivFn& dg, const Eigen::Vector2d& center,
                                   double radius, int samples) {
  if (samples < 16) throw InputError("mean_curvature: boundary not resolved (fewer than 16 samples)");
  auto deriv = [&](const Eigen::Vector2d& x) {
    std::array<Eigen::Matrix2d, 2> d;
    if (dg) {
      const std::vector<double> v = dg(x);
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) d[k](i, j) = v[(k * 2 + i) * 2 + j];
    } else {
      const double h = 1e-5;
      for (int k = 0; k < 2; ++k) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e(k) = h;
        d[k] = (g(x + e) - g(x - e)) / (2 * h);
      }
    }
    return d;
  };
  std::vector<double> H(samples);
  for (int a = 0; a < samples; ++a) {
    const double th = 2 * std::numbers::pi * a / samples;
    const Eigen::Vector2d e(std::cos(th), std::sin(th));
    const Eigen::Vector2d c = center + radius * e, c1 = radius * Eigen::Vector2d(-e(1), e(0)), c2 = -radius * e;
    const Eigen::Matrix2d G = g(c);
    const Eigen::Matrix2d Gi = G.inverse();
    const auto d = deriv(c);
    // Gamma^k_ij c1^i c1^j
    Eigen::Vector2d low;
    for (int l = 0; l < 2; ++l) {
      double acc = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) acc += 0.5 * (d[i](l, j) + d[j](i, l) - d[l](i, j)) * c1(i) * c1(j);
      low(l) = acc;
    }
    const Eigen::Vector2d acc = c2 + Gi * low;
    Eigen::Vector2d nu = -e;
    nu -= (nu.dot(G * c1) / c1.dot(G * c1)) * c1;
    nu /= std::sqrt(nu.dot(G * nu));
    H[a] = acc.dot(G * nu) / c1.dot(G * c1);
  }
  return H;
}

Eigen::Vector3d fold(const Eigen::Vector3d& p) { return {p.x(), p.y(), -std::abs(p.z())}; }

FoldedMap fold_map(const DoubledMetric& dm, const DiskMapFn& f) {
  FoldedMap out;
  for (int a = 0; a < 256; ++a) {
    const double th = 2 * std::numbers::pi * a / 256;
    const Eigen::Vector3d p = f({std::cos(th), std::sin(th)});
    if (p.z() > 1e-9) {
      std::ostringstream os;
      os << "fold_map: boundary image not in the lower hemisphere (Z = " << p.z() << " at angle " << th << ")";
      throw InputError(os.str());
    }
    out.interface_jump = std::max(out.interface_jump, (p - fold(p)).norm());
  }
  const SphereValuedFn fhat = [&](int chart, const Eigen::Vector2d& x) -> Eigen::Vector3d {
    const bool first_copy = chart == 0 ? x.squaredNorm() <= 1.0 : x.squaredNorm() >= 1.0;
    if (chart == 0) return first_copy ? f(x) : fold(f(invert(x)));
    return first_copy ? f(kConj * invert(x)) : fold(f(kConj * x));
  };
  const std::vector<SideMask> sides{dm.sides, dm.sides};
  out.atlas_map = sample_atlas_map({dm.grid, dm.grid}, {dm.pou, dm.pou}, fhat, sides);
  for (int c = 0; c < 2; ++c) {
    const auto& pc = out.atlas_map.pieces[c];
    Field<double> vals(dm.grid, 2);
    for (std::size_t s = 0; s < dm.grid.size(); ++s) {
      const auto y = atlas::from_sphere(c == 0 ? atlas::N : atlas::S, {pc.p(s, 0), pc.p(s, 1), pc.p(s, 2)});
      vals(s, 0) = y[0];
      vals(s, 1) = y[1];
    }
    MapOptions opt;
    opt.sides = dm.sides;
    opt.region = dm.pou;
    out.piece[c] = make_map_field(dm.chart[c], atlas::round_metric_fn(), std::move(vals), opt);
  }
  return out;
}

RelativeDegree relative_degree(const DiskMapFn& f, int res, double max_distance) {
  const ChartGrid g = ChartGrid::cube(2, -1.0, 1.0, res);
  Field<double> p(g, 3);
  ScalarField w(g, 1);
  for (std::size_t s = 0; s < g.size(); ++s) {
    const auto x = g.point(s);
    const Eigen::Vector2d xv(x[0], x[1]);
    const Eigen::Vector3d v = xv.squaredNorm() <= 1.0 ? f(xv) : f(xv.normalized());
    for (int a = 0; a < 3; ++a) p(s, a) = v(a);
    w.values[s] = xv.squaredNorm() <= 1.0 && v.z() > 0.0 ? 1.0 : 0.0;
  }
  const Field<double> dp = fd_gradient(p);
  double acc = 0.0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (w.values[s] == 0.0) continue;
    Eigen::Vector3d v, d1, d2;
    for (int a = 0; a < 3; ++a) {
      v(a) = p(s, a);
      d1(a) = dp(s, a * 2);
      d2(a) = dp(s, a * 2 + 1);
    }
    acc += g.weight(s) * v.dot(d1.cross(d2));
  }
  RelativeDegree r;
  r.raw = acc / (2 * std::numbers::pi);
  r.degree = static_cast<int>(std::lround(r.raw));
  r.distance_to_integer = std::abs(r.raw - r.degree);
  if (r.distance_to_integer > max_distance) {
    std::ostringstream os;
    os << "relative_degree: integral " << r.raw << " is not near an integer";
    throw NumericalError(os.str());
  }
  return r;
}

}  // namespace lrg
