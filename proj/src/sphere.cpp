#include "lrg/sphere.hpp"

#include <cmath>
#include <numbers>

namespace lrg {
namespace atlas {

ChartGrid chart_grid(int res) { return ChartGrid::cube(2, -half_width, half_width, res); }

Eigen::Vector3d to_sphere(int chart, double x, double y) {
  const double r2 = x * x + y * y, d = 1.0 + r2;
  if (chart == N) return {2 * x / d, 2 * y / d, (1 - r2) / d};
  return {2 * x / d, -2 * y / d, (r2 - 1) / d};
}

std::array<double, 2> from_sphere(int chart, const Eigen::Vector3d& p) {
  if (chart == N) {
    const double d = 1.0 + p.z();
    if (d < 1e-300) throw InputError("from_sphere: south pole is outside chart N");
    return {p.x() / d, p.y() / d};
  }
  const double d = 1.0 - p.z();
  if (d < 1e-300) throw InputError("from_sphere: north pole is outside chart S");
  return {p.x() / d, -p.y() / d};
}

std::array<double, 2> transition(double x, double y) {
  const double r2 = x * x + y * y;
  if (r2 == 0.0) throw InputError("atlas transition at the pole");
  return {x / r2, -y / r2};
}

double round_factor(double x, double y) { return 2.0 / (1.0 + x * x + y * y); }

MetricFn round_metric_fn() {
  return [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    const double l = round_factor(x(0), x(1));
    return l * l * Eigen::MatrixXd::Identity(2, 2);
  };
}

MetricDerivFn round_metric_deriv_fn() {
  return [](const Eigen::VectorXd& x) {
    // d_k (4/(1+r^2)^2) = -16 x_k/(1+r^2)^3
    const double d = 1.0 + x.squaredNorm();
    std::vector<double> out(8, 0.0);
    for (int k = 0; k < 2; ++k) {
      const double v = -16.0 * x(k) / (d * d * d);
      out[k * 4 + 0] = v;
      out[k * 4 + 3] = v;
    }
    return out;
  };
}

MetricField round_metric(const ChartGrid& grid) {
  return metric_from_function(grid, round_metric_fn(), round_metric_deriv_fn());
}

namespace {

double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

double step(double t) {
  const double a = std::log(1.25);
  const double p = bump(a + t), m = bump(a - t);
  return p / (p + m);
}

}  // namespace

double pou(double r) {
  if (r <= 0.0) return 1.0;
  return step(-std::log(r));
}

ScalarField pou_field(const ChartGrid& grid) {
  return sample(grid, [](std::span<const double> x) { return pou(std::hypot(x[0], x[1])); });
}

bool owned(int chart, double x, double y) {
  const double r2 = x * x + y * y;
  return chart == N ? r2 <= 1.0 : r2 < 1.0;
}

Eigen::MatrixXcd spin_transition(const Eigen::MatrixXcd& g1g2, double x, double y) {
  const double t = 0.5 * std::numbers::pi - std::atan2(y, x);
  return std::cos(t) * Eigen::MatrixXcd::Identity(g1g2.rows(), g1g2.cols()) + std::sin(t) * g1g2;
}

}  // namespace atlas

AtlasMap sample_atlas_map(const std::vector<ChartGrid>& grids, const std::vector<ScalarField>& weights,
                          const SphereValuedFn& f, const std::vector<SideMask>& sides) {
  if (grids.size() != weights.size()) throw InputError("sample_atlas_map: one weight field per chart");
  AtlasMap out;
  for (std::size_t c = 0; c < grids.size(); ++c) {
    const ChartGrid& g = grids[c];
    if (g.dim() != 2) throw InputError("sample_atlas_map: two-dimensional charts only");
    AtlasMap::Piece piece{g, weights[c], Field<double>(g, 3), {}};
    for (std::size_t s = 0; s < g.size(); ++s) {
      const auto x = g.point(s);
      const Eigen::Vector3d p = f(static_cast<int>(c), Eigen::Vector2d(x[0], x[1]));
      for (int a = 0; a < 3; ++a) piece.p(s, a) = p(a);
    }
    const SideMask* sm = c < sides.size() && !sides[c].empty() ? &sides[c] : nullptr;
    piece.dp = fd_gradient(piece.p, sm);
    out.pieces.push_back(std::move(piece));
  }
  return out;
}

AtlasMap sphere_atlas_map(int res, const SphereValuedFn& f, bool fold_sides) {
  const ChartGrid g = atlas::chart_grid(res);
  const ScalarField w = atlas::pou_field(g);
  std::vector<SideMask> sides;
  if (fold_sides) {
    SideMask m(g.size());
    for (std::size_t s = 0; s < g.size(); ++s) {
      const auto x = g.point(s);
      m[s] = std::hypot(x[0], x[1]) < 1.0 ? -1 : 1;
    }
    sides = {m, m};
  }
  return sample_atlas_map({g, g}, {w, w}, f, sides);
}

double mapping_degree(const AtlasMap& f) {
  double total = 0.0;
  for (const auto& pc : f.pieces) {
    double acc = 0.0;
    const long long n = static_cast<long long>(pc.grid.size());
#pragma omp parallel for reduction(+ : acc)
    for (long long ss = 0; ss < n; ++ss) {
      const auto s = static_cast<std::size_t>(ss);
      const double w = pc.weight.values[s];
      if (w == 0.0) continue;
      Eigen::Vector3d p, d1, d2;
      for (int a = 0; a < 3; ++a) {
        p(a) = pc.p(s, a);
        d1(a) = pc.dp(s, a * 2);
        d2(a) = pc.dp(s, a * 2 + 1);
      }
      acc += w * pc.grid.weight(s) * p.dot(d1.cross(d2));
    }
    total += acc;
  }
  return total / (4.0 * std::numbers::pi);
}

}  // namespace lrg
