#include "builtins.hpp"

#include <cmath>
#include <numbers>

namespace cli {

namespace {

using M = Eigen::MatrixXd;
using V = Eigen::VectorXd;

M conformal_metric(double phi) { return std::exp(2 * phi) * M::Identity(2, 2); }

}  // namespace

std::vector<std::string> builtin_metric_names() {
  return {"flat", "round", "hyperbolic", "conformal", "anisotropic", "shear", "wavy-torus"};
}

BuiltinMetric builtin_metric(const std::string& name) {
  if (name == "flat") return {[](const V& x) -> M { return M::Identity(x.size(), x.size()); }, nullptr};
  if (name == "round") return {lrg::atlas::round_metric_fn(), lrg::atlas::round_metric_deriv_fn()};
  if (name == "hyperbolic")
    return {[](const V& x) -> M {
              const double q = 1 - x.squaredNorm() / 4;
              return M::Identity(2, 2) / (q * q);
            },
            nullptr};
  if (name == "conformal")
    return {[](const V& x) -> M { return conformal_metric(0.3 * std::sin(x(0)) * std::cos(2 * x(1))); }, nullptr};
  if (name == "anisotropic")
    return {[](const V& x) -> M {
              M a = M::Identity(2, 2);
              a(0, 0) = 1 + x(0) * x(0) / 4;
              a(1, 1) = std::exp(0.3 * x(0) * x(1));
              return a;
            },
            nullptr};
  if (name == "shear")
    return {[](const V& x) -> M {
              M a(2, 2);
              const double c = 0.4 * std::cos(x(1)) * x(0);
              a << 2 + std::sin(x(0)), c, c, 1.5 + x(0) * x(0) * x(1);
              return a;
            },
            nullptr};
  if (name == "wavy-torus")
    return {[](const V& x) -> M {
              using std::numbers::pi;
              const double f = std::exp(0.4 * std::sin(2 * pi * x(0)) * std::cos(2 * pi * x(1)));
              M a(2, 2);
              a << f, 0.1 * std::sin(2 * pi * x(1)), 0.1 * std::sin(2 * pi * x(1)), 1.0 / f + 0.2;
              return a;
            },
            nullptr};
  throw lrg::InputError("unknown builtin metric '" + name + "'");
}

lrg::SphereValuedFn builtin_sphere_map(const std::string& name, double angle) {
  using lrg::atlas::to_sphere;
  if (name == "identity") return [](int c, const Eigen::Vector2d& x) { return to_sphere(c, x(0), x(1)); };
  if (name == "antipodal")
    return [](int c, const Eigen::Vector2d& x) { return Eigen::Vector3d(-to_sphere(c, x(0), x(1))); };
  if (name == "fold") return [](int c, const Eigen::Vector2d& x) { return lrg::fold(to_sphere(c, x(0), x(1))); };
  if (name == "degree-two")
    return [](int c, const Eigen::Vector2d& x) {
      const Eigen::Vector3d p = to_sphere(c, x(0), x(1));
      const double rho = std::hypot(p.x(), p.y());
      if (rho == 0.0) return p;
      const double u = p.x() / rho, v = p.y() / rho;
      return Eigen::Vector3d(rho * (u * u - v * v), rho * 2 * u * v, p.z());
    };
  if (name == "rotation") {
    const Eigen::Matrix3d R(Eigen::AngleAxisd(angle, Eigen::Vector3d(1, 0.3, 0).normalized()));
    return [R](int c, const Eigen::Vector2d& x) { return Eigen::Vector3d(R * to_sphere(c, x(0), x(1))); };
  }
  if (name == "constant") return [](int, const Eigen::Vector2d&) { return Eigen::Vector3d(0, 0, 1); };
  throw lrg::InputError("unknown sphere map '" + name + "'");
}

lrg::DiskMapFn builtin_disk_map(const std::string& name) {
  using lrg::atlas::to_sphere;
  if (name == "stereographic")
    return [](const Eigen::Vector2d& x) { return to_sphere(lrg::atlas::N, x(0), x(1)); };
  if (name == "lower") return [](const Eigen::Vector2d& x) { return to_sphere(lrg::atlas::S, x(0), x(1)); };
  if (name == "doubled-angle")
    return [](const Eigen::Vector2d& x) {
      const double r = x.norm(), t = 2 * std::atan2(x(1), x(0));
      return to_sphere(lrg::atlas::N, r * std::cos(t), r * std::sin(t));
    };
  if (name == "constant-up") return [](const Eigen::Vector2d&) { return Eigen::Vector3d(0, 0, 1); };
  throw lrg::InputError("unknown disk map '" + name + "'");
}

}  // namespace cli
