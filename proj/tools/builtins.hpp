#pragma once

#include <string>
#include <vector>

#include "lrg/doubling.hpp"
#include "lrg/sphere.hpp"
#include "lrg/weak_metric.hpp"

namespace cli {

struct BuiltinMetric {
  lrg::MetricFn g;
  lrg::MetricDerivFn dg;  // may be empty
};

/// flat, round, hyperbolic, conformal, anisotropic, shear, wavy-torus
BuiltinMetric builtin_metric(const std::string& name);
std::vector<std::string> builtin_metric_names();

/// identity, antipodal, fold, degree-two, rotation, constant; `angle` is used by rotation.
lrg::SphereValuedFn builtin_sphere_map(const std::string& name, double angle = 0.5);

/// Maps of the closed unit disk into the sphere: stereographic (onto the upper hemisphere),
/// lower (into the lower hemisphere), doubled-angle, constant-up.
lrg::DiskMapFn builtin_disk_map(const std::string& name);

}  // namespace cli
