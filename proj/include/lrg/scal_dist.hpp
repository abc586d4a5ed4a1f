#pragma once

#include <string>
#include <vector>

#include "lrg/chart_grid.hpp"
#include "lrg/weak_metric.hpp"

namespace lrg {

struct MapField;

/// <<scal_g, u>> split into its two integrals; value == v_term + f_term.
struct ScalarPairing {
  double value = 0.0;
  double v_term = 0.0;  // -int V^k d_k u dmu_g
  double f_term = 0.0;  // int F_mu u dmu_g
  std::string test_fn_id;
};

/// The first-order fields V^k (components = n) and F with scal = d_k V^k + F for C^2 metrics.
/// F_mu = F - V^k d_k log sqrt(det g) is the zero-order coefficient once d_k V^k is integrated
/// by parts against dmu_g rather than dx, so that scal = div_mu V + F_mu.
struct VkF {
  Field<double> V;
  ScalarField F;
  ScalarField F_mu;
};

VkF vk_f_fields(const MetricField& m);

/// Weak scalar-curvature pairing int (-V^k d_k u + F_mu u) dmu_g.
///
/// `grad_u` (components = n) is used when the test function's gradient is known exactly;
/// otherwise u is differentiated with fd_gradient.  u must vanish within two cells of every
/// non-periodic chart edge.
ScalarPairing pair_scal(const MetricField& m, const ScalarField& u, const Field<double>* grad_u = nullptr,
                        std::string id = {});
/// Same, reusing precomputed V, F.
ScalarPairing pair_scal(const MetricField& m, const VkF& vf, const ScalarField& u,
                        const Field<double>* grad_u = nullptr, std::string id = {});

struct CertificateEntry {
  std::string id;
  double pairing = 0.0;
  double theta_integral = 0.0;  // int theta u dmu_g
  double slack = 0.0;           // pairing - theta_integral
  double tol = 0.0;
  bool ok = false;
};

struct CertificateReport {
  std::vector<CertificateEntry> entries;
  double min_slack = 0.0;
  std::string worst_witness;
  bool passed = false;
};

/// Checks <<scal_g, u>> >= int theta u dmu_g - tol for nonnegative test functions, with
/// tol = max(1e-3, 10 h^2) * |u|_{L^1(mu_g)}.
CertificateReport lower_bound_certificate(const MetricField& m, const ScalarField& theta,
                                          const std::vector<ScalarField>& tests,
                                          const std::vector<std::string>& ids = {});

/// |<<scal_g, u o phi>> - <<scal_h, u>>| for a sampled diffeomorphism phi with phi^* h = g.
/// `u` lives on the grid of h; it is evaluated at phi(x) by cubic interpolation.
double pullback_invariance_check(const MetricField& g, const MetricField& h, const MapField& phi,
                                 const ScalarField& u, double pullback_tol = 1e-8);

}  // namespace lrg
