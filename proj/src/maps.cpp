#include "lrg/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

namespace lrg {

double MapField::stat_weight(std::size_t s) const {
  if (mask[s]) return 0.0;
  const double r = region.values.empty() ? 1.0 : region.values[s];
  if (r == 0.0) return 0.0;
  return r * source.grid.weight(s) * std::sqrt(source.at(s).determinant());
}

Eigen::VectorXd metric_singular_values(const Eigen::MatrixXd& J, const Eigen::MatrixXd& g, const Eigen::MatrixXd& h) {
  const Eigen::MatrixXd A = spd_sqrt(h) * J * spd_inv_sqrt(g);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  return svd.singularValues();
}

MapField make_map_field(const MetricField& source, MetricFn target_metric, Field<double> values,
                        const MapOptions& opt) {
  const ChartGrid& grid = source.grid;
  const int n = source.n;
  if (!(values.grid == grid)) throw InputError("map field: values not sampled on the source grid");
  if (values.components != n) throw InputError("map field: need n target coordinates per sample");
  require_finite(values, "map field");
  if (!opt.sides.empty() && opt.sides.size() != grid.size()) throw InputError("map field: side mask size");

  MapField f;
  f.source = source;
  f.target_metric = std::move(target_metric);
  f.n = n;
  f.values = std::move(values);
  const std::size_t N = grid.size();
  f.jac.assign(N * n * n, 0.0);
  f.mask.assign(N, 0);
  f.sv.assign(N * n, 0.0);
  f.det_sign.assign(N, 0);
  f.region = opt.region.values.empty() ? ScalarField(grid, 1, 1.0) : opt.region;

  if (opt.analytic_jac) {
    for (std::size_t s = 0; s < N; ++s) {
      const auto x = grid.point(s);
      const Eigen::MatrixXd J = opt.analytic_jac(Eigen::Map<const Eigen::VectorXd>(x.data(), n));
      Eigen::Map<Eigen::MatrixXd>(f.jac.data() + s * n * n, n, n) = J;
    }
  } else {
    const Field<double> d = fd_gradient(f.values, opt.sides.empty() ? nullptr : &opt.sides);
    for (std::size_t s = 0; s < N; ++s)
      for (int a = 0; a < n; ++a)
        for (int k = 0; k < n; ++k) f.jac[s * n * n + k * n + a] = d(s, a * n + k);
  }
  if (!opt.sides.empty()) {
    for (std::size_t s = 0; s < N; ++s)
      for (int a = 0; a < n && !f.mask[s]; ++a)
        for (int off : {-1, 1}) {
          const std::size_t t = grid.shift(s, a, off);
          if (t != ChartGrid::npos && opt.sides[t] != opt.sides[s]) f.mask[s] = 1;
        }
  }

  const long long NN = static_cast<long long>(N);
#pragma omp parallel for schedule(static)
  for (long long ss = 0; ss < NN; ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    Eigen::VectorXd y(n);
    for (int a = 0; a < n; ++a) y(a) = f.values(s, a);
    const Eigen::MatrixXd h = f.target_metric(y);
    const Eigen::MatrixXd J = f.jacobian(s);
    const Eigen::VectorXd sv = metric_singular_values(J, source.at(s), h);
    for (int i = 0; i < n; ++i) f.sv[s * n + i] = sv(i);
    const double det = J.determinant();
    const double scale = std::pow(std::max(sv(0), 1e-300), n);
    f.det_sign[s] = std::abs(det) <= 1e-14 * scale ? 0 : (det > 0 ? 1 : -1);
  }
  return f;
}

MapField sample_map(const MetricField& source, MetricFn target_metric, const PointMapFn& fn, const MapOptions& opt) {
  const ChartGrid& grid = source.grid;
  const int n = source.n;
  Field<double> v(grid, n);
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const auto x = grid.point(s);
    const Eigen::VectorXd y = fn(Eigen::Map<const Eigen::VectorXd>(x.data(), n));
    if (y.size() != n) throw InputError("sample_map: map must return n coordinates");
    for (int a = 0; a < n; ++a) v(s, a) = y(a);
  }
  return make_map_field(source, std::move(target_metric), std::move(v), opt);
}

LipschitzProfile lipschitz_profile(const std::vector<const MapField*>& f,
                                   const std::vector<const MetricField*>& targets, int pairs,
                                   std::uint64_t seed) {
  LipschitzProfile out;
  for (const MapField* m : f)
    for (std::size_t s = 0; s < m->grid().size(); ++s)
      if (m->stat_weight(s) > 0.0) out.ess_sup = std::max(out.ess_sup, m->sv[s * m->n]);
  if (targets.empty() || pairs <= 0) return out;
  if (targets.size() != f.size()) throw InputError("lipschitz_profile: one target metric per map piece");

  std::mt19937_64 rng(seed);
  double best = 0.0;
  int done = 0;
  for (int attempt = 0; done < pairs && attempt < 50 * pairs; ++attempt) {
    const std::size_t c = rng() % f.size();
    const MapField& m = *f[c];
    const std::size_t a = rng() % m.grid().size(), b = rng() % m.grid().size();
    if (m.stat_weight(a) == 0.0 || m.stat_weight(b) == 0.0) continue;
    const auto xa = m.grid().point(a), xb = m.grid().point(b);
    Eigen::VectorXd pa = Eigen::Map<const Eigen::VectorXd>(xa.data(), m.n);
    Eigen::VectorXd pb = Eigen::Map<const Eigen::VectorXd>(xb.data(), m.n);
    if ((pa - pb).norm() < 10 * m.grid().max_spacing()) continue;
    Eigen::VectorXd fa(m.n), fb(m.n);
    for (int k = 0; k < m.n; ++k) {
      fa(k) = m.values(a, k);
      fb(k) = m.values(b, k);
    }
    const double ds = path_distance(m.source, pa, pb).length;
    const double dt = (fa - fb).norm() == 0.0 ? 0.0 : path_distance(*targets[c], fa, fb).length;
    best = std::max(best, dt / ds);
    ++done;
  }
  out.pair_ratio = best;
  out.pairs = done;
  return out;
}

double brute_force_K(const Eigen::MatrixXd& A) {
  // largest eigenvalue of A^T A by power iteration, |det| by partial-pivot LU
  const int n = static_cast<int>(A.rows());
  const Eigen::MatrixXd M = A.transpose() * A;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
  for (int k = 0; k < n; ++k) v(k) += 1e-3 * (k + 1);
  v.normalize();
  double lam = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd w = M * v;
    const double l = w.norm();
    w /= l;
    const bool done = std::abs(l - lam) <= 1e-16 * l && (w - v).norm() < 1e-14;
    lam = l;
    v = w;
    if (done) break;
  }
  const double smax = std::sqrt(v.dot(M * v));
  const double det = std::abs(A.partialPivLu().determinant());
  return std::pow(smax, n) / det;
}

QuasiregularityReport quasiregularity(const std::vector<const MapField*>& f, double tol_measure) {
  QuasiregularityReport r;
  double total = 0.0;
  for (const MapField* m : f)
    for (std::size_t s = 0; s < m->grid().size(); ++s) {
      const double w = m->stat_weight(s);
      if (w == 0.0) continue;
      total += w;
      const int sg = m->det_sign[s];
      if (sg > 0) {
        r.positive_fraction += w;
        const Eigen::MatrixXd J = m->jacobian(s);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
        r.K_min = std::max(r.K_min, std::pow(svd.singularValues()(0), m->n) / J.determinant());
      } else if (sg < 0) {
        r.negative_fraction += w;
      } else {
        r.degenerate_fraction += w;
      }
    }
  if (total > 0) {
    r.positive_fraction /= total;
    r.negative_fraction /= total;
    r.degenerate_fraction /= total;
  }
  r.quasiregular = r.negative_fraction + r.degenerate_fraction <= tol_measure;
  if (r.quasiregular) {
    r.verdict = "quasiregular";
  } else if (r.negative_fraction > tol_measure && r.positive_fraction > tol_measure) {
    r.verdict = "not quasiregular: mixed orientation";
  } else {
    r.verdict = "not quasiregular: det <= 0 on a set of positive measure";
  }
  return r;
}

IsometryReport isometry_ae_check(const std::vector<const MapField*>& f, double tol, double tol_measure) {
  IsometryReport r;
  double total = 0.0;
  for (const MapField* m : f)
    for (std::size_t s = 0; s < m->grid().size(); ++s) {
      const double w = m->stat_weight(s);
      if (w == 0.0) continue;
      total += w;
      bool iso = true;
      for (int i = 0; i < m->n; ++i) iso = iso && std::abs(m->sv[s * m->n + i] - 1.0) <= tol;
      if (iso) r.isometric_fraction += w;
      if (m->det_sign[s] > 0) r.positive_fraction += w;
      if (m->det_sign[s] < 0) r.negative_fraction += w;
    }
  if (total > 0) {
    r.isometric_fraction /= total;
    r.positive_fraction /= total;
    r.negative_fraction /= total;
  }
  if (r.negative_fraction > r.positive_fraction) {
    r.flipped = true;
    std::swap(r.negative_fraction, r.positive_fraction);
  }
  r.isometric = r.isometric_fraction >= 1.0 - tol_measure;
  r.orientation_ok = 1.0 - r.positive_fraction <= tol_measure;
  r.passed = r.isometric && r.orientation_ok;
  if (r.passed) {
    r.verdict = "orientation-preserving isometry a.e.";
  } else if (!r.isometric) {
    r.verdict = "not an isometry a.e.";
  } else {
    r.verdict = "isometry a.e. but orientation not preserved";
  }
  return r;
}

double area_nonincreasing_check(const std::vector<const MapField*>& f, double tol) {
  double total = 0.0, good = 0.0;
  for (const MapField* m : f) {
    if (m->n < 2) throw InputError("area_nonincreasing_check: needs n >= 2");
    for (std::size_t s = 0; s < m->grid().size(); ++s) {
      const double w = m->stat_weight(s);
      if (w == 0.0) continue;
      total += w;
      if (m->sv[s * m->n] * m->sv[s * m->n + 1] <= 1.0 + tol) good += w;
    }
  }
  return total > 0 ? good / total : 1.0;
}

namespace {

struct Stencil {
  std::vector<std::array<int, 2>> dirs;
};

Stencil make_stencil(int directions) {
  Stencil st;
  st.dirs = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  if (directions == 16) {
    for (int a : {-2, 2})
      for (int b : {-1, 1}) {
        st.dirs.push_back({a, b});
        st.dirs.push_back({b, a});
      }
  } else if (directions != 8) {
    throw InputError("path_distance: directions must be 8 or 16");
  }
  return st;
}

// Bilinear interpolation of g (and of its derivative) at a chart point, 2D only.
struct MetricInterp {
  const MetricField& m;

  void locate(double x, int axis, int& i0, double& t) const {
    const ChartGrid& g = m.grid;
    const int r = g.res()[axis];
    double u = (x - g.lo()[axis]) / g.spacing(axis);
    if (g.periodic()[axis]) {
      u = std::fmod(u, double(r));
      if (u < 0) u += r;
      i0 = std::min(static_cast<int>(std::floor(u)), r - 1);
    } else {
      i0 = std::clamp(static_cast<int>(std::floor(u)), 0, r - 2);
    }
    t = u - i0;
  }

  std::size_t index(int i, int j) const {
    const ChartGrid& g = m.grid;
    const int r0 = g.res()[0], r1 = g.res()[1];
    i = ((i % r0) + r0) % r0;
    j = ((j % r1) + r1) % r1;
    return static_cast<std::size_t>(i) * g.stride(0) + static_cast<std::size_t>(j) * g.stride(1);
  }

  Eigen::Matrix2d eval(const Eigen::Vector2d& x, Eigen::Matrix2d* dg = nullptr) const {
    int i, j;
    double s, t;
    locate(x(0), 0, i, s);
    locate(x(1), 1, j, t);
    const Eigen::Matrix2d a = m.at(index(i, j)), b = m.at(index(i + 1, j)), c = m.at(index(i, j + 1)),
                          d = m.at(index(i + 1, j + 1));
    if (dg) {
      dg[0] = ((1 - t) * (b - a) + t * (d - c)) / m.grid.spacing(0);
      dg[1] = ((1 - s) * (c - a) + s * (d - b)) / m.grid.spacing(1);
    }
    return (1 - s) * (1 - t) * a + s * (1 - t) * b + (1 - s) * t * c + s * t * d;
  }
};

double segment_length(const MetricInterp& mi, const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
  const Eigen::Vector2d d = q - p;
  return std::sqrt(d.dot(mi.eval(0.5 * (p + q)) * d));
}

Eigen::Vector2d node_point(const ChartGrid& g, std::size_t s) {
  const auto x = g.point(s);
  return {x[0], x[1]};
}

double polyline_length(const MetricInterp& mi, const std::vector<Eigen::Vector2d>& p) {
  double L = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) L += segment_length(mi, p[i], p[i + 1]);
  return L;
}

std::vector<Eigen::Vector2d> resample(const std::vector<Eigen::Vector2d>& p, int m) {
  std::vector<double> acc(p.size(), 0.0);
  for (std::size_t i = 1; i < p.size(); ++i) acc[i] = acc[i - 1] + (p[i] - p[i - 1]).norm();
  std::vector<Eigen::Vector2d> out(m);
  std::size_t seg = 0;
  for (int k = 0; k < m; ++k) {
    const double target = acc.back() * k / (m - 1);
    while (seg + 2 < p.size() && acc[seg + 1] < target) ++seg;
    const double len = acc[seg + 1] - acc[seg];
    const double t = len > 0 ? std::clamp((target - acc[seg]) / len, 0.0, 1.0) : 0.0;
    out[k] = (1 - t) * p[seg] + t * p[seg + 1];
  }
  out.front() = p.front();
  out.back() = p.back();
  return out;
}

// Minimises the discrete energy sum d_i^T G(mid_i) d_i with fixed endpoints by freezing G
// and solving the resulting block-tridiagonal system, repeated to a fixed point.
bool relax(const MetricInterp& mi, std::vector<Eigen::Vector2d>& p) {
  const int M = static_cast<int>(p.size());
  const int inner = M - 2;
  if (inner <= 0) return true;
  for (int it = 0; it < 400; ++it) {
    std::vector<Eigen::Matrix2d> G(M - 1);
    std::vector<Eigen::Vector2d> rhs(inner, Eigen::Vector2d::Zero());
    std::vector<Eigen::Matrix2d> dG(2);
    std::vector<Eigen::Vector2d> force(M - 1);
    for (int i = 0; i < M - 1; ++i) {
      Eigen::Matrix2d d2[2];
      G[i] = mi.eval(0.5 * (p[i] + p[i + 1]), d2);
      const Eigen::Vector2d d = p[i + 1] - p[i];
      force[i] = Eigen::Vector2d(d.dot(d2[0] * d), d.dot(d2[1] * d));
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * inner, 2 * inner);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * inner);
    for (int j = 1; j <= M - 2; ++j) {
      const int r = 2 * (j - 1);
      A.block<2, 2>(r, r) = G[j - 1] + G[j];
      if (j > 1) A.block<2, 2>(r, r - 2) = -G[j - 1];
      else b.segment<2>(r) += G[0] * p[0];
      if (j < M - 2) A.block<2, 2>(r, r + 2) = -G[j];
      else b.segment<2>(r) += G[M - 2] * p[M - 1];
      b.segment<2>(r) -= 0.25 * (force[j - 1] + force[j]);
    }
    const Eigen::VectorXd sol = A.ldlt().solve(b);
    double change = 0.0;
    for (int j = 1; j <= M - 2; ++j) {
      const Eigen::Vector2d q = sol.segment<2>(2 * (j - 1));
      change = std::max(change, (q - p[j]).norm());
      p[j] = q;
    }
    if (!std::isfinite(change)) return false;
    if (change < 1e-12) return true;
  }
  return true;
}

std::vector<double> dijkstra(const MetricField& m, std::size_t src, int directions,
                             const std::vector<std::uint8_t>* blocked, std::vector<std::size_t>* pred) {
  const ChartGrid& g = m.grid;
  if (g.dim() != 2 || m.n != 2) throw InputError("path_distance: two-dimensional charts only");
  const Stencil st = make_stencil(directions);
  const MetricInterp mi{m};
  const std::size_t N = g.size();
  std::vector<double> dist(N, std::numeric_limits<double>::infinity());
  if (pred) pred->assign(N, ChartGrid::npos);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.push({0.0, src});
  const double h0 = g.spacing(0), h1 = g.spacing(1);
  while (!pq.empty()) {
    const auto [d, s] = pq.top();
    pq.pop();
    if (d > dist[s]) continue;
    const Eigen::Vector2d xs = node_point(g, s);
    for (const auto& dir : st.dirs) {
      std::size_t t = g.shift(s, 0, dir[0]);
      if (t == ChartGrid::npos) continue;
      t = g.shift(t, 1, dir[1]);
      if (t == ChartGrid::npos) continue;
      if (blocked && (*blocked)[t]) continue;
      const Eigen::Vector2d step(dir[0] * h0, dir[1] * h1);
      // orientation-independent weights on a dyadic lattice: path sums are exact, so the graph
      // metric is symmetric and satisfies the triangle inequality bit for bit
      const double w = s < t ? segment_length(mi, xs, xs + step) : segment_length(mi, xs + step, xs);
      const double nd = d + std::ldexp(std::round(std::ldexp(w, 40)), -40);
      if (nd < dist[t]) {
        dist[t] = nd;
        if (pred) (*pred)[t] = s;
        pq.push({nd, t});
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<double> graph_distance_field(const MetricField& m, std::size_t source, int directions,
                                         const std::vector<std::uint8_t>* blocked) {
  return dijkstra(m, source, directions, blocked, nullptr);
}

PathResult path_distance(const MetricField& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                         const PathOptions& opt) {
  const ChartGrid& g = m.grid;
  if (x.size() != 2 || y.size() != 2) throw InputError("path_distance: points must be 2D");
  if (!g.contains(std::span<const double>(x.data(), 2)) || !g.contains(std::span<const double>(y.data(), 2)))
    throw InputError("path_distance: point outside the chart");
  const std::size_t a = g.nearest(std::span<const double>(x.data(), 2));
  const std::size_t b = g.nearest(std::span<const double>(y.data(), 2));
  std::vector<std::size_t> pred;
  const std::vector<double> dist = dijkstra(m, a, opt.directions, nullptr, &pred);
  if (!std::isfinite(dist[b])) throw NumericalError("path_distance: target unreachable");

  PathResult out;
  out.graph_length = dist[b];
  std::vector<Eigen::Vector2d> nodes;
  for (std::size_t s = b; s != ChartGrid::npos; s = pred[s]) nodes.push_back(node_point(g, s));
  std::reverse(nodes.begin(), nodes.end());
  if (nodes.size() == 1) nodes.push_back(nodes.front());

  const MetricInterp mi{m};
  std::vector<Eigen::Vector2d> poly = nodes;
  poly.front() = Eigen::Vector2d(x(0), x(1));
  poly.back() = Eigen::Vector2d(y(0), y(1));
  out.length = polyline_length(mi, poly);
  if (opt.refine && (x - y).norm() > 0.0) {
    std::vector<Eigen::Vector2d> r = resample(poly, std::max(opt.refine_vertices, 3));
    if (relax(mi, r)) {
      bool inside = true;
      for (const auto& q : r) inside = inside && g.contains(std::span<const double>(q.data(), 2));
      if (inside) {
        const double L = polyline_length(mi, r);
        if (L < out.length) {
          out.length = L;
          poly = r;
        }
      }
    }
  }
  for (const auto& q : poly) out.polyline.push_back(q);
  return out;
}

namespace {

// central disk of radius a third of the box width; pairs there avoid chart-boundary detours
bool in_core(const ChartGrid& g, const Eigen::Vector2d& x) {
  double q = 0.0;
  for (int a = 0; a < 2; ++a) {
    const double c = 0.5 * (g.lo()[a] + g.hi()[a]), r = (g.hi()[a] - g.lo()[a]) / 3.0;
    q += std::pow((x(a) - c) / r, 2);
  }
  return q <= 1.0;
}

}  // namespace

MetricIsometryVerdict metric_isometry_verdict(const std::vector<const MapField*>& f,
                                              const std::vector<const MetricField*>& targets, int samples,
                                              std::uint64_t seed, double tolerance, double iso_tol,
                                              double tol_measure) {
  if (targets.size() != f.size()) throw InputError("metric_isometry_verdict: one target metric per map piece");
  MetricIsometryVerdict v;
  v.tolerance = tolerance;
  const IsometryReport iso = isometry_ae_check(f, iso_tol, tol_measure);
  v.stage1 = iso.passed;
  v.stage1_reason = iso.verdict;

  std::mt19937_64 rng(seed);
  for (int attempt = 0; v.pairs < samples && attempt < 100 * samples; ++attempt) {
    const std::size_t c = rng() % f.size();
    const MapField& m = *f[c];
    const std::size_t a = rng() % m.grid().size(), b = rng() % m.grid().size();
    if (m.stat_weight(a) == 0.0 || m.stat_weight(b) == 0.0) continue;
    const auto xa = m.grid().point(a), xb = m.grid().point(b);
    const Eigen::Vector2d pa(xa[0], xa[1]), pb(xb[0], xb[1]);
    if ((pa - pb).norm() < 10 * m.grid().max_spacing()) continue;
    const Eigen::Vector2d fa(m.values(a, 0), m.values(a, 1)), fb(m.values(b, 0), m.values(b, 1));
    if (!in_core(m.grid(), pa) || !in_core(m.grid(), pb) || !in_core(targets[c]->grid, fa) ||
        !in_core(targets[c]->grid, fb))
      continue;
    const double ds = path_distance(m.source, pa, pb).length;
    const double dt = path_distance(*targets[c], fa, fb).length;
    v.max_rel_discrepancy = std::max(v.max_rel_discrepancy, std::abs(dt - ds) / ds);
    ++v.pairs;
  }
  v.passed = v.stage1 && v.pairs > 0 && v.max_rel_discrepancy <= tolerance;
  return v;
}

}  // namespace lrg
