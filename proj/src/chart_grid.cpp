#include "lrg/chart_grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lrg {

ChartGrid::ChartGrid(std::vector<double> lo, std::vector<double> hi, std::vector<int> res,
                     std::vector<bool> periodic, int boundary_margin)
    : lo_(std::move(lo)), hi_(std::move(hi)), res_(std::move(res)), periodic_(std::move(periodic)),
      margin_(boundary_margin) {
  const std::size_t n = res_.size();
  if (n == 0) throw InputError("grid: dimension must be >= 1");
  if (lo_.size() != n || hi_.size() != n) throw InputError("grid: extent/resolution size mismatch");
  if (periodic_.empty()) periodic_.assign(n, false);
  if (periodic_.size() != n) throw InputError("grid: periodic flags size mismatch");
  if (margin_ < 1) throw InputError("grid: boundary margin must be >= 1");
  h_.resize(n);
  stride_.resize(n);
  size_ = 1;
  for (std::size_t a = 0; a < n; ++a) {
    if (res_[a] < 4) throw InputError("grid: resolution must be >= 4 on every axis");
    if (!(hi_[a] > lo_[a])) throw InputError("grid: empty extent");
    h_[a] = periodic_[a] ? (hi_[a] - lo_[a]) / res_[a] : (hi_[a] - lo_[a]) / (res_[a] - 1);
    if (!(h_[a] > 0)) throw InputError("grid: spacing must be positive");
  }
  for (std::size_t a = n; a-- > 0;) {
    stride_[a] = size_;
    size_ *= static_cast<std::size_t>(res_[a]);
  }
}

ChartGrid ChartGrid::cube(int dim, double lo, double hi, int res, bool periodic) {
  return ChartGrid(std::vector<double>(dim, lo), std::vector<double>(dim, hi),
                   std::vector<int>(dim, res), std::vector<bool>(dim, periodic));
}

double ChartGrid::max_spacing() const { return *std::max_element(h_.begin(), h_.end()); }

void ChartGrid::point(std::size_t idx, double* x) const {
  for (int a = 0; a < dim(); ++a) x[a] = coord(a, index_along(idx, a));
}

std::vector<double> ChartGrid::point(std::size_t idx) const {
  std::vector<double> x(dim());
  point(idx, x.data());
  return x;
}

std::size_t ChartGrid::shift(std::size_t idx, int axis, int off) const {
  const int i = index_along(idx, axis);
  int j = i + off;
  const int n = res_[axis];
  if (periodic_[axis]) {
    j = ((j % n) + n) % n;
  } else if (j < 0 || j >= n) {
    return npos;
  }
  return idx + static_cast<std::size_t>(static_cast<long long>(j - i) *
                                        static_cast<long long>(stride_[axis]));
}

std::size_t ChartGrid::nearest(std::span<const double> x) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim(); ++a) {
    long long i = std::llround((x[a] - lo_[a]) / h_[a]);
    if (periodic_[a]) {
      i = ((i % res_[a]) + res_[a]) % res_[a];
    } else {
      i = std::clamp<long long>(i, 0, res_[a] - 1);
    }
    idx += static_cast<std::size_t>(i) * stride_[a];
  }
  return idx;
}

bool ChartGrid::contains(std::span<const double> x) const {
  for (int a = 0; a < dim(); ++a) {
    if (periodic_[a]) continue;
    if (x[a] < lo_[a] - 1e-12 || x[a] > hi_[a] + 1e-12) return false;
  }
  return true;
}

double ChartGrid::cell_volume() const {
  double v = 1.0;
  for (double h : h_) v *= h;
  return v;
}

double ChartGrid::weight(std::size_t idx) const {
  double w = cell_volume();
  for (int a = 0; a < dim(); ++a) {
    if (periodic_[a]) continue;
    const int i = index_along(idx, a);
    if (i == 0 || i == res_[a] - 1) w *= 0.5;
  }
  return w;
}

bool ChartGrid::operator==(const ChartGrid& o) const {
  return res_ == o.res_ && periodic_ == o.periodic_ && lo_ == o.lo_ && hi_ == o.hi_;
}

ScalarField sample(const ChartGrid& grid, const std::function<double(std::span<const double>)>& fn) {
  ScalarField f(grid, 1);
  std::vector<double> x(grid.dim());
  for (std::size_t s = 0; s < grid.size(); ++s) {
    grid.point(s, x.data());
    f.values[s] = fn(x);
  }
  return f;
}

void require_finite(const Field<double>& f, const char* what) {
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!std::isfinite(f.values[i])) {
      const std::size_t s = i / f.components;
      const auto x = f.grid.point(s);
      std::ostringstream os;
      os << what << ": non-finite value at sample " << s << " (component " << i % f.components
         << ", x = (";
      for (std::size_t a = 0; a < x.size(); ++a) os << (a ? ", " : "") << x[a];
      os << "))";
      throw InputError(os.str());
    }
  }
}

namespace {

// Stencil choice for one sample and axis: up to three (index, coefficient) pairs.
struct Stencil {
  std::size_t idx[3];
  double coef[3];
  int len = 0;
};

Stencil choose_stencil(const ChartGrid& g, std::size_t s, int axis, const SideMask* sides) {
  const double h = g.spacing(axis);
  auto usable = [&](int off, std::size_t& out) {
    out = g.shift(s, axis, off);
    if (out == ChartGrid::npos) return false;
    return sides == nullptr || (*sides)[out] == (*sides)[s];
  };
  std::size_t m1, p1, m2, p2;
  const bool hm1 = usable(-1, m1), hp1 = usable(1, p1);
  const bool hm2 = hm1 && usable(-2, m2);
  const bool hp2 = hp1 && usable(2, p2);
  Stencil st;
  const int i = g.index_along(s, axis);
  const int n = g.res()[axis];
  const int m = g.boundary_margin();
  const bool near_lo = !g.periodic()[axis] && i < m;
  const bool near_hi = !g.periodic()[axis] && i >= n - m;
  auto forward2 = [&] {
    st = {{s, p1, p2}, {-1.5 / h, 2.0 / h, -0.5 / h}, 3};
  };
  auto backward2 = [&] {
    st = {{s, m1, m2}, {1.5 / h, -2.0 / h, 0.5 / h}, 3};
  };
  if (near_lo && hp2) {
    forward2();
  } else if (near_hi && hm2) {
    backward2();
  } else if (hm1 && hp1) {
    st = {{m1, p1, s}, {-0.5 / h, 0.5 / h, 0.0}, 2};
  } else if (hp2) {
    forward2();
  } else if (hm2) {
    backward2();
  } else if (hp1) {
    st = {{s, p1, s}, {-1.0 / h, 1.0 / h, 0.0}, 2};
  } else if (hm1) {
    st = {{m1, s, s}, {-1.0 / h, 1.0 / h, 0.0}, 2};
  }
  return st;
}

void gradient_at(const Field<double>& f, const SideMask* sides, std::size_t s, Field<double>& out) {
  const int dim = f.grid.dim();
  for (int k = 0; k < dim; ++k) {
    const Stencil st = choose_stencil(f.grid, s, k, sides);
    for (int c = 0; c < f.components; ++c) {
      double acc = 0.0;
      for (int t = 0; t < st.len; ++t) acc += st.coef[t] * f.values[st.idx[t] * f.components + c];
      out.values[(s * f.components + c) * dim + k] = acc;
    }
  }
}

void check_sides(const Field<double>& f, const SideMask* sides) {
  if (sides && sides->size() != f.grid.size()) throw InputError("fd_gradient: side mask size mismatch");
}

void check_mollify_input(const Field<double>& f, double eps, EdgePolicy policy) {
  const ChartGrid& g = f.grid;
  if (!(eps > 0)) throw InputError("mollify: eps must be positive");
  if (eps < 2.0 * g.max_spacing() * (1.0 - 1e-12))
    throw InputError("mollify: eps < 2h, kernel under-resolved");
  if (policy != EdgePolicy::reject) return;
  std::vector<double> x(g.dim());
  for (std::size_t s = 0; s < g.size(); ++s) {
    bool nonzero = false;
    for (int c = 0; c < f.components; ++c) nonzero = nonzero || f(s, c) != 0.0;
    if (!nonzero) continue;
    g.point(s, x.data());
    for (int a = 0; a < g.dim(); ++a) {
      if (g.periodic()[a]) continue;
      const double margin = std::min(x[a] - g.lo()[a], g.hi()[a] - x[a]);
      if (margin < eps - 1e-12) {
        std::ostringstream os;
        os << "mollify: support reaches within eps of the chart boundary at sample " << s
           << " (axis " << a << ", margin " << margin << " < eps " << eps << ")";
        throw InputError(os.str());
      }
    }
  }
}

double bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

void convolve_at(const Field<double>& f, const MollifierKernel& ker, EdgePolicy policy,
                 std::size_t s, Field<double>& out) {
  const ChartGrid& g = f.grid;
  const int dim = g.dim();
  const std::size_t nk = ker.weights.size();
  std::vector<double> acc(f.components, 0.0);
  double mass = 0.0;
  for (std::size_t t = 0; t < nk; ++t) {
    std::size_t idx = s;
    for (int a = 0; a < dim && idx != ChartGrid::npos; ++a) {
      const int off = ker.offsets[t * dim + a];
      if (off != 0) idx = g.shift(idx, a, -off);
    }
    if (idx == ChartGrid::npos) continue;
    const double w = ker.weights[t];
    mass += w;
    for (int c = 0; c < f.components; ++c) acc[c] += w * f.values[idx * f.components + c];
  }
  const double scale = (policy == EdgePolicy::renormalize && mass > 0) ? 1.0 / mass : 1.0;
  for (int c = 0; c < f.components; ++c) out.values[s * f.components + c] = acc[c] * scale;
}

}  // namespace

Field<double> fd_gradient(const Field<double>& f, const SideMask* sides) {
  require_finite(f, "fd_gradient");
  check_sides(f, sides);
  Field<double> out(f.grid, f.components * f.grid.dim());
  const long long n = static_cast<long long>(f.grid.size());
#pragma omp parallel for schedule(static)
  for (long long s = 0; s < n; ++s) gradient_at(f, sides, static_cast<std::size_t>(s), out);
  return out;
}

double quadrature(const ScalarField& f, const ScalarField& density) {
  if (!(f.grid == density.grid)) throw InputError("quadrature: grid mismatch");
  if (f.components != 1 || density.components != 1)
    throw InputError("quadrature: scalar fields required");
  double sum = 0.0;
  const long long n = static_cast<long long>(f.grid.size());
#pragma omp parallel for reduction(+ : sum) schedule(static)
  for (long long s = 0; s < n; ++s)
    sum += f.values[s] * density.values[s] * f.grid.weight(static_cast<std::size_t>(s));
  return sum;
}

double quadrature(const ScalarField& f) {
  double sum = 0.0;
  for (std::size_t s = 0; s < f.grid.size(); ++s) sum += f.values[s] * f.grid.weight(s);
  return sum;
}

MollifierKernel mollifier_kernel(const ChartGrid& grid, double eps) {
  MollifierKernel ker;
  ker.dim = grid.dim();
  std::vector<int> half(ker.dim);
  for (int a = 0; a < ker.dim; ++a) half[a] = static_cast<int>(std::ceil(eps / grid.spacing(a)));
  std::vector<int> m(ker.dim);
  for (int a = 0; a < ker.dim; ++a) m[a] = -half[a];
  double total = 0.0;
  while (true) {
    double r2 = 0.0;
    for (int a = 0; a < ker.dim; ++a) {
      const double t = m[a] * grid.spacing(a) / eps;
      r2 += t * t;
    }
    const double w = bump(r2);
    if (w > 0) {
      ker.offsets.insert(ker.offsets.end(), m.begin(), m.end());
      ker.weights.push_back(w);
      total += w;
    }
    int a = ker.dim - 1;
    while (a >= 0 && ++m[a] > half[a]) {
      m[a] = -half[a];
      --a;
    }
    if (a < 0) break;
  }
  for (double& w : ker.weights) w /= total;
  return ker;
}

Field<double> mollify(const Field<double>& f, double eps, EdgePolicy policy) {
  require_finite(f, "mollify");
  check_mollify_input(f, eps, policy);
  const MollifierKernel ker = mollifier_kernel(f.grid, eps);
  Field<double> out(f.grid, f.components);
  const long long n = static_cast<long long>(f.grid.size());
#pragma omp parallel for schedule(static)
  for (long long s = 0; s < n; ++s) convolve_at(f, ker, policy, static_cast<std::size_t>(s), out);
  return out;
}

namespace ref {

Field<double> fd_gradient(const Field<double>& f, const SideMask* sides) {
  require_finite(f, "fd_gradient");
  check_sides(f, sides);
  Field<double> out(f.grid, f.components * f.grid.dim());
  for (std::size_t s = 0; s < f.grid.size(); ++s) gradient_at(f, sides, s, out);
  return out;
}

Field<double> mollify(const Field<double>& f, double eps, EdgePolicy policy) {
  require_finite(f, "mollify");
  check_mollify_input(f, eps, policy);
  const MollifierKernel ker = mollifier_kernel(f.grid, eps);
  Field<double> out(f.grid, f.components);
  for (std::size_t s = 0; s < f.grid.size(); ++s) convolve_at(f, ker, policy, s, out);
  return out;
}

}  // namespace ref

void interpolate(const Field<double>& f, std::span<const double> x, std::span<double> out) {
  const ChartGrid& g = f.grid;
  const int dim = g.dim();
  std::vector<int> base(dim);
  std::vector<double> w(4 * dim);
  for (int a = 0; a < dim; ++a) {
    const double t = (x[a] - g.lo()[a]) / g.spacing(a);
    int b = static_cast<int>(std::floor(t)) - 1;
    if (!g.periodic()[a]) b = std::clamp(b, 0, g.res()[a] - 4);
    base[a] = b;
    const double u = t - b;  // position relative to node b, nodes at 0..3
    for (int j = 0; j < 4; ++j) {
      double l = 1.0;
      for (int m = 0; m < 4; ++m)
        if (m != j) l *= (u - m) / (j - m);
      w[4 * a + j] = l;
    }
  }
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<int> j(dim, 0);
  while (true) {
    double wt = 1.0;
    std::size_t idx = 0;
    for (int a = 0; a < dim; ++a) {
      wt *= w[4 * a + j[a]];
      int i = base[a] + j[a];
      if (g.periodic()[a]) i = ((i % g.res()[a]) + g.res()[a]) % g.res()[a];
      idx += static_cast<std::size_t>(i) * g.stride(a);
    }
    for (int c = 0; c < f.components; ++c) out[c] += wt * f.values[idx * f.components + c];
    int a = dim - 1;
    while (a >= 0 && ++j[a] > 3) {
      j[a] = 0;
      --a;
    }
    if (a < 0) break;
  }
}

}  // namespace lrg
