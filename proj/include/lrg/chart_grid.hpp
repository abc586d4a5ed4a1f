#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrg {

/// Raised for malformed input: grid mismatch, non-finite samples, violated preconditions.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical routine cannot reach its stated accuracy.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform tensor-product grid on a box in R^n.
///
/// Non-periodic axes sample both endpoints, spacing (hi-lo)/(res-1).
/// Periodic axes sample [lo, hi) with spacing (hi-lo)/res.
/// Samples are stored row-major: the last axis varies fastest.
class ChartGrid {
 public:
  ChartGrid() = default;
  ChartGrid(std::vector<double> lo, std::vector<double> hi, std::vector<int> res,
            std::vector<bool> periodic = {}, int boundary_margin = 1);

  /// Square/cube [lo, hi]^dim with the same resolution on every axis.
  static ChartGrid cube(int dim, double lo, double hi, int res, bool periodic = false);

  int dim() const { return static_cast<int>(res_.size()); }
  std::size_t size() const { return size_; }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  const std::vector<int>& res() const { return res_; }
  const std::vector<bool>& periodic() const { return periodic_; }
  const std::vector<double>& spacing() const { return h_; }
  double spacing(int axis) const { return h_[axis]; }
  double max_spacing() const;
  int boundary_margin() const { return margin_; }
  std::size_t stride(int axis) const { return stride_[axis]; }

  double coord(int axis, int i) const { return lo_[axis] + i * h_[axis]; }
  void point(std::size_t idx, double* x) const;
  std::vector<double> point(std::size_t idx) const;
  int index_along(std::size_t idx, int axis) const {
    return static_cast<int>((idx / stride_[axis]) % static_cast<std::size_t>(res_[axis]));
  }
  /// Sample index offset by `off` along `axis`; wraps on periodic axes, returns npos when outside.
  std::size_t shift(std::size_t idx, int axis, int off) const;
  /// Nearest sample to x (clamped on non-periodic axes, wrapped on periodic ones).
  std::size_t nearest(std::span<const double> x) const;
  bool contains(std::span<const double> x) const;

  /// Product trapezoid weight (rectangle on periodic axes), including the cell volume.
  double weight(std::size_t idx) const;
  double cell_volume() const;

  bool operator==(const ChartGrid& o) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<double> lo_, hi_, h_;
  std::vector<int> res_;
  std::vector<bool> periodic_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
  int margin_ = 1;
};

/// Sampled field with `components` values per grid sample (component-fastest).
template <class T>
struct Field {
  ChartGrid grid;
  int components = 1;
  std::vector<T> values;

  Field() = default;
  Field(ChartGrid g, int comps, T fill = T{})
      : grid(std::move(g)), components(comps), values(grid.size() * comps, fill) {}
  Field(ChartGrid g, int comps, std::vector<T> vals)
      : grid(std::move(g)), components(comps), values(std::move(vals)) {
    if (values.size() != grid.size() * static_cast<std::size_t>(components))
      throw InputError("field: value count does not match grid size");
  }

  T& operator()(std::size_t s, int c = 0) { return values[s * components + c]; }
  const T& operator()(std::size_t s, int c = 0) const { return values[s * components + c]; }
  std::span<const T> at(std::size_t s) const {
    return {values.data() + s * components, static_cast<std::size_t>(components)};
  }
  std::span<T> at(std::size_t s) {
    return {values.data() + s * components, static_cast<std::size_t>(components)};
  }
};

using ScalarField = Field<double>;

/// Samples a real function on every grid point.
ScalarField sample(const ChartGrid& grid, const std::function<double(std::span<const double>)>& fn);

/// Per-sample side label for fields with a declared kink interface.  Difference stencils
/// never combine samples carrying different labels.
using SideMask = std::vector<std::int8_t>;

/// Partial derivatives of every component.  Output component index is c*dim + k.
///
/// Second-order central differences in the interior, second-order one-sided stencils
/// within the boundary margin of non-periodic axes and next to a side-mask interface,
/// exact wrap on periodic axes.
Field<double> fd_gradient(const Field<double>& f, const SideMask* sides = nullptr);

/// Sum of f * density * trapezoid weights (rectangle rule on periodic axes).
double quadrature(const ScalarField& f, const ScalarField& density);
double quadrature(const ScalarField& f);

enum class EdgePolicy {
  reject,       ///< input must vanish within eps of every non-periodic edge
  renormalize,  ///< truncate the kernel at the edge and rescale to unit mass
};

/// Discrete convolution with the rescaled bump exp(-1/(1-|x|^2)) of radius eps,
/// normalized so the discrete kernel mass is exactly one.
Field<double> mollify(const Field<double>& f, double eps, EdgePolicy policy = EdgePolicy::reject);

/// Sampled discrete kernel for radius eps: integer offsets (dim per entry) and weights.
struct MollifierKernel {
  int dim = 0;
  std::vector<int> offsets;
  std::vector<double> weights;
};
MollifierKernel mollifier_kernel(const ChartGrid& grid, double eps);

/// Throws InputError naming the first non-finite sample.
void require_finite(const Field<double>& f, const char* what);

namespace ref {
// Serial reference kernels, kept for cross-checking the OpenMP paths.
Field<double> fd_gradient(const Field<double>& f, const SideMask* sides = nullptr);
Field<double> mollify(const Field<double>& f, double eps, EdgePolicy policy = EdgePolicy::reject);
}  // namespace ref

/// Cubic (4^dim-point Lagrange) interpolation of a field at an arbitrary chart point.
void interpolate(const Field<double>& f, std::span<const double> x, std::span<double> out);

}  // namespace lrg
