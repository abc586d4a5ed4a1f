#include <benchmark/benchmark.h>

#include <cmath>

#include "lrg/chart_grid.hpp"
#include "lrg/clifford.hpp"
#include "lrg/dirac.hpp"
#include "lrg/weak_metric.hpp"

using namespace lrg;

namespace {

ScalarField wave(int res) {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, res, true);
  return sample(g, [](auto x) { return std::sin(6.0 * x[0]) * std::cos(4.0 * x[1]); });
}

MetricField conformal(int res) {
  const ChartGrid g = ChartGrid::cube(2, -1.0, 1.0, res);
  return metric_from_function(g, [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    return std::exp(0.6 * std::sin(x(0)) * std::cos(2 * x(1))) * Eigen::MatrixXd::Identity(2, 2);
  });
}

void BM_fd_gradient(benchmark::State& st) {
  const ScalarField f = wave(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(fd_gradient(f));
}

void BM_fd_gradient_ref(benchmark::State& st) {
  const ScalarField f = wave(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(ref::fd_gradient(f));
}

void BM_mollify(benchmark::State& st) {
  const ScalarField f = wave(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(mollify(f, 0.05));
}

void BM_mollify_ref(benchmark::State& st) {
  const ScalarField f = wave(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(ref::mollify(f, 0.05));
}

void BM_christoffel(benchmark::State& st) {
  const MetricField m = conformal(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(christoffel(m));
}

void BM_dirac_apply(benchmark::State& st) {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, st.range(0), true);
  const ChartDirac D = assemble_chart(flat_metric(g), build_module(2), trivial_twist(g));
  SpinorField psi(g, D.d);
  for (std::size_t i = 0; i < psi.values.size(); ++i) psi.values[i] = cplx(std::sin(0.1 * i), std::cos(0.3 * i));
  for (auto _ : st) benchmark::DoNotOptimize(lrg::apply(D, psi));
}

void BM_dirac_apply_ref(benchmark::State& st) {
  const ChartGrid g = ChartGrid::cube(2, 0.0, 1.0, st.range(0), true);
  const ChartDirac D = assemble_chart(flat_metric(g), build_module(2), trivial_twist(g));
  SpinorField psi(g, D.d);
  for (std::size_t i = 0; i < psi.values.size(); ++i) psi.values[i] = cplx(std::sin(0.1 * i), std::cos(0.3 * i));
  for (auto _ : st) benchmark::DoNotOptimize(ref::apply(D, psi));
}

}  // namespace

BENCHMARK(BM_fd_gradient)->Arg(128)->Arg(512);
BENCHMARK(BM_fd_gradient_ref)->Arg(128)->Arg(512);
BENCHMARK(BM_mollify)->Arg(128)->Arg(256);
BENCHMARK(BM_mollify_ref)->Arg(128)->Arg(256);
BENCHMARK(BM_christoffel)->Arg(129)->Arg(257);
BENCHMARK(BM_dirac_apply)->Arg(128)->Arg(512);
BENCHMARK(BM_dirac_apply_ref)->Arg(128)->Arg(512);

BENCHMARK_MAIN();
