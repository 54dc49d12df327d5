#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "fracsource/forward.hpp"
#include "fracsource/greenfn.hpp"
#include "fracsource/phaselift.hpp"
#include "fracsource/spectral.hpp"

using namespace fracsource;

namespace {

forward::SourceSignal bench_source(int n_t, double t_final) {
  forward::SourceSignal src;
  src.label = "bench";
  const double h = t_final / n_t;
  for (int n = 1; n <= n_t; ++n) {
    src.values.push_back(std::sin(n * h) * std::exp(-n * h / 6.0));
  }
  return src;
}

void BM_forward_path(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const forward::FracGrid grid(fraccalc::FracOrder(0.4), 100, n,
                               4.0 * std::numbers::pi);
  const auto src = bench_source(n, grid.t_final);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward::run_path(grid, src, seed++));
  }
}
BENCHMARK(BM_forward_path)->Arg(33)->Arg(65)->Arg(129);

void BM_thomas_solve(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto sys = forward::make_operator(n, 0.8);
  std::vector<double> rhs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rhs[static_cast<std::size_t>(i)] = std::sin(0.1 * i);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward::solve_tridiagonal(sys, rhs));
  }
}
BENCHMARK(BM_thomas_solve)->Arg(100)->Arg(1000)->Arg(10000);

void BM_boundary_kernel_energy(benchmark::State& state) {
  const fraccalc::FracOrder alpha(0.4);
  double omega = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(greenfn::boundary_kernel_energy(omega, alpha));
    omega = omega < 1e6 ? omega * 1.5 : 1.0;
  }
}
BENCHMARK(BM_boundary_kernel_energy);

void BM_dft(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = std::sin(0.3 * i);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral::dft_real(x));
  }
}
BENCHMARK(BM_dft)->Arg(65)->Arg(130);

void BM_project_psd(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Eigen::MatrixXcd x(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      x(r, c) = std::complex<double>(std::sin(0.7 * (r + 1) * (c + 1)),
                                     std::cos(1.3 * (r - c)));
    }
  }
  x = 0.5 * (x + x.adjoint()).eval();
  for (auto _ : state) {
    benchmark::DoNotOptimize(phaselift::project_psd(x));
  }
}
BENCHMARK(BM_project_psd)->Arg(16)->Arg(65);

void BM_at_iterate(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto masks = phaselift::make_masks(n, 7);
  Eigen::VectorXcd f(n);
  for (int i = 0; i < n; ++i) f[i] = std::abs(std::sin(0.9 * (i + 1))) + 0.2;
  const auto problem = phaselift::make_problem(
      masks,
      phaselift::exact_measurements(phaselift::make_sensing(masks, n), f),
      1e-3);
  auto seed_state = phaselift::make_initial_state(problem);
  for (auto _ : state) {
    seed_state = phaselift::at_iterate(std::move(seed_state), problem);
    benchmark::DoNotOptimize(seed_state.X);
  }
}
BENCHMARK(BM_at_iterate)->Arg(16)->Arg(65);

}  // namespace

BENCHMARK_MAIN();
