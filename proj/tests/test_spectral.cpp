#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracsource/greenfn.hpp"
#include "fracsource/pipeline.hpp"
#include "fracsource/spectral.hpp"
#include "test_util.hpp"

using namespace fracsource;
using namespace fracsource::spectral;
using fraccalc::FracOrder;

TEST_CASE("dft of impulse and constant") {
  Eigen::VectorXcd impulse = Eigen::VectorXcd::Zero(8);
  impulse[0] = 1.0;
  const auto spectrum = dft(impulse);
  for (int m = 0; m < 8; ++m) {
    CHECK(spectrum[m].real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(spectrum[m].imag() == doctest::Approx(0.0).epsilon(1e-15));
  }
  const auto flat = dft(Eigen::VectorXcd::Ones(8));
  CHECK(flat[0].real() == doctest::Approx(8.0).epsilon(1e-15));
  for (int m = 1; m < 8; ++m) CHECK(std::abs(flat[m]) < 1e-13);
}

TEST_CASE("dft against the naive oracle") {
  const auto x = testutil::random_complex_vector(33, 2024);
  const auto fast = dft(x);
  const auto naive = testutil::naive_dft(x);
  for (int m = 0; m < 33; ++m) {
    CHECK(std::abs(fast[m] - naive[m]) <= 1e-10);
  }
}

TEST_CASE("dft Parseval identity and linearity") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const int n = 17 + 4 * static_cast<int>(seed);
    const auto x = testutil::random_complex_vector(n, seed);
    const auto y = testutil::random_complex_vector(n, seed + 50);
    const auto fx = dft(x);
    CHECK(fx.squaredNorm() ==
          doctest::Approx(n * x.squaredNorm()).epsilon(1e-10));
    const std::complex<double> a(1.2, -0.7);
    const std::complex<double> b(-0.4, 2.1);
    const Eigen::VectorXcd combo = a * x + b * y;
    const Eigen::VectorXcd lhs = dft(combo);
    const Eigen::VectorXcd rhs = a * fx + b * dft(y);
    CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
  }
}

TEST_CASE("bin_to_omega signed mapping") {
  CHECK(bin_to_omega(0, 64, 0.1) == 0.0);
  CHECK(bin_to_omega(1, 64, 0.1) ==
        doctest::Approx(2.0 * std::numbers::pi / 6.4).epsilon(1e-15));
  CHECK(bin_to_omega(63, 64, 0.1) ==
        doctest::Approx(-2.0 * std::numbers::pi / 6.4).epsilon(1e-15));
  CHECK(bin_to_omega(32, 64, 0.1) ==
        doctest::Approx(2.0 * std::numbers::pi * 32.0 / 6.4).epsilon(1e-15));
  // odd length: bins above (n-1)/2 alias negative
  CHECK(bin_to_omega(33, 65, 0.2) < 0.0);
  CHECK(bin_to_omega(32, 65, 0.2) > 0.0);
  CHECK_THROWS_AS(bin_to_omega(64, 64, 0.1), std::domain_error);
  CHECK_THROWS_AS(bin_to_omega(-1, 64, 0.1), std::domain_error);
}

TEST_CASE("ensemble_variance basics") {
  Eigen::MatrixXcd rows(3, 4);
  rows.row(0) = testutil::random_complex_vector(4, 9).transpose();
  rows.row(1) = rows.row(0);
  rows.row(2) = rows.row(0);
  const auto zero_var = ensemble_variance(rows);
  // identical rows: zero up to the rounding of the subtracted mean
  for (int c = 0; c < 4; ++c) CHECK(zero_var[c] <= 1e-30);

  Eigen::MatrixXcd pair(2, 3);
  pair.row(0) = testutil::random_complex_vector(3, 10).transpose();
  pair.row(1) = -pair.row(0);
  const auto v = ensemble_variance(pair);
  for (int c = 0; c < 3; ++c) {
    CHECK(v[c] == doctest::Approx(2.0 * std::norm(pair(0, c))).epsilon(1e-14));
  }

  Eigen::MatrixXcd single(1, 2);
  CHECK_THROWS_AS(ensemble_variance(single), std::domain_error);
}

TEST_CASE("ensemble_variance concentration on synthetic Gaussian data") {
  const int m = 4000;
  const double v = 2.5;
  Eigen::MatrixXcd rows(m, 2);
  for (int r = 0; r < m; ++r) {
    rows(r, 0) = std::complex<double>(testutil::normal(600, 2 * r),
                                      testutil::normal(600, 2 * r + 1)) *
                 std::sqrt(v / 2.0);
    // real-only column: same variance, degenerate imaginary part
    rows(r, 1) = testutil::normal(601, r) * std::sqrt(v);
  }
  const auto est = ensemble_variance(rows);
  CHECK(std::abs(est[0] - v) <= 5.0 * v * std::sqrt(2.0 / m));
  CHECK(std::abs(est[1] - v) <= 5.0 * v * std::sqrt(2.0 / m));
}

TEST_CASE("recover_modulus reference cases") {
  const forward::FracGrid grid(FracOrder(0.4), 10, 65, 4.0 * std::numbers::pi);

  const auto zero = recover_modulus(Eigen::VectorXd::Zero(65), grid);
  for (int m = 0; m < 65; ++m) CHECK(zero.modulus[m] == 0.0);

  // single zero-frequency bin with the exact 1/3 energy
  const forward::FracGrid tiny(FracOrder(0.4), 4, 2, 1.0);
  Eigen::VectorXd one_bin(1);
  one_bin[0] = 4.0 / 3.0;
  const auto single = recover_modulus(one_bin, tiny);
  CHECK(single.modulus[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(single.omega[0] == 0.0);

  Eigen::VectorXd bad(2);
  bad << 1.0, -0.5;
  CHECK_THROWS_AS(recover_modulus(bad, grid), std::domain_error);
  CHECK_THROWS_AS(recover_modulus(one_bin, tiny, 0.0), std::domain_error);
}

TEST_CASE("recover_modulus inverts the fabricated forward map") {
  const int n = 65;
  const double t_final = 4.0 * std::numbers::pi;
  const forward::FracGrid grid(FracOrder(0.4), 10, n, t_final);
  Eigen::VectorXd f(n);
  for (int i = 1; i <= n; ++i) {
    const double t = i * grid.h_t();
    f[i - 1] = std::sin(t) * std::exp(-t / 6.0);
  }
  const auto fhat = dft_real(f);
  Eigen::VectorXd variance(n);
  for (int m = 0; m < n; ++m) {
    const double omega = bin_to_omega(m, n, grid.h_t());
    variance[m] =
        std::norm(fhat[m]) * greenfn::boundary_kernel_energy(omega, grid.alpha);
  }
  const auto est = recover_modulus(variance, grid);
  for (int m = 0; m < n; ++m) {
    CHECK(est.modulus[m] ==
          doctest::Approx(std::abs(fhat[m])).epsilon(1e-12));
  }

  // monotone in the variance and exact in the scaling parameter
  Eigen::VectorXd bumped = variance;
  bumped[3] *= 1.8;
  const auto est2 = recover_modulus(bumped, grid);
  CHECK(est2.modulus[3] > est.modulus[3]);
  const auto est4 = recover_modulus(variance, grid, 4.0);
  for (int m = 0; m < n; ++m) {
    CHECK(est4.modulus[m] == doctest::Approx(2.0 * est.modulus[m]).epsilon(1e-14));
  }
}

TEST_CASE("discrete variance matches the continuous identity at scale") {
  // V[DFT(u(0,.))_m] ~ |DFT(F)_m|^2 * energy(omega_m): the h_t factors of the
  // discrete-vs-continuous transforms cancel in the ratio. Monte Carlo plus
  // discretization error budget of a factor of two per bin.
  const forward::FracGrid grid(FracOrder(0.4), 100, 65,
                               4.0 * std::numbers::pi);
  const auto source = pipeline::builtin_source("example1", 65, grid.t_final);
  const auto ens = forward::run_ensemble(grid, source, 1500, 7, 2);
  Eigen::MatrixXcd spectra(ens.traces.rows(), grid.n_t);
  for (Eigen::Index r = 0; r < ens.traces.rows(); ++r) {
    spectra.row(r) = dft_real(ens.traces.row(r).transpose()).transpose();
  }
  const auto variance = ensemble_variance(spectra);

  Eigen::VectorXd f(grid.n_t);
  for (int i = 0; i < grid.n_t; ++i) f[i] = source.values[static_cast<std::size_t>(i)];
  const auto fhat = dft_real(f);

  std::vector<double> ratios;
  for (int m = 0; m < grid.n_t; ++m) {
    const double omega = bin_to_omega(m, grid.n_t, grid.h_t());
    const double predicted =
        std::norm(fhat[m]) * greenfn::boundary_kernel_energy(omega, grid.alpha);
    ratios.push_back(variance[m] / predicted);
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = ratios[ratios.size() / 2];
  CHECK(median > 0.7);
  CHECK(median < 1.5);
  CHECK(ratios.front() > 0.4);
  CHECK(ratios.back() < 2.5);
}
