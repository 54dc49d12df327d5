#pragma once

// Shared test oracles. Everything here is independent of the library code
// paths it checks: naive transforms, dense eliminations, brute-force searches.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fracsource/forward.hpp"

namespace testutil {

// Naive O(N^2) DFT with long double accumulation and direct angle evaluation;
// deliberately a different rounding path than the library transform.
inline Eigen::VectorXcd naive_dft(const Eigen::VectorXcd& x) {
  const auto n = x.size();
  Eigen::VectorXcd out(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    long double re = 0.0L;
    long double im = 0.0L;
    for (Eigen::Index k = 0; k < n; ++k) {
      const long double ang = -2.0L * std::numbers::pi_v<long double> *
                              static_cast<long double>(m) *
                              static_cast<long double>(k) /
                              static_cast<long double>(n);
      const long double c = std::cos(ang);
      const long double s = std::sin(ang);
      re += x[k].real() * c - x[k].imag() * s;
      im += x[k].real() * s + x[k].imag() * c;
    }
    out[m] = {static_cast<double>(re), static_cast<double>(im)};
  }
  return out;
}

// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> rhs) {
  const int n = static_cast<int>(rhs.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (int r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double acc = rhs[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

// Deterministic uniform/normal/complex draws for test data.
inline double uniform(std::uint64_t seed, std::uint64_t k) {
  return static_cast<double>(fracsource::forward::stream_u64(seed, k) >> 11) *
         0x1.0p-53;
}
inline double normal(std::uint64_t seed, std::uint64_t k) {
  return fracsource::forward::stream_normal(seed, k);
}
inline Eigen::VectorXcd random_complex_vector(int n, std::uint64_t seed) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = std::complex<double>(normal(seed, 2 * i), normal(seed, 2 * i + 1));
  }
  return v;
}
inline Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed) {
  Eigen::MatrixXcd a(n, n);
  std::uint64_t k = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      a(r, c) = std::complex<double>(normal(seed, k), normal(seed, k + 1));
      k += 2;
    }
  }
  return 0.5 * (a + a.adjoint());
}

// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& xs,
                           const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testutil
