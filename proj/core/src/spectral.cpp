#include "fracsource/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fracsource/greenfn.hpp"

namespace fracsource::spectral {

Eigen::VectorXcd dft(const Eigen::VectorXcd& x) {
  const Eigen::Index n = x.size();
  if (n < 1) throw std::domain_error("dft: need at least one sample");
  // Twiddle table indexed by (m*k) mod N keeps angles in [0, 2*pi) exactly.
  std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    twiddle[static_cast<std::size_t>(k)] = std::polar(
        1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
  Eigen::VectorXcd out(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      acc += x[k] * twiddle[static_cast<std::size_t>((m * k) % n)];
    }
    out[m] = acc;
  }
  return out;
}

Eigen::VectorXcd dft_real(const Eigen::VectorXd& x) {
  return dft(x.cast<std::complex<double>>());
}

double bin_to_omega(int m, int n, double h_t) {
  if (m < 0 || m >= n) throw std::domain_error("bin_to_omega: bin out of range");
  if (!(h_t > 0.0)) throw std::domain_error("bin_to_omega: h_t must be positive");
  const int folded = (2 * m <= n) ? m : m - n;
  return 2.0 * std::numbers::pi * static_cast<double>(folded) /
         (static_cast<double>(n) * h_t);
}

Eigen::VectorXd ensemble_variance(const Eigen::MatrixXcd& rows) {
  const Eigen::Index m = rows.rows();
  if (m < 2) throw std::domain_error("ensemble_variance: need M >= 2 rows");
  Eigen::VectorXd variance(rows.cols());
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    std::complex<double> mean = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) mean += rows(r, c);
    mean /= static_cast<double>(m);
    double acc = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) acc += std::norm(rows(r, c) - mean);
    variance[c] = acc / static_cast<double>(m - 1);
  }
  return variance;
}

SpectralEstimate recover_modulus(const Eigen::VectorXd& variance,
                                 const forward::FracGrid& grid,
                                 double scaling) {
  if ((variance.array() < 0.0).any()) {
    throw std::domain_error("recover_modulus: variance must be nonnegative");
  }
  if (!(scaling > 0.0)) {
    throw std::domain_error("recover_modulus: scaling must be positive");
  }
  const int n = static_cast<int>(variance.size());
  SpectralEstimate est;
  est.variance = variance;
  est.omega.resize(n);
  est.modulus.resize(n);
  for (int m = 0; m < n; ++m) {
    const double omega = bin_to_omega(m, n, grid.h_t());
    est.omega[m] = omega;
    const double energy = greenfn::boundary_kernel_energy(omega, grid.alpha);
    est.modulus[m] = std::sqrt(scaling * variance[m] / energy);
  }
  return est;
}

}  // namespace fracsource::spectral
