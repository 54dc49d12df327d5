#pragma once

#include <Eigen/Dense>

#include "fracsource/forward.hpp"

namespace fracsource::spectral {

/// N-point DFT, bin m (0-based) holds sum_n x_n exp(-2*pi*i*m*n/N).
/// Direct O(N^2) sum with exact twiddle indexing; plenty at the sizes this
/// pipeline runs.
Eigen::VectorXcd dft(const Eigen::VectorXcd& x);
Eigen::VectorXcd dft_real(const Eigen::VectorXd& x);

/// Signed continuous angular frequency of DFT bin m: 2*pi*m'/(N*h_t) with
/// m' = m for m <= N/2 and m' = m - N above (aliased negative frequencies).
double bin_to_omega(int m, int n, double h_t);

/// Per-bin unbiased sample variance of the rows: sum_i |U_i - Ubar|^2/(M-1)
/// with the complex sample mean subtracted. Serial left-to-right reduction,
/// so results are bit-stable. Requires M >= 2.
Eigen::VectorXd ensemble_variance(const Eigen::MatrixXcd& rows);

/// Variance spectrum together with the recovered Fourier modulus.
struct SpectralEstimate {
  Eigen::VectorXd variance;
  Eigen::VectorXd omega;
  Eigen::VectorXd modulus;
};

/// Invert the variance identity per bin:
///   modulus_m = sqrt(scaling * variance_m / energy(omega_m)).
/// energy is the boundary-kernel energy at the bin frequency (1/3 at the
/// zero bin). scaling defaults to 1: the h_t factors relating discrete and
/// continuous transforms cancel in the ratio, and the parameter exists so
/// that claim stays testable.
SpectralEstimate recover_modulus(const Eigen::VectorXd& variance,
                                 const forward::FracGrid& grid,
                                 double scaling = 1.0);

}  // namespace fracsource::spectral
