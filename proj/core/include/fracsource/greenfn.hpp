#pragma once

#include <complex>

#include "fracsource/fraccalc.hpp"

namespace fracsource::greenfn {

/// Green function of the frequency-domain two-point boundary value problem
///   g''(x,y) - s g(x,y) = delta(x - y),  g'(0,y) = 0,  g(1,y) = 0,
/// with s = (i*omega)^alpha. For omega = 0 this is max{x,y} - 1. The omega != 0
/// branch is evaluated with the dominant exponential factored out, so it stays
/// finite for |omega| up to at least 1e8.
std::complex<double> green(double omega, const fraccalc::FracOrder& alpha,
                           double x, double y);

/// Energy of the boundary kernel, integral over y in (0,1) of |g(0,y)|^2.
/// Closed form; equals exactly 1/3 at omega = 0. Strictly positive for all
/// omega. This is the denominator of the variance-to-modulus inversion.
double boundary_kernel_energy(double omega, const fraccalc::FracOrder& alpha);

/// Squared L2(D x D) norm of the Green function; 1/6 at omega = 0, 2-D
/// quadrature otherwise. Provided as a diagnostic for the well-posedness
/// estimate, not used on the inversion path.
double green_l2_normsq(double omega, const fraccalc::FracOrder& alpha);

}  // namespace fracsource::greenfn
