#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fracsource::fraccalc {

/// Fractional differentiation order, restricted to the open interval (0, 1).
/// The endpoints are rejected; integer-order checks in tests use the raw
/// double overloads below instead.
class FracOrder {
public:
  explicit FracOrder(double alpha);
  double value() const noexcept { return alpha_; }

private:
  double alpha_;
};

/// Gamma function on (0, 30), Lanczos approximation (g = 7, 9 terms).
/// Relative error is below 1e-13 on the whole range.
double gamma_fn(double x);

/// Principal branch of (i*omega)^alpha:
///   |omega|^alpha * exp(i*pi*alpha*sgn(omega)/2),  with value 0 at omega = 0.
/// Accepts alpha in (0, 1]; the alpha = 1 case exists for test oracles.
std::complex<double> i_omega_pow(double omega, double alpha);
std::complex<double> i_omega_pow(double omega, const FracOrder& alpha);

/// Square root of s = (i*omega)^alpha on the same branch:
///   |omega|^{alpha/2} * exp(i*pi*alpha*sgn(omega)/4).
/// Its real part is strictly positive for omega != 0; omega = 0 is a domain
/// error because the zero-frequency problem takes a different kernel.
std::complex<double> sqrt_s(double omega, const FracOrder& alpha);

/// History weights of the L1 discretization of the Caputo derivative at step n.
/// coeffs[j-1] multiplies the sample v^j for j = 1..n:
///   coeffs[n-1] = 1, and for j < n
///   coeffs[j-1] = (n-j+1)^{1-alpha} - 2(n-j)^{1-alpha} + (n-j-1)^{1-alpha}.
/// The weight on v^0 is -(n^{1-alpha} - (n-1)^{1-alpha}) and is kept implicit;
/// callers with zero initial data never need it.
struct L1Weights {
  int n = 0;
  std::vector<double> coeffs;
};
L1Weights l1_weights(int n, const FracOrder& alpha);

/// L1 approximation of the Caputo derivative of order alpha at t_n, given
/// samples v(t_0), ..., v(t_n) on a uniform grid with step h_t. Exact on
/// piecewise-linear functions.
double caputo_l1(std::span<const double> samples, const FracOrder& alpha,
                 double h_t);

}  // namespace fracsource::fraccalc
