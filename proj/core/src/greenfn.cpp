#include "fracsource/greenfn.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "fracsource/quadrature.hpp"

namespace fracsource::greenfn {

using fraccalc::FracOrder;
using fraccalc::sqrt_s;

std::complex<double> green(double omega, const FracOrder& alpha, double x,
                           double y) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw std::domain_error("green: positions must lie in [0, 1]");
  }
  if (x == 1.0 || y == 1.0) return {0.0, 0.0};  // Dirichlet end, exactly
  if (omega == 0.0) return {std::max(x, y) - 1.0, 0.0};

  const std::complex<double> r = sqrt_s(omega, alpha);
  const double sum = x + y;
  const double diff = std::abs(x - y);
  // All exponents below have non-positive real part once e^{2 sqrt(s)} is
  // factored out of numerator and denominator, so nothing overflows even at
  // |omega| ~ 1e8.
  const std::complex<double> num = std::exp(r * (sum - 2.0)) +
                                   std::exp(r * (diff - 2.0)) -
                                   std::exp(-r * sum) - std::exp(-r * diff);
  const std::complex<double> den = 2.0 * r * (std::exp(-2.0 * r) + 1.0);
  return num / den;
}

namespace {

// Coefficients of (1 - e^{-4a})/(4a) - e^{-2a} = sum_{k>=2} c_k a^k,
// c_k = (-4)^k/(k+1)! - (-2)^k/k!.
constexpr std::array<double, 17> kEnergySeries = [] {
  std::array<double, 17> c{};
  double pow4 = 1.0, pow2 = 1.0, fact_k = 1.0, fact_k1 = 1.0;
  for (int k = 0; k < 17; ++k) {
    if (k > 0) {
      pow4 *= -4.0;
      pow2 *= -2.0;
      fact_k *= k;
    }
    fact_k1 = fact_k * (k + 1);
    c[static_cast<std::size_t>(k)] = pow4 / fact_k1 - pow2 / fact_k;
  }
  return c;
}();

// 1 - sin(x)/x without cancellation for |x| <= 0.2.
double one_minus_sinc(double x) {
  const double x2 = x * x;
  return x2 / 6.0 *
         (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
}

}  // namespace

double boundary_kernel_energy(double omega, const FracOrder& alpha) {
  if (omega == 0.0) return 1.0 / 3.0;

  const std::complex<double> r = sqrt_s(omega, alpha);
  const double a = r.real();  // > 0 for omega != 0
  const double b = r.imag();  // |b| <= a on this branch
  const double s_abs = std::pow(std::abs(omega), alpha.value());
  // Closed form of int_0^1 |g(0,y)|^2 dy, with e^{4a} divided out of both
  // numerator and denominator:
  //   num = (1 - e^{-4a})/(2a) - e^{-2a} sin(2b)/b
  //   den = |s| (e^{-4a} + 2 e^{-2a} cos(2b) + 1)
  // For small a the numerator cancels to O(a^2 + b^2); a series branch keeps
  // full precision there (the limit omega -> 0 is 1/3).
  const double e2 = std::exp(-2.0 * a);
  const double e4 = e2 * e2;
  double num;
  if (a < 0.05) {
    double tail = 0.0;
    double a_pow = a * a;
    for (std::size_t k = 2; k < kEnergySeries.size(); ++k) {
      tail += kEnergySeries[k] * a_pow;
      a_pow *= a;
    }
    num = 2.0 * (tail + e2 * one_minus_sinc(2.0 * b));
  } else {
    const double sinc_2b = b != 0.0 ? std::sin(2.0 * b) / b : 2.0;
    num = (1.0 - e4) / (2.0 * a) - e2 * sinc_2b;
  }
  const double den = s_abs * (e4 + 2.0 * e2 * std::cos(2.0 * b) + 1.0);
  return num / den;
}

double green_l2_normsq(double omega, const FracOrder& alpha) {
  if (omega == 0.0) return 1.0 / 6.0;
  // 2-D quadrature; the integrand is symmetric in (x, y) with a kink on the
  // diagonal, so integrate the lower triangle and double. A coarse composite
  // pass sets the absolute error budget; the adaptive rule then resolves the
  // O(1/Re sqrt(s)) band around the diagonal where large |omega| concentrates
  // the mass.
  const auto integrand = [&](double x, double y) {
    return std::norm(green(omega, alpha, x, y));
  };
  const auto inner_coarse = [&](double x) {
    return quadrature::gauss_legendre_panels(
        [&](double y) { return integrand(x, y); }, 0.0, x, 32);
  };
  const double scale =
      std::max(2.0 * quadrature::gauss_legendre_panels(inner_coarse, 0.0, 1.0, 32),
               1e-300);
  const double inner_tol = 1e-9 * scale;
  const auto inner = [&](double x) {
    return quadrature::adaptive([&](double y) { return integrand(x, y); }, 0.0,
                                x, inner_tol);
  };
  return 2.0 * quadrature::adaptive(inner, 0.0, 1.0, 1e-8 * scale);
}

}  // namespace fracsource::greenfn
