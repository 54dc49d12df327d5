#include "fracsource/fraccalc.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracsource::fraccalc {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos coefficients, g = 7, 9 terms.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_gamma(double z) {
  if (z < 0.5) {
    // Reflection keeps the series argument away from the poles.
    return kPi / (std::sin(kPi * z) * lanczos_gamma(1.0 - z));
  }
  z -= 1.0;
  double x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    x += kLanczos[i] / (z + static_cast<double>(i));
  }
  const double t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace

FracOrder::FracOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("FracOrder: alpha must lie strictly in (0, 1)");
  }
}

double gamma_fn(double x) {
  if (!(x > 0.0 && x < 30.0)) {
    throw std::domain_error("gamma_fn: argument must lie in (0, 30)");
  }
  return lanczos_gamma(x);
}

std::complex<double> i_omega_pow(double omega, double alpha) {
  if (!std::isfinite(omega)) {
    throw std::domain_error("i_omega_pow: omega must be finite");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::domain_error("i_omega_pow: alpha must lie in (0, 1]");
  }
  if (omega == 0.0) return {0.0, 0.0};
  const double sign = omega > 0.0 ? 1.0 : -1.0;
  return std::polar(std::pow(std::abs(omega), alpha),
                    0.5 * kPi * alpha * sign);
}

std::complex<double> i_omega_pow(double omega, const FracOrder& alpha) {
  return i_omega_pow(omega, alpha.value());
}

std::complex<double> sqrt_s(double omega, const FracOrder& alpha) {
  if (!std::isfinite(omega)) {
    throw std::domain_error("sqrt_s: omega must be finite");
  }
  if (omega == 0.0) {
    throw std::domain_error(
        "sqrt_s: omega = 0 belongs to the zero-frequency kernel branch");
  }
  const double sign = omega > 0.0 ? 1.0 : -1.0;
  return std::polar(std::pow(std::abs(omega), 0.5 * alpha.value()),
                    0.25 * kPi * alpha.value() * sign);
}

L1Weights l1_weights(int n, const FracOrder& alpha) {
  if (n < 1) throw std::domain_error("l1_weights: n must be >= 1");
  const double e = 1.0 - alpha.value();
  L1Weights w;
  w.n = n;
  w.coeffs.resize(static_cast<std::size_t>(n));
  for (int j = 1; j < n; ++j) {
    const double k = static_cast<double>(n - j);
    w.coeffs[static_cast<std::size_t>(j - 1)] =
        std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(k - 1.0, e);
  }
  w.coeffs[static_cast<std::size_t>(n - 1)] = 1.0;
  return w;
}

double caputo_l1(std::span<const double> samples, const FracOrder& alpha,
                 double h_t) {
  if (samples.size() < 2) {
    throw std::domain_error("caputo_l1: need at least two samples");
  }
  if (!(h_t > 0.0)) throw std::domain_error("caputo_l1: h_t must be positive");
  const int n = static_cast<int>(samples.size()) - 1;
  const double a = alpha.value();
  const double e = 1.0 - a;
  // Difference form: sum_j (v^j - v^{j-1}) [(n-j+1)^{1-a} - (n-j)^{1-a}].
  // Algebraically identical to the weight form and exact on piecewise-linear
  // samples; this grouping avoids the cancellation of large +-2 k^{1-a} terms.
  double acc = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double k = static_cast<double>(n - j);
    const double kernel = std::pow(k + 1.0, e) - std::pow(k, e);
    acc += (samples[static_cast<std::size_t>(j)] -
            samples[static_cast<std::size_t>(j - 1)]) *
           kernel;
  }
  return acc / (gamma_fn(2.0 - a) * std::pow(h_t, a));
}

}  // namespace fracsource::fraccalc
