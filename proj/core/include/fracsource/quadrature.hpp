#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace fracsource::quadrature {

namespace detail {
// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; the rule
// is symmetric).
inline constexpr std::array<double, 8> kGlNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
inline constexpr std::array<double, 8> kGlWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};
}  // namespace detail

/// 16-point Gauss-Legendre rule on [a, b].
template <class F>
double gauss_legendre(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < detail::kGlNodes.size(); ++i) {
    const double dx = half * detail::kGlNodes[i];
    sum += detail::kGlWeights[i] * (f(mid - dx) + f(mid + dx));
  }
  return half * sum;
}

/// Composite Gauss-Legendre with uniform panels.
template <class F>
double gauss_legendre_panels(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    sum += gauss_legendre(f, a + p * h, a + (p + 1) * h);
  }
  return sum;
}

/// Panel-doubling composite Gauss-Legendre: doubles the panel count until two
/// successive estimates agree to rel_tol, starting from `panels0`.
template <class F>
double panel_doubling(F&& f, double a, double b, double rel_tol,
                      int panels0 = 1, int max_panels = 1 << 20) {
  int panels = panels0;
  double prev = gauss_legendre_panels(f, a, b, panels);
  while (panels < max_panels) {
    panels *= 2;
    const double cur = gauss_legendre_panels(f, a, b, panels);
    const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
    if (std::abs(cur - prev) <= rel_tol * scale) return cur;
    prev = cur;
  }
  throw std::runtime_error("panel_doubling: no convergence at max panel count");
}

/// Locally adaptive Gauss-Legendre bisection with an absolute error budget
/// distributed by subinterval length. Refines only where the one-panel and
/// two-panel estimates disagree, so boundary layers cost O(log) depth instead
/// of a global panel count.
template <class F>
double adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 36) {
  if (a == b) return 0.0;
  struct Rec {
    const F& fn;
    double tol_per_len;
    int max_depth;
    double run(double lo, double hi, double whole, int depth) const {
      const double mid = 0.5 * (lo + hi);
      const double left = gauss_legendre(fn, lo, mid);
      const double right = gauss_legendre(fn, mid, hi);
      const double err = std::abs(left + right - whole);
      if (err <= tol_per_len * (hi - lo) || depth >= max_depth) {
        return left + right;
      }
      return run(lo, mid, left, depth + 1) + run(mid, hi, right, depth + 1);
    }
  };
  const Rec rec{f, abs_tol / (b - a), max_depth};
  return rec.run(a, b, gauss_legendre(f, a, b), 0);
}

}  // namespace fracsource::quadrature
