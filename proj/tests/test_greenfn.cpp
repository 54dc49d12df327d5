#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "fracsource/greenfn.hpp"
#include "fracsource/quadrature.hpp"
#include "test_util.hpp"

using namespace fracsource;
using fraccalc::FracOrder;
using greenfn::boundary_kernel_energy;
using greenfn::green;
using greenfn::green_l2_normsq;

TEST_CASE("quadrature helpers against analytic integrals") {
  const auto cubic = [](double x) { return x * x * x; };
  CHECK(quadrature::gauss_legendre(cubic, 0.0, 1.0) ==
        doctest::Approx(0.25).epsilon(1e-15));
  const auto expo = [](double x) { return std::exp(x); };
  CHECK(quadrature::panel_doubling(expo, 0.0, 2.0, 1e-12) ==
        doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-12));
  // boundary layer, exact value (1 - e^{-1000})/1000
  const auto layer = [](double x) { return std::exp(-1000.0 * x); };
  CHECK(quadrature::adaptive(layer, 0.0, 1.0, 1e-12) ==
        doctest::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("zero-frequency kernel") {
  const FracOrder a(0.4);
  CHECK(green(0.0, a, 0.3, 0.7).real() == doctest::Approx(-0.3).epsilon(1e-15));
  CHECK(green(0.0, a, 0.3, 0.7).imag() == 0.0);
  CHECK(green(0.0, a, 0.7, 0.3) == green(0.0, a, 0.3, 0.7));
  CHECK(green(0.0, a, 0.0, 0.0) == std::complex<double>(-1.0, 0.0));
}

TEST_CASE("Dirichlet end is exactly zero") {
  const FracOrder a(0.6);
  for (double w : {0.0, 3.0, -11.0}) {
    for (double y : {0.0, 0.37, 0.99}) {
      CHECK(green(w, a, 1.0, y) == std::complex<double>(0.0, 0.0));
      CHECK(green(w, a, y, 1.0) == std::complex<double>(0.0, 0.0));
    }
  }
}

TEST_CASE("green rejects positions outside the unit interval") {
  const FracOrder a(0.5);
  CHECK_THROWS_AS(green(1.0, a, -0.1, 0.5), std::domain_error);
  CHECK_THROWS_AS(green(1.0, a, 0.5, 1.3), std::domain_error);
}

TEST_CASE("green satisfies the defining equation away from the source") {
  // Second difference reproduces s*g, and the derivative jump across x = y
  // equals one.
  const FracOrder a(0.6);
  const double w = 5.0;
  const double y = 0.6;
  const std::complex<double> s = fraccalc::i_omega_pow(w, a);
  const double h = 1e-5;
  for (double x : {0.2, 0.45, 0.8}) {
    const auto d2 = (green(w, a, x + h, y) - 2.0 * green(w, a, x, y) +
                     green(w, a, x - h, y)) /
                    (h * h);
    const auto residual = d2 - s * green(w, a, x, y);
    CHECK(std::abs(residual) < 1e-4);
  }
  const double delta = 1e-3;
  const double fd = 1e-6;
  const auto dgdx = [&](double x) {
    return (green(w, a, x + fd, y) - green(w, a, x - fd, y)) / (2.0 * fd);
  };
  const auto jump = dgdx(y + delta) - dgdx(y - delta);
  CHECK(jump.real() == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(std::abs(jump.imag()) < 1e-2);
}

TEST_CASE("green symmetry and conjugation") {
  const FracOrder a(0.7);
  for (double w : {0.4, 2.0, 50.0}) {
    for (double x : {0.1, 0.5, 0.85}) {
      for (double y : {0.2, 0.6, 0.9}) {
        const auto gxy = green(w, a, x, y);
        const auto gyx = green(w, a, y, x);
        CHECK(std::abs(gxy - gyx) <= 1e-13 * std::max(1.0, std::abs(gxy)));
        const auto gm = green(-w, a, x, y);
        CHECK(std::abs(gm - std::conj(gxy)) <=
              1e-13 * std::max(1.0, std::abs(gxy)));
      }
    }
  }
}

TEST_CASE("boundary kernel energy closed form vs quadrature") {
  for (double al : {0.4, 0.8}) {
    const FracOrder a(al);
    for (double w : {1.0, -1.0, 2.0, 10.0, -10.0, 100.0, 1e4}) {
      const double closed = boundary_kernel_energy(w, a);
      const auto f = [&](double y) { return std::norm(green(w, a, 0.0, y)); };
      const double quad =
          quadrature::panel_doubling(f, 0.0, 1.0, 1e-11, 4, 1 << 16);
      CHECK(closed == doctest::Approx(quad).epsilon(1e-8));
    }
  }
}

TEST_CASE("boundary kernel energy at omega = 0 and positivity") {
  const FracOrder a(0.55);
  CHECK(boundary_kernel_energy(0.0, a) == 1.0 / 3.0);
  for (double w = -1e4; w <= 1e4; w = (w < 0 ? w / 4 : (w == 0 ? 1e-3 : w * 4))) {
    CHECK(boundary_kernel_energy(w, a) > 0.0);
  }
  // even in omega
  for (double w : {0.3, 7.0, 4e3}) {
    CHECK(boundary_kernel_energy(w, a) ==
          doctest::Approx(boundary_kernel_energy(-w, a)).epsilon(1e-15));
  }
}

TEST_CASE("boundary kernel energy decay rate") {
  // The closed form behaves like |w|^{-3a/2} for large |w|: the |w|^{-a}
  // envelope usually quoted for it is an upper bound whose prefactor itself
  // decays like 1/(2 Re sqrt(s)). Both facts are pinned here.
  for (double al : {0.4, 0.8}) {
    const FracOrder a(al);
    std::vector<double> ws;
    std::vector<double> es;
    std::vector<double> scaled;
    for (int i = 0; i <= 12; ++i) {
      const double w = std::pow(10.0, 2.0 + 3.0 * i / 12.0);
      ws.push_back(w);
      es.push_back(boundary_kernel_energy(w, a));
      scaled.push_back(es.back() * std::pow(w, al));
    }
    const double slope = testutil::loglog_slope(ws, es);
    CHECK(slope == doctest::Approx(-1.5 * al).epsilon(0.1 / (1.5 * al)));
    // envelope: energy * |w|^a decreasing across the tested decades
    for (std::size_t i = 0; i + 1 < scaled.size(); ++i) {
      CHECK(scaled[i + 1] < scaled[i]);
    }
  }
}

TEST_CASE("overflow safety at extreme frequencies") {
  const FracOrder a(0.9);
  const double e = boundary_kernel_energy(1e8, a);
  CHECK(std::isfinite(e));
  CHECK(e > 0.0);
  const auto g = green(1e8, a, 0.25, 0.75);
  CHECK(std::isfinite(g.real()));
  CHECK(std::isfinite(g.imag()));
}

TEST_CASE("green_l2_normsq reference values and scaling") {
  const FracOrder a(0.4);
  CHECK(green_l2_normsq(0.0, a) == 1.0 / 6.0);

  // cross-check the 2-D quadrature against a plain midpoint grid
  const double w = 2.0;
  const double lib = green_l2_normsq(w, a);
  const int n = 400;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = (i + 0.5) / n;
      const double y = (j + 0.5) / n;
      acc += std::norm(green(w, a, x, y));
    }
  }
  acc /= static_cast<double>(n) * n;
  CHECK(lib == doctest::Approx(acc).epsilon(1e-4));

  // nonnegative and even in omega
  for (double omega : {0.5, 30.0}) {
    CHECK(green_l2_normsq(omega, a) > 0.0);
    CHECK(green_l2_normsq(-omega, a) ==
          doctest::Approx(green_l2_normsq(omega, a)).epsilon(1e-7));
  }
}

TEST_CASE("green_l2_normsq decay rate") {
  for (double al : {0.4, 0.8}) {
    const FracOrder a(al);
    std::vector<double> ws;
    std::vector<double> es;
    for (int i = 0; i <= 6; ++i) {
      const double w = std::pow(10.0, 2.0 + 3.0 * i / 6.0);
      ws.push_back(w);
      es.push_back(green_l2_normsq(w, a));
    }
    const double slope = testutil::loglog_slope(ws, es);
    CHECK(slope == doctest::Approx(-1.5 * al).epsilon(0.12 / (1.5 * al)));
    for (std::size_t i = 0; i + 1 < es.size(); ++i) {
      CHECK(es[i + 1] * std::pow(ws[i + 1], al) <
            es[i] * std::pow(ws[i], al));
    }
  }
}
