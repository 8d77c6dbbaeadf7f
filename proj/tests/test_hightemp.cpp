#include "doctest.h"

#include <cmath>
#include <numbers>

#include "betadual/errors.hpp"
#include "betadual/hightemp_density.hpp"
#include "betadual/orthopoly.hpp"
#include "betadual/resolvent.hpp"

using namespace betadual;

TEST_CASE("parabolic cylinder function") {
  CHECK(pcf_ode_residual(0.7, 1.5) <= 1e-6);
  for (double alpha : {0.5, 1.0, 2.0})
    for (double z = -5; z <= 5; z += 0.5) CHECK(pcf_ode_residual(z, alpha) <= 1e-6);
  // alpha = 1: g(z) = e^{z^2/2} sqrt(pi/2) erfc(z/sqrt2)
  const double z = 1.0;
  CHECK(pcf_g(z, 1.0) == doctest::Approx(std::exp(z * z / 2) * std::sqrt(std::numbers::pi / 2) *
                                         std::erfc(z / std::numbers::sqrt2)).epsilon(1e-10));
  double prev = 0;
  for (double zz : {10.0, 20.0, 40.0}) {
    const double v = pcf_g(zz, 1.5) * std::pow(zz, 1.5);
    CHECK(std::abs(v - 1) < std::abs(prev - 1) + (prev == 0 ? 1 : 0));
    prev = v;
  }
  CHECK(std::abs(prev - 1) < 1e-2);
  CHECK_THROWS_AS(pcf_g(0.0, -1.0), std::domain_error);
}

TEST_CASE("density normalisation, symmetry and moments") {
  for (double alpha : {0.5, 1.0, 2.0}) CHECK(std::abs(density_moment(0, alpha) - 1) <= 1e-6);
  CHECK(high_temp_density(0.8, 1.5) == doctest::Approx(high_temp_density(-0.8, 1.5)).epsilon(1e-10));
  MomentSeries star = moments_high_temp(Family::Gaussian, 4);
  for (double alpha : {0.5, 1.0}) {
    const Rational ar(alpha);
    for (int p = 1; p <= 4; ++p) {
      const double exact = to_double(star[2 * p].evaluate({{Var::alpha, ar}}));
      CHECK(std::abs(density_moment(2 * p, alpha) - exact) <= 1e-5 * std::max(1.0, exact));
    }
  }
}

TEST_CASE("resolvent") {
  CHECK(std::abs(50 * high_temp_resolvent(50, 1.0) - 1) < 1e-3);
  const double direct = high_temp_resolvent(4, 1.0);
  CHECK(direct == doctest::Approx(0.301733426954541).epsilon(1e-10));
  CHECK(std::abs(stieltjes_pv(4, 1.0) - direct) < 1e-5);
  auto w = high_temp_resolvent_complex(4, 1.0);
  CHECK(std::abs(w.imag()) == doctest::Approx(std::numbers::pi * high_temp_density(4, 1.0)).epsilon(1e-8));
}

TEST_CASE("negative integer alpha goes through the Hermite polynomial") {
  // large-x series from the high-temperature recurrence at alpha = -N
  MomentSeries star = moments_high_temp(Family::Gaussian, 12);
  for (int n : {2, 3}) {
    const double x = 6.0;
    double series = 0;
    for (int p = 0; p <= 12; ++p)
      series += to_double(star[2 * p].evaluate({{Var::alpha, -n}})) / std::pow(x, 2 * p + 1);
    CHECK(high_temp_resolvent(x, -n) == doctest::Approx(series).epsilon(1e-9));
  }
  // H_3 = 8y^3 - 12y at y = ix/sqrt2 gives (i/(3 sqrt2)) H'/H = (x^2 + 1) / (x (x^2 + 3))
  const double x = 2.0;
  const double expect = (x * x + 1) / (x * (x * x + 3));
  CHECK(high_temp_resolvent(x, -3) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(high_temp_resolvent(0.0, -3), PoleError);
}

TEST_CASE("grid helper") {
  auto g = linspace(-1, 1, 5);
  CHECK(g.size() == 5);
  CHECK(g[2] == 0.0);
  CHECK_THROWS(linspace(1, 0, 3));
}
