#include "doctest.h"

#include <cmath>
#include <random>

#include "betadual/errors.hpp"
#include "betadual/loggas.hpp"
#include "betadual/orthopoly.hpp"

using namespace betadual;

TEST_CASE("energy, gradient and Hessian at simple configurations") {
  EnergyEval e = energy_grad_hess(Potential{Family::Gaussian, 1}, {0.0});
  CHECK(e.gradient(0) == 0.0);
  CHECK(e.hessian(0, 0) == 1.0);
  const double r = 1 / std::sqrt(2.0);
  EnergyEval e2 = energy_grad_hess(Potential{Family::Gaussian, 2}, {-r, r});
  CHECK(e2.gradient.norm() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(e2.hessian(0, 1) == e2.hessian(1, 0));
  CHECK_THROWS_AS(energy_grad_hess(Potential{Family::Gaussian, 2}, {1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(energy_grad_hess(Potential{Family::Laguerre, 1, 2.0}, {-1.0}), std::domain_error);
}

TEST_CASE("analytic derivatives agree with central differences") {
  std::mt19937_64 rng(5);
  const Potential pots[] = {{Family::Gaussian, 5}, {Family::Laguerre, 4, 2.0}, {Family::Jacobi, 4, 1.5, 2.5}};
  for (const auto& pot : pots) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> x = interlaced_default(pot);
      std::uniform_real_distribution<double> jitter(-0.1, 0.1);
      const double width = pot.family == Family::Jacobi ? 0.05 : 0.3;
      for (auto& v : x) v += width * jitter(rng);
      EnergyEval ev = energy_grad_hess(pot, x);
      const double h = 1e-6;
      for (int j = 0; j < pot.n; ++j) {
        auto xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        EnergyEval ep = energy_grad_hess(pot, xp), em = energy_grad_hess(pot, xm);
        const double fd = (ep.energy - em.energy) / (2 * h);
        CHECK(std::abs(fd - ev.gradient(j)) <= 1e-6 * std::max(1.0, std::abs(ev.gradient(j))));
        for (int k = 0; k < pot.n; ++k) {
          const double fd2 = (ep.gradient(k) - em.gradient(k)) / (2 * h);
          CHECK(std::abs(fd2 - ev.hessian(k, j)) <= 1e-5 * std::max(1.0, std::abs(ev.hessian(k, j))));
        }
      }
    }
  }
}

TEST_CASE("crystallize reaches the classical zeros") {
  auto r2 = crystallize(Potential{Family::Gaussian, 2});
  CHECK(r2.configuration[0] == doctest::Approx(-1 / std::sqrt(2.0)).epsilon(1e-12));
  auto r3 = crystallize(Potential{Family::Gaussian, 3});
  CHECK(std::abs(r3.configuration[1]) < 1e-10);
  CHECK(std::abs(r3.configuration[2] - std::sqrt(1.5)) < 1e-10);
  auto l1 = crystallize(Potential{Family::Laguerre, 1, 2.0});
  CHECK(std::abs(l1.configuration[0] - 2.0) < 1e-10);
  struct Case {
    Potential pot;
    ClassicalPoly poly;
  };
  const Case cases[] = {
      {{Family::Gaussian, 12}, classical_coeffs(Family::Gaussian, 12)},
      {{Family::Laguerre, 8, 1.5}, classical_coeffs(Family::Laguerre, 8, Rational(3, 2))},
      {{Family::Jacobi, 8, 2.0, 3.0}, classical_coeffs(Family::Jacobi, 8, Rational(2), Rational(3))},
      {{Family::Jacobi, 6, 1.5, 1.5}, classical_coeffs(Family::Jacobi, 6, Rational(3, 2), Rational(3, 2))},
  };
  for (const auto& c : cases) {
    MinimizationResult r = crystallize(c.pot);
    ZeroSet z = poly_zeros(c.poly);
    CHECK(r.converged);
    CHECK(r.hessian_min_eigenvalue > 0);
    for (std::size_t i = 0; i < z.zeros.size(); ++i) CHECK(std::abs(r.configuration[i] - z.zeros[i]) < 1e-10);
    // zeros are critical points
    CHECK(energy_grad_hess(c.pot, z.zeros).gradient.lpNorm<Eigen::Infinity>() <= 1e-9);
  }
}

TEST_CASE("crystallized resolvent equals the Hermite log-derivative") {
  for (int n = 1; n <= 10; ++n) {
    auto r = crystallize(Potential{Family::Gaussian, n});
    ClassicalPoly h = classical_coeffs(Family::Gaussian, n);
    for (int x : {3, 5, 10}) {
      double w = 0;
      for (double z : r.configuration) w += 1.0 / (x - z);
      auto [v, d] = eval_with_derivative(h, Rational(x));
      CHECK(std::abs(w - to_double(d / v)) < 1e-10);
    }
  }
}

TEST_CASE("zeros interlace between consecutive degrees") {
  for (int n = 2; n <= 20; ++n) {
    auto lo = poly_zeros(Family::Gaussian, n - 1).zeros, hi = poly_zeros(Family::Gaussian, n).zeros;
    for (int i = 0; i < n - 1; ++i) CHECK((hi[i] < lo[i] && lo[i] < hi[i + 1]));
  }
}

TEST_CASE("harmonic two-point function") {
  CHECK(harmonic_two_point(1, 2.0, 3.0) == doctest::Approx(0.5 / (4.0 * 9.0)));
  CHECK(harmonic_two_point(4, 3, 4) == doctest::Approx(harmonic_two_point(4, 4, 3)).epsilon(1e-14));
  CHECK(harmonic_two_point(4, 3, 4) == doctest::Approx(0.04699889727849834).epsilon(1e-12));
  CHECK_THROWS_AS(harmonic_two_point(1, 0.0, 1.0), std::domain_error);
}

TEST_CASE("bad initial configurations are rejected") {
  CHECK_THROWS_AS(crystallize(Potential{Family::Jacobi, 2, 2, 3}, std::vector<double>{0.5, 1.5}), std::domain_error);
  CHECK_THROWS_AS(crystallize(Potential{Family::Gaussian, 2}, std::vector<double>{1.0}), std::invalid_argument);
}
