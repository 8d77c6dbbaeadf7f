#include "betadual/hightemp_density.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "betadual/errors.hpp"
#include "betadual/orthopoly.hpp"

namespace betadual {

namespace {

using cd = std::complex<double>;
using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

void require_positive(double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw std::domain_error("alpha must be > 0");
}

double truncation(double alpha) {
  return std::sqrt(2.0 * (46.0 + std::max(0.0, alpha - 1.0) * std::log(10.0 + alpha)));
}

/// int_0^T t^{power} e^{-t^2/2} e^{-i x t} dt, power > -1. The first
/// oscillation is done by tanh-sinh (absorbs the t^{power} endpoint), the
/// rest in pieces no longer than half a period.
cd oscillatory(double x, double power, double T) {
  const double piece = std::numbers::pi / std::max(std::abs(x), 1.0);
  auto re = [&](double t) { return std::pow(t, power) * std::exp(-t * t / 2) * std::cos(x * t); };
  auto im = [&](double t) { return -std::pow(t, power) * std::exp(-t * t / 2) * std::sin(x * t); };
  const double first = std::min(piece, T);
  boost::math::quadrature::tanh_sinh<double> ts;
  cd sum(ts.integrate(re, 0.0, first), ts.integrate(im, 0.0, first));
  for (double lo = first; lo < T; lo += piece) {
    const double hi = std::min(lo + piece, T);
    sum += cd(GK::integrate(re, lo, hi, 8, 1e-14), GK::integrate(im, lo, hi, 8, 1e-14));
  }
  return sum;
}

/// (F(x), F'(x)) with F' = -i int t^alpha e^{-t^2/2} e^{-ixt} dt.
std::pair<cd, cd> kernel_and_derivative(double x, double alpha) {
  const double T = truncation(alpha + 1);
  cd f = oscillatory(x, alpha - 1, T);
  cd fp = cd(0, -1) * oscillatory(x, alpha, T);
  return {f, fp};
}

/// Complex Horner of p and p' for real ascending coefficients.
std::pair<cd, cd> horner(const std::vector<double>& c, cd y) {
  cd v = 0, d = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    d = d * y + v;
    v = v * y + c[i];
  }
  return {v, d};
}

}  // namespace

double pcf_g(double z, double alpha) {
  require_positive(alpha);
  boost::math::quadrature::exp_sinh<double> es;
  auto f = [&](double t) { return std::exp((alpha - 1) * std::log(t) - z * t - t * t / 2); };
  return es.integrate(f, 0.0, std::numeric_limits<double>::infinity()) / std::tgamma(alpha);
}

double pcf_ode_residual(double z, double alpha, double h) {
  const double gm2 = pcf_g(z - 2 * h, alpha), gm1 = pcf_g(z - h, alpha), g0 = pcf_g(z, alpha);
  const double gp1 = pcf_g(z + h, alpha), gp2 = pcf_g(z + 2 * h, alpha);
  const double d1 = (gm2 - 8 * gm1 + 8 * gp1 - gp2) / (12 * h);
  const double d2 = (-gm2 + 16 * gm1 - 30 * g0 + 16 * gp1 - gp2) / (12 * h * h);
  const double res = d2 - z * d1 - alpha * g0;
  return std::abs(res) / (std::abs(d2) + std::abs(z * d1) + std::abs(alpha * g0));
}

std::complex<double> pcf_imaginary_kernel(double x, double alpha) {
  require_positive(alpha);
  return oscillatory(x, alpha - 1, truncation(alpha));
}

double high_temp_density(double x, double alpha) {
  require_positive(alpha);
  const cd f = pcf_imaginary_kernel(x, alpha);
  // Gamma(alpha)^2 e^{-x^2/2} / (sqrt(2 pi) Gamma(1+alpha) |F|^2)
  const double lg = 2 * std::lgamma(alpha) - std::lgamma(1 + alpha) - x * x / 2 -
                    0.5 * std::log(2 * std::numbers::pi);
  return std::exp(lg) / std::norm(f);
}

std::complex<double> high_temp_resolvent_complex(double x, double alpha) {
  require_positive(alpha);
  auto [f, fp] = kernel_and_derivative(x, alpha);
  return -(fp / f) / alpha;
}

double high_temp_resolvent(double x, double alpha) {
  const double rounded = std::round(alpha);
  if (alpha < 0 && rounded == alpha) {
    const int n = static_cast<int>(-rounded);
    ClassicalPoly h = classical_coeffs(Family::Gaussian, n);
    std::vector<double> c;
    for (const auto& k : h.coeffs) c.push_back(to_double(k.evaluate({})));
    const cd y(0, x / std::numbers::sqrt2);
    auto [v, d] = horner(c, y);
    if (std::abs(v) == 0) throw PoleError("resolvent pole: H_N(ix/sqrt2) = 0");
    const cd w = cd(0, 1) / (std::numbers::sqrt2 * n) * (d / v);
    return w.real();
  }
  return high_temp_resolvent_complex(x, alpha).real();
}

double density_cutoff(double alpha) {
  require_positive(alpha);
  return std::max(8.0, std::sqrt(2.0 * (30.0 + 2 * alpha * std::log(10.0 + 2 * alpha))));
}

double density_moment(int k, double alpha) {
  if (k < 0) throw std::invalid_argument("moment index must be >= 0");
  const double L = density_cutoff(alpha);
  auto f = [&](double y) { return std::pow(y, k) * high_temp_density(y, alpha); };
  // symmetric density: odd moments vanish, even ones are twice the half line
  if (k % 2) return 0.0;
  double sum = 0.0;
  const int pieces = 16;
  for (int i = 0; i < pieces; ++i)
    sum += GK::integrate(f, L * i / pieces, L * (i + 1) / pieces, 6, 1e-13);
  return 2 * sum;
}

double stieltjes_pv(double x, double alpha) {
  const double L = density_cutoff(alpha) + std::abs(x);
  const double rx = high_temp_density(x, alpha);
  auto f = [&](double y) {
    if (y == x) return 0.0;
    return (high_temp_density(y, alpha) - rx) / (x - y);
  };
  double sum = 0.0;
  const int pieces = 24;
  // split at x so no panel straddles the removable point
  for (int side = 0; side < 2; ++side) {
    const double lo = side ? x : -L, hi = side ? L : x;
    for (int i = 0; i < pieces; ++i)
      sum += GK::integrate(f, lo + (hi - lo) * i / pieces, lo + (hi - lo) * (i + 1) / pieces, 6, 1e-13);
  }
  return sum + rx * std::log((L + x) / (L - x));
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("grid needs n >= 1");
  if (!(hi >= lo)) throw std::invalid_argument("grid needs lo <= hi");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return out;
}

}  // namespace betadual
