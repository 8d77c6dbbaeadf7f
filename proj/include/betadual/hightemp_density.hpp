#pragma once

// Scaled high-temperature Gaussian density and resolvent in terms of the
// parabolic cylinder function D_{-alpha}, evaluated from
//   D_{-alpha}(z) = e^{-z^2/4} / Gamma(alpha) int_0^inf t^{alpha-1} e^{-z t - t^2/2} dt.

#include <complex>
#include <vector>

namespace betadual {

/// g(z) = e^{z^2/4} D_{-alpha}(z); solves g'' - z g' - alpha g = 0.
double pcf_g(double z, double alpha);

/// Relative residual |g'' - z g' - alpha g| / (|g''| + |z g'| + |alpha g|),
/// with derivatives from a five-point stencil of step h.
double pcf_ode_residual(double z, double alpha, double h = 1e-2);

/// F(x) = int_0^inf t^{alpha-1} e^{-t^2/2} e^{-i x t} dt, so that
/// D_{-alpha}(ix) = e^{x^2/4} F(x) / Gamma(alpha).
std::complex<double> pcf_imaginary_kernel(double x, double alpha);

/// rho(x; alpha) = 1 / (sqrt(2 pi) Gamma(1+alpha) |D_{-alpha}(ix)|^2).
double high_temp_density(double x, double alpha);

/// x/(2 alpha) - (1/alpha) d/dx log D_{-alpha}(ix). For alpha > 0 the real part
/// is the principal-value Stieltjes transform of rho and the imaginary part is
/// pi rho.
std::complex<double> high_temp_resolvent_complex(double x, double alpha);

/// Real resolvent. For alpha > 0 the real part of the above; for alpha = -N
/// (negative integer) the Hermite form (i/(sqrt2 N)) H_N'(y)/H_N(y), y = ix/sqrt2,
/// which is real. Throws PoleError at x = 0 when N is odd.
double high_temp_resolvent(double x, double alpha);

/// PV int rho(y; alpha) / (x - y) dy by subtraction of the singularity.
double stieltjes_pv(double x, double alpha);

/// int y^k rho(y; alpha) dy over a range whose tails are below 1e-12.
double density_moment(int k, double alpha);
double density_cutoff(double alpha);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace betadual
