#pragma once

// Classical orthogonal polynomials as exact polynomials in x with coefficients
// in (a, b): H_N(x), L_N^{a-1}(x), P_N^{(a-1,b-1)}(1-2x).

#include <optional>
#include <vector>

#include "json.hpp"

#include "betadual/family.hpp"
#include "betadual/symbolic.hpp"

namespace betadual {

struct ClassicalPoly {
  Family family = Family::Gaussian;
  int degree = 0;
  /// Ascending powers of x. Symbolic in a (and b) unless fixed below.
  std::vector<RationalFn> coeffs;
  std::optional<Rational> a;
  std::optional<Rational> b;

  const RationalFn& leading() const { return coeffs.back(); }
  bool numeric() const;
};

/// Standard normalisation via the three-term recurrences. Throws
/// std::invalid_argument for N < 0 or missing a/b where none can be symbolic.
ClassicalPoly classical_coeffs(Family family, int degree,
                               std::optional<Rational> a = std::nullopt,
                               std::optional<Rational> b = std::nullopt);

/// Coefficients (ascending in x) of the defining second-order ODE applied to
/// the polynomial. All entries are zero for a correct polynomial.
std::vector<RationalFn> ode_residual(const ClassicalPoly& p);

/// q_m = [x^{N-m}] p / [x^N] p for m = 0..count-1, with N kept symbolic.
/// These come from the terminating hypergeometric sums, not the recurrences.
std::vector<RationalFn> descending_ratios_symbolic(Family family, int count);

/// d/dx log p(x) = sum m_p / x^{p+1} given the descending ratios of p and its
/// degree (which may be symbolic).
SeriesTail log_deriv_from_ratios(const RationalFn& degree, const std::vector<RationalFn>& ratios,
                                 int order);

SeriesTail log_deriv_series(const ClassicalPoly& p, int order);
/// Same expansion with N symbolic; a and b symbolic as well.
SeriesTail log_deriv_series_symbolic(Family family, int order);

struct ZeroSet {
  Family family = Family::Gaussian;
  int degree = 0;
  std::optional<Rational> a;
  std::optional<Rational> b;
  std::vector<double> zeros;  // strictly increasing
  /// max_i |p(z_i) / p'(z_i)| / max(1, |z_i|), exact at the returned doubles.
  double residual = 0.0;
};

/// Golub-Welsch eigenvalues of the monic recurrence's Jacobi matrix, then
/// Newton polish on the exact polynomial. Requires numeric a > 0 (and b > 0).
ZeroSet poly_zeros(const ClassicalPoly& p);
ZeroSet poly_zeros(Family family, int degree, std::optional<Rational> a = std::nullopt,
                   std::optional<Rational> b = std::nullopt);

/// Exact value of p and p' at a rational point (numeric parameters only).
std::pair<Rational, Rational> eval_with_derivative(const ClassicalPoly& p, const Rational& x);

void to_json(nlohmann::json& j, const ZeroSet& z);

}  // namespace betadual
