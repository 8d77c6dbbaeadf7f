#pragma once

// Exact arithmetic: rationals, sparse multivariate polynomials over Q in the
// fixed symbol set (N, a, b, t, alpha), rational functions, and truncated
// series in 1/x.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace betadual {

using Rational = mpq_class;

/// Parse "p/q" or "p" (also accepts decimal strings like "1.5").
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

/// Symbols in canonical order. `t` stands for 1/kappa.
enum class Var : std::uint8_t { N = 0, a = 1, b = 2, t = 3, alpha = 4 };
inline constexpr std::size_t kNumVars = 5;
inline constexpr std::array<Var, kNumVars> kAllVars = {Var::N, Var::a, Var::b,
                                                      Var::t, Var::alpha};

std::string_view var_name(Var v);
Var var_from_name(std::string_view name);

using Exponents = std::array<int, kNumVars>;
using Assignment = std::map<Var, Rational>;

class MultiPoly {
 public:
  using TermMap = std::map<Exponents, Rational>;

  MultiPoly() = default;
  MultiPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  MultiPoly(long c) : MultiPoly(Rational(c)) {}  // NOLINT
  MultiPoly(int c) : MultiPoly(Rational(c)) {}   // NOLINT

  static MultiPoly variable(Var v);
  static MultiPoly monomial(const Exponents& e, const Rational& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::size_t size() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  Rational coefficient(const Exponents& e) const;
  Rational constant_term() const;
  /// Coefficient of v^k, as a polynomial in the remaining symbols.
  MultiPoly coefficient_of(Var v, int k) const;

  int degree(Var v) const;
  int total_degree() const;
  bool depends_on(Var v) const { return degree(v) > 0; }

  /// Largest term in lexicographic order N > a > b > t > alpha.
  const TermMap::value_type& leading_term() const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& c);
  MultiPoly operator-() const;
  friend MultiPoly operator+(MultiPoly l, const MultiPoly& r) { return l += r; }
  friend MultiPoly operator-(MultiPoly l, const MultiPoly& r) { return l -= r; }
  friend MultiPoly operator*(const MultiPoly& l, const MultiPoly& r);
  friend MultiPoly operator*(MultiPoly l, const Rational& c) { return l *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly r) { return r *= c; }
  friend MultiPoly operator*(MultiPoly l, int c) { return l *= Rational(c); }
  friend MultiPoly operator*(int c, MultiPoly r) { return r *= Rational(c); }
  friend bool operator==(const MultiPoly& l, const MultiPoly& r) {
    return l.terms_ == r.terms_;
  }

  MultiPoly pow(unsigned k) const;
  MultiPoly derivative(Var v) const;

  /// Exact value; throws std::invalid_argument if a symbol of the polynomial
  /// is missing from the assignment.
  Rational evaluate(const Assignment& values) const;
  /// Substitute the given symbols only.
  MultiPoly partial_eval(const Assignment& values) const;
  /// Simultaneous polynomial substitution v -> replacement.
  MultiPoly substitute(const std::map<Var, MultiPoly>& replacement) const;

  /// Scale so that the leading coefficient is 1; returns the removed factor.
  Rational make_monic();

  std::string to_string() const;

 private:
  void add_term(const Exponents& e, const Rational& c);
  TermMap terms_;
};

/// Exact quotient if `den` divides `num` in Q[N,a,b,t,alpha].
std::optional<MultiPoly> divide_exact(const MultiPoly& num, const MultiPoly& den);

/// Unique polynomial in `var` of minimal degree through the points; values may
/// themselves be polynomials in other symbols. Throws on duplicate abscissae.
MultiPoly interpolate(std::span<const std::pair<Rational, MultiPoly>> points, Var var);
MultiPoly poly_interpolate(std::span<const std::pair<Rational, Rational>> points, Var var);

void to_json(nlohmann::json& j, const MultiPoly& p);
MultiPoly multipoly_from_json(const nlohmann::json& j);

/// Quotient of polynomials. The denominator is held as a product of monic
/// "atom" polynomials with multiplicities; constants live in the numerator.
class RationalFn {
 public:
  using Factor = std::pair<MultiPoly, int>;

  RationalFn() = default;
  RationalFn(const Rational& c) : num_(c) {}      // NOLINT
  RationalFn(MultiPoly p) : num_(std::move(p)) {}  // NOLINT
  RationalFn(long c) : num_(c) {}                  // NOLINT
  RationalFn(int c) : num_(c) {}                   // NOLINT

  /// num / den. Throws PoleError if den is the zero polynomial.
  static RationalFn ratio(MultiPoly num, const MultiPoly& den);

  const MultiPoly& numerator() const { return num_; }
  const std::vector<Factor>& denominator_factors() const { return den_; }
  MultiPoly denominator() const;

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  /// The polynomial value if the denominator is trivial, after cancellation.
  std::optional<MultiPoly> as_polynomial() const;

  RationalFn& operator+=(const RationalFn& o);
  RationalFn& operator-=(const RationalFn& o);
  RationalFn& operator*=(const RationalFn& o);
  RationalFn& operator/=(const RationalFn& o);
  RationalFn operator-() const;
  friend RationalFn operator+(RationalFn l, const RationalFn& r) { return l += r; }
  friend RationalFn operator-(RationalFn l, const RationalFn& r) { return l -= r; }
  friend RationalFn operator*(RationalFn l, const RationalFn& r) { return l *= r; }
  friend RationalFn operator/(RationalFn l, const RationalFn& r) { return l /= r; }
  /// Decided by cross-multiplication.
  friend bool operator==(const RationalFn& l, const RationalFn& r);

  RationalFn pow(unsigned k) const;

  /// Throws PoleError if the denominator vanishes at the point.
  Rational evaluate(const Assignment& values) const;
  RationalFn partial_eval(const Assignment& values) const;
  RationalFn substitute(const std::map<Var, MultiPoly>& replacement) const;
  RationalFn substitute(const std::map<Var, RationalFn>& replacement) const;

  int degree(Var v) const;  // max of numerator and denominator degrees
  std::string to_string() const;

 private:
  void divide_by(const MultiPoly& p);
  void cancel();
  static void merge_factor(std::vector<Factor>& into, const MultiPoly& atom, int e);

  MultiPoly num_;
  std::vector<Factor> den_;
};

void to_json(nlohmann::json& j, const RationalFn& r);

/// Truncated expansion sum_{p=0}^{P} c_p / x^{p+1}. Coefficients beyond P are
/// unknown, not zero; every operation reports the order it is exact to.
class SeriesTail {
 public:
  explicit SeriesTail(std::vector<RationalFn> coeffs);
  static SeriesTail zero(int order);
  /// 1/(x - c) = sum c^p / x^{p+1}.
  static SeriesTail pole_at(const RationalFn& c, int order);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const RationalFn& operator[](std::size_t p) const { return coeffs_.at(p); }
  const std::vector<RationalFn>& coefficients() const { return coeffs_; }

  SeriesTail truncated(int order) const;
  SeriesTail derivative() const;
  SeriesTail over_x() const;
  /// Requires c_0 == 0 (no polynomial part) and order >= 1.
  SeriesTail times_x() const;

  friend SeriesTail operator+(const SeriesTail& l, const SeriesTail& r);
  friend SeriesTail operator-(const SeriesTail& l, const SeriesTail& r);
  friend SeriesTail operator*(const SeriesTail& l, const SeriesTail& r);
  friend SeriesTail operator*(const RationalFn& c, const SeriesTail& s);

 private:
  std::vector<RationalFn> coeffs_;
};

}  // namespace betadual
