#include "doctest.h"

#include <vector>

#include "betadual/errors.hpp"
#include "betadual/symbolic.hpp"

using namespace betadual;

namespace {
MultiPoly var(Var v) { return MultiPoly::variable(v); }
}  // namespace

TEST_CASE("polynomial evaluation") {
  const MultiPoly N = var(Var::N), t = var(Var::t);
  CHECK((N * N - N).evaluate({{Var::N, 2}}) == 2);
  CHECK((N * N - N + t * N).evaluate({{Var::N, 1}, {Var::t, Rational(1, 2)}}) == Rational(1, 2));
  CHECK_THROWS_AS((N * t).evaluate({{Var::N, 1}}), std::invalid_argument);
}

TEST_CASE("arithmetic identities") {
  const MultiPoly N = var(Var::N), a = var(Var::a);
  MultiPoly lhs = (N + a).pow(3);
  MultiPoly rhs = N.pow(3) + 3 * N * N * a + 3 * N * a * a + a.pow(3);
  CHECK(lhs == rhs);
  CHECK((lhs - rhs).is_zero());
  CHECK(lhs.derivative(Var::a) == 3 * (N + a).pow(2));
  auto q = divide_exact(N * N - a * a, N - a);
  REQUIRE(q);
  CHECK(*q == N + a);
  CHECK_FALSE(divide_exact(N * N + a, N - a));
}

TEST_CASE("substitution") {
  const MultiPoly N = var(Var::N), t = var(Var::t);
  MultiPoly p = N * N + t * N;
  MultiPoly s = p.substitute(std::map<Var, MultiPoly>{{Var::N, -1 * N}, {Var::t, N}});
  CHECK(s == N * N - N * N);
  CHECK(p.partial_eval({{Var::t, 2}}) == N * N + 2 * N);
}

TEST_CASE("interpolation recovers a quadratic") {
  std::vector<std::pair<Rational, Rational>> pts{{1, 0}, {2, 2}, {3, 6}};
  MultiPoly p = poly_interpolate(pts, Var::N);
  const MultiPoly N = var(Var::N);
  CHECK(p == N * N - N);
  std::vector<std::pair<Rational, Rational>> dup{{1, 0}, {1, 2}};
  CHECK_THROWS(poly_interpolate(dup, Var::N));
}

TEST_CASE("interpolation with polynomial values") {
  const MultiPoly N = var(Var::N), t = var(Var::t);
  MultiPoly target = N * N * t + N * (1 - t);
  std::vector<std::pair<Rational, MultiPoly>> pts;
  for (int n = 1; n <= 3; ++n) pts.emplace_back(n, target.partial_eval({{Var::N, n}}));
  CHECK(interpolate(pts, Var::N) == target);
}

TEST_CASE("rational functions") {
  const MultiPoly N = var(Var::N), a = var(Var::a);
  RationalFn f = RationalFn::ratio(N, N + a);
  RationalFn g = RationalFn::ratio(a, N + a);
  CHECK(f + g == RationalFn(1));
  auto one = (f + g).as_polynomial();
  REQUIRE(one);
  CHECK(*one == MultiPoly(1));
  CHECK((f * RationalFn(N + a)) == RationalFn(N));
  CHECK(f.evaluate({{Var::N, 1}, {Var::a, 1}}) == Rational(1, 2));
  CHECK_THROWS_AS(f.evaluate({{Var::N, 1}, {Var::a, -1}}), PoleError);
  CHECK_THROWS_AS(RationalFn::ratio(N, MultiPoly()), PoleError);
}

TEST_CASE("series tails") {
  // 1/(x-1) = sum 1/x^{p+1}
  SeriesTail s = SeriesTail::pole_at(RationalFn(1), 4);
  for (int p = 0; p <= 4; ++p) CHECK(s[p] == RationalFn(1));
  SeriesTail d = s.derivative();
  CHECK(d.order() == 5);
  CHECK(d[0] == RationalFn(0));
  CHECK(d[1] == RationalFn(-1));
  CHECK(d[2] == RationalFn(-2));
  // 1/(x-1)^2 = -d/dx 1/(x-1)
  SeriesTail sq = s * s;
  for (int p = 1; p <= sq.order(); ++p) CHECK(sq[p] == -d[p]);
  CHECK_THROWS_AS(s.times_x(), OrderUnderflow);
  SeriesTail shifted = s.over_x().times_x();
  for (int p = 0; p <= 4; ++p) CHECK(shifted[p] == s[p]);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-2") == -2);
  CHECK(parse_rational("1.5") == Rational(3, 2));
  CHECK_THROWS(parse_rational("x"));
}
