#include "betadual/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include "json.hpp"

#include "betadual/errors.hpp"

namespace betadual {

namespace {

using Poly = std::vector<RationalFn>;  // polynomial in x, ascending

Poly add(const Poly& l, const Poly& r) {
  Poly out(std::max(l.size(), r.size()));
  for (std::size_t i = 0; i < l.size(); ++i) out[i] += l[i];
  for (std::size_t i = 0; i < r.size(); ++i) out[i] += r[i];
  return out;
}

Poly scale(const Poly& p, const RationalFn& c) {
  Poly out;
  out.reserve(p.size());
  for (const auto& x : p) out.push_back(c * x);
  return out;
}

/// Multiply by (c0 + c1 x).
Poly times_linear(const Poly& p, const RationalFn& c0, const RationalFn& c1) {
  Poly out(p.size() + 1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] += c0 * p[i];
    out[i + 1] += c1 * p[i];
  }
  return out;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {RationalFn()};
  Poly out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = RationalFn(static_cast<long>(i)) * p[i];
  return out;
}

Poly divide_coeffs(const Poly& p, const MultiPoly& d) {
  Poly out;
  out.reserve(p.size());
  for (const auto& c : p) {
    auto poly = c.as_polynomial();
    if (!poly) throw std::logic_error("recurrence produced a non-polynomial coefficient");
    auto q = divide_exact(*poly, d);
    if (!q) throw std::logic_error("three-term recurrence division is not exact");
    out.emplace_back(std::move(*q));
  }
  return out;
}

MultiPoly param(const std::optional<Rational>& value, Var v) {
  return value ? MultiPoly(*value) : MultiPoly::variable(v);
}

void trim(Poly& p) {
  while (p.size() > 1 && p.back().is_zero()) p.pop_back();
}

}  // namespace

bool ClassicalPoly::numeric() const {
  switch (family) {
    case Family::Gaussian: return true;
    case Family::Laguerre: return a.has_value();
    case Family::Jacobi: return a.has_value() && b.has_value();
  }
  return false;
}

ClassicalPoly classical_coeffs(Family family, int degree, std::optional<Rational> a,
                               std::optional<Rational> b) {
  if (degree < 0) throw std::invalid_argument("polynomial degree must be >= 0");
  ClassicalPoly out;
  out.family = family;
  out.degree = degree;
  if (family != Family::Gaussian) out.a = a;
  if (family == Family::Jacobi) out.b = b;

  const MultiPoly A = param(out.a, Var::a);
  const MultiPoly B = param(out.b, Var::b);
  Poly prev{RationalFn(1)};
  Poly cur;
  switch (family) {
    case Family::Gaussian:
      cur = {RationalFn(0), RationalFn(2)};  // H_1 = 2x
      break;
    case Family::Laguerre:
      cur = {RationalFn(A), RationalFn(-1)};  // L_1^{a-1} = a - x
      break;
    case Family::Jacobi:
      cur = {RationalFn(A), RationalFn(-(A + B))};  // P_1^{(a-1,b-1)}(1-2x) = a - (a+b)x
      break;
  }
  if (degree == 0) {
    out.coeffs = prev;
    return out;
  }
  for (int n = 1; n < degree; ++n) {
    Poly next;
    const long nl = n;
    switch (family) {
      case Family::Gaussian:
        // H_{n+1} = 2x H_n - 2n H_{n-1}
        next = add(times_linear(cur, RationalFn(0), RationalFn(2)), scale(prev, RationalFn(-2 * nl)));
        break;
      case Family::Laguerre: {
        // (n+1) L_{n+1} = (2n + alpha + 1 - x) L_n - (n + alpha) L_{n-1}, alpha = a - 1
        MultiPoly c0 = MultiPoly(2 * nl) + A;
        next = add(times_linear(cur, RationalFn(c0), RationalFn(-1)),
                   scale(prev, RationalFn(-(MultiPoly(nl - 1) + A))));
        next = scale(next, RationalFn(Rational(1, static_cast<unsigned long>(n + 1))));
        break;
      }
      case Family::Jacobi: {
        // Standard recurrence in y = 1 - 2x with alpha = a-1, beta = b-1:
        // 2(n+1)(n+al+be+1)(2n+al+be) P_{n+1}
        //   = (2n+al+be+1)[(2n+al+be+2)(2n+al+be) y + al^2 - be^2] P_n
        //     - 2(n+al)(n+be)(2n+al+be+2) P_{n-1}
        const MultiPoly al = A - MultiPoly(1), be = B - MultiPoly(1);
        const MultiPoly s = MultiPoly(2 * nl) + al + be;
        const MultiPoly outer = s + MultiPoly(1);
        const MultiPoly slope = (s + MultiPoly(2)) * s;
        const MultiPoly c0 = outer * (slope + al * al - be * be);   // y -> 1
        const MultiPoly c1 = outer * slope * MultiPoly(-2);          // y -> -2x
        Poly lhs = add(times_linear(cur, RationalFn(c0), RationalFn(c1)),
                       scale(prev, RationalFn(MultiPoly(-2) * (MultiPoly(nl) + al) *
                                              (MultiPoly(nl) + be) * (s + MultiPoly(2)))));
        const MultiPoly d = MultiPoly(2 * (nl + 1)) * (MultiPoly(nl + 1) + al + be) * s;
        next = divide_coeffs(lhs, d);
        break;
      }
    }
    trim(next);
    prev = std::move(cur);
    cur = std::move(next);
  }
  out.coeffs = std::move(cur);
  return out;
}

std::vector<RationalFn> ode_residual(const ClassicalPoly& p) {
  const Poly& f = p.coeffs;
  Poly f1 = derivative(f), f2 = derivative(f1);
  const RationalFn N(static_cast<long>(p.degree));
  const RationalFn A(param(p.a, Var::a)), B(param(p.b, Var::b));
  Poly r;
  switch (p.family) {
    case Family::Gaussian:
      // f'' - 2x f' + 2N f
      r = add(add(f2, times_linear(f1, RationalFn(0), RationalFn(-2))), scale(f, RationalFn(2) * N));
      break;
    case Family::Laguerre:
      // x f'' + (a - x) f' + N f
      r = add(add(times_linear(f2, RationalFn(0), RationalFn(1)), times_linear(f1, A, RationalFn(-1))),
              scale(f, N));
      break;
    case Family::Jacobi: {
      // x(1-x) f'' + (a(1-x) - b x) f' + ((a+b-1)N + N^2) f
      Poly xf2 = times_linear(times_linear(f2, RationalFn(0), RationalFn(1)), RationalFn(1), RationalFn(-1));
      r = add(add(xf2, times_linear(f1, A, -(A + B))), scale(f, (A + B - RationalFn(1)) * N + N * N));
      break;
    }
  }
  return r;
}

std::vector<RationalFn> descending_ratios_symbolic(Family family, int count) {
  const MultiPoly N = MultiPoly::variable(Var::N);
  const MultiPoly A = MultiPoly::variable(Var::a);
  const MultiPoly B = MultiPoly::variable(Var::b);
  std::vector<RationalFn> q;
  q.reserve(static_cast<std::size_t>(std::max(count, 0)));
  RationalFn current(1);
  for (int m = 0; m < count; ++m) {
    if (m > 0) {
      const long k = m - 1;  // the factor added when going from m-1 to m
      switch (family) {
        case Family::Gaussian:
          // q_{2j} = (-1)^j N!/((N-2j)! j! 4^j); odd ratios vanish.
          break;
        case Family::Laguerre:
          // q_m = (-1)^m (N)_m (N+a-1)_m / m!   (falling factorials)
          current *= RationalFn((N - MultiPoly(k)) * (N + A - MultiPoly(1 + k)) *
                                Rational(-1, static_cast<unsigned long>(m)));
          break;
        case Family::Jacobi:
          // q_m = (-1)^m C(N,m) (N+a-1)_m / (2N+a+b-2)_m
          current *= RationalFn::ratio((N - MultiPoly(k)) * (N + A - MultiPoly(1 + k)) *
                                           Rational(-1, static_cast<unsigned long>(m)),
                                       MultiPoly(2) * N + A + B - MultiPoly(2 + k));
          break;
      }
    }
    if (family == Family::Gaussian) {
      if (m % 2 == 1) {
        q.emplace_back();
        continue;
      }
      const int j = m / 2;
      MultiPoly num(1);
      for (int i = 0; i < m; ++i) num *= N - MultiPoly(i);
      Rational denom = 1;
      for (int i = 1; i <= j; ++i) denom *= 4 * i;
      if (j % 2 == 1) denom = -denom;
      q.emplace_back(num * (1 / denom));
    } else {
      q.push_back(current);
    }
  }
  return q;
}

SeriesTail log_deriv_from_ratios(const RationalFn& degree, const std::vector<RationalFn>& ratios,
                                 int order) {
  if (order < 0) throw OrderUnderflow("negative series order");
  auto q = [&](int j) -> RationalFn {
    return j < static_cast<int>(ratios.size()) ? ratios[static_cast<std::size_t>(j)] : RationalFn();
  };
  // Comparing coefficients of x^{N-1-r} in p' = W p with q_0 = 1:
  // m_r = (N - r) q_r - sum_{k<r} m_k q_{r-k}.
  std::vector<RationalFn> m;
  m.reserve(static_cast<std::size_t>(order) + 1);
  for (int r = 0; r <= order; ++r) {
    RationalFn acc = (degree - RationalFn(static_cast<long>(r))) * q(r);
    for (int k = 0; k < r; ++k) acc -= m[static_cast<std::size_t>(k)] * q(r - k);
    m.push_back(std::move(acc));
  }
  return SeriesTail(std::move(m));
}

SeriesTail log_deriv_series(const ClassicalPoly& p, int order) {
  if (p.coeffs.empty() || p.leading().is_zero())
    throw std::invalid_argument("log-derivative of the zero polynomial");
  std::vector<RationalFn> ratios;
  const RationalFn& lead = p.leading();
  for (int j = 0; j <= p.degree; ++j)
    ratios.push_back(p.coeffs[static_cast<std::size_t>(p.degree - j)] / lead);
  return log_deriv_from_ratios(RationalFn(static_cast<long>(p.degree)), ratios, order);
}

SeriesTail log_deriv_series_symbolic(Family family, int order) {
  return log_deriv_from_ratios(RationalFn(MultiPoly::variable(Var::N)),
                               descending_ratios_symbolic(family, order + 1), order);
}

std::pair<Rational, Rational> eval_with_derivative(const ClassicalPoly& p, const Rational& x) {
  Assignment params;
  if (p.a) params[Var::a] = *p.a;
  if (p.b) params[Var::b] = *p.b;
  Rational value = 0, slope = 0;
  for (std::size_t i = p.coeffs.size(); i-- > 0;) {
    slope = slope * x + value;
    value = value * x + p.coeffs[i].evaluate(params);
  }
  return {value, slope};
}

namespace {

struct JacobiMatrix {
  Eigen::VectorXd diag;
  Eigen::VectorXd offdiag;
};

JacobiMatrix recurrence_matrix(Family family, int n, double a, double b) {
  JacobiMatrix m{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(std::max(n - 1, 0))};
  switch (family) {
    case Family::Gaussian:
      for (int k = 1; k < n; ++k) m.offdiag(k - 1) = std::sqrt(k / 2.0);
      break;
    case Family::Laguerre: {
      const double al = a - 1;
      for (int k = 0; k < n; ++k) m.diag(k) = 2 * k + al + 1;
      for (int k = 1; k < n; ++k) m.offdiag(k - 1) = std::sqrt(k * (k + al));
      break;
    }
    case Family::Jacobi: {
      // Monic Jacobi recurrence on y in (-1, 1), then x = (1 - y)/2.
      const double al = a - 1, be = b - 1;
      for (int k = 0; k < n; ++k) {
        const double s = 2 * k + al + be;
        double dy = (k == 0) ? (be - al) / (al + be + 2) : (be * be - al * al) / (s * (s + 2));
        m.diag(k) = (1 - dy) / 2;
      }
      for (int k = 1; k < n; ++k) {
        const double s = 2 * k + al + be;
        double off = 4.0 * k * (k + al) * (k + be) * (k + al + be) / (s * s * (s + 1) * (s - 1));
        m.offdiag(k - 1) = std::sqrt(off) / 2;
      }
      break;
    }
  }
  return m;
}

}  // namespace

ZeroSet poly_zeros(const ClassicalPoly& p) {
  if (!p.numeric()) throw std::invalid_argument("zeros need numeric a (and b)");
  if (p.family != Family::Gaussian && *p.a <= 0)
    throw std::domain_error("a must be > 0 for real simple zeros");
  if (p.family == Family::Jacobi && *p.b <= 0)
    throw std::domain_error("b must be > 0 for real simple zeros");
  ZeroSet out;
  out.family = p.family;
  out.degree = p.degree;
  out.a = p.a;
  out.b = p.b;
  if (p.degree == 0) return out;

  const double a = p.a ? to_double(*p.a) : 0.0, b = p.b ? to_double(*p.b) : 0.0;
  JacobiMatrix jm = recurrence_matrix(p.family, p.degree, a, b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(jm.diag, jm.offdiag, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("tridiagonal eigensolver failed");
  std::vector<double> z(solver.eigenvalues().data(), solver.eigenvalues().data() + p.degree);
  std::sort(z.begin(), z.end());

  double residual = 0.0;
  for (double& zi : z) {
    double step_ratio = 0.0;
    bool settled = false;
    for (int iter = 0; iter < 8; ++iter) {
      auto [v, d] = eval_with_derivative(p, Rational(zi));
      if (d == 0) throw ConvergenceError("zero derivative during Newton polish");
      Rational step = v / d;
      double next = to_double(Rational(zi) - step);
      step_ratio = std::abs(to_double(step)) / std::max(1.0, std::abs(zi));
      if (next == zi) {
        settled = true;
        break;
      }
      zi = next;
    }
    if (!settled && step_ratio > 1e-12) throw ConvergenceError("Newton polish did not settle");
    residual = std::max(residual, step_ratio);
  }
  for (std::size_t i = 1; i < z.size(); ++i)
    if (!(z[i] > z[i - 1])) throw ConvergenceError("polished zeros are not strictly increasing");
  out.zeros = std::move(z);
  out.residual = residual;
  return out;
}

ZeroSet poly_zeros(Family family, int degree, std::optional<Rational> a, std::optional<Rational> b) {
  if (family != Family::Gaussian && !a) throw std::invalid_argument("parameter a is required");
  if (family == Family::Jacobi && !b) throw std::invalid_argument("parameter b is required");
  return poly_zeros(classical_coeffs(family, degree, a, b));
}

void to_json(nlohmann::json& j, const ZeroSet& z) {
  j = nlohmann::json{{"family", polynomial_name(z.family)},
                     {"n", z.degree},
                     {"zeros", z.zeros},
                     {"residual", z.residual}};
  if (z.a) j["a"] = z.a->get_str();
  if (z.b) j["b"] = z.b->get_str();
}

}  // namespace betadual
