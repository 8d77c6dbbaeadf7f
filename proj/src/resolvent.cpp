#include "betadual/resolvent.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "betadual/errors.hpp"
#include "betadual/orthopoly.hpp"

namespace betadual {

namespace {

const MultiPoly kN = MultiPoly::variable(Var::N);
const MultiPoly kA = MultiPoly::variable(Var::a);
const MultiPoly kB = MultiPoly::variable(Var::b);
const MultiPoly kAlpha = MultiPoly::variable(Var::alpha);

std::size_t sz(int k) { return static_cast<std::size_t>(k); }

/// sum of m_s m_{k-s} for s = from, from+step, ..., k-from.
RationalFn cauchy(const std::vector<RationalFn>& m, int k, int from, int step = 1) {
  RationalFn acc;
  for (int s = from; s <= k - from; s += step) acc += m[sz(s)] * m[sz(k - s)];
  return acc;
}

void gaussian_recurrence(std::vector<RationalFn>& m, int order, const RationalFn& quad_coeff,
                         bool low) {
  // low:  2 m_{2k+2} = sum m_{2s} m_{2k-2s} - (2k+1) m_{2k}
  // high:   c_{2k+2} = (2k+1) c_{2k} + alpha sum c_{2s} c_{2k-2s}
  for (int k = 0; k < order; ++k) {
    RationalFn s = cauchy(m, 2 * k, 0, 2);
    RationalFn lin = RationalFn(static_cast<long>(2 * k + 1)) * m[sz(2 * k)];
    m[sz(2 * k + 2)] = low ? (s - lin) * RationalFn(Rational(1, 2)) : lin + quad_coeff * s;
  }
}

SeriesTail constant_over_x(const RationalFn& c, int order) {
  std::vector<RationalFn> cs(sz(order) + 1);
  cs[0] = c;
  return SeriesTail(std::move(cs));
}

/// 1/(1-x) = -sum_{k>=0} x^{-k-1}
SeriesTail one_over_one_minus_x(int order) {
  return RationalFn(-1) * SeriesTail::pole_at(RationalFn(1), order);
}

/// W - c/x, which has no 1/x term and may be multiplied by x.
SeriesTail drop_leading(const SeriesTail& w) {
  std::vector<RationalFn> cs = w.coefficients();
  cs[0] = RationalFn();
  return SeriesTail(std::move(cs));
}

}  // namespace

Regime parse_regime(std::string_view name) {
  if (name == "low" || name == "zero") return Regime::Low;
  if (name == "high") return Regime::High;
  throw std::invalid_argument("unknown regime: " + std::string(name));
}

RecurrenceSource parse_source(std::string_view name) {
  if (name == "paper") return RecurrenceSource::Paper;
  if (name == "rederived") return RecurrenceSource::Rederived;
  throw std::invalid_argument("unknown recurrence source: " + std::string(name));
}

std::string MomentSeries::tag() const {
  std::string t(1, "GLJ"[static_cast<int>(family)]);
  if (regime == Regime::High) t += "star";
  return t + "0";
}

MomentSeries moments_zero_temp(Family family, int order, RecurrenceSource source) {
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  MomentSeries out;
  out.family = family;
  out.regime = Regime::Low;
  out.order = order;
  auto& m = out.moments;
  switch (family) {
    case Family::Gaussian:
      m.assign(sz(2 * order) + 1, RationalFn());
      m[0] = RationalFn(kN);
      gaussian_recurrence(m, order, RationalFn(), true);
      break;
    case Family::Laguerre:
      // m_{k+1} = sum_{s=0}^k m_s m_{k-s} - (k+1-a) m_k
      m.assign(sz(order) + 1, RationalFn());
      m[0] = RationalFn(kN);
      for (int k = 0; k < order; ++k)
        m[sz(k + 1)] = cauchy(m, k, 0) - RationalFn(MultiPoly(k + 1) - kA) * m[sz(k)];
      break;
    case Family::Jacobi:
      m.assign(sz(order) + 1, RationalFn());
      m[0] = RationalFn(kN);
      for (int j = 1; j <= order; ++j) {
        const MultiPoly den = 2 * kN + kA + kB - MultiPoly(1 + j);
        RationalFn num;
        if (source == RecurrenceSource::Rederived) {
          // (a - j) m_{j-1} + sum_{s=0}^{j-1} m_s m_{j-1-s} - sum_{s=1}^{j-1} m_s m_{j-s}
          num = RationalFn(kA - MultiPoly(j)) * m[sz(j - 1)] + cauchy(m, j - 1, 0) - cauchy(m, j, 1);
        } else {
          RationalFn lin;
          for (int s = 1; s < j; ++s) lin += m[sz(s)];
          num = RationalFn((kN + kA - MultiPoly(1)) * kN) + RationalFn(kB) * lin +
                RationalFn(kN) * cauchy(m, j, 1);
        }
        m[sz(j)] = num / RationalFn(den);
      }
      break;
  }
  return out;
}

MomentSeries moments_high_temp(Family family, int order) {
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  MomentSeries out;
  out.family = family;
  out.regime = Regime::High;
  out.order = order;
  auto& c = out.moments;
  const RationalFn alpha(kAlpha);
  switch (family) {
    case Family::Gaussian:
      c.assign(sz(2 * order) + 1, RationalFn());
      c[0] = RationalFn(1);
      gaussian_recurrence(c, order, alpha, false);
      break;
    case Family::Laguerre:
      // c_{k+1} = (k+1+a) c_k + alpha sum_{s=0}^k c_s c_{k-s}
      c.assign(sz(order) + 1, RationalFn());
      c[0] = RationalFn(1);
      for (int k = 0; k < order; ++k)
        c[sz(k + 1)] = RationalFn(MultiPoly(k + 1) + kA) * c[sz(k)] + alpha * cauchy(c, k, 0);
      break;
    case Family::Jacobi:
      // c_j = [(j+a) c_{j-1} + alpha (sum_{s=0}^{j-1} c_s c_{j-1-s} - sum_{s=1}^{j-1} c_s c_{j-s})]
      //       / (2 alpha + a + b + 1 + j)
      c.assign(sz(order) + 1, RationalFn());
      c[0] = RationalFn(1);
      for (int j = 1; j <= order; ++j) {
        RationalFn num = RationalFn(kA + MultiPoly(j)) * c[sz(j - 1)] +
                         alpha * (cauchy(c, j - 1, 0) - cauchy(c, j, 1));
        c[sz(j)] = num / RationalFn(2 * kAlpha + kA + kB + MultiPoly(1 + j));
      }
      break;
  }
  return out;
}

SeriesTail riccati_residual(const MomentSeries& ms) {
  const SeriesTail w = ms.series();
  const int P = w.order();
  const RationalFn A(kA), B(kB), N(kN), alpha(kAlpha);
  if (ms.regime == Regime::Low) {
    switch (ms.family) {
      case Family::Gaussian:
        // W' + W^2 - 2xW + 2N = 0, halved
        return RationalFn(Rational(1, 2)) * (w.derivative() + w * w) - drop_leading(w).times_x();
      case Family::Laguerre:
        // W' + W^2 + (a/x - 1) W + N/x = 0
        return w.derivative() + w * w + A * w.over_x() - w + constant_over_x(N, P);
      case Family::Jacobi: {
        // W' + W^2 + (a/x - b/(1-x)) W + ((a+b-1)N + N^2)/(x(1-x)) = 0
        const RationalFn K = (A + B - RationalFn(1)) * N + N * N;
        SeriesTail inv = one_over_one_minus_x(P);
        return w.derivative() + w * w + A * w.over_x() - B * (inv * w) + K * inv.over_x();
      }
    }
  } else {
    switch (ms.family) {
      case Family::Gaussian:
        // -W' - xW + 1 + alpha W^2 = 0
        return RationalFn(-1) * w.derivative() - drop_leading(w).times_x() + alpha * (w * w);
      case Family::Laguerre:
        // -W' + (a/x - 1) W + 1/x + alpha W^2 = 0
        return RationalFn(-1) * w.derivative() + A * w.over_x() - w + constant_over_x(RationalFn(1), P) +
               alpha * (w * w);
      case Family::Jacobi: {
        // -W' + (a/x - b/(1-x)) W + (1+a+b+alpha)/(x(1-x)) + alpha W^2 = 0
        SeriesTail inv = one_over_one_minus_x(P);
        return RationalFn(-1) * w.derivative() + A * w.over_x() - B * (inv * w) +
               (RationalFn(1) + A + B + alpha) * inv.over_x() + alpha * (w * w);
      }
    }
  }
  throw std::logic_error("unreachable");
}

SeriesIdentity parse_series_identity(std::string_view name) {
  if (name == "w3") return SeriesIdentity::W3;
  if (name == "w3L") return SeriesIdentity::W3L;
  if (name == "jacobi-n1" || name == "Wh1J-n1") return SeriesIdentity::JacobiN1;
  throw std::invalid_argument("unknown series identity: " + std::string(name));
}

std::string_view series_identity_name(SeriesIdentity id) {
  switch (id) {
    case SeriesIdentity::W3: return "w3";
    case SeriesIdentity::W3L: return "w3L";
    case SeriesIdentity::JacobiN1: return "jacobi-n1";
  }
  return "";
}

DualityReport duality_check_series(SeriesIdentity identity, int order) {
  DualityReport rep;
  rep.identity = series_identity_name(identity);
  const RationalFn invN = RationalFn::ratio(MultiPoly(1), kN);
  switch (identity) {
    case SeriesIdentity::W3: {
      rep.statement = "(-2)^p/N m_{2p}^{G}(N) = m_{2p}^{G*}(alpha = -N)";
      MomentSeries low = moments_zero_temp(Family::Gaussian, order);
      MomentSeries high = moments_high_temp(Family::Gaussian, order);
      const std::map<Var, MultiPoly> sub{{Var::alpha, -kN}};
      Rational sign = 1;
      for (int p = 0; p <= order; ++p, sign *= -2) {
        DualityRecord r;
        r.order = p;
        r.lhs = RationalFn(sign) * invN * low[sz(2 * p)];
        r.rhs = high[sz(2 * p)].substitute(sub);
        rep.records.push_back(std::move(r));
      }
      break;
    }
    case SeriesIdentity::W3L: {
      rep.statement = "(-1)^p/N m_p^{L}(N,a) = m_p^{L*}(alpha = -N, a -> -a)";
      MomentSeries low = moments_zero_temp(Family::Laguerre, order);
      MomentSeries high = moments_high_temp(Family::Laguerre, order);
      const std::map<Var, MultiPoly> sub{{Var::alpha, -kN}, {Var::a, -kA}};
      Rational sign = 1;
      for (int p = 0; p <= order; ++p, sign = -sign) {
        DualityRecord r;
        r.order = p;
        r.lhs = RationalFn(sign) * invN * low[sz(p)];
        r.rhs = high[sz(p)].substitute(sub);
        rep.records.push_back(std::move(r));
      }
      break;
    }
    case SeriesIdentity::JacobiN1: {
      rep.statement = "-1/N m_p^{J}(-N,-a,-b) = m_p^{J*}(alpha = N, a, b)";
      MomentSeries low = moments_zero_temp(Family::Jacobi, order);
      MomentSeries high = moments_high_temp(Family::Jacobi, order);
      const std::map<Var, MultiPoly> neg{{Var::N, -kN}, {Var::a, -kA}, {Var::b, -kB}};
      const std::map<Var, MultiPoly> sub{{Var::alpha, kN}};
      for (int p = 0; p <= order; ++p) {
        DualityRecord r;
        r.order = p;
        r.lhs = RationalFn(-1) * invN * low[sz(p)].substitute(neg);
        r.rhs = high[sz(p)].substitute(sub);
        rep.records.push_back(std::move(r));
      }
      break;
    }
  }
  finalize(rep);
  return rep;
}

Rational catalan_number(int p) {
  std::vector<Rational> c{1};
  for (int k = 0; k < p; ++k) {
    Rational next = 0;
    for (int s = 0; s <= k; ++s) next += c[sz(s)] * c[sz(k - s)];
    c.push_back(next);
  }
  return c[sz(p)];
}

double semicircle_moment(int p) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [p](double x) {
    double r = 4.0 - x * x;
    return r <= 0 ? 0.0 : std::pow(x, 2 * p) * std::sqrt(r);
  };
  return integrator.integrate(f, -2.0, 2.0) / (2 * std::numbers::pi);
}

DualityReport catalan_check(int order, int numeric_order) {
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  DualityReport rep;
  rep.identity = "catalan";
  rep.statement = "[N^{p+1}] m_{2p}^{G}(N) = C_p / 2^p";
  MomentSeries m = moments_zero_temp(Family::Gaussian, order);
  for (int p = 0; p <= order; ++p) {
    auto poly = m[sz(2 * p)].as_polynomial();
    if (!poly) throw std::logic_error("Gaussian moment is not a polynomial in N");
    DualityRecord r;
    r.order = p;
    r.lhs = RationalFn(poly->coefficient_of(Var::N, p + 1));
    Rational scale = 1;
    for (int i = 0; i < p; ++i) scale *= 2;
    r.rhs = RationalFn(catalan_number(p) / scale);
    rep.records.push_back(std::move(r));
  }
  finalize(rep);
  nlohmann::json numeric = nlohmann::json::array();
  bool numeric_ok = true;
  for (int p = 0; p <= numeric_order; ++p) {
    const double value = semicircle_moment(p);
    const double expect = to_double(catalan_number(p));
    const bool ok = std::abs(value - expect) <= 1e-8;
    numeric_ok = numeric_ok && ok;
    numeric.push_back({{"p", p}, {"integral", value}, {"catalan", expect},
                       {"abs_error", std::abs(value - expect)}, {"pass", ok}});
  }
  rep.extra["semicircle_moments"] = numeric;
  rep.extra["tolerance"] = 1e-8;
  rep.pass = rep.pass && numeric_ok;
  return rep;
}

DualityReport hypergeom_identity_check(int degree) {
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  DualityReport rep;
  rep.identity = "hypergeom-jacobi";
  rep.statement = "P_N^{(a-1,b-1)}(1-2x) = C x^N 2F1(-N, -N-a+1; -2N-a-b+2; 1/x)";
  ClassicalPoly p = classical_coeffs(Family::Jacobi, degree);
  // [x^{N-k}] x^N 2F1 = (-N)_k (-N-a+1)_k / ((-2N-a-b+2)_k k!)
  std::vector<RationalFn> f{RationalFn(1)};
  const MultiPoly n(degree);
  for (int k = 0; k < degree; ++k) {
    MultiPoly up = (MultiPoly(k) - n) * (MultiPoly(k + 1) - n - kA);
    MultiPoly down = (MultiPoly(k + 2) - 2 * n - kA - kB) * MultiPoly(k + 1);
    f.push_back(f.back() * RationalFn::ratio(up, down));
  }
  const RationalFn C = p.leading();
  for (int k = 0; k <= degree; ++k) {
    DualityRecord r;
    r.order = k;
    r.lhs = p.coeffs[sz(degree - k)];
    r.rhs = C * f[sz(k)];
    rep.records.push_back(std::move(r));
  }
  finalize(rep);
  rep.extra["N"] = degree;
  rep.extra["C"] = C;
  rep.extra["C_text"] = C.to_string();
  return rep;
}

void finalize(DualityReport& report) {
  report.pass = !report.records.empty();
  for (auto& r : report.records) {
    r.equal = (r.lhs == r.rhs);
    report.pass = report.pass && r.equal;
  }
}

void to_json(nlohmann::json& j, const DualityRecord& r) {
  j = nlohmann::json{{"order", r.order},
                     {"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"lhs_text", r.lhs.to_string()},
                     {"rhs_text", r.rhs.to_string()},
                     {"equal", r.equal}};
}

void to_json(nlohmann::json& j, const DualityReport& r) {
  j = nlohmann::json{{"identity", r.identity},
                     {"statement", r.statement},
                     {"records", r.records},
                     {"pass", r.pass}};
  if (!r.extra.is_null()) j["extra"] = r.extra;
}

void to_json(nlohmann::json& j, const MomentSeries& m) {
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t k = 0; k < m.moments.size(); ++k)
    list.push_back({{"index", k}, {"value", m.moments[k]}, {"text", m.moments[k].to_string()}});
  j = nlohmann::json{{"family", family_name(m.family)},
                     {"regime", m.regime == Regime::Low ? "low" : "high"},
                     {"tag", m.tag()},
                     {"order", m.order},
                     {"moments", list}};
}

}  // namespace betadual
