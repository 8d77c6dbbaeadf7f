#include "betadual/symbolic.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "betadual/errors.hpp"

namespace betadual {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  if (auto dot = s.find('.'); dot != std::string::npos && s.find('/') == std::string::npos) {
    // Exact decimal: 1.25 -> 125/100.
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    Rational r;
    if (r.set_str(digits.empty() ? "0" : digits, 10) != 0)
      throw std::invalid_argument("bad decimal: " + s);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac);
    r /= scale;
    r.canonicalize();
    return r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

double to_double(const Rational& r) { return r.get_d(); }

std::string_view var_name(Var v) {
  switch (v) {
    case Var::N: return "N";
    case Var::a: return "a";
    case Var::b: return "b";
    case Var::t: return "t";
    case Var::alpha: return "alpha";
  }
  return "?";
}

Var var_from_name(std::string_view name) {
  for (Var v : kAllVars)
    if (var_name(v) == name) return v;
  throw std::invalid_argument("unknown symbol: " + std::string(name));
}

namespace {

std::size_t idx(Var v) { return static_cast<std::size_t>(v); }

Exponents unit_exponent(Var v) {
  Exponents e{};
  e[idx(v)] = 1;
  return e;
}

Exponents add(const Exponents& x, const Exponents& y) {
  Exponents r;
  for (std::size_t i = 0; i < kNumVars; ++i) r[i] = x[i] + y[i];
  return r;
}

}  // namespace

// ---------------------------------------------------------------- MultiPoly

MultiPoly::MultiPoly(const Rational& c) {
  if (c != 0) terms_.emplace(Exponents{}, c);
}

MultiPoly MultiPoly::variable(Var v) { return monomial(unit_exponent(v), 1); }

MultiPoly MultiPoly::monomial(const Exponents& e, const Rational& c) {
  for (int k : e)
    if (k < 0) throw std::invalid_argument("negative exponent");
  MultiPoly p;
  if (c != 0) p.terms_.emplace(e, c);
  return p;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents{});
}

void MultiPoly::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational MultiPoly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational MultiPoly::constant_term() const { return coefficient(Exponents{}); }

MultiPoly MultiPoly::coefficient_of(Var v, int k) const {
  MultiPoly r;
  for (const auto& [e, c] : terms_) {
    if (e[idx(v)] != k) continue;
    Exponents f = e;
    f[idx(v)] = 0;
    r.terms_.emplace(f, c);
  }
  return r;
}

int MultiPoly::degree(Var v) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[idx(v)]);
  return d;
}

int MultiPoly::total_degree() const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

const MultiPoly::TermMap::value_type& MultiPoly::leading_term() const {
  if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
  return *terms_.rbegin();
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& l, const MultiPoly& r) {
  MultiPoly out;
  if (l.is_zero() || r.is_zero()) return out;
  Rational prod;
  for (const auto& [el, cl] : l.terms_) {
    for (const auto& [er, cr] : r.terms_) {
      prod = cl * cr;
      out.add_term(add(el, er), prod);
    }
  }
  return out;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [e, v] : r.terms_) v = -v;
  return r;
}

MultiPoly MultiPoly::pow(unsigned k) const {
  MultiPoly result(1), base = *this;
  while (k) {
    if (k & 1U) result *= base;
    k >>= 1U;
    if (k) base *= base;
  }
  return result;
}

MultiPoly MultiPoly::derivative(Var v) const {
  MultiPoly r;
  for (const auto& [e, c] : terms_) {
    int k = e[idx(v)];
    if (k == 0) continue;
    Exponents f = e;
    f[idx(v)] = k - 1;
    r.add_term(f, c * k);
  }
  return r;
}

namespace {

Rational rational_pow(const Rational& x, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

Rational MultiPoly::evaluate(const Assignment& values) const {
  for (Var v : kAllVars)
    if (depends_on(v) && !values.contains(v))
      throw std::invalid_argument("assignment is missing symbol " + std::string(var_name(v)));
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (Var v : kAllVars)
      if (e[idx(v)] > 0) term *= rational_pow(values.at(v), e[idx(v)]);
    sum += term;
  }
  return sum;
}

MultiPoly MultiPoly::partial_eval(const Assignment& values) const {
  MultiPoly r;
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    Rational term = c;
    for (const auto& [v, x] : values) {
      term *= rational_pow(x, e[idx(v)]);
      f[idx(v)] = 0;
    }
    r.add_term(f, term);
  }
  return r;
}

MultiPoly MultiPoly::substitute(const std::map<Var, MultiPoly>& replacement) const {
  // Cache powers of each replacement.
  std::map<Var, std::vector<MultiPoly>> powers;
  for (const auto& [v, p] : replacement) powers[v].push_back(MultiPoly(1));
  auto power = [&](Var v, int k) -> const MultiPoly& {
    auto& cache = powers[v];
    while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * replacement.at(v));
    return cache[static_cast<std::size_t>(k)];
  };
  MultiPoly r;
  for (const auto& [e, c] : terms_) {
    Exponents kept = e;
    MultiPoly term = monomial(Exponents{}, c);
    for (const auto& [v, p] : replacement) {
      int k = e[idx(v)];
      kept[idx(v)] = 0;
      if (k > 0) term *= power(v, k);
    }
    r += term * monomial(kept, 1);
  }
  return r;
}

Rational MultiPoly::make_monic() {
  if (terms_.empty()) return 0;
  Rational lead = leading_term().second;
  Rational inv = 1 / lead;
  *this *= inv;
  return lead;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    bool constant = e == Exponents{};
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool coeff_shown = constant || mag != 1;
    if (coeff_shown) os << mag.get_str();
    bool need_star = coeff_shown;
    for (Var v : kAllVars) {
      int k = e[idx(v)];
      if (k == 0) continue;
      if (need_star) os << "*";
      os << var_name(v);
      if (k > 1) os << "^" << k;
      need_star = true;
    }
  }
  return os.str();
}

std::optional<MultiPoly> divide_exact(const MultiPoly& num, const MultiPoly& den) {
  if (den.is_zero()) throw PoleError("division by the zero polynomial");
  if (den.is_constant()) return num * (1 / den.constant_term());
  const auto& [lead_e, lead_c] = den.leading_term();
  Rational inv = 1 / lead_c;
  MultiPoly quotient, rem = num;
  while (!rem.is_zero()) {
    const auto& [re, rc] = rem.leading_term();
    Exponents q{};
    for (std::size_t i = 0; i < kNumVars; ++i) {
      q[i] = re[i] - lead_e[i];
      if (q[i] < 0) return std::nullopt;
    }
    MultiPoly step = MultiPoly::monomial(q, rc * inv);
    quotient += step;
    rem -= step * den;
  }
  return quotient;
}

MultiPoly interpolate(std::span<const std::pair<Rational, MultiPoly>> points, Var var) {
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (points[i].first == points[j].first)
        throw std::invalid_argument("duplicate interpolation abscissa " +
                                    points[i].first.get_str());
  // Newton divided differences with polynomial-valued ordinates.
  std::vector<MultiPoly> dd;
  dd.reserve(n);
  for (const auto& pt : points) dd.push_back(pt.second);
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) * (1 / (points[i].first - points[i - level].first));
  MultiPoly x = MultiPoly::variable(var);
  MultiPoly result;
  for (std::size_t i = n; i-- > 0;) {
    result = result * (x - MultiPoly(points[i].first)) + dd[i];
  }
  return result;
}

MultiPoly poly_interpolate(std::span<const std::pair<Rational, Rational>> points, Var var) {
  std::vector<std::pair<Rational, MultiPoly>> lifted;
  lifted.reserve(points.size());
  for (const auto& [x, y] : points) lifted.emplace_back(x, MultiPoly(y));
  return interpolate(lifted, var);
}

void to_json(nlohmann::json& j, const MultiPoly& p) {
  j = nlohmann::json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    j.push_back({{"exponents", e}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
  }
}

MultiPoly multipoly_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("MultiPoly JSON must be an array");
  MultiPoly p;
  for (const auto& term : j) {
    auto e = term.at("exponents").get<std::vector<int>>();
    if (e.size() != kNumVars) throw std::invalid_argument("exponent vector must have 5 entries");
    Exponents ex{};
    std::copy(e.begin(), e.end(), ex.begin());
    Rational c(term.at("num").get<std::string>() + "/" + term.at("den").get<std::string>());
    c.canonicalize();
    p += MultiPoly::monomial(ex, c);
  }
  return p;
}

// --------------------------------------------------------------- RationalFn

void RationalFn::merge_factor(std::vector<Factor>& into, const MultiPoly& atom, int e) {
  for (auto& [f, k] : into) {
    if (f == atom) {
      k += e;
      return;
    }
  }
  into.emplace_back(atom, e);
}

void RationalFn::divide_by(const MultiPoly& p) {
  if (p.is_zero()) throw PoleError("division by the zero polynomial");
  MultiPoly rest = p;
  Rational lead = rest.make_monic();
  num_ *= 1 / lead;
  if (rest.is_constant()) return;
  // Peel off known atoms, both ours and the numerator's own factors.
  for (auto& [atom, k] : den_) {
    while (true) {
      auto q = divide_exact(rest, atom);
      if (!q) break;
      ++k;
      rest = std::move(*q);
      if (rest.is_constant()) {
        num_ *= 1 / rest.constant_term();
        cancel();
        return;
      }
    }
  }
  if (auto q = divide_exact(num_, rest)) {
    num_ = std::move(*q);
    return;
  }
  merge_factor(den_, rest, 1);
  cancel();
}

void RationalFn::cancel() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto& [atom, k] : den_) {
    while (k > 0) {
      auto q = divide_exact(num_, atom);
      if (!q) break;
      num_ = std::move(*q);
      --k;
    }
  }
  std::erase_if(den_, [](const Factor& f) { return f.second == 0; });
}

RationalFn RationalFn::ratio(MultiPoly num, const MultiPoly& den) {
  RationalFn r(std::move(num));
  r.divide_by(den);
  return r;
}

MultiPoly RationalFn::denominator() const {
  MultiPoly d(1);
  for (const auto& [atom, k] : den_) d *= atom.pow(static_cast<unsigned>(k));
  return d;
}

std::optional<MultiPoly> RationalFn::as_polynomial() const {
  if (den_.empty()) return num_;
  auto q = divide_exact(num_, denominator());
  return q;
}

RationalFn& RationalFn::operator+=(const RationalFn& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  std::vector<Factor> lcm = den_;
  for (const auto& [atom, k] : o.den_) {
    auto it = std::find_if(lcm.begin(), lcm.end(), [&](const Factor& f) { return f.first == atom; });
    if (it == lcm.end())
      lcm.emplace_back(atom, k);
    else
      it->second = std::max(it->second, k);
  }
  auto lift = [&lcm](const MultiPoly& num, const std::vector<Factor>& den) {
    MultiPoly out = num;
    for (const auto& [atom, k] : lcm) {
      int have = 0;
      for (const auto& [a2, k2] : den)
        if (a2 == atom) have = k2;
      if (k > have) out *= atom.pow(static_cast<unsigned>(k - have));
    }
    return out;
  };
  num_ = lift(num_, den_) + lift(o.num_, o.den_);
  den_ = std::move(lcm);
  cancel();
  return *this;
}

RationalFn& RationalFn::operator-=(const RationalFn& o) { return *this += -o; }

RationalFn& RationalFn::operator*=(const RationalFn& o) {
  if (is_zero() || o.is_zero()) {
    num_ = MultiPoly();
    den_.clear();
    return *this;
  }
  num_ *= o.num_;
  for (const auto& [atom, k] : o.den_) merge_factor(den_, atom, k);
  cancel();
  return *this;
}

RationalFn& RationalFn::operator/=(const RationalFn& o) {
  if (o.is_zero()) throw PoleError("division by the zero rational function");
  num_ *= o.denominator();
  divide_by(o.num_);
  cancel();
  return *this;
}

RationalFn RationalFn::operator-() const {
  RationalFn r = *this;
  r.num_ = -r.num_;
  return r;
}

bool operator==(const RationalFn& l, const RationalFn& r) {
  if (l.den_ == r.den_) return l.num_ == r.num_;
  return l.num_ * r.denominator() == r.num_ * l.denominator();
}

RationalFn RationalFn::pow(unsigned k) const {
  RationalFn result(1), base = *this;
  while (k) {
    if (k & 1U) result *= base;
    k >>= 1U;
    if (k) base *= base;
  }
  return result;
}

Rational RationalFn::evaluate(const Assignment& values) const {
  Rational d = denominator().evaluate(values);
  if (d == 0) throw PoleError("rational function evaluated at a pole: denominator " +
                              denominator().to_string() + " vanishes");
  return num_.evaluate(values) / d;
}

RationalFn RationalFn::partial_eval(const Assignment& values) const {
  RationalFn r(num_.partial_eval(values));
  for (const auto& [atom, k] : den_) {
    MultiPoly a = atom.partial_eval(values);
    if (a.is_zero()) throw PoleError("specialisation hits a pole: " + atom.to_string() + " = 0");
    for (int i = 0; i < k; ++i) r.divide_by(a);
  }
  r.cancel();
  return r;
}

RationalFn RationalFn::substitute(const std::map<Var, MultiPoly>& replacement) const {
  RationalFn r(num_.substitute(replacement));
  for (const auto& [atom, k] : den_) {
    MultiPoly a = atom.substitute(replacement);
    for (int i = 0; i < k; ++i) r.divide_by(a);
  }
  r.cancel();
  return r;
}

RationalFn RationalFn::substitute(const std::map<Var, RationalFn>& replacement) const {
  std::map<Var, std::vector<RationalFn>> powers;
  for (const auto& [v, p] : replacement) powers[v].push_back(RationalFn(1));
  auto power = [&](Var v, int k) -> const RationalFn& {
    auto& cache = powers[v];
    while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * replacement.at(v));
    return cache[static_cast<std::size_t>(k)];
  };
  auto apply = [&](const MultiPoly& p) {
    RationalFn out;
    for (const auto& [e, c] : p.terms()) {
      Exponents kept = e;
      RationalFn term(c);
      for (const auto& [v, rv] : replacement) {
        int k = e[idx(v)];
        kept[idx(v)] = 0;
        if (k > 0) term *= power(v, k);
      }
      term *= RationalFn(MultiPoly::monomial(kept, 1));
      out += term;
    }
    return out;
  };
  RationalFn r = apply(num_);
  for (const auto& [atom, k] : den_) {
    RationalFn a = apply(atom);
    for (int i = 0; i < k; ++i) r /= a;
  }
  return r;
}

int RationalFn::degree(Var v) const {
  int d = num_.degree(v);
  for (const auto& [atom, k] : den_) d = std::max(d, atom.degree(v) * k);
  return d;
}

std::string RationalFn::to_string() const {
  if (den_.empty()) return num_.to_string();
  std::string s = "(" + num_.to_string() + ")/(";
  bool first = true;
  for (const auto& [atom, k] : den_) {
    if (!first) s += "*";
    first = false;
    s += "(" + atom.to_string() + ")";
    if (k > 1) s += "^" + std::to_string(k);
  }
  return s + ")";
}

void to_json(nlohmann::json& j, const RationalFn& r) {
  j = nlohmann::json{{"numerator", r.numerator()}, {"denominator", r.denominator()}};
}

// --------------------------------------------------------------- SeriesTail

SeriesTail::SeriesTail(std::vector<RationalFn> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw OrderUnderflow("series with no coefficients");
}

SeriesTail SeriesTail::zero(int order) {
  if (order < 0) throw OrderUnderflow("negative series order");
  return SeriesTail(std::vector<RationalFn>(static_cast<std::size_t>(order) + 1));
}

SeriesTail SeriesTail::pole_at(const RationalFn& c, int order) {
  if (order < 0) throw OrderUnderflow("negative series order");
  std::vector<RationalFn> cs;
  RationalFn power(1);
  for (int p = 0; p <= order; ++p) {
    cs.push_back(power);
    power *= c;
  }
  return SeriesTail(std::move(cs));
}

SeriesTail SeriesTail::truncated(int order) const {
  if (order > this->order()) throw OrderUnderflow("truncation above the known order");
  if (order < 0) throw OrderUnderflow("negative series order");
  return SeriesTail({coeffs_.begin(), coeffs_.begin() + order + 1});
}

SeriesTail SeriesTail::derivative() const {
  std::vector<RationalFn> cs(coeffs_.size() + 1);
  for (std::size_t p = 0; p < coeffs_.size(); ++p)
    cs[p + 1] = RationalFn(-static_cast<long>(p + 1)) * coeffs_[p];
  return SeriesTail(std::move(cs));
}

SeriesTail SeriesTail::over_x() const {
  std::vector<RationalFn> cs(coeffs_.size() + 1);
  std::copy(coeffs_.begin(), coeffs_.end(), cs.begin() + 1);
  return SeriesTail(std::move(cs));
}

SeriesTail SeriesTail::times_x() const {
  if (order() < 1) throw OrderUnderflow("x * series of order 0 leaves an empty tail");
  if (!coeffs_[0].is_zero())
    throw OrderUnderflow("x * series has a polynomial part (c_0 != 0)");
  return SeriesTail({coeffs_.begin() + 1, coeffs_.end()});
}

SeriesTail operator+(const SeriesTail& l, const SeriesTail& r) {
  int order = std::min(l.order(), r.order());
  std::vector<RationalFn> cs;
  cs.reserve(static_cast<std::size_t>(order) + 1);
  for (int p = 0; p <= order; ++p) cs.push_back(l[p] + r[p]);
  return SeriesTail(std::move(cs));
}

SeriesTail operator-(const SeriesTail& l, const SeriesTail& r) {
  return l + RationalFn(-1) * r;
}

SeriesTail operator*(const SeriesTail& l, const SeriesTail& r) {
  // (sum a_p x^{-p-1})(sum b_q x^{-q-1}) = sum_k (sum a_p b_{k-p}) x^{-k-2}.
  int inner = std::min(l.order(), r.order());
  std::vector<RationalFn> cs(static_cast<std::size_t>(inner) + 2);
  for (int k = 0; k <= inner; ++k) {
    RationalFn acc;
    for (int p = 0; p <= k; ++p) acc += l[p] * r[k - p];
    cs[static_cast<std::size_t>(k) + 1] = std::move(acc);
  }
  return SeriesTail(std::move(cs));
}

SeriesTail operator*(const RationalFn& c, const SeriesTail& s) {
  std::vector<RationalFn> cs;
  cs.reserve(s.coefficients().size());
  for (const auto& x : s.coefficients()) cs.push_back(c * x);
  return SeriesTail(std::move(cs));
}

}  // namespace betadual
