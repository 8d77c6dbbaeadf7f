#include "betadual/matrixmodels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace betadual {

namespace {

std::size_t sz(int k) { return static_cast<std::size_t>(k); }

const MultiPoly kT = MultiPoly::variable(Var::t);

/// Path graph for the walk enumeration. Each edge (and each loop for the
/// Gaussian model) is one independent random entry.
struct WalkGraph {
  int vertices = 0;
  bool loops = false;
  int length = 0;
  std::vector<int> starts;
  int entries() const { return loops ? 2 * vertices - 1 : vertices - 1; }
  int loop_entry(int v) const { return v; }
  int edge_entry(int lower) const { return loops ? vertices + lower : lower; }
};

using Signature = std::vector<std::uint8_t>;

void enumerate(const WalkGraph& g, int start, int v, int remaining, Signature& mult,
               std::map<Signature, long long>& out) {
  if (std::abs(v - start) > remaining) return;
  if (remaining == 0) {
    ++out[mult];
    return;
  }
  if (g.loops) {
    ++mult[sz(g.loop_entry(v))];
    enumerate(g, start, v, remaining - 1, mult, out);
    --mult[sz(g.loop_entry(v))];
  }
  if (v > 0) {
    ++mult[sz(g.edge_entry(v - 1))];
    enumerate(g, start, v - 1, remaining - 1, mult, out);
    --mult[sz(g.edge_entry(v - 1))];
  }
  if (v + 1 < g.vertices) {
    ++mult[sz(g.edge_entry(v))];
    enumerate(g, start, v + 1, remaining - 1, mult, out);
    --mult[sz(g.edge_entry(v))];
  }
}

std::map<Signature, long long> closed_walks(const WalkGraph& g) {
  std::map<Signature, long long> out;
  Signature mult(sz(g.entries()), 0);
  for (int s : g.starts) enumerate(g, s, s, g.length, mult, out);
  return out;
}

/// prod_{j<m} (c + (j + shift) t)
MultiPoly rising_in_t(const MultiPoly& c, int m, int shift) {
  MultiPoly r(1);
  for (int j = 0; j < m; ++j) r *= c + MultiPoly(j + shift) * kT;
  return r;
}

boost::math::normal_distribution<double> kStdNormal;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double normal_quantile(double u) { return boost::math::quantile(kStdNormal, u); }

/// Run body(b) for blocks b = 0..count-1 on a few threads. Each block writes
/// only its own slot, so results do not depend on scheduling.
void parallel_blocks(int count, const std::function<void(int)>& body) {
  const int workers = std::max(1, std::min<int>(count, static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(sz(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int b = w; b < count; b += workers) body(b);
      } catch (...) {
        errors[sz(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Block {
  std::size_t begin = 0;
  std::size_t end = 0;
};

Block block_range(std::size_t total, int blocks, int b) {
  return {total * sz(b) / sz(blocks), total * sz(b + 1) / sz(blocks)};
}

/// Delete-one-block jackknife standard error for a statistic of block sums.
template <class Stat>
double jackknife_se(const std::vector<std::vector<double>>& block_sums, const Stat& stat) {
  const std::size_t B = block_sums.size();
  std::vector<double> total(block_sums[0].size(), 0.0);
  for (const auto& s : block_sums)
    for (std::size_t i = 0; i < s.size(); ++i) total[i] += s[i];
  std::vector<double> loo(B);
  double mean = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    std::vector<double> rest(total);
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= block_sums[b][i];
    loo[b] = stat(rest);
    mean += loo[b];
  }
  mean /= static_cast<double>(B);
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  return std::sqrt(ss * static_cast<double>(B - 1) / static_cast<double>(B));
}

}  // namespace

WalkMoment expected_trace_power(Family family, int n, int p, std::optional<Rational> a) {
  if (n < 1 || n > kMaxWalkN) throw std::invalid_argument("walk oracle needs 1 <= N <= 10");
  if (p < 0) throw std::invalid_argument("power must be >= 0");
  WalkMoment out{family, p, n, MultiPoly()};
  const MultiPoly N(n);
  WalkGraph g;
  // per-entry moment E[e^k] for the multiplicity k observed in a walk
  std::function<MultiPoly(int, int)> moment;
  std::map<std::pair<int, int>, MultiPoly> memo;
  if (family == Family::Gaussian) {
    if (p > kMaxWalkPGaussian) throw std::invalid_argument("Gaussian walk oracle needs p <= 6");
    g = WalkGraph{n, true, 2 * p, {}};
    for (int v = 0; v < n; ++v) g.starts.push_back(v);
    moment = [&](int entry, int k) -> MultiPoly {
      if (entry < n) {
        // diagonal: N(0, t/2)
        if (k % 2) return MultiPoly();
        MultiPoly r(1);
        for (int j = 1; j < k; j += 2) r *= MultiPoly(j) * kT * Rational(1, 2);
        return r;
      }
      if (k % 2) throw std::logic_error("odd multiplicity of an off-diagonal entry");
      const int i = entry - n + 1;
      return rising_in_t(N - MultiPoly(i), k / 2, 0) * (Rational(1) / Rational(1 << (k / 2)));
    };
  } else if (family == Family::Laguerre) {
    if (p > kMaxWalkPLaguerre) throw std::invalid_argument("Laguerre walk oracle needs p <= 4");
    g = WalkGraph{2 * n, false, 2 * p, {}};
    for (int v = 0; v < 2 * n; v += 2) g.starts.push_back(v);
    const MultiPoly A = a ? MultiPoly(*a) : MultiPoly::variable(Var::a);
    moment = [&, A](int edge, int k) -> MultiPoly {
      if (k % 2) throw std::logic_error("odd multiplicity of a bidiagonal entry");
      if (edge % 2 == 0) {
        const int i = edge / 2 + 1;
        return rising_in_t(A + N - MultiPoly(i), k / 2, 1);
      }
      const int i = (edge + 1) / 2;
      return rising_in_t(N - MultiPoly(i), k / 2, 0);
    };
  } else {
    throw std::invalid_argument("no walk oracle for the Jacobi family");
  }
  if (p == 0) {
    out.value = N;
    return out;
  }
  for (const auto& [sig, count] : closed_walks(g)) {
    MultiPoly term(static_cast<long>(count));
    for (std::size_t e = 0; e < sig.size() && !term.is_zero(); ++e) {
      if (sig[e] == 0) continue;
      auto key = std::make_pair(static_cast<int>(e), static_cast<int>(sig[e]));
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(key, moment(key.first, key.second)).first;
      term *= it->second;
    }
    out.value += term;
  }
  if (family == Family::Gaussian) out.value *= Rational(1 << p);
  return out;
}

BivariateMoment moment_bivariate(Family family, int p) {
  BivariateMoment out;
  out.family = family;
  out.p = p;
  std::vector<std::pair<Rational, MultiPoly>> nodes;
  for (int n = 1; n <= p + 2; ++n) nodes.emplace_back(n, expected_trace_power(family, n, p).value);
  out.value = interpolate(nodes, Var::N);
  out.holdout_n = p + 3;
  MultiPoly check = expected_trace_power(family, out.holdout_n, p).value;
  out.holdout_ok = out.value.partial_eval({{Var::N, out.holdout_n}}) == check;
  if (!out.holdout_ok)
    throw std::runtime_error("moment polynomial disagrees at the held-out node N = " +
                             std::to_string(out.holdout_n));
  return out;
}

FiniteDuality parse_finite_duality(std::string_view name) {
  if (name == "g" || name == "G" || name == "gauss-finite" || name == "gaussian")
    return FiniteDuality::Gaussian;
  if (name == "l" || name == "L" || name == "laguerre-finite" || name == "laguerre")
    return FiniteDuality::Laguerre;
  if (name == "laguerre-finite-variant") return FiniteDuality::LaguerreVariant;
  throw std::invalid_argument("unknown finite duality: " + std::string(name));
}

DualityReport duality_check_finite(FiniteDuality which, int p) {
  if (p < 0) throw std::invalid_argument("order must be >= 0");
  DualityReport rep;
  const MultiPoly N = MultiPoly::variable(Var::N), A = MultiPoly::variable(Var::a);
  const RationalFn t(kT);
  const RationalFn inv_t = RationalFn::ratio(MultiPoly(1), kT);
  std::map<Var, RationalFn> sub{{Var::N, RationalFn(-N) * inv_t}, {Var::t, inv_t}};
  Family family = Family::Laguerre;
  switch (which) {
    case FiniteDuality::Gaussian:
      family = Family::Gaussian;
      rep.identity = "gauss-finite";
      rep.statement = "m~_{2p}(N, t) = (-1)^{p+1} t^{p+1} m~_{2p}(-N/t, 1/t), t = 1/kappa";
      break;
    case FiniteDuality::Laguerre:
      rep.identity = "laguerre-finite";
      rep.statement = "m_p(N, t, a) = (-t)^{p+1} m_p(-N/t, 1/t, -a/t), t = 1/kappa";
      sub.emplace(Var::a, RationalFn(-A) * inv_t);
      break;
    case FiniteDuality::LaguerreVariant:
      rep.identity = "laguerre-finite-variant";
      rep.statement = "m_p(N, t, a) = (-t)^{p} m_p(-N/t, 1/t, -a), t = 1/kappa";
      sub.emplace(Var::a, RationalFn(-A));
      break;
  }
  nlohmann::json polys = nlohmann::json::array();
  for (int q = 0; q <= p; ++q) {
    BivariateMoment m = moment_bivariate(family, q);
    const int power = (which == FiniteDuality::LaguerreVariant) ? q : q + 1;
    RationalFn pref = (-t).pow(static_cast<unsigned>(power));
    DualityRecord r;
    r.order = q;
    r.lhs = RationalFn(m.value);
    r.rhs = pref * RationalFn(m.value).substitute(sub);
    rep.records.push_back(std::move(r));
    polys.push_back(m);
  }
  finalize(rep);
  rep.extra["moments"] = polys;
  rep.extra["model"] = family == Family::Gaussian
                           ? "tridiagonal: diag N(0, t/2); offdiag b_i^2 ~ Gamma(kappa (N-i), t/2); "
                             "m~_{2p} = 2^p E Tr M^{2p}"
                           : "lower bidiagonal B: diag x_i^2 ~ Gamma(kappa (a+N-i) + 1, t); "
                             "subdiag y_i^2 ~ Gamma(kappa (N-i), t); m_p = E Tr (B B^T)^p";
  return rep;
}

void validate(const ModelParams& m) {
  if (m.family == Family::Jacobi) throw std::invalid_argument("no Jacobi matrix model");
  if (m.n < 1) throw std::invalid_argument("N must be >= 1");
  if (!(m.kappa > 0) || !std::isfinite(m.kappa)) throw std::invalid_argument("kappa must be > 0");
  if (m.family == Family::Laguerre && !(m.a > 0)) throw std::invalid_argument("a must be > 0");
}

double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t entry) {
  std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ sample) ^ (entry * 0xd6e8feb86659fd93ULL));
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

namespace {

/// Eigenvalues of one model draw from the given uniforms (one per entry).
std::vector<double> spectrum_from_uniforms(const ModelParams& m, const std::vector<double>& u) {
  const int n = m.n;
  const double k = m.kappa;
  std::vector<double> ev;
  if (m.family == Family::Gaussian) {
    Eigen::VectorXd d(n), off(std::max(n - 1, 0));
    const double sd = std::sqrt(1.0 / (2 * k));
    for (int i = 0; i < n; ++i) d(i) = sd * normal_quantile(u[sz(i)]);
    for (int i = 1; i < n; ++i)
      off(i - 1) = std::sqrt(boost::math::gamma_p_inv(k * (n - i), u[sz(n + i - 1)]) / (2 * k));
    if (n == 1) return {d(0)};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, off, Eigen::EigenvaluesOnly);
    ev.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  } else {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i <= n; ++i)
      B(i - 1, i - 1) = std::sqrt(boost::math::gamma_p_inv(k * (m.a + n - i) + 1, u[sz(i - 1)]) / k);
    for (int i = 1; i < n; ++i)
      B(i, i - 1) = std::sqrt(boost::math::gamma_p_inv(k * (n - i), u[sz(n + i - 1)]) / k);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    for (int i = 0; i < n; ++i) ev.push_back(svd.singularValues()(i) * svd.singularValues()(i));
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

int entry_count(const ModelParams& m) { return 2 * m.n - 1; }

}  // namespace

SpectrumSample sample_spectrum(const ModelParams& m, std::uint64_t seed, std::uint64_t index) {
  validate(m);
  std::vector<double> u(sz(entry_count(m)));
  for (std::size_t e = 0; e < u.size(); ++e) u[e] = counter_uniform(seed, index, e);
  return SpectrumSample{m, seed, index, spectrum_from_uniforms(m, u)};
}

std::vector<MomentEstimate> mc_moments(const ModelParams& m, int k_max, std::size_t samples,
                                       std::uint64_t seed, int blocks) {
  validate(m);
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  blocks = static_cast<int>(std::min<std::size_t>(sz(std::max(blocks, 2)), samples));
  std::vector<std::vector<double>> sums(sz(blocks), std::vector<double>(sz(k_max) + 1, 0.0));
  parallel_blocks(blocks, [&](int b) {
    const Block r = block_range(samples, blocks, b);
    std::vector<double> u(sz(entry_count(m)));
    auto& s = sums[sz(b)];
    for (std::size_t i = r.begin; i < r.end; ++i) {
      for (std::size_t e = 0; e < u.size(); ++e) u[e] = counter_uniform(seed, i, e);
      for (double lam : spectrum_from_uniforms(m, u)) {
        double pw = 1.0;
        for (int k = 1; k <= k_max; ++k) {
          pw *= lam;
          s[sz(k)] += pw;
        }
      }
      s[0] += 1.0;
    }
  });
  std::vector<double> total(sz(k_max) + 1, 0.0);
  for (const auto& s : sums)
    for (std::size_t i = 0; i < s.size(); ++i) total[i] += s[i];
  std::vector<MomentEstimate> out;
  for (int k = 1; k <= k_max; ++k) {
    auto mean_k = [k](const std::vector<double>& s) { return s[sz(k)] / s[0]; };
    out.push_back({k, mean_k(total), jackknife_se(sums, mean_k)});
  }
  return out;
}

double exact_moment(const ModelParams& m, int k) {
  validate(m);
  if (k < 0) throw std::invalid_argument("power must be >= 0");
  const Rational kappa(m.kappa);
  Assignment at{{Var::t, Rational(1) / kappa}};
  if (m.family == Family::Gaussian) {
    if (k % 2) return 0.0;
    const MultiPoly v = expected_trace_power(Family::Gaussian, m.n, k / 2).value;
    return to_double(v.evaluate(at) / Rational(1 << (k / 2)));
  }
  const MultiPoly v = expected_trace_power(Family::Laguerre, m.n, k, Rational(m.a)).value;
  return to_double(v.evaluate(at));
}

CovarianceEstimate harmonic_covariance_mc(int n, double x1, double x2, double kappa,
                                          std::size_t samples, std::uint64_t seed, int blocks) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  if (!(kappa > 0)) throw std::invalid_argument("kappa must be > 0");
  if (samples < 4 || samples % 2) throw std::invalid_argument("need an even number of samples >= 4");
  const std::size_t pairs = samples / 2;
  blocks = static_cast<int>(std::min<std::size_t>(sz(std::max(blocks, 2)), pairs));

  // Zero-temperature matrix: diag 0, offdiag sqrt((N-i)/2); eigenvalues are the Hermite zeros.
  Eigen::VectorXd d0 = Eigen::VectorXd::Zero(n), off0(std::max(n - 1, 0));
  for (int i = 1; i < n; ++i) off0(i - 1) = std::sqrt((n - i) / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es0;
  es0.computeFromTridiagonal(d0, off0, Eigen::ComputeEigenvectors);
  const Eigen::VectorXd z = es0.eigenvalues();
  const Eigen::MatrixXd V = es0.eigenvectors();
  // grad[i][k] = d A_i / d lambda_k at the zeros
  Eigen::MatrixXd grad(2, n);
  Eigen::Vector2d shift = Eigen::Vector2d::Zero();
  const double xs[2] = {x1, x2};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < n; ++k) {
      grad(i, k) = 1.0 / ((xs[i] - z(k)) * (xs[i] - z(k)));
      shift(i) += 1.0 / (xs[i] - z(k));
    }

  // per-block sums; A is centred at its zero-temperature value to keep the
  // covariance free of cancellation
  enum { kCount, kA1, kA2, kA12, kL1, kL2, kL12, kSlots };
  std::vector<std::vector<double>> sums(sz(blocks), std::vector<double>(kSlots, 0.0));
  const double sd_diag = std::sqrt(1.0 / (2 * kappa));
  const double sd_off_lin = std::sqrt(1.0 / (8 * kappa));
  parallel_blocks(blocks, [&](int b) {
    const Block r = block_range(pairs, blocks, b);
    auto& s = sums[sz(b)];
    Eigen::VectorXd d(n), off(std::max(n - 1, 0)), doff(std::max(n - 1, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    for (std::size_t pair = r.begin; pair < r.end; ++pair) {
      for (int flip = 0; flip < 2; ++flip) {
        for (int i = 0; i < n; ++i) {
          double u = counter_uniform(seed, pair, sz(i));
          if (flip) u = 1.0 - u;
          d(i) = sd_diag * normal_quantile(u);
        }
        for (int i = 1; i < n; ++i) {
          double u = counter_uniform(seed, pair, sz(n + i - 1));
          if (flip) u = 1.0 - u;
          off(i - 1) = std::sqrt(boost::math::gamma_p_inv(kappa * (n - i), u) / (2 * kappa));
          doff(i - 1) = sd_off_lin * normal_quantile(u);
        }
        double A[2] = {-shift(0), -shift(1)}, L[2] = {0.0, 0.0};
        if (n == 1) {
          for (int i = 0; i < 2; ++i) A[i] += 1.0 / (xs[i] - d(0));
        } else {
          es.computeFromTridiagonal(d, off, Eigen::EigenvaluesOnly);
          for (int i = 0; i < 2; ++i)
            for (int k = 0; k < n; ++k) A[i] += 1.0 / (xs[i] - es.eigenvalues()(k));
        }
        for (int k = 0; k < n; ++k) {
          double dl = 0.0;
          for (int i = 0; i < n; ++i) dl += V(i, k) * V(i, k) * d(i);
          for (int i = 0; i + 1 < n; ++i) dl += 2 * V(i, k) * V(i + 1, k) * doff(i);
          L[0] += grad(0, k) * dl;
          L[1] += grad(1, k) * dl;
        }
        s[kCount] += 1;
        s[kA1] += A[0];
        s[kA2] += A[1];
        s[kA12] += A[0] * A[1];
        s[kL1] += L[0];
        s[kL2] += L[1];
        s[kL12] += L[0] * L[1];
      }
    }
  });
  auto cov = [](const std::vector<double>& s, int x, int y, int xy) {
    const double c = s[kCount];
    return (s[sz(xy)] - s[sz(x)] * s[sz(y)] / c) / (c - 1);
  };
  auto kcov = [&](const std::vector<double>& s) { return kappa * cov(s, kA1, kA2, kA12); };
  auto klin = [&](const std::vector<double>& s) { return kappa * cov(s, kL1, kL2, kL12); };
  auto corr = [&](const std::vector<double>& s) { return kcov(s) - klin(s); };
  std::vector<double> total(kSlots, 0.0);
  for (const auto& s : sums)
    for (std::size_t i = 0; i < s.size(); ++i) total[i] += s[i];
  CovarianceEstimate out;
  out.kappa = kappa;
  out.samples = samples;
  out.kcov = kcov(total);
  out.kcov_se = jackknife_se(sums, kcov);
  out.kcov_linear = klin(total);
  out.kcov_linear_se = jackknife_se(sums, klin);
  out.correction = corr(total);
  out.correction_se = jackknife_se(sums, corr);
  return out;
}

void to_json(nlohmann::json& j, const WalkMoment& w) {
  j = nlohmann::json{{"family", family_name(w.family)},
                     {"p", w.p},
                     {"n", w.n},
                     {"value", w.value},
                     {"text", w.value.to_string()}};
}

void to_json(nlohmann::json& j, const BivariateMoment& b) {
  j = nlohmann::json{{"family", family_name(b.family)},
                     {"p", b.p},
                     {"value", b.value},
                     {"text", b.value.to_string()},
                     {"holdout_n", b.holdout_n},
                     {"holdout_ok", b.holdout_ok}};
}

void to_json(nlohmann::json& j, const ModelParams& m) {
  j = nlohmann::json{{"family", family_name(m.family)}, {"n", m.n}, {"kappa", m.kappa}};
  if (m.family == Family::Laguerre) j["a"] = m.a;
}

void to_json(nlohmann::json& j, const SpectrumSample& s) {
  j = nlohmann::json{{"params", s.params}, {"seed", s.seed}, {"index", s.index},
                     {"eigenvalues", s.eigenvalues}};
}

void to_json(nlohmann::json& j, const MomentEstimate& e) {
  j = nlohmann::json{{"power", e.power}, {"estimate", e.estimate}, {"std_error", e.std_error}};
}

void to_json(nlohmann::json& j, const CovarianceEstimate& c) {
  j = nlohmann::json{{"kappa", c.kappa},
                     {"samples", c.samples},
                     {"kcov", c.kcov},
                     {"kcov_se", c.kcov_se},
                     {"kcov_linear", c.kcov_linear},
                     {"kcov_linear_se", c.kcov_linear_se},
                     {"correction", c.correction},
                     {"correction_se", c.correction_se}};
}

}  // namespace betadual
