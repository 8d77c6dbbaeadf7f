#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "betadual/hightemp_density.hpp"
#include "betadual/loggas.hpp"
#include "betadual/matrixmodels.hpp"
#include "betadual/orthopoly.hpp"
#include "betadual/resolvent.hpp"

using namespace betadual;

namespace {

// Pinned tolerances and budgets.
constexpr double kRiccatiBudget = 30.0;
constexpr double kTableBudget = 120.0;
constexpr double kCrystalBudget = 10.0;
constexpr double kCatalanTol = 1e-8;
constexpr double kZeroTol = 1e-10;
constexpr double kSigmas = 3.0;
constexpr std::size_t kCovSamples = 100000;
constexpr std::size_t kMcSamples = 100000;
constexpr std::uint64_t kSeed = 1;
constexpr double kNormTol = 1e-6;
constexpr double kMomentTol = 1e-5;
constexpr double kStieltjesTol = 1e-5;
constexpr double kOdeTol = 1e-6;
constexpr int kMcCellsRequired = 15;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

const MultiPoly N = MultiPoly::variable(Var::N);
const MultiPoly t = MultiPoly::variable(Var::t);
const MultiPoly a = MultiPoly::variable(Var::a);

void riccati_stieltjes(Verdict& v) {
  MomentSeries g = moments_zero_temp(Family::Gaussian, 10);
  SeriesTail gs = log_deriv_series_symbolic(Family::Gaussian, 20);
  for (int k = 0; k <= 20; ++k) v.require(g[k] == gs[k], "G m_" + std::to_string(k));
  MomentSeries l = moments_zero_temp(Family::Laguerre, 8);
  for (int n = 1; n <= 8; ++n) {
    SeriesTail ls = log_deriv_series(classical_coeffs(Family::Laguerre, n), 8);
    for (int k = 0; k <= 8; ++k)
      v.require(l[k].partial_eval({{Var::N, n}}) == ls[k], "L N=" + std::to_string(n) + " m_" + std::to_string(k));
  }
  MomentSeries j = moments_zero_temp(Family::Jacobi, 6);
  for (int n = 1; n <= 6; ++n) {
    SeriesTail js = log_deriv_series(classical_coeffs(Family::Jacobi, n), 6);
    for (int k = 0; k <= 6; ++k)
      v.require(j[k].partial_eval({{Var::N, n}}) == js[k], "J N=" + std::to_string(n) + " m_" + std::to_string(k));
  }
  v.detail << "G p<=10 symbolic N, L N<=8 p<=8, J N<=6 p<=6";
}

void table_fixtures(Verdict& v) {
  auto coeff_t = [](const MultiPoly& p, int k) { return p.coefficient_of(Var::t, k); };
  const MultiPoly shown[5][2] = {
      {N, MultiPoly()},
      {N * N - N, N},
      {2 * N.pow(3) - 5 * N * N + 3 * N, 5 * N * N - 5 * N},
      {5 * N.pow(4) - 22 * N.pow(3) + 32 * N * N - 15 * N, 22 * N.pow(3) - 54 * N * N + 32 * N},
      {14 * N.pow(5) - 93 * N.pow(4) + 234 * N.pow(3) - 260 * N * N + 105 * N,
       93 * N.pow(4) - 398 * N.pow(3) + 565 * N * N - 260 * N},
  };
  for (int p = 0; p <= 4; ++p) {
    const MultiPoly m = moment_bivariate(Family::Gaussian, p).value;
    v.require(coeff_t(m, 0) == shown[p][0], "G m~_" + std::to_string(2 * p) + " order 0");
    v.require(coeff_t(m, 1) == shown[p][1], "G m~_" + std::to_string(2 * p) + " order 1");
    v.require(m.degree(Var::t) == p, "G m~_" + std::to_string(2 * p) + " degree in 1/kappa");
  }
  v.require(moment_bivariate(Family::Gaussian, 1).value == N * N - N + t * N, "G m~_2 complete");
  // (1/N) m_1 = N + (1/k)(1 - k + k a); (1/N) m_2 with t = 1/k
  const MultiPoly l1 = N * (N + t - 1 + a);
  const MultiPoly l2 = N * (2 * N * N + N * (4 * t - 4 + 3 * a) + (2 * t * t - 4 * t + 2 + 3 * a * t - 3 * a + a * a));
  v.require(moment_bivariate(Family::Laguerre, 1).value == l1, "L m_1");
  v.require(moment_bivariate(Family::Laguerre, 2).value == l2, "L m_2");
  v.detail << "G m~_0..m~_8 orders 0,1; L m_1, m_2 all orders";
}

void finite_duality(Verdict& v) {
  DualityReport g = duality_check_finite(FiniteDuality::Gaussian, 3);
  DualityReport l = duality_check_finite(FiniteDuality::Laguerre, 2);
  v.require(g.pass && g.records.size() == 4, "gaussian p<=3");
  v.require(l.pass && l.records.size() == 3, "laguerre p<=2");
  v.detail << "G p<=3 bivariate, L p<=2 trivariate, canonical-form equality";
}

void series_dualities(Verdict& v) {
  const std::pair<SeriesIdentity, int> cases[] = {
      {SeriesIdentity::W3, 8}, {SeriesIdentity::W3L, 8}, {SeriesIdentity::JacobiN1, 6}};
  for (auto [id, order] : cases) {
    DualityReport r = duality_check_series(id, order);
    v.require(r.pass && static_cast<int>(r.records.size()) == order + 1, std::string(series_identity_name(id)));
  }
  v.detail << "w3 p<=8, w3L p<=8, jacobi-n1 p<=6";
}

void hypergeometric(Verdict& v) {
  for (int n = 0; n <= 8; ++n) v.require(hypergeom_identity_check(n).pass, "N=" + std::to_string(n));
  v.detail << "N=0..8, symbolic a, b";
}

void catalan(Verdict& v) {
  DualityReport r = catalan_check(8, 5);
  v.require(r.pass, "catalan report");
  for (int p = 0; p <= 5; ++p) {
    const double err = std::abs(semicircle_moment(p) - to_double(catalan_number(p)));
    v.require(err <= kCatalanTol, "semicircle p=" + std::to_string(p));
  }
  v.detail << "exact p<=8, quadrature p<=5 within " << kCatalanTol;
}

void crystallization(Verdict& v) {
  double worst = 0, min_eig = INFINITY;
  auto run = [&](Family f, int n, double ad, double bd, std::optional<Rational> ar, std::optional<Rational> br) {
    MinimizationResult r = crystallize(Potential{f, n, ad, bd});
    ZeroSet z = poly_zeros(f, n, ar, br);
    double dev = 0;
    for (std::size_t i = 0; i < z.zeros.size(); ++i) dev = std::max(dev, std::abs(r.configuration[i] - z.zeros[i]));
    const std::string tag = std::string(family_name(f)) + " N=" + std::to_string(n);
    v.require(r.converged, tag + " converged");
    v.require(r.hessian_min_eigenvalue > 0, tag + " hessian");
    v.require(dev <= kZeroTol, tag + " deviation");
    worst = std::max(worst, dev);
    min_eig = std::min(min_eig, r.hessian_min_eigenvalue);
  };
  for (int n = 1; n <= 20; ++n) run(Family::Gaussian, n, 0, 0, std::nullopt, std::nullopt);
  for (int n = 1; n <= 12; ++n) run(Family::Laguerre, n, 2, 0, Rational(2), std::nullopt);
  for (int n = 1; n <= 12; ++n) run(Family::Jacobi, n, 2, 3, Rational(2), Rational(3));
  v.detail << "max deviation " << worst << " (tol " << kZeroTol << "), min Hessian eigenvalue " << min_eig;
}

void harmonic(Verdict& v) {
  const double w2 = harmonic_two_point(4, 3, 4);
  CovarianceEstimate lo = harmonic_covariance_mc(4, 3, 4, 512, kCovSamples, kSeed);
  CovarianceEstimate hi = harmonic_covariance_mc(4, 3, 4, 2048, kCovSamples, kSeed);
  v.require(std::abs(hi.kcov - w2) <= kSigmas * hi.kcov_se, "kappa=2^11 within 3 SE");
  // shrinking: the separated intervals |corr| +- 3 SE must be ordered
  v.require(std::abs(hi.correction) + kSigmas * hi.correction_se < std::abs(lo.correction) - kSigmas * lo.correction_se,
            "correction shrinks");
  v.detail << "W2=" << w2 << "; k=2^11 kcov=" << hi.kcov << " +- " << hi.kcov_se << "; raw |d| 2^9="
           << std::abs(lo.kcov - w2) << " 2^11=" << std::abs(hi.kcov - w2) << "; correction 2^9=" << lo.correction
           << " +- " << lo.correction_se << ", 2^11=" << hi.correction << " +- " << hi.correction_se;
}

void density(Verdict& v) {
  MomentSeries star = moments_high_temp(Family::Gaussian, 1);
  double worst_norm = 0, worst_m2 = 0, worst_ode = 0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    worst_norm = std::max(worst_norm, std::abs(density_moment(0, alpha) - 1));
    const double exact = to_double(star[2].evaluate({{Var::alpha, Rational(alpha)}}));
    worst_m2 = std::max(worst_m2, std::abs(density_moment(2, alpha) - exact));
    for (double z = -5; z <= 5; z += 0.5) worst_ode = std::max(worst_ode, pcf_ode_residual(z, alpha));
  }
  const double stj = std::abs(stieltjes_pv(4, 1.0) - high_temp_resolvent(4, 1.0));
  v.require(worst_norm <= kNormTol, "normalisation");
  v.require(worst_m2 <= kMomentTol, "second moment");
  v.require(stj <= kStieltjesTol, "stieltjes");
  v.require(worst_ode <= kOdeTol, "ode residual");
  v.detail << "norm err " << worst_norm << ", m2 err " << worst_m2 << ", stieltjes err " << stj << ", ode residual "
           << worst_ode;
}

void monte_carlo(Verdict& v) {
  struct Config {
    ModelParams m;
    int step;  // Gaussian cells are the even moments m_2..m_8
  };
  const Config configs[] = {{{Family::Gaussian, 5, 0.5, 0}, 2},
                            {{Family::Gaussian, 5, 1.0, 0}, 2},
                            {{Family::Gaussian, 5, 4.0, 0}, 2},
                            {{Family::Laguerre, 4, 1.0, 2.0}, 1}};
  int cells = 0, ok = 0;
  double worst = 0;
  for (const auto& c : configs) {
    auto est = mc_moments(c.m, 4 * c.step, kMcSamples, kSeed);
    for (int p = 1; p <= 4; ++p) {
      const auto& e = est[static_cast<std::size_t>(p * c.step - 1)];
      const double z = std::abs(e.estimate - exact_moment(c.m, p * c.step)) / e.std_error;
      worst = std::max(worst, z);
      ++cells;
      if (z <= kSigmas) ++ok;
    }
  }
  v.require(ok >= kMcCellsRequired, "cells within 3 SE");
  v.detail << ok << "/" << cells << " cells within 3 SE (need " << kMcCellsRequired << "), max |z| " << worst;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Verdict&)>> criteria[] = {
      {"riccati-stieltjes agreement", riccati_stieltjes},
      {"table fixtures", table_fixtures},
      {"finite-temperature duality", finite_duality},
      {"series dualities", series_dualities},
      {"hypergeometric identity", hypergeometric},
      {"catalan/wigner", catalan},
      {"crystallization", crystallization},
      {"harmonic approximation", harmonic},
      {"high-temperature density", density},
      {"monte carlo sanity", monte_carlo},
  };
  const double budgets[] = {kRiccatiBudget, kTableBudget, 0, 0, 0, 0, kCrystalBudget, 0, 0, 0};
  int failed = 0;
  for (int i = 0; i < 10; ++i) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budgets[i] > 0) v.require(secs < budgets[i], "runtime budget");
    if (!v.pass) ++failed;
    std::printf("criterion %2d %-28s %s  (%.2fs) %s\n", i + 1, criteria[i].first, v.pass ? "PASS" : "FAIL", secs,
                v.detail.str().c_str());
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
