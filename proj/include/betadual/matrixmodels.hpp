#pragma once

// Finite (N, kappa) oracles from the tridiagonal Gaussian and bidiagonal
// Laguerre models: exact expected traces by closed-walk enumeration, moment
// polynomials by interpolation in N, and Monte Carlo sampling.
//
// Gaussian model: symmetric tridiagonal M with diagonal N(0, t/2) and
// off-diagonal b_i, b_i^2 ~ Gamma(shape kappa (N-i), scale t/2), i = 1..N-1.
// Laguerre model: lower bidiagonal B with diagonal x_i,
// x_i^2 ~ Gamma(kappa (a+N-i) + 1, t), and subdiagonal y_i,
// y_i^2 ~ Gamma(kappa (N-i), t); the spectrum is that of B B^T.

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

#include "betadual/family.hpp"
#include "betadual/resolvent.hpp"
#include "betadual/symbolic.hpp"

namespace betadual {

inline constexpr int kMaxWalkN = 10;
inline constexpr int kMaxWalkPGaussian = 6;
inline constexpr int kMaxWalkPLaguerre = 4;

/// Exact value as a polynomial in t (and a when `a` is not given).
/// Gaussian: 2^p E Tr M^{2p}. Laguerre: E Tr (B B^T)^p.
struct WalkMoment {
  Family family = Family::Gaussian;
  int p = 0;
  int n = 0;
  MultiPoly value;
};

WalkMoment expected_trace_power(Family family, int n, int p,
                                std::optional<Rational> a = std::nullopt);

struct BivariateMoment {
  Family family = Family::Gaussian;
  int p = 0;
  MultiPoly value;  // in N, t (and a)
  int holdout_n = 0;
  bool holdout_ok = false;
};

/// Interpolates in N at nodes 1..p+2 and re-checks at N = p+3. Throws
/// std::runtime_error if the held-out node disagrees.
BivariateMoment moment_bivariate(Family family, int p);

enum class FiniteDuality { Gaussian, Laguerre, LaguerreVariant };
FiniteDuality parse_finite_duality(std::string_view name);

/// Records for orders 0..p of the (N, kappa) -> (-kappa N, 1/kappa) duality.
DualityReport duality_check_finite(FiniteDuality which, int p);

/// Numeric model parameters.
struct ModelParams {
  Family family = Family::Gaussian;
  int n = 1;
  double kappa = 1.0;
  double a = 0.0;
};

void validate(const ModelParams& m);

/// Uniform in (0, 1) from a counter-based hash of (seed, sample, entry).
double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t entry);

struct SpectrumSample {
  ModelParams params;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::vector<double> eigenvalues;  // ascending
};

/// The index selects the sample within the seed's stream; entries are drawn
/// by inverse CDF so runs with different kappa share random numbers.
SpectrumSample sample_spectrum(const ModelParams& m, std::uint64_t seed, std::uint64_t index = 0);

struct MomentEstimate {
  int power = 0;  // k in E sum lambda^k
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Jackknife estimates of E sum_j lambda_j^k for k = 1..k_max.
std::vector<MomentEstimate> mc_moments(const ModelParams& m, int k_max, std::size_t samples,
                                       std::uint64_t seed, int blocks = 100);

/// Exact E sum_j lambda_j^k from the walk oracle at numeric kappa (and a).
double exact_moment(const ModelParams& m, int k);

/// Monte Carlo of kappa Cov(A_1, A_2), A_i = sum_j 1/(x_i - lambda_j), for the
/// Gaussian model, with antithetic pairs. Alongside the raw estimate it
/// returns the same functional of the kappa -> infinity linearised model
/// driven by the same random numbers; its expectation is the harmonic value.
struct CovarianceEstimate {
  double kappa = 0.0;
  std::size_t samples = 0;
  double kcov = 0.0;
  double kcov_se = 0.0;
  double kcov_linear = 0.0;
  double kcov_linear_se = 0.0;
  /// kcov - kcov_linear and its jackknife error: the finite-kappa correction.
  double correction = 0.0;
  double correction_se = 0.0;
};

CovarianceEstimate harmonic_covariance_mc(int n, double x1, double x2, double kappa,
                                          std::size_t samples, std::uint64_t seed,
                                          int blocks = 100);

void to_json(nlohmann::json& j, const WalkMoment& w);
void to_json(nlohmann::json& j, const BivariateMoment& b);
void to_json(nlohmann::json& j, const SpectrumSample& s);
void to_json(nlohmann::json& j, const MomentEstimate& e);
void to_json(nlohmann::json& j, const CovarianceEstimate& c);
void to_json(nlohmann::json& j, const ModelParams& m);

}  // namespace betadual
