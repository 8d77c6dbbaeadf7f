#pragma once

// Resolvent moments from the Riccati equations at zero temperature (G, L, J)
// and in the scaled high-temperature limit (G*, L*, J*), and the exact
// one-point dualities between them.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "betadual/family.hpp"
#include "betadual/symbolic.hpp"

namespace betadual {

enum class Regime { Low, High };
/// `Paper` is the closed-form recurrence kept for comparison; `Rederived` solves the
/// Riccati equation order by order. They coincide except for Jacobi.
enum class RecurrenceSource { Paper, Rederived };

Regime parse_regime(std::string_view name);
RecurrenceSource parse_source(std::string_view name);

struct MomentSeries {
  Family family = Family::Gaussian;
  Regime regime = Regime::Low;
  /// Order as requested. For the Gaussian families this counts even moments,
  /// so `moments` holds m_0..m_{2P} with odd slots zero.
  int order = 0;
  std::vector<RationalFn> moments;

  std::string tag() const;  // G0, L0, J0, Gstar0, ...
  const RationalFn& operator[](std::size_t k) const { return moments.at(k); }
  SeriesTail series() const { return SeriesTail(moments); }
};

/// m_0 = N; symbols N (and a, b).
MomentSeries moments_zero_temp(Family family, int order,
                               RecurrenceSource source = RecurrenceSource::Rederived);
/// m_0 = 1; symbols alpha (and a, b).
MomentSeries moments_high_temp(Family family, int order);

/// Coefficients of the Riccati equation applied to the series; all zero when
/// the moments are right. Exact up to the truncation order.
SeriesTail riccati_residual(const MomentSeries& m);

struct DualityRecord {
  int order = 0;
  RationalFn lhs;
  RationalFn rhs;
  bool equal = false;
};

struct DualityReport {
  std::string identity;
  std::string statement;
  std::vector<DualityRecord> records;
  bool pass = false;
  nlohmann::json extra;  // identity-specific context (calibration, constants)
};

enum class SeriesIdentity { W3, W3L, JacobiN1 };
SeriesIdentity parse_series_identity(std::string_view name);
std::string_view series_identity_name(SeriesIdentity id);

/// Both sides come from independent recurrences (low-T vs high-T Riccati).
DualityReport duality_check_series(SeriesIdentity identity, int order);

/// Exact Catalan leading coefficients of m_{2p}^{0,G} for p <= order, plus the
/// semicircle moments by quadrature (p <= numeric_order, tolerance 1e-8).
DualityReport catalan_check(int order, int numeric_order = 5);

/// Terminating 2F1 expansion against the shifted Jacobi polynomial, symbolic
/// a and b. The constant of proportionality is recorded in `extra`.
DualityReport hypergeom_identity_check(int degree);

/// 1/(2 pi) int_{-2}^{2} x^{2p} sqrt(4 - x^2) dx by tanh-sinh quadrature.
double semicircle_moment(int p);
Rational catalan_number(int p);

void finalize(DualityReport& report);
void to_json(nlohmann::json& j, const DualityRecord& r);
void to_json(nlohmann::json& j, const DualityReport& r);
void to_json(nlohmann::json& j, const MomentSeries& m);

}  // namespace betadual
