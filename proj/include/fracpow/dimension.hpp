#pragma once

// Closed-form dimension formulas and empirical estimators along certificates.

#include <optional>
#include <string>
#include <vector>

#include "fracpow/construction.hpp"
#include "fracpow/family_analysis.hpp"

namespace fracpow {

/// log v / log(bv)
double formula_asymptotic_power(double b, double v);

struct DimensionBounds {
  double lower = 0;
  double upper = 0;
};

/// (1/(1 + tau u), 1/(1 + tau l)); both entries use l when `linear`.
DimensionBounds formula_general_bounds(double tau, const GrowthProfile& profile, bool linear = false);
DimensionBounds formula_general_bounds(double tau, double u, double l, bool linear = false);

/// ((log v - log B)/(log v + log B))^2; requires v > B.
double formula_uniform(double B, double v);
/// (log v - theta/(theta-1) log B)/(log v + theta log B), clamped below at 0.
double formula_uniform_theta(double theta, double B, double v);
/// Unclamped form of the above.
double formula_uniform_theta_raw(double theta, double B, double v);
/// ((theta-1) log v - log b)/((theta-1) log(bv)): the theta form with b = B^theta held fixed.
double formula_uniform_fixed_b(double theta, double b, double v);

struct BadFormula {
  /// Minimum over the last half of the non-vacuous terms; 1 when every term is vacuous.
  double value = 1;
  std::vector<SeriesPoint> series;
};

/// Terms (log f_n'(v) + sum_{j<n} log delta_j)/(log f_n'(v) - log delta_n), n = 1..N.
/// delta_n >= 1/2 is vacuous (contributes 0 and is not a liminf candidate);
/// delta_n in [1/4, 1/2) or <= 0 is rejected.
BadFormula formula_bad(const FunctionFamily& fam, const Sequence& delta, double v, long N);

/// Per-level statistics consumed by the empirical estimators.
struct LevelStats {
  long level = 0;
  long n = 0;
  mpz_class m;
  /// Natural logs; eps is absent when m < 2.
  std::optional<double> log_eps;
  double log_width = 0;
};

std::vector<LevelStats> level_stats(const ConstructionCertificate& cert);

/// Synthetic middle-thirds profile: m = 2, eps_k = |I_k| = 3^{-k}.
std::vector<LevelStats> middle_thirds_stats(long depth);
/// The 2^depth level intervals of the middle-thirds Cantor set.
std::vector<Enclosure> middle_thirds_cover(long depth);

/// term k = sum_{i<k} log m_i / (-log(m_k eps_k)); levels without eps are skipped.
std::vector<SeriesPoint> empirical_lower(const std::vector<LevelStats>& levels);
/// term k = sum_{i<=k} log m_i / (-log |I_k|).
std::vector<SeriesPoint> empirical_upper(const std::vector<LevelStats>& levels);
std::vector<SeriesPoint> empirical_lower(const ConstructionCertificate& cert);
std::vector<SeriesPoint> empirical_upper(const ConstructionCertificate& cert);

struct BoxCountResult {
  double slope = 0;
  double std_error = 0;
  std::vector<double> scales;
  std::vector<long> counts;
};

/// Least-squares slope of log N(s) against -log s, with N(s) the number of
/// half-open cells [j s, (j+1) s) met by the intervals.
BoxCountResult box_count(const std::vector<Enclosure>& intervals, const std::vector<double>& scales);
/// `count` geometric scales from a quarter of the span down to the smaller of
/// twice the shortest positive interval length and span / 400 (span * 1e-4
/// when every length is 0).
std::vector<double> default_scales(const std::vector<Enclosure>& intervals, int count = 12);

struct FormulaValue {
  std::string name;
  std::optional<double> value;
  std::optional<double> lower;
  std::optional<double> upper;
};

struct DimensionReport {
  std::vector<FormulaValue> closed_form;
  std::vector<SeriesPoint> empirical_lower_series;
  std::vector<SeriesPoint> empirical_upper_series;
  std::optional<BoxCountResult> box_count_estimate;
  long truncation_depth = 0;
  /// Level rows for CSV emission.
  std::vector<LevelStats> levels;
};

DimensionReport dimension_report(const ConstructionCertificate& cert, const FunctionFamily& fam);

/// Columns: level,n_i,m_i,eps_i,ratio_lower,ratio_upper
std::string dimension_csv(const DimensionReport& report);

}  // namespace fracpow
