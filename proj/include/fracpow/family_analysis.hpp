#pragma once

// Finite-depth analysis of a family: growth profile u/l, the distortion
// modulus eta(n), hypothesis checks and densification of sparse exponents.

#include <optional>
#include <string>
#include <vector>

#include "fracpow/family.hpp"
#include "fracpow/sequence.hpp"

namespace fracpow {

struct SeriesPoint {
  long n = 0;
  double value = 0;
};

struct GrowthProfile {
  double u_estimate = 0;
  double l_estimate = 0;
  long truncation_N = 0;
  /// log f_n(v) / log f_n'(v); indices with log f_n'(v) <= 0 are omitted.
  std::vector<SeriesPoint> series;
};

/// u = max and l = min over the last ceil(N/2) entries of the series.
GrowthProfile growth_profile(const FunctionFamily& fam, const Enclosure& v, long N);

/// Upper estimate of eta(n) over `window`. Built-in families use a closed-form
/// bound; generic families a (non-certified) grid search over pairs w, z with
/// |f_n(w) - f_n(z)| <= 1. Returns +inf when log f_n' is not positive on the window.
double eta(const FunctionFamily& fam, long n, const Enclosure& window, int grid = 64);

enum class Verdict { HoldsAtDepth, Fails, Indeterminate };
std::string_view to_string(Verdict v);

struct Counterexample {
  long n = 0;
  double x = 0;
  double value = 0;
};

struct ConditionVerdict {
  std::string id;
  Verdict verdict = Verdict::Indeterminate;
  std::string detail;
  std::optional<Counterexample> counterexample;
  /// Per-index quantity the verdict was read from.
  std::vector<SeriesPoint> evidence;
};

struct ConditionReport {
  long N = 0;
  ConditionVerdict cond_ext;
  ConditionVerdict cond_ext_2;
  /// Max of consecutive log-derivative ratios at v; nullopt when cond_ext_2 fails.
  std::optional<double> M_estimate;
  ConditionVerdict general_cond_3;
  ConditionVerdict general_cond_2;
  ConditionVerdict hyp_1;
  ConditionVerdict hyp_2;

  std::vector<const ConditionVerdict*> all() const {
    return {&cond_ext, &cond_ext_2, &general_cond_3, &general_cond_2, &hyp_1, &hyp_2};
  }
};

/// Trend verdicts are evaluated on every prefix 10..N and fail if any prefix
/// fails, so a failure never turns into a pass at larger N.
ConditionReport check_conditions(const FunctionFamily& fam, const Enclosure& v, const Enclosure& eps, long N,
                                 const std::optional<Sequence>& delta = std::nullopt);

struct DensifyResult {
  FamilyPtr family;
  /// Expanded delta as an explicit list; inserted entries are 1.
  Sequence delta;
  /// 1-based positions of the original functions inside the expanded family.
  std::vector<long> original_positions;
  /// Trigger threshold gamma / (2 eta(n)) per original gap n -> n+1.
  std::vector<double> thresholds;
};

/// Inserts exponents between consecutive q_n, q_{n+1} (n < N) whose
/// log-derivative ratio at v exceeds gamma / (2 eta(n)). Only PowerExponent
/// families are supported.
DensifyResult densify(const FunctionFamily& fam, const Sequence& delta, const Enclosure& v, const Enclosure& eps,
                      double gamma, long N);

}  // namespace fracpow
