#pragma once

// Brute-force membership checks and small number-theoretic estimators.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracpow/family.hpp"
#include "fracpow/sequence.hpp"
#include "fracpow/target.hpp"

namespace fracpow {

enum class Membership { Pass, Fail, Indeterminate };
std::string_view to_string(Membership m);

struct IndexMargin {
  long n = 0;
  /// Constraint value minus threshold.
  Enclosure margin;
  Membership status = Membership::Indeterminate;
  int bits = 0;
};

struct MembershipVerdict {
  std::string condition;
  long n_min = 0;
  long n_max = 0;
  std::vector<IndexMargin> margins;
  Membership verdict = Membership::Indeterminate;
  std::optional<long> first_failure;
  /// Verdicts are statements about the checked indices only.
  std::string scope = "finite index range";
};

/// x at a requested precision; lets the oracle escalate for exact constants.
using XProvider = std::function<Enclosure(mpfr_prec_t)>;
XProvider fixed_x(const Enclosure& x);
/// `golden` (1 + sqrt 5)/2 or `silver` 1 + sqrt 2.
XProvider pisot_fixture(std::string_view name);
/// A Pisot fixture name, a decimal or p/q literal.
XProvider parse_x(std::string_view text);

struct OracleOptions {
  /// Escalation cap; 0 reads FRACPOW_MAX_BITS, falling back to 1 << 24.
  long max_bits = 0;
};

/// ||x^n - y_n|| < b^{-n} at each listed index.
MembershipVerdict verify_asymptotic(const XProvider& x, const TargetSequence& target, const DecimalReal& b,
                                    const std::vector<long>& indices, const OracleOptions& opts = {});
MembershipVerdict verify_asymptotic(const Enclosure& x, const TargetSequence& target, const DecimalReal& b,
                                    const std::vector<long>& indices, const OracleOptions& opts = {});

/// ||f_n(x) - y_n|| < f_n(x)^{-tau} at each listed index.
MembershipVerdict verify_asymptotic_tau(const Enclosure& x, const FunctionFamily& fam, const TargetSequence& target,
                                        const DecimalReal& tau, const std::vector<long>& indices,
                                        const OracleOptions& opts = {});

/// For each N in [N_min, N_max] some n <= N has ||x^n - y_n|| < B^{-N}.
/// Margin at N is min over n <= N of the distance minus B^{-N}.
MembershipVerdict verify_uniform(const XProvider& x, const TargetSequence& target, const DecimalReal& B, long N_min,
                                 long N_max, const OracleOptions& opts = {});
MembershipVerdict verify_uniform(const Enclosure& x, const TargetSequence& target, const DecimalReal& B, long N_min,
                                 long N_max, const OracleOptions& opts = {});

/// ||f_n(x) - y_n|| <= delta_n for all n <= N.
MembershipVerdict verify_bad(const Enclosure& x, const FunctionFamily& fam, const TargetSequence& target,
                             const Sequence& delta, long N, const OracleOptions& opts = {});

/// ||x^n - y_n|| at working precision `prec`.
Enclosure power_distance(const Enclosure& x, const TargetSequence& target, long n, mpfr_prec_t prec);

/// A base b' with b'^{-n} strictly below the certified distance at index n,
/// so the index fails under b'. Empty when the distance may be 0.
std::optional<Real> failing_base(const Enclosure& distance, long n);

struct PEstimate {
  double estimate = 0;
  Enclosure enclosure;
  long argmin = 0;
};

/// min over first_index <= n <= N of ||x^n||^{1/n}.
PEstimate mahler_szekeres_P(const XProvider& x, long N, long first_index = 2, const OracleOptions& opts = {});
PEstimate mahler_szekeres_P(const Enclosure& x, long N, long first_index = 2, const OracleOptions& opts = {});

/// max over the last half of n <= N of log n / log a_n.
double convergence_exponent(const Sequence& a, long N);

}  // namespace fracpow
