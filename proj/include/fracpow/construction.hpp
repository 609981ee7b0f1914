#pragma once

// Nested-interval (Cantor) constructions of certified witnesses.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fracpow/family.hpp"
#include "fracpow/sequence.hpp"
#include "fracpow/target.hpp"

namespace fracpow {

namespace regime {

/// |f_n(x) - y_n| < f_n(x)^{-tau}. When `tau_of_x` is set, tau is evaluated at
/// the parent interval's midpoint on each level and `tau` is unused.
struct Asymptotic {
  DecimalReal tau;
  std::function<double(double)> tau_of_x;
  std::string tau_name;
};

/// |x^n - y_n| < b^{-n}.
struct AsymptoticBase {
  DecimalReal b;
};

/// n_k = floor(theta^k) with half-width b^{-n_k}, b = B^theta. Power family only.
struct Uniform {
  DecimalReal B;
  DecimalReal theta;
};

/// |f_n(x) - y_n| <= delta_n for every n.
struct Bad {
  Sequence delta;
};

}  // namespace regime

using ApproxRegime = std::variant<regime::Asymptotic, regime::AsymptoticBase, regime::Uniform, regime::Bad>;

/// `asym tau=<r>` | `asym-base b=<r>` | `uniform B=<r> theta=<r>` | `bad delta=<seq>`.
ApproxRegime parse_regime(std::string_view text);
std::string regime_spec(const ApproxRegime& r);
/// Throws DomainError when a regime parameter is out of range.
void validate_regime(const ApproxRegime& r);

struct LevelRecord {
  long level = 0;
  long n = 0;
  mpz_class k;
  /// y_{n_i}
  Enclosure target;
  Enclosure half_width;
  /// [c_i, d_i]
  Enclosure interval;
  /// Number of admissible children inside the parent interval.
  mpz_class child_count;
  /// Minimal distance between consecutive children; absent when child_count < 2.
  std::optional<Enclosure> min_gap;
  /// Working precision of this level, in bits.
  int bits = 0;
  int tol_bits = 0;
};

struct Selector {
  enum class Kind { Leftmost, Median, Seeded };
  Kind kind = Kind::Leftmost;
  std::uint64_t seed = 0;

  static Selector leftmost() { return {}; }
  static Selector median() { return {Kind::Median, 0}; }
  static Selector seeded(std::uint64_t s) { return {Kind::Seeded, s}; }
  /// `leftmost` | `median` | `seeded:<u64>`
  static Selector parse(std::string_view text);
  std::string spec() const;
};

struct ConstructionCertificate {
  std::string regime;
  std::string family;
  std::string target;
  std::string selector;
  DecimalReal v;
  DecimalReal eps;
  DecimalReal gamma;
  /// [v - eps, v + eps]
  Enclosure window;
  std::vector<long> subsequence;
  std::vector<LevelRecord> levels;
  Enclosure witness;
  std::vector<int> precision_schedule;
  int guard_bits = 0;
};

enum class SelectionPolicy {
  /// Both Ki inequalities with the M estimate. Only short prefixes are
  /// attainable at desk scale.
  PaperKi,
  /// Ki upper bound plus the child-count and sparse-tail growth rules.
  UpperOnly,
};

struct SelectionOptions {
  /// Number of indices wanted (for Uniform: the largest k).
  long depth = 10;
  SelectionPolicy policy = SelectionPolicy::UpperOnly;
  /// Last `sparse_levels` indices (from the third on) satisfy
  /// log f'_{n_{i+1}}(v) >= kappa * sum_{j<=i} (log f'_{n_j}(v) - log w_j).
  double kappa = 4;
  long sparse_levels = 2;
  /// M estimate for PaperKi; computed from check_conditions when absent.
  std::optional<double> M;
};

std::vector<long> select_subsequence(const FunctionFamily& fam, const Enclosure& v, const Enclosure& eps,
                                     double gamma, const ApproxRegime& regime, long max_index,
                                     const SelectionOptions& opts = {});

struct Child {
  mpz_class k;
  Enclosure interval;
};

/// Admissible integer range for children of [c, d] under f_n, with the top
/// integer dropped when its child would not fit strictly inside the parent.
struct ChildRange {
  mpz_class k_min;
  mpz_class k_max;
  mpz_class count() const { return k_max >= k_min ? mpz_class(k_max - k_min + 1) : mpz_class(0); }
};

ChildRange child_range(const FunctionFamily& fam, const Enclosure& parent, long n, const Enclosure& y,
                       const Enclosure& w, const PrecisionContext& ctx);

/// The single child for integer k: [f_n^{-1}(k + y - w), f_n^{-1}(k + y + w)].
Enclosure child_interval(const FunctionFamily& fam, const Enclosure& parent, long n, const mpz_class& k,
                         const Enclosure& y, const Enclosure& w, int tol_bits, const PrecisionContext& ctx);

/// Every child of `parent`. Intended for small ranges; throws OutOfRange when
/// there are more than `limit` children.
std::vector<Child> level_children(const FunctionFamily& fam, const Enclosure& parent, long n, const Enclosure& y,
                                  const Enclosure& w, const PrecisionContext& ctx, long limit = 100000);

struct ConstructOptions {
  Selector selector;
  double gamma = 0.5;
  SelectionOptions selection;
  int guard_bits = 64;
  /// Escalation cap; 0 reads FRACPOW_MAX_BITS, falling back to 1 << 24.
  long max_bits = 0;
  long max_index = 1L << 22;
};

ConstructionCertificate construct(const FunctionFamily& fam, const DecimalReal& v, const DecimalReal& eps,
                                  const ApproxRegime& regime, const TargetSequence& target, long depth,
                                  const ConstructOptions& opts = {});

struct ReplayResult {
  bool ok = true;
  /// Level of the first failing check; 0 for certificate-wide checks.
  long level = 0;
  std::string failure;
  explicit operator bool() const { return ok; }
};

/// Re-derives every level from the certificate's parameters at the recorded
/// precisions and re-checks nesting, constraint images, counts and gaps.
ReplayResult replay(const ConstructionCertificate& cert, const FunctionFamily& fam);
/// Same, with an explicit regime (needed when tau depends on x).
ReplayResult replay(const ConstructionCertificate& cert, const FunctionFamily& fam, const ApproxRegime& regime);

struct ClosedFormCheck {
  bool ok = true;
  std::string failure;
};

/// Compares recorded m and eps of a Uniform certificate against the
/// closed forms for x^n, as two-sided bounds evaluated with interval endpoints.
ClosedFormCheck check_uniform_closed_forms(const ConstructionCertificate& cert);

/// Half-width for index n under the regime; `parent` feeds the tau variants.
Enclosure regime_half_width(const ApproxRegime& regime, const FunctionFamily& fam, long n,
                            const Enclosure& parent, const PrecisionContext& ctx);

}  // namespace fracpow
