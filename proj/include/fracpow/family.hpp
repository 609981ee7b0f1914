#pragma once

// Families f = (f_n) of increasing C^1 functions on an open interval I.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "fracpow/precision.hpp"
#include "fracpow/sequence.hpp"

namespace fracpow {

enum class FamilyKind { Power, PowerExponent, Linear, Generic };

std::string_view to_string(FamilyKind kind);

/// Open interval (lo, hi); hi may be +inf.
struct Domain {
  Real lo;
  Real hi;
};

class FunctionFamily {
 public:
  virtual ~FunctionFamily() = default;

  virtual FamilyKind kind() const = 0;
  /// Canonical spec string; parse_family(id()) rebuilds an equal family.
  virtual std::string id() const = 0;
  virtual Domain domain() const = 0;

  virtual Enclosure eval(long n, const Enclosure& x, const PrecisionContext& ctx) const = 0;
  virtual Enclosure deriv(long n, const Enclosure& x, const PrecisionContext& ctx) const = 0;
  /// ln f_n(x); built-ins never form f_n(x) itself.
  virtual Enclosure log_eval(long n, const Enclosure& x, const PrecisionContext& ctx) const;
  /// ln f_n'(x).
  virtual Enclosure log_deriv(long n, const Enclosure& x, const PrecisionContext& ctx) const;
  /// Certified f_n^{-1}(y) inside `bracket`, width <= 2^-tol_bits.
  virtual Enclosure invert(long n, const Enclosure& y, const Enclosure& bracket, int tol_bits,
                           const PrecisionContext& ctx) const;

  virtual bool is_linear() const { return false; }
  /// f_n' is non-decreasing in x, so its extremes over an interval sit at the endpoints.
  virtual bool derivative_increasing(long n) const { return (void)n, false; }
  /// Largest valid n for families backed by a finite list.
  virtual std::optional<long> max_index() const { return std::nullopt; }

  /// x lies inside the open domain.
  bool contains(const Enclosure& x) const;
  void require_index(long n) const;
  /// ln f_n'(x) at double accuracy.
  double log_deriv_at(long n, double x) const;
  double log_eval_at(long n, double x) const;

 protected:
  virtual InversionHint hint(long n, const PrecisionContext& ctx) const;
};

using FamilyPtr = std::shared_ptr<const FunctionFamily>;

/// f_n(x) = x^n on (1, inf).
FamilyPtr make_power();
/// f_n(x) = x^{q_n} on (1, inf).
FamilyPtr make_power_exponent(Sequence q);
/// f_n(x) = a_n x on (0, inf).
FamilyPtr make_linear(Sequence a);

struct GenericFamilySpec {
  std::string name;
  Domain domain;
  std::function<Enclosure(long, const Enclosure&, const PrecisionContext&)> eval;
  std::function<Enclosure(long, const Enclosure&, const PrecisionContext&)> deriv;
  bool derivative_increasing = false;
  bool is_linear = false;
};
/// Adapter for user-supplied families; inversion falls back to certified
/// bisection with a Newton accelerator.
FamilyPtr make_generic(GenericFamilySpec spec);

/// `power` | `powerexp q=<seq>` | `linear a=<seq>`; see Sequence::parse.
FamilyPtr parse_family(std::string_view text);

/// The sequence behind a PowerExponent or Linear family.
const Sequence* family_sequence(const FunctionFamily& fam);

}  // namespace fracpow
