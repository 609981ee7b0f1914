#pragma once

// Certified real arithmetic on top of MPFR. Every operation rounds its lower
// endpoint toward -inf and its upper endpoint toward +inf, so the exact real
// result of the operation on any points of the inputs lies in the output.

#include <mpfr.h>
#include <gmpxx.h>

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "fracpow/error.hpp"

namespace fracpow {

/// Working precision for a computation. Results are produced with
/// `bits + guard_bits` mantissa bits.
class PrecisionContext {
 public:
  static constexpr int kMinBits = 32;
  static constexpr int kDefaultGuardBits = 64;

  PrecisionContext() = default;
  explicit PrecisionContext(int bits, int guard_bits = kDefaultGuardBits);

  int bits() const noexcept { return bits_; }
  int guard_bits() const noexcept { return guard_bits_; }
  mpfr_prec_t working() const noexcept { return static_cast<mpfr_prec_t>(bits_) + guard_bits_; }

  PrecisionContext with_bits(int bits) const { return PrecisionContext(bits, guard_bits_); }

 private:
  int bits_ = 128;
  int guard_bits_ = kDefaultGuardBits;
};

/// Owning handle for one mpfr_t.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = 64);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  static Real from_si(long value, mpfr_prec_t prec);
  static Real from_double(double value);
  static Real from_mpz(const mpz_class& value, mpfr_prec_t prec, mpfr_rnd_t rnd);
  /// 2^exponent, exact.
  static Real pow2(long exponent, mpfr_prec_t prec = 2);
  static Real infinity(int sign);
  /// Reads a decimal string written by to_decimal(); exact for strings this
  /// class produced at the same precision.
  static Real parse(std::string_view text, mpfr_prec_t prec);

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

  bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
  bool is_nan() const noexcept { return mpfr_nan_p(value_) != 0; }
  int sign() const noexcept { return mpfr_sgn(value_); }
  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  /// Shortest decimal string that reads back to the same value at this precision.
  std::string to_decimal() const;

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.value_, b.value_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.value_, b.value_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.value_, b.value_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }

 private:
  mpfr_t value_;
};

/// A closed interval [lo, hi] known to contain a real quantity.
class Enclosure {
 public:
  Enclosure();  // [0, 0]
  Enclosure(Real lo, Real hi);

  static Enclosure point(const Real& x) { return Enclosure(x, x); }
  static Enclosure exact(long value, mpfr_prec_t prec = 64);
  static Enclosure exact(const mpz_class& value, mpfr_prec_t prec);
  static Enclosure from_double(double value) { return point(Real::from_double(value)); }
  static Enclosure from_rational(const mpq_class& value, mpfr_prec_t prec);
  /// Accepts decimal ("0.25", "-1e-3") or rational ("1/8") text.
  static Enclosure from_text(std::string_view text, mpfr_prec_t prec);
  /// [lo, +inf): only valid as an inversion bracket, never as a result.
  static Enclosure unbounded_above(const Real& lo);

  const Real& lo() const noexcept { return lo_; }
  const Real& hi() const noexcept { return hi_; }
  mpfr_prec_t precision() const noexcept;

  bool is_point() const { return lo_ == hi_; }
  bool is_bounded() const { return lo_.is_finite() && hi_.is_finite(); }
  bool contains(const Real& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Enclosure& inner) const { return lo_ <= inner.lo_ && inner.hi_ <= hi_; }
  /// inner lies in the interior of *this.
  bool strictly_contains(const Enclosure& inner) const { return lo_ < inner.lo_ && inner.hi_ < hi_; }
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool intersects(const Enclosure& other) const { return lo_ <= other.hi_ && other.lo_ <= hi_; }
  bool certainly_less(const Enclosure& other) const { return hi_ < other.lo_; }
  bool certainly_leq(const Enclosure& other) const { return hi_ <= other.lo_; }
  bool certainly_positive() const { return lo_.sign() > 0; }

  double mid() const;
  Real midpoint(mpfr_prec_t prec) const;
  /// Upper bound of hi - lo.
  Real width(mpfr_prec_t prec) const;

 private:
  Real lo_;
  Real hi_;
};

// ---------------------------------------------------------------------------
// Elementary operations. Output precision is ctx.working().

Enclosure neg(const Enclosure& a);
Enclosure abs(const Enclosure& a);
Enclosure add(const Enclosure& a, const Enclosure& b, const PrecisionContext& ctx);
Enclosure sub(const Enclosure& a, const Enclosure& b, const PrecisionContext& ctx);
Enclosure mul(const Enclosure& a, const Enclosure& b, const PrecisionContext& ctx);
/// Throws DomainError when b contains 0.
Enclosure div(const Enclosure& a, const Enclosure& b, const PrecisionContext& ctx);
Enclosure pow_int(const Enclosure& a, long n, const PrecisionContext& ctx);
/// a^b for a > 0 (DomainError otherwise).
Enclosure pow(const Enclosure& a, const Enclosure& b, const PrecisionContext& ctx);
Enclosure exp(const Enclosure& a, const PrecisionContext& ctx);
/// Natural log; DomainError unless a.lo > 0.
Enclosure ln(const Enclosure& a, const PrecisionContext& ctx);
Enclosure sqrt(const Enclosure& a, const PrecisionContext& ctx);
Enclosure hull(const Enclosure& a, const Enclosure& b);
/// ||a||, the distance to the nearest integer, as an enclosure in [0, 1/2].
Enclosure dist_to_nearest_integer(const Enclosure& a, const PrecisionContext& ctx);

mpz_class floor_of(const Real& x);
mpz_class ceil_of(const Real& x);

enum class ArithOp { Add, Sub, Mul, Div, PowInt, Exp, Ln };

/// Single entry point over the elementary operations. The second operand is an
/// enclosure for the binary ops and an integer exponent for PowInt; it is
/// ignored by Exp and Ln.
Enclosure arith(ArithOp op, const Enclosure& a, const std::variant<Enclosure, long>& b,
                const PrecisionContext& ctx);

// ---------------------------------------------------------------------------
// Inversion of increasing functions.

/// Interval extension of a real function: must return an enclosure of f(X).
using IntervalFn = std::function<Enclosure(const Enclosure&, const PrecisionContext&)>;

/// Optional speed-up for invert_monotone. Anything produced from a hint is
/// re-certified with interval evaluations of f before being returned.
struct InversionHint {
  /// Enables Newton refinement of the starting point.
  IntervalFn derivative;
  /// Approximate (uncertified) inverse of f at a point.
  std::function<Real(const Real& target, mpfr_prec_t prec)> guess;
};

/// Returns E inside `bracket`, of width at most 2^-tol_bits, containing every x
/// in the bracket with f(x) in `target`. f must be increasing on the bracket.
/// Bracket endpoints may be infinite sentinels; the search expands from the
/// finite end.
///
/// Throws OutOfRange when target is certainly outside f(bracket) and
/// NonConvergence when the width cannot be reached at ctx precision.
Enclosure invert_monotone(const IntervalFn& f, const Enclosure& target, const Enclosure& bracket,
                          int tol_bits, const PrecisionContext& ctx,
                          const InversionHint& hint = {});

// ---------------------------------------------------------------------------

/// A real parameter kept as its exact source text ("2", "0.25", "1/8") and
/// converted on demand at whatever precision the caller works in.
class DecimalReal {
 public:
  DecimalReal() : text_("0") {}
  explicit DecimalReal(std::string text);
  DecimalReal(long value) : text_(std::to_string(value)) {}  // NOLINT(google-explicit-constructor)

  const std::string& text() const noexcept { return text_; }
  Enclosure at(mpfr_prec_t prec) const { return Enclosure::from_text(text_, prec); }
  double approx() const;

  friend bool operator==(const DecimalReal& a, const DecimalReal& b) { return a.text_ == b.text_; }

 private:
  std::string text_;
};

}  // namespace fracpow
