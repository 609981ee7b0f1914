#include "fracpow/precision.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>

namespace fracpow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::EmptyLevel: return "EmptyLevel";
    case ErrorCode::NoAdmissibleIndex: return "NoAdmissibleIndex";
    case ErrorCode::DegenerateCertificate: return "DegenerateCertificate";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::Config: return "ConfigError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// PrecisionContext

PrecisionContext::PrecisionContext(int bits, int guard_bits) : bits_(bits), guard_bits_(guard_bits) {
  if (bits < kMinBits) throw DomainError("precision must be at least 32 bits, got " + std::to_string(bits));
  if (guard_bits < 0) throw DomainError("guard bits must be non-negative");
}

// ---------------------------------------------------------------------------
// Real

namespace {

// Values such as 2^(3^20) overflow MPFR's default exponent range.
void widen_exponent_range() {
  thread_local bool done = false;
  if (!done) {
    mpfr_set_emax(mpfr_get_emax_max());
    mpfr_set_emin(mpfr_get_emin_min());
    done = true;
  }
}

}  // namespace

Real::Real(mpfr_prec_t prec) {
  widen_exponent_range();
  mpfr_init2(value_, std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN));
  mpfr_set_zero(value_, 1);
}

Real::Real(const Real& other) {
  widen_exponent_range();
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::from_si(long value, mpfr_prec_t prec) {
  Real r(std::max<mpfr_prec_t>(prec, 64));
  mpfr_set_si(r.value_, value, MPFR_RNDN);
  return r;
}

Real Real::from_double(double value) {
  Real r(53);
  mpfr_set_d(r.value_, value, MPFR_RNDN);
  return r;
}

Real Real::from_mpz(const mpz_class& value, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  Real r(prec);
  mpfr_set_z(r.value_, value.get_mpz_t(), rnd);
  return r;
}

Real Real::pow2(long exponent, mpfr_prec_t prec) {
  Real r(prec);
  mpfr_set_ui_2exp(r.value_, 1, exponent, MPFR_RNDN);
  return r;
}

Real Real::infinity(int sign) {
  Real r(MPFR_PREC_MIN);
  mpfr_set_inf(r.value_, sign);
  return r;
}

Real Real::parse(std::string_view text, mpfr_prec_t prec) {
  Real r(prec);
  std::string owned(text);
  if (mpfr_set_str(r.value_, owned.c_str(), 10, MPFR_RNDN) != 0) {
    throw ConfigError("malformed real literal '" + owned + "'");
  }
  return r;
}

std::string Real::to_decimal() const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return sign() > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(value_)) return "0";
  mpfr_exp_t exponent = 0;
  char* raw = mpfr_get_str(nullptr, &exponent, 10, 0, value_, MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);
  std::string sign_part;
  if (digits.front() == '-') {
    sign_part = "-";
    digits.erase(0, 1);
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  std::string out = sign_part + digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  const long e = static_cast<long>(exponent) - 1;
  if (e != 0) out += "e" + std::to_string(e);
  return out;
}

// ---------------------------------------------------------------------------
// Enclosure

Enclosure::Enclosure() : lo_(2), hi_(2) {}

Enclosure::Enclosure(Real lo, Real hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.is_nan() || hi_.is_nan()) throw DomainError("enclosure endpoint is NaN");
  if (hi_ < lo_) throw DomainError("enclosure with lo > hi: [" + lo_.to_decimal() + ", " + hi_.to_decimal() + "]");
}

Enclosure Enclosure::exact(long value, mpfr_prec_t prec) {
  Real r = Real::from_si(value, prec);
  return point(r);
}

Enclosure Enclosure::exact(const mpz_class& value, mpfr_prec_t prec) {
  return Enclosure(Real::from_mpz(value, prec, MPFR_RNDD), Real::from_mpz(value, prec, MPFR_RNDU));
}

Enclosure Enclosure::from_rational(const mpq_class& value, mpfr_prec_t prec) {
  Real lo(prec), hi(prec);
  mpfr_set_q(lo.get(), value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.get(), value.get_mpq_t(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure Enclosure::from_text(std::string_view text, mpfr_prec_t prec) {
  std::string owned(text);
  while (!owned.empty() && owned.front() == ' ') owned.erase(0, 1);
  while (!owned.empty() && owned.back() == ' ') owned.pop_back();
  if (owned.empty()) throw ConfigError("empty real literal");
  if (owned.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(owned, 10) != 0) throw ConfigError("malformed rational literal '" + owned + "'");
    if (q.get_den() == 0) throw ConfigError("zero denominator in '" + owned + "'");
    q.canonicalize();
    return from_rational(q, prec);
  }
  Real lo(prec), hi(prec);
  char* end = nullptr;
  mpfr_strtofr(lo.get(), owned.c_str(), &end, 10, MPFR_RNDD);
  if (end == owned.c_str() || *end != '\0' || !lo.is_finite()) {
    throw ConfigError("malformed real literal '" + owned + "'");
  }
  mpfr_strtofr(hi.get(), owned.c_str(), &end, 10, MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure Enclosure::unbounded_above(const Real& lo) { return Enclosure(lo, Real::infinity(1)); }

mpfr_prec_t Enclosure::precision() const noexcept { return std::max(lo_.precision(), hi_.precision()); }

double Enclosure::mid() const {
  if (!is_bounded()) return (lo_.to_double() + hi_.to_double()) / 2;
  return midpoint(64).to_double();
}

Real Enclosure::midpoint(mpfr_prec_t prec) const {
  Real m(prec);
  // lo + hi is computed exactly at the larger precision plus one bit
  Real sum(precision() + 1);
  mpfr_add(sum.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), sum.get(), 1, MPFR_RNDN);
  return m;
}

Real Enclosure::width(mpfr_prec_t prec) const {
  Real w(prec);
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w;
}

// ---------------------------------------------------------------------------
// Operations

namespace {

void require_finite(const Enclosure& a, const char* op) {
  if (!a.is_bounded()) throw DomainError(std::string(op) + ": operand is not finite");
}

using BinaryMpfr = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// min over corner results rounded down, max over corner results rounded up.
Enclosure corners(BinaryMpfr fn, const Enclosure& a, const Enclosure& b, mpfr_prec_t prec) {
  const std::array<const Real*, 2> as{&a.lo(), &a.hi()};
  const std::array<const Real*, 2> bs{&b.lo(), &b.hi()};
  Real lo = Real::infinity(1), hi = Real::infinity(-1);
  mpfr_set_prec(lo.get(), prec);
  mpfr_set_prec(hi.get(), prec);
  mpfr_set_inf(lo.get(), 1);
  mpfr_set_inf(hi.get(), -1);
  Real down(prec), up(prec);
  for (const Real* x : as) {
    for (const Real* y : bs) {
      fn(down.get(), x->get(), y->get(), MPFR_RNDD);
      fn(up.get(), x->get(), y->get(), MPFR_RNDU);
      if (down < lo) mpfr_set(lo.get(), down.get(), MPFR_RNDD);
      if (up > hi) mpfr_set(hi.get(), up.get(), MPFR_RNDU);
    }
  }
  return Enclosure(std::move(lo), std::move(hi));
}

using UnaryMpfr = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

Enclosure increasing_map(UnaryMpfr fn, const Enclosure& a, mpfr_prec_t prec) {
  Real lo(prec), hi(prec);
  fn(lo.get(), a.lo().get(), MPFR_RNDD);
  fn(hi.get(), a.hi().get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Real abs_rounded(const Real& x, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  Real r(prec);
  mpfr_abs(r.get(), x.get(), rnd);
  return r;
}

}  // namespace

Enclosure neg(const Enclosure& a) {
  Real lo(a.hi().precision()), hi(a.lo().precision());
  mpfr_neg(lo.get(), a.hi().get(), MPFR_RNDN);
  mpfr_neg(hi.get(), a.lo().get(), MPFR_RNDN);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure abs(const Enclosure& a) {
  if (a.lo().sign() >= 0) return a;
  if (a.hi().sign() <= 0) return neg(a);
  const mpfr_prec_t prec = a.precision();
  Real hi = abs_rounded(a.lo(), prec, MPFR_RNDU);
  if (a.hi() > hi) hi = a.hi();
  return Enclosure(Real(prec), std::move(hi));
}

Enclosure add(const Enclosure& a, const Enclosure& b, const PrecisionContext& ctx) {
  require_finite(a, "add");
  require_finite(b, "add");
  Real lo(ctx.working()), hi(ctx.working());
  mpfr_add(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_add(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure sub(const Enclosure& a, const Enclosure& b, const PrecisionContext& ctx) {
  require_finite(a, "sub");
  require_finite(b, "sub");
  Real lo(ctx.working()), hi(ctx.working());
  mpfr_sub(lo.get(), a.lo().get(), b.hi().get(), MPFR_RNDD);
  mpfr_sub(hi.get(), a.hi().get(), b.lo().get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure mul(const Enclosure& a, const Enclosure& b, const PrecisionContext& ctx) {
  require_finite(a, "mul");
  require_finite(b, "mul");
  return corners(&mpfr_mul, a, b, ctx.working());
}

Enclosure div(const Enclosure& a, const Enclosure& b, const PrecisionContext& ctx) {
  require_finite(a, "div");
  require_finite(b, "div");
  if (b.contains_zero()) throw DomainError("div: divisor enclosure contains 0");
  return corners(&mpfr_div, a, b, ctx.working());
}

Enclosure pow_int(const Enclosure& a, long n, const PrecisionContext& ctx) {
  require_finite(a, "pow_int");
  const mpfr_prec_t prec = ctx.working();
  if (n == 0) return Enclosure::exact(1, prec);
  if (n < 0) return div(Enclosure::exact(1, prec), pow_int(a, -n, ctx), ctx);
  const auto un = static_cast<unsigned long>(n);
  Real lo(prec), hi(prec);
  const bool odd = (n % 2) == 1;
  if (odd || a.lo().sign() >= 0) {
    mpfr_pow_ui(lo.get(), a.lo().get(), un, MPFR_RNDD);
    mpfr_pow_ui(hi.get(), a.hi().get(), un, MPFR_RNDU);
  } else if (a.hi().sign() <= 0) {
    mpfr_pow_ui(lo.get(), a.hi().get(), un, MPFR_RNDD);
    mpfr_pow_ui(hi.get(), a.lo().get(), un, MPFR_RNDU);
  } else {
    const Real m = std::max(abs_rounded(a.lo(), a.precision(), MPFR_RNDN), a.hi(),
                            [](const Real& x, const Real& y) { return x < y; });
    mpfr_pow_ui(hi.get(), m.get(), un, MPFR_RNDU);
  }
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure pow(const Enclosure& a, const Enclosure& b, const PrecisionContext& ctx) {
  require_finite(a, "pow");
  require_finite(b, "pow");
  if (a.lo().sign() <= 0) throw DomainError("pow: base must be positive");
  // x^y is monotone in each argument on the positive quadrant, so the
  // extremes over a box sit at its corners.
  return corners(&mpfr_pow, a, b, ctx.working());
}

Enclosure exp(const Enclosure& a, const PrecisionContext& ctx) {
  require_finite(a, "exp");
  return increasing_map(&mpfr_exp, a, ctx.working());
}

Enclosure ln(const Enclosure& a, const PrecisionContext& ctx) {
  require_finite(a, "ln");
  if (a.lo().sign() <= 0) throw DomainError("ln: argument must be positive, got lower bound " + a.lo().to_decimal());
  return increasing_map(&mpfr_log, a, ctx.working());
}

Enclosure sqrt(const Enclosure& a, const PrecisionContext& ctx) {
  require_finite(a, "sqrt");
  if (a.lo().sign() < 0) throw DomainError("sqrt: negative argument");
  return increasing_map(&mpfr_sqrt, a, ctx.working());
}

Enclosure hull(const Enclosure& a, const Enclosure& b) {
  return Enclosure(a.lo() <= b.lo() ? a.lo() : b.lo(), a.hi() >= b.hi() ? a.hi() : b.hi());
}

mpz_class floor_of(const Real& x) {
  if (!x.is_finite()) throw DomainError("floor of a non-finite value");
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), x.get(), MPFR_RNDD);
  return z;
}

mpz_class ceil_of(const Real& x) {
  if (!x.is_finite()) throw DomainError("ceil of a non-finite value");
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), x.get(), MPFR_RNDU);
  return z;
}

Enclosure dist_to_nearest_integer(const Enclosure& a, const PrecisionContext& ctx) {
  require_finite(a, "dist_to_nearest_integer");
  const mpfr_prec_t prec = ctx.working();
  const Enclosure half = Enclosure::from_rational(mpq_class(1, 2), 2);
  auto nearest = [](const Real& x) {
    Real r(std::max<mpfr_prec_t>(x.precision(), 2));
    mpfr_rint(r.get(), x.get(), MPFR_RNDN);
    return r;
  };
  const Real r_lo = nearest(a.lo());
  const Real r_hi = nearest(a.hi());
  if (r_lo == r_hi) {
    return abs(sub(a, Enclosure::point(r_lo), ctx));
  }
  // The interval contains a half-integer, so the upper bound is exactly 1/2.
  const bool has_integer = floor_of(a.hi()) >= ceil_of(a.lo());
  if (has_integer) return Enclosure(Real(prec), half.hi());
  Real d_lo(prec), d_hi(prec);
  mpfr_sub(d_lo.get(), a.lo().get(), r_lo.get(), MPFR_RNDD);
  mpfr_abs(d_lo.get(), d_lo.get(), MPFR_RNDD);
  mpfr_sub(d_hi.get(), r_hi.get(), a.hi().get(), MPFR_RNDD);
  mpfr_abs(d_hi.get(), d_hi.get(), MPFR_RNDD);
  Real lower = d_lo < d_hi ? d_lo : d_hi;
  if (lower > half.hi()) lower = half.hi();
  return Enclosure(std::move(lower), half.hi());
}

Enclosure arith(ArithOp op, const Enclosure& a, const std::variant<Enclosure, long>& b,
                const PrecisionContext& ctx) {
  auto operand = [&]() -> const Enclosure& {
    if (const auto* e = std::get_if<Enclosure>(&b)) return *e;
    throw DomainError("arith: binary operation needs an enclosure operand");
  };
  switch (op) {
    case ArithOp::Add: return add(a, operand(), ctx);
    case ArithOp::Sub: return sub(a, operand(), ctx);
    case ArithOp::Mul: return mul(a, operand(), ctx);
    case ArithOp::Div: return div(a, operand(), ctx);
    case ArithOp::PowInt: {
      if (const auto* n = std::get_if<long>(&b)) return pow_int(a, *n, ctx);
      throw DomainError("arith: pow_int needs an integer exponent");
    }
    case ArithOp::Exp: return exp(a, ctx);
    case ArithOp::Ln: return ln(a, ctx);
  }
  throw DomainError("arith: unknown operation");
}

// ---------------------------------------------------------------------------
// invert_monotone

namespace {

struct Inverter {
  const IntervalFn& f;
  const Enclosure& target;
  const PrecisionContext& ctx;
  mpfr_prec_t prec;

  Enclosure at(const Real& x) const { return f(Enclosure::point(x), ctx); }

  Real midpoint(const Real& a, const Real& b) const {
    Real m(prec);
    mpfr_add(m.get(), a.get(), b.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m;
  }

  // Lower end: the largest point a found with f(a) <= target.lo.
  Real lower_end(Real a, Real b, const Real& tol) const {
    for (int iter = 0; iter < 1 << 22; ++iter) {
      if (gap_at_most(a, b, tol)) break;
      Real m = midpoint(a, b);
      if (m <= a || m >= b) break;
      const Enclosure fm = at(m);
      if (fm.hi() <= target.lo()) {
        a = std::move(m);
      } else if (fm.lo() > target.lo()) {
        b = std::move(m);
      } else {
        break;  // f(m) straddles the target bound at this precision
      }
    }
    return a;
  }

  // Upper end: the smallest point b found with f(b) >= target.hi.
  Real upper_end(Real a, Real b, const Real& tol) const {
    for (int iter = 0; iter < 1 << 22; ++iter) {
      if (gap_at_most(a, b, tol)) break;
      Real m = midpoint(a, b);
      if (m <= a || m >= b) break;
      const Enclosure fm = at(m);
      if (fm.lo() >= target.hi()) {
        b = std::move(m);
      } else if (fm.hi() < target.hi()) {
        a = std::move(m);
      } else {
        break;
      }
    }
    return b;
  }

  bool gap_at_most(const Real& a, const Real& b, const Real& tol) const {
    Real w(prec);
    mpfr_sub(w.get(), b.get(), a.get(), MPFR_RNDU);
    return w <= tol;
  }
};

}  // namespace

Enclosure invert_monotone(const IntervalFn& f, const Enclosure& target, const Enclosure& bracket,
                          int tol_bits, const PrecisionContext& ctx, const InversionHint& hint) {
  if (!target.is_bounded()) throw DomainError("invert_monotone: target must be finite");
  if (bracket.lo().is_nan() || bracket.hi().is_nan()) throw DomainError("invert_monotone: NaN bracket");
  if (!bracket.lo().is_finite() && !bracket.hi().is_finite()) {
    throw DomainError("invert_monotone: bracket needs at least one finite end");
  }
  const mpfr_prec_t prec = std::max<mpfr_prec_t>(ctx.working(), bracket.precision());
  Inverter inv{f, target, ctx, prec};

  Real lo = bracket.lo();
  Real hi = bracket.hi();
  // Expand an infinite sentinel end until f certainly passes the target.
  auto expand = [&](const Real& from, int direction) {
    for (long j = 0; j < 256; ++j) {
      Real x(prec);
      Real step = Real::pow2(j);
      if (direction > 0) {
        mpfr_add(x.get(), from.get(), step.get(), MPFR_RNDU);
        const Enclosure fx = inv.at(x);
        if (fx.lo() >= target.hi()) return x;
      } else {
        mpfr_sub(x.get(), from.get(), step.get(), MPFR_RNDD);
        const Enclosure fx = inv.at(x);
        if (fx.hi() <= target.lo()) return x;
      }
    }
    throw OutOfRange("invert_monotone: target not reached from the finite bracket end");
  };
  if (!hi.is_finite()) hi = expand(lo, +1);
  if (!lo.is_finite()) lo = expand(hi, -1);

  const Enclosure f_lo = inv.at(lo);
  const Enclosure f_hi = inv.at(hi);
  if (f_lo.lo() > target.hi()) {
    throw OutOfRange("invert_monotone: target " + target.hi().to_decimal() + " lies below f(bracket.lo) >= " +
                     f_lo.lo().to_decimal());
  }
  if (f_hi.hi() < target.lo()) {
    throw OutOfRange("invert_monotone: target " + target.lo().to_decimal() + " lies above f(bracket.hi) <= " +
                     f_hi.hi().to_decimal());
  }

  const Real tol = Real::pow2(-static_cast<long>(tol_bits));
  Real lower_start = lo;
  Real upper_start = hi;

  if (hint.guess || hint.derivative) {
    const Real t_mid = target.midpoint(prec);
    Real x = hint.guess ? hint.guess(t_mid, prec) : inv.midpoint(lo, hi);
    if (x.precision() != prec) {
      Real widened(prec);
      mpfr_set(widened.get(), x.get(), MPFR_RNDN);
      x = std::move(widened);
    }
    if (!(x >= lo)) x = lo;
    if (!(x <= hi)) x = hi;
    if (hint.derivative) {
      const Real step_tol = Real::pow2(-static_cast<long>(tol_bits) - 8);
      Real step(prec), fx(prec), dfx(prec);
      for (int iter = 0; iter < 200; ++iter) {
        fx = inv.at(x).midpoint(prec);
        mpfr_sub(fx.get(), fx.get(), t_mid.get(), MPFR_RNDN);
        dfx = hint.derivative(Enclosure::point(x), ctx).midpoint(prec);
        if (dfx.sign() <= 0) break;
        mpfr_div(step.get(), fx.get(), dfx.get(), MPFR_RNDN);
        mpfr_sub(x.get(), x.get(), step.get(), MPFR_RNDN);
        if (x < lo) x = lo;
        if (x > hi) x = hi;
        Real mag(prec);
        mpfr_abs(mag.get(), step.get(), MPFR_RNDN);
        if (mag <= step_tol) break;
      }
    }
    // Certify a symmetric box around the estimate.
    for (long extra : {2L, 1L}) {
      const Real h = Real::pow2(-static_cast<long>(tol_bits) - extra);
      Real a(prec), b(prec);
      mpfr_sub(a.get(), x.get(), h.get(), MPFR_RNDD);
      mpfr_add(b.get(), x.get(), h.get(), MPFR_RNDU);
      if (a < lo) a = lo;
      if (b > hi) b = hi;
      const bool a_ok = a == lo || inv.at(a).hi() <= target.lo();
      const bool b_ok = b == hi || inv.at(b).lo() >= target.hi();
      if (a_ok && b_ok && inv.gap_at_most(a, b, tol)) return Enclosure(std::move(a), std::move(b));
      if (a_ok && a > lower_start) lower_start = a;
      if (b_ok && b < upper_start) upper_start = b;
    }
  }

  // Certified bisection baseline.
  Real half_tol(prec);
  mpfr_div_2ui(half_tol.get(), tol.get(), 2, MPFR_RNDD);
  Real a = inv.lower_end(lower_start, hi, half_tol);
  Real b = inv.upper_end(lo, upper_start, half_tol);
  if (b < a) std::swap(a, b);  // only when the target is a single exact point hit exactly
  if (!inv.gap_at_most(a, b, tol)) {
    throw NonConvergence("invert_monotone: width 2^-" + std::to_string(tol_bits) + " not reachable at " +
                         std::to_string(prec) + " bits");
  }
  return Enclosure(std::move(a), std::move(b));
}

// ---------------------------------------------------------------------------

DecimalReal::DecimalReal(std::string text) : text_(std::move(text)) {
  (void)Enclosure::from_text(text_, 64);  // validates
}

double DecimalReal::approx() const { return Enclosure::from_text(text_, 64).mid(); }

}  // namespace fracpow
