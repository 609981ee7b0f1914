#include "fracpow/family.hpp"

#include "parse_util.hpp"

namespace fracpow {

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Power: return "power";
    case FamilyKind::PowerExponent: return "powerexp";
    case FamilyKind::Linear: return "linear";
    case FamilyKind::Generic: return "generic";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// FunctionFamily defaults

Enclosure FunctionFamily::log_eval(long n, const Enclosure& x, const PrecisionContext& ctx) const {
  return ln(eval(n, x, ctx), ctx);
}

Enclosure FunctionFamily::log_deriv(long n, const Enclosure& x, const PrecisionContext& ctx) const {
  return ln(deriv(n, x, ctx), ctx);
}

InversionHint FunctionFamily::hint(long n, const PrecisionContext&) const {
  InversionHint h;
  h.derivative = [this, n](const Enclosure& x, const PrecisionContext& c) { return deriv(n, x, c); };
  return h;
}

Enclosure FunctionFamily::invert(long n, const Enclosure& y, const Enclosure& bracket, int tol_bits,
                                 const PrecisionContext& ctx) const {
  require_index(n);
  const IntervalFn f = [this, n](const Enclosure& x, const PrecisionContext& c) { return eval(n, x, c); };
  return invert_monotone(f, y, bracket, tol_bits, ctx, hint(n, ctx));
}

bool FunctionFamily::contains(const Enclosure& x) const {
  const Domain d = domain();
  return d.lo < x.lo() && x.hi() < d.hi;
}

void FunctionFamily::require_index(long n) const {
  if (n < 1) throw DomainError("family index must be >= 1, got " + std::to_string(n));
  if (const auto m = max_index(); m && n > *m) {
    throw OutOfRange("family index " + std::to_string(n) + " exceeds the " + std::to_string(*m) + " defined functions");
  }
}

double FunctionFamily::log_deriv_at(long n, double x) const {
  return log_deriv(n, Enclosure::from_double(x), PrecisionContext(64)).mid();
}

double FunctionFamily::log_eval_at(long n, double x) const {
  return log_eval(n, Enclosure::from_double(x), PrecisionContext(64)).mid();
}

namespace {

void require_positive(const Enclosure& x, const char* who) {
  if (!x.is_bounded() || x.lo().sign() <= 0) throw DomainError(std::string(who) + ": argument must be positive");
}

Domain open_from(long lo) { return Domain{Real::from_si(lo, 64), Real::infinity(1)}; }

Real clamp_guess(Real g, mpfr_prec_t prec) {
  if (!g.is_finite() || g.sign() <= 0) return Real::from_si(1, prec);
  return g;
}

// ---------------------------------------------------------------------------

class PowerFamily final : public FunctionFamily {
 public:
  FamilyKind kind() const override { return FamilyKind::Power; }
  std::string id() const override { return "power"; }
  Domain domain() const override { return open_from(1); }

  Enclosure eval(long n, const Enclosure& x, const PrecisionContext& ctx) const override {
    require_index(n);
    require_positive(x, "power");
    return pow_int(x, n, ctx);
  }
  Enclosure deriv(long n, const Enclosure& x, const PrecisionContext& ctx) const override {
    require_index(n);
    require_positive(x, "power");
    return mul(Enclosure::exact(n, ctx.working()), pow_int(x, n - 1, ctx), ctx);
  }
  Enclosure log_eval(long n, const Enclosure& x, const PrecisionContext& ctx) const override {
    require_index(n);
    return mul(Enclosure::exact(n, ctx.working()), ln(x, ctx), ctx);
  }
  Enclosure log_deriv(long n, const Enclosure& x, const PrecisionContext& ctx) const override {
    require_index(n);
    const mpfr_prec_t p = ctx.working();
    return add(ln(Enclosure::exact(n, p), ctx), mul(Enclosure::exact(n - 1, p), ln(x, ctx), ctx), ctx);
  }
  bool derivative_increasing(long) const override { return true; }

 protected:
  InversionHint hint(long n, const PrecisionContext&) const override {
    InversionHint h;
    h.guess = [n](const Real& t, mpfr_prec_t prec) {
      Real r(prec);
      if (t.sign() <= 0) return Real::from_si(1, prec);
      mpfr_rootn_ui(r.get(), t.get(), static_cast<unsigned long>(n), MPFR_RNDN);
      return clamp_guess(std::move(r), prec);
    };
    return h;
  }
};

class PowerExponentFamily final : public FunctionFamily {
 public:
  explicit PowerExponentFamily(Sequence q) : q_(std::move(q)) {}

  FamilyKind kind() const override { return FamilyKind::PowerExponent; }
  std::string id() const override { return "powerexp q=" + q_.spec(); }
  Domain domain() const override { return open_from(1); }
  std::optional<long> max_index() const override { return q_.length(); }
  const Sequence& exponents() const { return q_; }

  Enclosure eval(long n, const Enclosure& x, const PrecisionContext& ctx) const override {
    require_index(n);
    require_positive(x, "powerexp");
    return pow(x, q_.at(n, ctx), ctx);
  }
  Enclosure deriv(long n, const Enclosure& x, const PrecisionContext& ctx) const override {
    require_index(n);
    require_positive(x, "powerexp");
    const Enclosure q = q_.at(n, ctx);
    return mul(q, pow(x, sub(q, Enclosure::exact(1, ctx.working()), ctx), ctx), ctx);
  }
  Enclosure log_eval(long n, const Enclosure& x, const PrecisionContext& ctx) const override {
    require_index(n);
    return mul(q_.at(n, ctx), ln(x, ctx), ctx);
  }
  Enclosure log_deriv(long n, const Enclosure& x, const PrecisionContext& ctx) const override {
    require_index(n);
    const Enclosure q = q_.at(n, ctx);
    return add(ln(q, ctx), mul(sub(q, Enclosure::exact(1, ctx.working()), ctx), ln(x, ctx), ctx), ctx);
  }
  bool derivative_increasing(long n) const override { return q_.log_at(n) >= 0; }

 protected:
  InversionHint hint(long n, const PrecisionContext& ctx) const override {
    InversionHint h;
    const Real q = q_.at(n, ctx).midpoint(ctx.working());
    h.guess = [q](const Real& t, mpfr_prec_t prec) {
      if (t.sign() <= 0) return Real::from_si(1, prec);
      Real r(prec);
      mpfr_log(r.get(), t.get(), MPFR_RNDN);
      mpfr_div(r.get(), r.get(), q.get(), MPFR_RNDN);
      mpfr_exp(r.get(), r.get(), MPFR_RNDN);
      return clamp_guess(std::move(r), prec);
    };
    return h;
  }

 private:
  Sequence q_;
};

class LinearFamily final : public FunctionFamily {
 public:
  explicit LinearFamily(Sequence a) : a_(std::move(a)) {}

  FamilyKind kind() const override { return FamilyKind::Linear; }
  std::string id() const override { return "linear a=" + a_.spec(); }
  Domain domain() const override { return open_from(0); }
  std::optional<long> max_index() const override { return a_.length(); }
  bool is_linear() const override { return true; }
  bool derivative_increasing(long) const override { return true; }
  const Sequence& coefficients() const { return a_; }

  Enclosure eval(long n, const Enclosure& x, const PrecisionContext& ctx) const override {
    require_index(n);
    return mul(a_.at(n, ctx), x, ctx);
  }
  Enclosure deriv(long n, const Enclosure&, const PrecisionContext& ctx) const override {
    require_index(n);
    return a_.at(n, ctx);
  }
  Enclosure log_eval(long n, const Enclosure& x, const PrecisionContext& ctx) const override {
    require_index(n);
    return add(ln(a_.at(n, ctx), ctx), ln(x, ctx), ctx);
  }
  Enclosure log_deriv(long n, const Enclosure&, const PrecisionContext& ctx) const override {
    require_index(n);
    return ln(a_.at(n, ctx), ctx);
  }

 protected:
  InversionHint hint(long n, const PrecisionContext& ctx) const override {
    InversionHint h;
    const Real a = a_.at(n, ctx).midpoint(ctx.working());
    h.guess = [a](const Real& t, mpfr_prec_t prec) {
      Real r(prec);
      mpfr_div(r.get(), t.get(), a.get(), MPFR_RNDN);
      return r;
    };
    return h;
  }

 private:
  Sequence a_;
};

class GenericFamily final : public FunctionFamily {
 public:
  explicit GenericFamily(GenericFamilySpec spec) : spec_(std::move(spec)) {
    if (!spec_.eval || !spec_.deriv) throw ConfigError("generic family needs eval and deriv");
  }

  FamilyKind kind() const override { return FamilyKind::Generic; }
  std::string id() const override { return "generic " + spec_.name; }
  Domain domain() const override { return spec_.domain; }
  bool is_linear() const override { return spec_.is_linear; }
  bool derivative_increasing(long) const override { return spec_.derivative_increasing; }

  Enclosure eval(long n, const Enclosure& x, const PrecisionContext& ctx) const override {
    require_index(n);
    return spec_.eval(n, x, ctx);
  }
  Enclosure deriv(long n, const Enclosure& x, const PrecisionContext& ctx) const override {
    require_index(n);
    return spec_.deriv(n, x, ctx);
  }

 private:
  GenericFamilySpec spec_;
};

}  // namespace

FamilyPtr make_power() { return std::make_shared<PowerFamily>(); }
FamilyPtr make_power_exponent(Sequence q) { return std::make_shared<PowerExponentFamily>(std::move(q)); }
FamilyPtr make_linear(Sequence a) { return std::make_shared<LinearFamily>(std::move(a)); }
FamilyPtr make_generic(GenericFamilySpec spec) { return std::make_shared<GenericFamily>(std::move(spec)); }

const Sequence* family_sequence(const FunctionFamily& fam) {
  if (const auto* p = dynamic_cast<const PowerExponentFamily*>(&fam)) return &p->exponents();
  if (const auto* l = dynamic_cast<const LinearFamily*>(&fam)) return &l->coefficients();
  return nullptr;
}

FamilyPtr parse_family(std::string_view text) {
  const std::string t = detail::trim(text);
  if (t == "power") return make_power();
  const auto space = t.find(' ');
  const std::string head = t.substr(0, space);
  if (head != "powerexp" && head != "linear") throw ConfigError("unknown family '" + t + "'");
  if (space == std::string::npos) throw ConfigError("family '" + head + "' needs a sequence argument");
  const std::string arg = detail::trim(t.substr(space + 1));
  const auto eq = arg.find('=');
  if (eq == std::string::npos) throw ConfigError("expected '<name>=<sequence>' in '" + t + "'");
  const std::string key = detail::trim(arg.substr(0, eq));
  Sequence seq = Sequence::parse(arg.substr(eq + 1));
  if (head == "powerexp") {
    if (key != "q") throw ConfigError("powerexp takes q=<sequence>");
    return make_power_exponent(std::move(seq));
  }
  if (key != "a") throw ConfigError("linear takes a=<sequence>");
  return make_linear(std::move(seq));
}

}  // namespace fracpow
