#include "fracpow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "parse_util.hpp"

namespace fracpow {

std::string_view to_string(Membership m) {
  switch (m) {
    case Membership::Pass: return "pass";
    case Membership::Fail: return "fail";
    case Membership::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

namespace {

long resolve_cap(long requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FRACPOW_MAX_BITS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 64) return v;
  }
  return 1L << 24;
}

PrecisionContext plain(mpfr_prec_t bits) { return PrecisionContext(static_cast<int>(std::max<mpfr_prec_t>(bits, 64)), 0); }

double log2_upper(const Enclosure& x) {
  const double h = x.hi().to_double(MPFR_RNDU);
  return std::isfinite(h) && h > 0 ? std::log2(h) : 0.0;
}

// Strict: pass iff value < threshold. Otherwise pass iff value <= threshold.
Membership classify(const Enclosure& margin, bool strict) {
  if (strict) {
    if (margin.hi().sign() < 0) return Membership::Pass;
    if (margin.lo().sign() >= 0) return Membership::Fail;
  } else {
    if (margin.hi().sign() <= 0) return Membership::Pass;
    if (margin.lo().sign() > 0) return Membership::Fail;
  }
  return Membership::Indeterminate;
}

// Re-evaluates `margin_at` with doubling precision until it is decided, the cap
// is reached, or the enclosure stops shrinking.
IndexMargin decide(long n, mpfr_prec_t start, long cap, bool strict,
                   const std::function<Enclosure(mpfr_prec_t)>& margin_at) {
  IndexMargin out;
  out.n = n;
  mpfr_prec_t bits = std::min<mpfr_prec_t>(std::max<mpfr_prec_t>(start, 64), cap);
  double last_width = std::numeric_limits<double>::infinity();
  while (true) {
    out.margin = margin_at(bits);
    out.bits = static_cast<int>(bits);
    out.status = classify(out.margin, strict);
    if (out.status != Membership::Indeterminate || bits >= cap) break;
    const double w = out.margin.width(64).to_double(MPFR_RNDU);
    if (!(w < 0.5 * last_width)) break;
    last_width = w;
    bits = std::min<mpfr_prec_t>(2 * bits, cap);
  }
  return out;
}

void summarize(MembershipVerdict& v) {
  v.verdict = Membership::Pass;
  for (const auto& m : v.margins) {
    if (m.status == Membership::Fail) {
      v.verdict = Membership::Fail;
      if (!v.first_failure) v.first_failure = m.n;
    } else if (m.status == Membership::Indeterminate && v.verdict == Membership::Pass) {
      v.verdict = Membership::Indeterminate;
    }
  }
}

void require_above_one(const Enclosure& x) {
  if (!(x.lo() > Real::from_si(1, 64))) throw DomainError("x must be > 1");
}

Enclosure constant_sqrt_fixture(long radicand, long add_num, long denom, mpfr_prec_t prec) {
  const PrecisionContext ctx = plain(prec);
  Enclosure r = sqrt(Enclosure::exact(radicand, prec), ctx);
  r = add(r, Enclosure::exact(add_num, prec), ctx);
  return div(r, Enclosure::exact(denom, prec), ctx);
}

}  // namespace

XProvider fixed_x(const Enclosure& x) {
  return [x](mpfr_prec_t) { return x; };
}

XProvider pisot_fixture(std::string_view name) {
  if (name == "golden" || name == "phi") return [](mpfr_prec_t p) { return constant_sqrt_fixture(5, 1, 2, p); };
  if (name == "silver") return [](mpfr_prec_t p) { return constant_sqrt_fixture(2, 1, 1, p); };
  throw ConfigError("unknown fixture '" + std::string(name) + "'");
}

XProvider parse_x(std::string_view text) {
  const std::string t = detail::trim(text);
  if (t == "golden" || t == "phi" || t == "silver") return pisot_fixture(t);
  Enclosure::from_text(t, 64);
  return [t](mpfr_prec_t p) { return Enclosure::from_text(t, p); };
}

Enclosure power_distance(const Enclosure& x, const TargetSequence& target, long n, mpfr_prec_t prec) {
  const PrecisionContext ctx = plain(prec);
  return dist_to_nearest_integer(sub(pow_int(x, n, ctx), target.at(n, ctx.working()), ctx), ctx);
}

std::optional<Real> failing_base(const Enclosure& distance, long n) {
  if (n < 1) throw DomainError("index must be >= 1");
  if (distance.lo().sign() <= 0) return std::nullopt;
  // b'^{-n} = distance.lo / 2 < distance
  const PrecisionContext ctx = plain(distance.precision() + 64);
  const Enclosure half = div(Enclosure::point(distance.lo()), Enclosure::exact(2, 64), ctx);
  const Enclosure b = exp(neg(div(ln(half, ctx), Enclosure::exact(n, 64), ctx)), ctx);
  return b.hi();
}

MembershipVerdict verify_asymptotic(const XProvider& x, const TargetSequence& target, const DecimalReal& b,
                                    const std::vector<long>& indices, const OracleOptions& opts) {
  if (indices.empty()) throw DomainError("indices must be non-empty");
  const Enclosure b0 = b.at(64);
  if (!(b0.lo() > Real::from_si(1, 64))) throw DomainError("b must be > 1");
  const long cap = resolve_cap(opts.max_bits);
  const Enclosure x0 = x(64);
  require_above_one(x0);
  MembershipVerdict out;
  out.condition = "asymptotic ||x^n - y_n|| < b^-n";
  out.n_min = *std::min_element(indices.begin(), indices.end());
  out.n_max = *std::max_element(indices.begin(), indices.end());
  const double lx = log2_upper(x0), lb = log2_upper(b0);
  for (long n : indices) {
    if (n < 1) throw DomainError("indices must be >= 1");
    const auto start = static_cast<mpfr_prec_t>(std::ceil(n * (lx + lb))) + 64;
    out.margins.push_back(decide(n, start, cap, true, [&](mpfr_prec_t p) {
      const PrecisionContext ctx = plain(p);
      return sub(power_distance(x(p), target, n, p), pow_int(b.at(p), -n, ctx), ctx);
    }));
  }
  summarize(out);
  return out;
}

MembershipVerdict verify_asymptotic(const Enclosure& x, const TargetSequence& target, const DecimalReal& b,
                                    const std::vector<long>& indices, const OracleOptions& opts) {
  return verify_asymptotic(fixed_x(x), target, b, indices, opts);
}

MembershipVerdict verify_asymptotic_tau(const Enclosure& x, const FunctionFamily& fam, const TargetSequence& target,
                                        const DecimalReal& tau, const std::vector<long>& indices,
                                        const OracleOptions& opts) {
  if (indices.empty()) throw DomainError("indices must be non-empty");
  if (!fam.contains(x)) throw DomainError("x is outside the family domain");
  const long cap = resolve_cap(opts.max_bits);
  MembershipVerdict out;
  out.condition = "asymptotic ||f_n(x) - y_n|| < f_n(x)^-tau";
  out.n_min = *std::min_element(indices.begin(), indices.end());
  out.n_max = *std::max_element(indices.begin(), indices.end());
  const double t = tau.approx();
  for (long n : indices) {
    const double lf = std::max(0.0, fam.log_eval_at(n, x.hi().to_double(MPFR_RNDU)) / std::log(2.0));
    const auto start = static_cast<mpfr_prec_t>(std::ceil(lf * (1 + t))) + 64;
    out.margins.push_back(decide(n, start, cap, true, [&](mpfr_prec_t p) {
      const PrecisionContext ctx = plain(p);
      const Enclosure d = dist_to_nearest_integer(sub(fam.eval(n, x, ctx), target.at(n, p), ctx), ctx);
      const Enclosure thr = exp(neg(mul(tau.at(p), fam.log_eval(n, x, ctx), ctx)), ctx);
      return sub(d, thr, ctx);
    }));
  }
  summarize(out);
  return out;
}

MembershipVerdict verify_uniform(const XProvider& x, const TargetSequence& target, const DecimalReal& B, long N_min,
                                 long N_max, const OracleOptions& opts) {
  if (N_min < 1 || N_min > N_max) throw DomainError("need 1 <= N_min <= N_max");
  const Enclosure B0 = B.at(64);
  if (!(B0.lo() > Real::from_si(1, 64))) throw DomainError("B must be > 1");
  const Enclosure x0 = x(64);
  require_above_one(x0);
  const long cap = resolve_cap(opts.max_bits);
  MembershipVerdict out;
  out.condition = "uniform: some n <= N has ||x^n - y_n|| < B^-N";
  out.n_min = N_min;
  out.n_max = N_max;

  mpfr_prec_t bits = static_cast<mpfr_prec_t>(std::ceil(N_max * (log2_upper(x0) + log2_upper(B0)))) + 64;
  bits = std::min<mpfr_prec_t>(bits, cap);
  while (true) {
    const PrecisionContext ctx = plain(bits);
    const Enclosure xp = x(bits);
    std::vector<Enclosure> dist;
    for (long n = 1; n <= N_max; ++n) dist.push_back(power_distance(xp, target, n, bits));
    out.margins.clear();
    for (long N = N_min; N <= N_max; ++N) {
      const Enclosure thr = pow_int(B.at(bits), -N, ctx);
      IndexMargin im;
      im.n = N;
      im.bits = static_cast<int>(bits);
      bool any_pass = false, all_fail = true;
      std::optional<Enclosure> best;
      for (long n = 1; n <= N; ++n) {
        const Enclosure m = sub(dist[static_cast<size_t>(n - 1)], thr, ctx);
        const Membership s = classify(m, true);
        any_pass = any_pass || s == Membership::Pass;
        all_fail = all_fail && s == Membership::Fail;
        if (!best) {
          best = m;
        } else {
          best = Enclosure(m.lo() < best->lo() ? m.lo() : best->lo(), m.hi() < best->hi() ? m.hi() : best->hi());
        }
      }
      im.margin = *best;
      im.status = any_pass ? Membership::Pass : all_fail ? Membership::Fail : Membership::Indeterminate;
      out.margins.push_back(im);
    }
    summarize(out);
    if (out.verdict != Membership::Indeterminate || bits >= cap) break;
    bits = std::min<mpfr_prec_t>(2 * bits, cap);
  }
  return out;
}

MembershipVerdict verify_uniform(const Enclosure& x, const TargetSequence& target, const DecimalReal& B, long N_min,
                                 long N_max, const OracleOptions& opts) {
  return verify_uniform(fixed_x(x), target, B, N_min, N_max, opts);
}

MembershipVerdict verify_bad(const Enclosure& x, const FunctionFamily& fam, const TargetSequence& target,
                             const Sequence& delta, long N, const OracleOptions& opts) {
  if (N < 1) throw DomainError("N must be >= 1");
  if (!fam.contains(x)) throw DomainError("x is outside the family domain");
  const long cap = resolve_cap(opts.max_bits);
  MembershipVerdict out;
  out.condition = "bad ||f_n(x) - y_n|| <= delta_n";
  out.n_min = 1;
  out.n_max = N;
  for (long n = 1; n <= N; ++n) {
    const double lf = std::max(0.0, fam.log_eval_at(n, x.hi().to_double(MPFR_RNDU)) / std::log(2.0));
    const double ld = std::max(0.0, -std::log2(delta.approx(n)));
    const auto start = static_cast<mpfr_prec_t>(std::ceil(lf + ld)) + 64;
    out.margins.push_back(decide(n, start, cap, false, [&](mpfr_prec_t p) {
      const PrecisionContext ctx = plain(p);
      const Enclosure d = dist_to_nearest_integer(sub(fam.eval(n, x, ctx), target.at(n, p), ctx), ctx);
      return sub(d, delta.at(n, ctx), ctx);
    }));
  }
  summarize(out);
  return out;
}

PEstimate mahler_szekeres_P(const XProvider& x, long N, long first_index, const OracleOptions& opts) {
  if (first_index < 1 || N < first_index) throw DomainError("need 1 <= first_index <= N");
  const Enclosure x0 = x(64);
  require_above_one(x0);
  const long cap = resolve_cap(opts.max_bits);
  mpfr_prec_t bits = std::min<mpfr_prec_t>(static_cast<mpfr_prec_t>(std::ceil(N * log2_upper(x0))) + 128, cap);
  PEstimate best;
  while (true) {
    const PrecisionContext ctx = plain(bits);
    const Enclosure xp = x(bits);
    std::optional<Enclosure> min_val;
    long argmin = first_index;
    for (long n = first_index; n <= N; ++n) {
      const Enclosure d = power_distance(xp, TargetSequence{}, n, bits);
      Enclosure r;
      if (d.hi().sign() == 0) {
        r = Enclosure::exact(0, 64);
      } else if (d.lo().sign() <= 0) {
        r = Enclosure(Real::from_si(0, 64), exp(div(ln(Enclosure::point(d.hi()), ctx), Enclosure::exact(n, 64), ctx), ctx).hi());
      } else {
        r = exp(div(ln(d, ctx), Enclosure::exact(n, 64), ctx), ctx);
      }
      if (!min_val || r.mid() < min_val->mid()) {
        argmin = n;
      }
      min_val = min_val ? Enclosure(r.lo() < min_val->lo() ? r.lo() : min_val->lo(),
                                    r.hi() < min_val->hi() ? r.hi() : min_val->hi())
                        : r;
    }
    best.enclosure = *min_val;
    best.estimate = min_val->mid();
    best.argmin = argmin;
    if (min_val->width(64).to_double(MPFR_RNDU) < 1e-12 || bits >= cap) break;
    const mpfr_prec_t next = std::min<mpfr_prec_t>(2 * bits, cap);
    if (next == bits) break;
    bits = next;
    if (bits > 4 * (static_cast<mpfr_prec_t>(std::ceil(N * log2_upper(x0))) + 128)) break;
  }
  return best;
}

PEstimate mahler_szekeres_P(const Enclosure& x, long N, long first_index, const OracleOptions& opts) {
  return mahler_szekeres_P(fixed_x(x), N, first_index, opts);
}

double convergence_exponent(const Sequence& a, long N) {
  if (N < 10) throw DomainError("convergence_exponent needs N >= 10");
  double prev = -std::numeric_limits<double>::infinity();
  for (long n = 1; n <= N; ++n) {
    const double la = a.log_at(n);
    if (!std::isfinite(la)) throw DomainError("a_" + std::to_string(n) + " is not a positive finite value");
    if (!(la > prev)) throw DomainError("sequence must be increasing");
    prev = la;
  }
  if (!(prev > 0)) throw DomainError("sequence does not grow past 1 on the range");
  double best = 0;
  for (long n = N - (N + 1) / 2 + 1; n <= N; ++n) {
    const double la = a.log_at(n);
    if (la > 0) best = std::max(best, std::log(static_cast<double>(n)) / la);
  }
  return best;
}

}  // namespace fracpow
