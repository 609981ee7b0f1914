#include "fracpow/construction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "fracpow/family_analysis.hpp"
#include "parse_util.hpp"

namespace fracpow {

// ---------------------------------------------------------------------------
// Regimes

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string require_key(const std::vector<std::string>& parts, size_t i, const std::string& key) {
  if (i >= parts.size()) throw ConfigError("regime is missing '" + key + "=<value>'");
  const std::string& p = parts[i];
  const auto eq = p.find('=');
  if (eq == std::string::npos || detail::trim(p.substr(0, eq)) != key) {
    throw ConfigError("expected '" + key + "=<value>' in regime, got '" + p + "'");
  }
  return detail::trim(p.substr(eq + 1));
}

bool greater_than_one(const DecimalReal& r) { return r.at(64).lo() > Real::from_si(1, 64); }

}  // namespace

ApproxRegime parse_regime(std::string_view text) {
  std::vector<std::string> parts;
  for (auto& p : detail::split(detail::trim(text), ' ')) {
    if (!detail::trim(p).empty()) parts.push_back(detail::trim(p));
  }
  if (parts.empty()) throw ConfigError("empty regime");
  const std::string& head = parts[0];
  ApproxRegime r;
  if (head == "asym") {
    r = regime::Asymptotic{DecimalReal(require_key(parts, 1, "tau")), {}, {}};
  } else if (head == "asym-base") {
    r = regime::AsymptoticBase{DecimalReal(require_key(parts, 1, "b"))};
  } else if (head == "uniform") {
    r = regime::Uniform{DecimalReal(require_key(parts, 1, "B")), DecimalReal(require_key(parts, 2, "theta"))};
  } else if (head == "bad") {
    r = regime::Bad{Sequence::parse(require_key(parts, 1, "delta"))};
  } else {
    throw ConfigError("unknown regime '" + head + "'");
  }
  validate_regime(r);
  return r;
}

std::string regime_spec(const ApproxRegime& r) {
  return std::visit(Overloaded{
                        [](const regime::Asymptotic& a) {
                          return a.tau_of_x ? "asym tau=" + a.tau_name + "(x)" : "asym tau=" + a.tau.text();
                        },
                        [](const regime::AsymptoticBase& a) { return "asym-base b=" + a.b.text(); },
                        [](const regime::Uniform& u) { return "uniform B=" + u.B.text() + " theta=" + u.theta.text(); },
                        [](const regime::Bad& b) { return "bad delta=" + b.delta.spec(); },
                    },
                    r);
}

void validate_regime(const ApproxRegime& r) {
  std::visit(Overloaded{
                 [](const regime::Asymptotic& a) {
                   if (!a.tau_of_x && !greater_than_one(a.tau)) throw DomainError("tau must be > 1");
                 },
                 [](const regime::AsymptoticBase& a) {
                   if (!greater_than_one(a.b)) throw DomainError("b must be > 1");
                 },
                 [](const regime::Uniform& u) {
                   if (!greater_than_one(u.B)) throw DomainError("B must be > 1");
                   if (!greater_than_one(u.theta)) throw DomainError("theta must be > 1");
                 },
                 [](const regime::Bad& b) {
                   const long checked = b.delta.length().value_or(64);
                   const PrecisionContext ctx(64);
                   const Enclosure quarter = Enclosure::from_text("1/4", 64);
                   for (long n = 1; n <= checked; ++n) {
                     const Enclosure d = b.delta.at(n, ctx);
                     if (!d.certainly_positive() || !d.certainly_less(quarter)) {
                       throw DomainError("delta_" + std::to_string(n) + " must lie in (0, 1/4)");
                     }
                   }
                 },
             },
             r);
}

// ---------------------------------------------------------------------------

Selector Selector::parse(std::string_view text) {
  const std::string t = detail::trim(text);
  if (t == "leftmost") return leftmost();
  if (t == "median") return median();
  if (t.rfind("seeded:", 0) == 0) {
    char* end = nullptr;
    const std::string num = t.substr(7);
    const unsigned long long s = std::strtoull(num.c_str(), &end, 10);
    if (num.empty() || *end != '\0') throw ConfigError("malformed selector seed '" + num + "'");
    return seeded(s);
  }
  throw ConfigError("unknown selector '" + t + "'");
}

std::string Selector::spec() const {
  switch (kind) {
    case Kind::Leftmost: return "leftmost";
    case Kind::Median: return "median";
    case Kind::Seeded: return "seeded:" + std::to_string(seed);
  }
  return {};
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kInf = std::numeric_limits<double>::infinity();

double tau_at(const regime::Asymptotic& a, double x) { return a.tau_of_x ? a.tau_of_x(x) : a.tau.approx(); }

Enclosure tau_enclosure(const regime::Asymptotic& a, const Enclosure& parent, mpfr_prec_t prec) {
  if (!a.tau_of_x) return a.tau.at(prec);
  const double t = a.tau_of_x(parent.mid());
  if (!(t > 0)) throw DomainError("tau(x) must be positive");
  return Enclosure::from_double(t);
}

// ln w for index n, as a double lower bound over the window (x <= x_hi).
double log_half_width(const ApproxRegime& regime, const FunctionFamily& fam, long n, double x_lo, double x_hi) {
  return std::visit(Overloaded{
                        [&](const regime::Asymptotic& a) {
                          double tau = tau_at(a, x_hi);
                          if (a.tau_of_x) tau = std::max({tau, tau_at(a, x_lo), tau_at(a, 0.5 * (x_lo + x_hi))});
                          return -tau * fam.log_eval_at(n, x_hi);
                        },
                        [&](const regime::AsymptoticBase& a) { return -static_cast<double>(n) * std::log(a.b.approx()); },
                        [&](const regime::Uniform& u) {
                          return -static_cast<double>(n) * u.theta.approx() * std::log(u.B.approx());
                        },
                        [&](const regime::Bad& b) { return std::log(b.delta.approx(n)); },
                    },
                    regime);
}

Enclosure inner_window(const DecimalReal& v, const DecimalReal& eps, mpfr_prec_t prec) {
  const PrecisionContext ctx(static_cast<int>(std::max<mpfr_prec_t>(prec, 64)), 0);
  const Enclosure e = eps.at(prec);
  if (!e.certainly_positive()) throw DomainError("eps must be positive, got " + eps.text());
  const Enclosure vv = v.at(prec);
  Enclosure lo = sub(vv, e, ctx), hi = add(vv, e, ctx);
  return Enclosure(lo.hi(), hi.lo());
}

long integers_in_level_one(const FunctionFamily& fam, const Enclosure& window, long n) {
  const double lf = fam.log_eval_at(n, window.hi().to_double()) / kLn2;
  const int bits = static_cast<int>(std::max(128.0, lf + 96));
  const PrecisionContext ctx(bits);
  const Enclosure fc = fam.eval(n, Enclosure::point(window.lo()), ctx);
  const Enclosure fd = fam.eval(n, Enclosure::point(window.hi()), ctx);
  const mpz_class kmin = ceil_of(add(fc, Enclosure::exact(1, 64), ctx).hi());
  const mpz_class kmax = floor_of(sub(fd, Enclosure::exact(1, 64), ctx).lo());
  if (kmax < kmin) return 0;
  const mpz_class count = kmax - kmin + 1;
  return count.fits_slong_p() ? count.get_si() : std::numeric_limits<long>::max();
}

struct Selection {
  const FunctionFamily& fam;
  const Enclosure window;
  const Enclosure v;
  const ApproxRegime& regime;
  double gamma;
  long max_index;
  const SelectionOptions& opts;
  double x_lo = window.lo().to_double(MPFR_RNDD);
  double x_hi = window.hi().to_double(MPFR_RNDU);
  double v_mid = v.mid();
  std::optional<double> M = std::nullopt;

  double L_v(long n) const { return fam.log_deriv_at(n, v_mid); }
  double L_inf(long n) const {
    const PrecisionContext ctx(64);
    if (fam.derivative_increasing(n)) return fam.log_deriv(n, Enclosure::point(window.lo()), ctx).lo().to_double();
    return fam.log_deriv(n, window, ctx).lo().to_double();
  }
  double L_sup(long n) const {
    const PrecisionContext ctx(64);
    if (fam.derivative_increasing(n)) return fam.log_deriv(n, Enclosure::point(window.hi()), ctx).hi().to_double();
    return fam.log_deriv(n, window, ctx).hi().to_double();
  }
  double log_w(long n) const { return log_half_width(regime, fam, n, x_lo, x_hi); }
  double eta_at(long n) const { return eta(fam, n, window); }

  bool admissible_start(long n) const {
    if (!(L_v(n) > 0)) return false;
    if (log_w(n) > std::log(0.25)) return false;
    return integers_in_level_one(fam, window, n) >= 3;
  }

  // Child-count guarantee: inf f'_n * 2 w_prev / sup f'_prev >= 5, leaving two children after the top one is dropped.
  bool child_guarantee(long prev, long n) const { return L_inf(n) + std::log(2.0) + log_w(prev) - L_sup(prev) >= std::log(5.0); }

  long find_start(long from = 1) const {
    for (long n = from; n <= max_index; ++n) {
      if (opts.policy == SelectionPolicy::PaperKi && !fam.is_linear()) {
        const double e = eta_at(n);
        if (!(e < gamma / (2 * *M))) continue;
      }
      if (admissible_start(n)) return n;
    }
    throw NoAdmissibleIndex("no starting index <= " + std::to_string(max_index) +
                            " gives three integers at level 1 with half-width <= 1/4");
  }

  template <typename Pred>
  long smallest_from(long start, Pred pred) const {
    if (start > max_index) return -1;
    if (pred(start)) return start;
    long lo = start, step = 1;
    long hi = start;
    while (true) {
      if (hi >= max_index) return -1;
      hi = std::min(max_index, start + step);
      if (pred(hi)) break;
      lo = hi;
      step *= 2;
    }
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      if (pred(mid)) hi = mid; else lo = mid;
    }
    return hi;
  }

  // Under both Ki bounds a small start can leave no admissible successor, so
  // later starts are tried in turn.
  std::vector<long> run() const {
    long start = find_start();
    if (opts.policy != SelectionPolicy::PaperKi || fam.is_linear()) return run_from(start);
    for (int attempt = 0;; ++attempt) {
      try {
        return run_from(start);
      } catch (const NoAdmissibleIndex&) {
        if (attempt >= kMaxStartAttempts || start >= max_index) throw;
      }
      start = find_start(start + 1);
    }
  }

  static constexpr int kMaxStartAttempts = 256;

  std::vector<long> run_from(long start) const {
    std::vector<long> out{start};
    double sparse_sum = L_v(out[0]) - log_w(out[0]);
    const long depth = opts.depth;
    while (static_cast<long>(out.size()) < depth) {
      const long prev = out.back();
      const long i = static_cast<long>(out.size());
      const bool sparse = i >= std::max<long>(depth - opts.sparse_levels, 2);
      const double e = fam.is_linear() ? 0.0 : eta_at(prev);
      const double Lp = L_v(prev);
      const double upper = e > 0 ? gamma / (2 * e) : kInf;
      const double lower = (opts.policy == SelectionPolicy::PaperKi && e > 0) ? gamma / (2 * e * *M) : 0.0;
      const double sparse_target = opts.kappa * sparse_sum;
      auto pred = [&](long n) {
        const double Ln = L_v(n);
        if (Ln < lower * Lp) return false;
        if (sparse && Ln < sparse_target) return false;
        return child_guarantee(prev, n);
      };
      const long n = smallest_from(prev + 1, pred);
      if (n < 0) {
        throw NoAdmissibleIndex("no index in (" + std::to_string(prev) + ", " + std::to_string(max_index) +
                                "] satisfies the lower growth requirements after n = " + std::to_string(prev));
      }
      if (L_v(n) > upper * Lp) {
        throw NoAdmissibleIndex("smallest admissible index " + std::to_string(n) + " after " + std::to_string(prev) +
                                " violates the distortion bound gamma/(2 eta) = " + std::to_string(upper));
      }
      out.push_back(n);
      sparse_sum += L_v(n) - log_w(n);
    }
    return out;
  }
};

mpz_class floor_theta_power(const DecimalReal& theta, long k) {
  for (int bits = 128; bits <= 1 << 16; bits *= 2) {
    const PrecisionContext ctx(bits);
    const Enclosure p = pow_int(theta.at(ctx.working()), k, ctx);
    const mpz_class a = floor_of(p.lo()), b = floor_of(p.hi());
    if (a == b) return a;
  }
  throw PrecisionExhausted("floor(theta^k) is not resolvable");
}

std::vector<long> uniform_indices(const regime::Uniform& u, long count, long max_index,
                                  const std::function<bool(long)>& skip) {
  std::vector<long> out;
  for (long k = 1; static_cast<long>(out.size()) < count; ++k) {
    const mpz_class nk = floor_theta_power(u.theta, k);
    if (!nk.fits_slong_p() || nk.get_si() > max_index) {
      throw NoAdmissibleIndex("floor(theta^" + std::to_string(k) + ") exceeds the index limit");
    }
    const long n = nk.get_si();
    if (n < 1 || (!out.empty() && n <= out.back())) continue;
    if (skip && skip(n)) continue;
    out.push_back(n);
  }
  return out;
}

}  // namespace

std::vector<long> select_subsequence(const FunctionFamily& fam, const Enclosure& v, const Enclosure& eps,
                                     double gamma, const ApproxRegime& regime, long max_index,
                                     const SelectionOptions& opts) {
  if (!(gamma > 0)) throw DomainError("gamma must be positive");
  if (max_index < 1) throw DomainError("max_index must be >= 1");
  if (opts.depth < 1) throw DomainError("selection depth must be >= 1");
  validate_regime(regime);
  if (const auto* u = std::get_if<regime::Uniform>(&regime)) {
    std::vector<long> out;
    for (long k = 1; k <= opts.depth; ++k) {
      const mpz_class nk = floor_theta_power(u->theta, k);
      if (!nk.fits_slong_p() || nk.get_si() > max_index) throw NoAdmissibleIndex("floor(theta^k) exceeds max_index");
      out.push_back(nk.get_si());
    }
    return out;
  }
  if (!eps.certainly_positive()) throw DomainError("eps must be positive");
  const PrecisionContext ctx(128);
  const Enclosure window(sub(v, eps, ctx).hi(), add(v, eps, ctx).lo());
  if (!fam.contains(window)) throw DomainError("window [v - eps, v + eps] is not inside the family domain");
  long limit = max_index;
  if (const auto m = fam.max_index()) limit = std::min(limit, *m);
  if (std::holds_alternative<regime::Bad>(regime)) {
    if (opts.depth > limit) throw NoAdmissibleIndex("bad regime needs indices 1.." + std::to_string(opts.depth));
    std::vector<long> out(static_cast<size_t>(opts.depth));
    for (long i = 0; i < opts.depth; ++i) out[static_cast<size_t>(i)] = i + 1;
    return out;
  }
  Selection sel{fam, window, v, regime, gamma, limit, opts};
  if (opts.policy == SelectionPolicy::PaperKi && !fam.is_linear()) {
    if (opts.M) {
      sel.M = opts.M;
    } else {
      const ConditionReport rep = check_conditions(fam, v, eps, 20);
      if (!rep.M_estimate) throw DomainError("cond-ext-2 fails; no finite M estimate: " + rep.cond_ext_2.detail);
      sel.M = rep.M_estimate;
    }
  }
  return sel.run();
}

// ---------------------------------------------------------------------------
// Levels

Enclosure regime_half_width(const ApproxRegime& regime, const FunctionFamily& fam, long n, const Enclosure& parent,
                            const PrecisionContext& ctx) {
  const mpfr_prec_t p = ctx.working();
  return std::visit(Overloaded{
                        [&](const regime::Asymptotic& a) {
                          const Enclosure tau = tau_enclosure(a, parent, p);
                          const Enclosure lf = fam.log_eval(n, Enclosure::point(parent.hi()), ctx);
                          return exp(neg(mul(tau, lf, ctx)), ctx);
                        },
                        [&](const regime::AsymptoticBase& a) { return pow_int(a.b.at(p), -n, ctx); },
                        [&](const regime::Uniform& u) {
                          const Enclosure e = mul(mul(u.theta.at(p), Enclosure::exact(n, p), ctx), ln(u.B.at(p), ctx), ctx);
                          return exp(neg(e), ctx);
                        },
                        [&](const regime::Bad& b) {
                          const Enclosure d = b.delta.at(n, ctx);
                          if (!d.certainly_positive() || !(d.hi() < Real::parse("0.25", 64))) {
                            throw DomainError("delta_" + std::to_string(n) + " must lie in (0, 1/4)");
                          }
                          return d;
                        },
                    },
                    regime);
}

ChildRange child_range(const FunctionFamily& fam, const Enclosure& parent, long n, const Enclosure& y,
                       const Enclosure& w, const PrecisionContext& ctx) {
  const Enclosure one = Enclosure::exact(1, 64);
  const Enclosure fc = fam.eval(n, Enclosure::point(parent.lo()), ctx);
  const Enclosure fd = fam.eval(n, Enclosure::point(parent.hi()), ctx);
  ChildRange r;
  r.k_min = ceil_of(add(fc, one, ctx).hi());
  r.k_max = floor_of(sub(fd, one, ctx).lo());
  if (r.k_max >= r.k_min) {
    const Enclosure top = add(add(Enclosure::exact(r.k_max, ctx.working()), y, ctx), w, ctx);
    if (!(top.hi() < fd.lo())) r.k_max -= 1;
  }
  return r;
}

Enclosure child_interval(const FunctionFamily& fam, const Enclosure& parent, long n, const mpz_class& k,
                         const Enclosure& y, const Enclosure& w, int tol_bits, const PrecisionContext& ctx) {
  const Enclosure base = add(Enclosure::exact(k, ctx.working()), y, ctx);
  const Enclosure t_lo = sub(base, w, ctx);
  const Enclosure t_hi = add(base, w, ctx);
  const Enclosure a = fam.invert(n, t_lo, parent, tol_bits, ctx);
  const Enclosure b = fam.invert(n, t_hi, parent, tol_bits, ctx);
  if (!(a.hi() < b.lo())) throw NonConvergence("child for k = " + k.get_str() + " collapses at this precision");
  Enclosure child(a.hi(), b.lo());
  const Enclosure img = fam.eval(n, child, ctx);
  if (!(img.lo() >= t_lo.hi() && img.hi() <= t_hi.lo())) {
    throw NonConvergence("image of the child for k = " + k.get_str() + " is not certified inside its target");
  }
  if (!parent.strictly_contains(child)) {
    throw NonConvergence("child for k = " + k.get_str() + " is not strictly inside its parent");
  }
  return child;
}

std::vector<Child> level_children(const FunctionFamily& fam, const Enclosure& parent, long n, const Enclosure& y,
                                  const Enclosure& w, const PrecisionContext& ctx, long limit) {
  if (!w.certainly_positive()) throw DomainError("half-width must be positive");
  if (w.hi() > Real::parse("0.25", 64)) throw DomainError("half-width must be <= 1/4");
  if (!fam.contains(parent)) throw DomainError("parent interval is not inside the family domain");
  const ChildRange r = child_range(fam, parent, n, y, w, ctx);
  const mpz_class count = r.count();
  if (count == 0) {
    throw EmptyLevel("no integer k in [f_" + std::to_string(n) + "(c) + 1, f_" + std::to_string(n) + "(d) - 1]");
  }
  if (count > limit) throw OutOfRange("level has " + count.get_str() + " children, more than the limit");
  // Children cannot be resolved more finely than the inputs allow.
  int tol = static_cast<int>(ctx.working()) - 16;
  for (const Enclosure* e : {&y, &w}) {
    if (!e->is_point()) tol = std::min(tol, static_cast<int>(-mpfr_get_exp(e->width(64).get())) - 8);
  }
  tol = std::max(tol, 8);
  std::vector<Child> out;
  for (mpz_class k = r.k_min; k <= r.k_max; ++k) {
    out.push_back({k, child_interval(fam, parent, n, k, y, w, tol, ctx)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// construct

namespace {

struct LevelPlan {
  int bits = 0;  // without guard
  int tol_bits = 0;
};

LevelPlan plan_level(const FunctionFamily& fam, long n, double x_hi, double log_w) {
  const double l2fp = std::max(0.0, fam.log_deriv_at(n, x_hi) / kLn2);
  const double l2f = std::max(0.0, fam.log_eval_at(n, x_hi) / kLn2);
  const double l2w = std::max(1.0, -log_w / kLn2);
  LevelPlan p;
  const double bits = std::ceil(l2fp) + std::ceil(l2w) + std::ceil(std::log2(std::abs(x_hi)) + 1);
  p.bits = static_cast<int>(std::max({bits, std::ceil(l2f) + 64, 64.0}));
  p.tol_bits = static_cast<int>(std::ceil(l2fp + l2w)) + 24;
  return p;
}

long default_max_bits(long requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FRACPOW_MAX_BITS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 64) return v;
  }
  return 1L << 24;
}

mpz_class pick(const Selector& s, const ChildRange& r, long level) {
  switch (s.kind) {
    case Selector::Kind::Leftmost: return r.k_min;
    case Selector::Kind::Median: return r.k_min + (r.k_max - r.k_min) / 2;
    case Selector::Kind::Seeded: {
      gmp_randclass rng(gmp_randinit_mt);
      rng.seed(mpz_class(static_cast<unsigned long>(splitmix64(s.seed ^ (0xA0761D6478BD642FULL * static_cast<std::uint64_t>(level))))));
      return r.k_min + rng.get_z_range(r.count());
    }
  }
  return r.k_min;
}

// Minimal gap between consecutive children in `r`.
Enclosure minimal_gap(const FunctionFamily& fam, const Enclosure& parent, long n, const ChildRange& r,
                      const Enclosure& y, const Enclosure& w, int tol, const PrecisionContext& ctx) {
  auto gap = [&](const mpz_class& k) {
    const Enclosure left = child_interval(fam, parent, n, k, y, w, tol, ctx);
    const Enclosure right = child_interval(fam, parent, n, k + 1, y, w, tol, ctx);
    Real lo(ctx.working()), hi(ctx.working());
    mpfr_sub(lo.get(), right.lo().get(), left.hi().get(), MPFR_RNDD);
    mpfr_sub(hi.get(), right.lo().get(), left.hi().get(), MPFR_RNDU);
    return Enclosure(std::move(lo), std::move(hi));
  };
  if (fam.derivative_increasing(n)) return gap(r.k_max - 1);  // f_n' is largest on the right
  const Enclosure g_left = gap(r.k_min);
  const Enclosure g_right = r.count() > 2 ? gap(r.k_max - 1) : g_left;
  // Mean value bound (1 - 2w) / sup f_n' below every gap.
  const Enclosure mvt = div(sub(Enclosure::exact(1, 64), mul(Enclosure::exact(2, 64), w, ctx), ctx),
                            fam.deriv(n, parent, ctx), ctx);
  Real lo = mvt.lo();
  if (g_left.lo() < lo) lo = g_left.lo();
  if (g_right.lo() < lo) lo = g_right.lo();
  Real hi = g_left.hi() < g_right.hi() ? g_left.hi() : g_right.hi();
  if (hi < lo) hi = lo;
  return Enclosure(std::move(lo), std::move(hi));
}

void precheck(const FunctionFamily& fam, const Enclosure& window, const DecimalReal& v, const DecimalReal& eps,
              const ApproxRegime& regime, long depth) {
  if (std::holds_alternative<regime::Uniform>(regime) && fam.kind() != FamilyKind::Power) {
    throw DomainError("the uniform regime requires the power family");
  }
  const bool asym = std::holds_alternative<regime::Asymptotic>(regime) ||
                    std::holds_alternative<regime::AsymptoticBase>(regime);
  if (asym && !fam.is_linear()) {
    const ConditionReport rep = check_conditions(fam, v.at(128), eps.at(128), 20);
    if (rep.cond_ext_2.verdict == Verdict::Fails) {
      throw DomainError("cond-ext-2 fails for " + fam.id() + ": " + rep.cond_ext_2.detail);
    }
  }
  if (const auto* b = std::get_if<regime::Bad>(&regime)) {
    const PrecisionContext ctx(128);
    const Enclosure ln2 = ln(Enclosure::exact(2, 64), ctx);
    for (long n = 1; n + 1 <= depth; ++n) {
      if (!(fam.derivative_increasing(n) && fam.derivative_increasing(n + 1))) continue;
      const Enclosure m = add(sub(fam.log_deriv(n + 1, Enclosure::point(window.lo()), ctx),
                                  fam.log_deriv(n, Enclosure::point(window.hi()), ctx), ctx),
                              ln(b->delta.at(n, ctx), ctx), ctx);
      if (m.hi() < ln2.lo()) {
        throw DomainError("hyp-1 fails at n = " + std::to_string(n) + " on the window; children cannot be guaranteed");
      }
    }
  }
}

}  // namespace

ConstructionCertificate construct(const FunctionFamily& fam, const DecimalReal& v, const DecimalReal& eps,
                                  const ApproxRegime& regime, const TargetSequence& target, long depth,
                                  const ConstructOptions& opts) {
  if (depth < 1) throw DomainError("depth must be >= 1");
  validate_regime(regime);
  const Enclosure window = inner_window(v, eps, 128);
  if (!fam.contains(window)) throw DomainError("window [v - eps, v + eps] is not inside the domain of " + fam.id());
  precheck(fam, window, v, eps, regime, depth);
  const long max_bits = default_max_bits(opts.max_bits);

  std::vector<long> subsequence;
  if (const auto* u = std::get_if<regime::Uniform>(&regime)) {
    subsequence = uniform_indices(*u, depth, opts.max_index,
                                  [&](long n) { return integers_in_level_one(fam, window, n) < 3; });
    // Only the first index needs three integers; later ones are taken as they come.
    const long first = subsequence.front();
    subsequence = uniform_indices(*u, depth, opts.max_index, [&](long n) { return n < first; });
  } else {
    SelectionOptions sel = opts.selection;
    sel.depth = depth;
    subsequence = select_subsequence(fam, v.at(128), eps.at(128), opts.gamma, regime, opts.max_index, sel);
  }

  ConstructionCertificate cert;
  cert.regime = regime_spec(regime);
  cert.family = fam.id();
  cert.target = target.spec();
  cert.selector = opts.selector.spec();
  cert.v = v;
  cert.eps = eps;
  cert.gamma = DecimalReal(std::to_string(opts.gamma));
  cert.window = window;
  cert.subsequence = subsequence;
  cert.guard_bits = opts.guard_bits;

  const double x_lo = window.lo().to_double(MPFR_RNDD);
  const double x_hi = window.hi().to_double(MPFR_RNDU);
  Enclosure parent = window;
  for (long i = 1; i <= depth; ++i) {
    const long n = subsequence[static_cast<size_t>(i - 1)];
    LevelPlan plan = plan_level(fam, n, x_hi, log_half_width(regime, fam, n, x_lo, x_hi));
    while (true) {
      if (plan.bits + opts.guard_bits > max_bits) {
        throw PrecisionExhausted("level " + std::to_string(i) + " needs more than " + std::to_string(max_bits) +
                                 " bits");
      }
      const PrecisionContext ctx(plan.bits, opts.guard_bits);
      try {
        LevelRecord rec;
        rec.level = i;
        rec.n = n;
        rec.bits = static_cast<int>(ctx.working());
        rec.tol_bits = plan.tol_bits;
        rec.target = target.at(n, ctx.working());
        rec.half_width = regime_half_width(regime, fam, n, parent, ctx);
        if (rec.half_width.hi() > Real::parse("0.25", 64)) {
          throw DomainError("half-width at level " + std::to_string(i) + " exceeds 1/4");
        }
        const ChildRange range = child_range(fam, parent, n, rec.target, rec.half_width, ctx);
        rec.child_count = range.count();
        if (rec.child_count == 0) {
          throw EmptyLevel("level " + std::to_string(i) + " (n = " + std::to_string(n) + ") has no admissible integer");
        }
        if (i >= 2 && rec.child_count < 2) {
          throw EmptyLevel("level " + std::to_string(i) + " (n = " + std::to_string(n) + ") has a single child");
        }
        rec.k = pick(opts.selector, range, i);
        rec.interval = child_interval(fam, parent, n, rec.k, rec.target, rec.half_width, plan.tol_bits, ctx);
        if (rec.child_count >= 2) {
          rec.min_gap = minimal_gap(fam, parent, n, range, rec.target, rec.half_width, plan.tol_bits, ctx);
        }
        cert.precision_schedule.push_back(rec.bits);
        parent = rec.interval;
        cert.levels.push_back(std::move(rec));
        break;
      } catch (const NonConvergence&) {
        plan.bits = plan.bits + plan.bits / 2;
      }
    }
  }
  cert.witness = Enclosure::point(parent.midpoint(parent.precision() + 2));
  return cert;
}

// ---------------------------------------------------------------------------
// replay

namespace {

bool same(const Enclosure& a, const Enclosure& b) { return a.lo() == b.lo() && a.hi() == b.hi(); }

ReplayResult fail(long level, std::string why) { return ReplayResult{false, level, std::move(why)}; }

}  // namespace

ReplayResult replay(const ConstructionCertificate& cert, const FunctionFamily& fam, const ApproxRegime& regime) {
  try {
    if (cert.family != fam.id()) return fail(0, "certificate family '" + cert.family + "' does not match " + fam.id());
    const TargetSequence target = TargetSequence::parse(cert.target);
    const Enclosure window = inner_window(cert.v, cert.eps, 128);
    if (!same(window, cert.window)) return fail(0, "window does not match v and eps");
    if (cert.levels.size() != cert.subsequence.size()) return fail(0, "subsequence length differs from level count");
    if (cert.precision_schedule.size() != cert.levels.size()) return fail(0, "precision schedule length mismatch");
    if (cert.levels.empty()) return ReplayResult{};
    Enclosure parent = cert.window;
    for (size_t idx = 0; idx < cert.levels.size(); ++idx) {
      const LevelRecord& rec = cert.levels[idx];
      const long i = static_cast<long>(idx) + 1;
      if (rec.level != i) return fail(i, "level index out of order");
      if (rec.n != cert.subsequence[idx]) return fail(i, "function index differs from the subsequence");
      if (idx > 0 && rec.n <= cert.levels[idx - 1].n) return fail(i, "function indices are not increasing");
      if (rec.bits != cert.precision_schedule[idx]) return fail(i, "precision differs from the schedule");
      if (rec.bits - cert.guard_bits < PrecisionContext::kMinBits) return fail(i, "recorded precision too small");
      const PrecisionContext ctx(rec.bits - cert.guard_bits, cert.guard_bits);

      const Enclosure y = target.at(rec.n, ctx.working());
      if (!same(y, rec.target)) return fail(i, "target value y_n does not match the target sequence");
      const Enclosure w = regime_half_width(regime, fam, rec.n, parent, ctx);
      if (!same(w, rec.half_width)) return fail(i, "half-width does not match the regime");

      const ChildRange range = child_range(fam, parent, rec.n, y, w, ctx);
      if (range.count() != rec.child_count) {
        return fail(i, "child count " + rec.child_count.get_str() + " differs from recomputed " + range.count().get_str());
      }
      if (i >= 2 && rec.child_count < 2) return fail(i, "fewer than two children");
      if (rec.k < range.k_min || rec.k > range.k_max) return fail(i, "chosen integer k outside the admissible range");

      // Sound checks on the recorded interval itself.
      if (!parent.strictly_contains(rec.interval)) return fail(i, "interval is not strictly inside its parent");
      const Enclosure base = add(Enclosure::exact(rec.k, ctx.working()), y, ctx);
      const Enclosure img = fam.eval(rec.n, rec.interval, ctx);
      if (!(img.lo() >= sub(base, w, ctx).hi() && img.hi() <= add(base, w, ctx).lo())) {
        return fail(i, "f_n(interval) is not inside [k + y - w, k + y + w]");
      }
      const Enclosure again = child_interval(fam, parent, rec.n, rec.k, y, w, rec.tol_bits, ctx);
      if (!same(again, rec.interval)) return fail(i, "interval differs from its recomputation");

      if (rec.child_count >= 2) {
        if (!rec.min_gap) return fail(i, "missing minimal gap");
        if (!rec.min_gap->certainly_positive()) return fail(i, "children are not disjoint");
        const Enclosure g = minimal_gap(fam, parent, rec.n, range, y, w, rec.tol_bits, ctx);
        if (!same(g, *rec.min_gap)) return fail(i, "minimal gap differs from its recomputation");
      } else if (rec.min_gap) {
        return fail(i, "gap recorded for a single child");
      }
      if (!rec.interval.contains(cert.witness)) return fail(i, "witness lies outside the level interval");
      parent = rec.interval;
    }
    const Enclosure w_again = Enclosure::point(parent.midpoint(parent.precision() + 2));
    if (!same(w_again, cert.witness)) return fail(static_cast<long>(cert.levels.size()), "witness is not the midpoint");
  } catch (const Error& e) {
    return fail(0, std::string(to_string(e.code())) + ": " + e.what());
  }
  return ReplayResult{};
}

ReplayResult replay(const ConstructionCertificate& cert, const FunctionFamily& fam) {
  ApproxRegime regime;
  try {
    regime = parse_regime(cert.regime);
  } catch (const Error& e) {
    return fail(0, std::string("cannot rebuild regime: ") + e.what());
  }
  return replay(cert, fam, regime);
}

// ---------------------------------------------------------------------------

ClosedFormCheck check_uniform_closed_forms(const ConstructionCertificate& cert) {
  ClosedFormCheck out;
  const ApproxRegime r = parse_regime(cert.regime);
  const auto* u = std::get_if<regime::Uniform>(&r);
  if (!u) throw DomainError("closed forms apply to uniform certificates only");
  const PrecisionContext ctx(256);
  const mpfr_prec_t p = ctx.working();
  const Enclosure b = exp(mul(u->theta.at(p), ln(u->B.at(p), ctx), ctx), ctx);
  const Enclosure two = Enclosure::exact(2, p);
  for (size_t j = 1; j < cert.levels.size(); ++j) {
    const LevelRecord& prev = cert.levels[j - 1];
    const LevelRecord& cur = cert.levels[j];
    const long n = prev.n, n1 = cur.n;
    const Enclosure c = Enclosure::point(prev.interval.lo());
    const Enclosure d = Enclosure::point(prev.interval.hi());
    // m = 2 n' x^{n'-1} / (n b^n z^{n-1})
    auto closed_m = [&](const Enclosure& x, const Enclosure& z) {
      const Enclosure num = mul(mul(two, Enclosure::exact(n1, p), ctx), pow_int(x, n1 - 1, ctx), ctx);
      const Enclosure den = mul(mul(Enclosure::exact(n, p), pow_int(b, n, ctx), ctx), pow_int(z, n - 1, ctx), ctx);
      return div(num, den, ctx);
    };
    const double slack = 1e-6;
    const double lo_m = closed_m(c, d).lo().to_double(MPFR_RNDD) * (1 - slack) - 4;
    const double hi_m = closed_m(d, c).hi().to_double(MPFR_RNDU) * (1 + slack) - 1;
    const double m = cur.child_count.get_d();
    if (m < lo_m || m > hi_m) {
      out.ok = false;
      out.failure = "level " + std::to_string(cur.level) + ": m = " + cur.child_count.get_str() +
                    " outside closed-form bounds [" + std::to_string(lo_m) + ", " + std::to_string(hi_m) + "]";
      return out;
    }
    if (cur.min_gap) {
      // eps = (1 - 2 b^{-n'}) / (n' x^{n'-1}) for some x in [c, d]
      const Enclosure one_minus = sub(Enclosure::exact(1, p), mul(two, pow_int(b, -n1, ctx), ctx), ctx);
      auto closed_eps = [&](const Enclosure& x) {
        return div(one_minus, mul(Enclosure::exact(n1, p), pow_int(x, n1 - 1, ctx), ctx), ctx);
      };
      const double e_lo = closed_eps(d).lo().to_double(MPFR_RNDD);
      const double e_hi = closed_eps(c).hi().to_double(MPFR_RNDU);
      const double tol = std::ldexp(1.0, -cur.tol_bits + 3);
      const double g_lo = cur.min_gap->lo().to_double(MPFR_RNDD);
      const double g_hi = cur.min_gap->hi().to_double(MPFR_RNDU);
      if (g_lo < e_lo * (1 - slack) - tol || g_hi > e_hi * (1 + slack) + tol) {
        out.ok = false;
        out.failure = "level " + std::to_string(cur.level) + ": gap outside closed-form bounds";
        return out;
      }
    }
  }
  return out;
}

}  // namespace fracpow
