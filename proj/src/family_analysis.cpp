#include "fracpow/family_analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fracpow {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::HoldsAtDepth: return "holds-at-depth";
    case Verdict::Fails: return "fails";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const PrecisionContext kCtx(128);

void require_in_domain(const FunctionFamily& fam, const Enclosure& x, const char* what) {
  if (!fam.contains(x)) {
    throw DomainError(std::string(what) + " [" + x.lo().to_decimal() + ", " + x.hi().to_decimal() +
                      "] is not inside the domain of " + fam.id());
  }
}

void require_terms(const FunctionFamily& fam, long N) {
  if (const auto m = fam.max_index(); m && *m < N) {
    throw DomainError(fam.id() + " defines only " + std::to_string(*m) + " functions, " + std::to_string(N) +
                      " requested");
  }
}

Enclosure window_of(const Enclosure& v, const Enclosure& eps) {
  if (!eps.certainly_positive()) throw DomainError("window radius must be positive");
  return Enclosure(sub(v, eps, kCtx).lo(), add(v, eps, kCtx).hi());
}

size_t tail_start(size_t count) { return count - (count + 1) / 2; }

// Head = first floor(m/2) entries, tail = last ceil(m/2) entries of a prefix.
struct Split {
  double head_max = -kInf;
  double tail_max = -kInf;
  double tail_min = kInf;
  long tail_max_n = 0;
  long tail_min_n = 0;
};

Split split_prefix(const std::vector<SeriesPoint>& s, size_t m) {
  Split out;
  const size_t t0 = tail_start(m);
  for (size_t i = 0; i < m; ++i) {
    const double val = s[i].value;
    if (i < t0) {
      out.head_max = std::max(out.head_max, val);
    } else {
      if (val > out.tail_max) {
        out.tail_max = val;
        out.tail_max_n = s[i].n;
      }
      if (val < out.tail_min) {
        out.tail_min = val;
        out.tail_min_n = s[i].n;
      }
    }
  }
  return out;
}

template <typename FailsAt>
std::optional<size_t> first_failing_prefix(const std::vector<SeriesPoint>& s, FailsAt fails) {
  for (size_t m = std::min<size_t>(10, s.size()); m <= s.size(); ++m) {
    if (m >= 4 && fails(split_prefix(s, m))) return m;
  }
  return std::nullopt;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double analytic_eta(const FunctionFamily& fam, long n, const Enclosure& window) {
  double q = 0;
  if (fam.kind() == FamilyKind::Power) {
    q = static_cast<double>(n);
  } else {
    q = std::exp(family_sequence(fam)->log_at(n));
  }
  if (q == 1.0) return 0;
  const double lo = window.lo().to_double(MPFR_RNDD);
  const double L_lo = fam.log_deriv(n, Enclosure::point(window.lo()), kCtx).lo().to_double(MPFR_RNDD);
  const double L_hi = fam.log_deriv(n, Enclosure::point(window.hi()), kCtx).lo().to_double(MPFR_RNDD);
  const double L = std::min(L_lo, L_hi);
  if (!(L > 0)) return kInf;
  const double width = window.width(64).to_double(MPFR_RNDU);
  const double dx = std::min(std::exp(-L), width);
  return std::abs(q - 1) * std::log1p(dx / lo) / L;
}

double grid_eta(const FunctionFamily& fam, long n, const Enclosure& window, int grid) {
  const PrecisionContext ctx(64);
  const double lo = window.lo().to_double(MPFR_RNDU);
  const double hi = window.hi().to_double(MPFR_RNDD);
  const Enclosure f_lo = fam.eval(n, Enclosure::point(window.lo()), ctx);
  const Enclosure f_hi = fam.eval(n, Enclosure::point(window.hi()), ctx);
  double best = 0;
  for (int j = 0; j <= grid; ++j) {
    const double z = lo + (hi - lo) * j / grid;
    const Enclosure ze = Enclosure::from_double(z);
    const double Lz = fam.log_deriv(n, ze, ctx).mid();
    if (!(Lz > 0)) return kInf;
    const Enclosure fz = fam.eval(n, ze, ctx);
    auto fiber_end = [&](long dir) {
      const Enclosure t = add(fz, Enclosure::exact(dir, 64), ctx);
      if (dir < 0 && t.hi() <= f_lo.lo()) return lo;
      if (dir > 0 && t.lo() >= f_hi.hi()) return hi;
      try {
        return fam.invert(n, Enclosure::point(t.midpoint(64)), window, 40, ctx).mid();
      } catch (const Error&) {
        return dir < 0 ? lo : hi;
      }
    };
    const double w_lo = std::max(lo, fiber_end(-1));
    const double w_hi = std::min(hi, fiber_end(+1));
    constexpr int kSub = 8;
    for (int i = 0; i <= kSub; ++i) {
      const double w = w_lo + (w_hi - w_lo) * i / kSub;
      const double Lw = fam.log_deriv(n, Enclosure::from_double(w), ctx).mid();
      best = std::max(best, Lw / Lz - 1);
    }
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------

GrowthProfile growth_profile(const FunctionFamily& fam, const Enclosure& v, long N) {
  if (N < 10) throw DomainError("growth_profile needs N >= 10");
  require_in_domain(fam, v, "v");
  require_terms(fam, N);
  GrowthProfile g;
  g.truncation_N = N;
  for (long n = 1; n <= N; ++n) {
    const double ld = fam.log_deriv(n, v, kCtx).mid();
    if (!(ld > 0)) continue;
    g.series.push_back({n, fam.log_eval(n, v, kCtx).mid() / ld});
  }
  if (g.series.empty()) throw DomainError("log f_n'(v) is not positive for any n <= N");
  const long first_tail = N - (N + 1) / 2 + 1;
  g.u_estimate = -kInf;
  g.l_estimate = kInf;
  for (const auto& p : g.series) {
    if (p.n < first_tail) continue;
    g.u_estimate = std::max(g.u_estimate, p.value);
    g.l_estimate = std::min(g.l_estimate, p.value);
  }
  return g;
}

double eta(const FunctionFamily& fam, long n, const Enclosure& window, int grid) {
  if (grid < 8) throw DomainError("eta grid must be >= 8");
  require_in_domain(fam, window, "window");
  fam.require_index(n);
  if (fam.is_linear()) return 0;
  if (fam.kind() == FamilyKind::Power || fam.kind() == FamilyKind::PowerExponent) {
    return analytic_eta(fam, n, window);
  }
  return grid_eta(fam, n, window, grid);
}

// ---------------------------------------------------------------------------

ConditionReport check_conditions(const FunctionFamily& fam, const Enclosure& v, const Enclosure& eps, long N,
                                 const std::optional<Sequence>& delta) {
  if (N < 10) throw DomainError("check_conditions needs N >= 10");
  const Enclosure window = window_of(v, eps);
  require_in_domain(fam, window, "window");
  require_terms(fam, N);
  const long n_last = fam.max_index() ? std::min(N + 1, *fam.max_index()) : N + 1;

  ConditionReport rep;
  rep.N = N;
  const std::array<Enclosure, 3> points{Enclosure::point(window.lo()), v, Enclosure::point(window.hi())};
  const std::array<double, 3> point_x{window.lo().to_double(), v.mid(), window.hi().to_double()};
  // log f_n'(x) for the three sample points.
  std::array<std::vector<double>, 3> ld;
  for (size_t k = 0; k < 3; ++k) {
    ld[k].assign(static_cast<size_t>(n_last) + 1, 0.0);
    for (long n = 1; n <= n_last; ++n) ld[k][static_cast<size_t>(n)] = fam.log_deriv(n, points[k], kCtx).mid();
  }

  // (cond-ext) through the eta trend.
  {
    auto& c = rep.cond_ext;
    c.id = "cond-ext";
    for (long n = 1; n <= N; ++n) {
      const double e = eta(fam, n, window);
      if (std::isfinite(e)) c.evidence.push_back({n, e});
    }
    const auto bad = first_failing_prefix(c.evidence, [](const Split& s) {
      return s.tail_min > 0 && s.tail_min >= s.head_max;
    });
    if (c.evidence.size() < 4) {
      c.verdict = Verdict::Indeterminate;
      c.detail = "too few indices with finite eta";
    } else if (bad) {
      const Split s = split_prefix(c.evidence, *bad);
      c.verdict = Verdict::Fails;
      c.counterexample = Counterexample{s.tail_min_n, v.mid(), s.tail_min};
      c.detail = "eta(n) does not decrease: tail minimum " + fmt_double(s.tail_min) + " >= head maximum " +
                 fmt_double(s.head_max) + " over n <= " + std::to_string(c.evidence[*bad - 1].n);
    } else {
      c.verdict = Verdict::HoldsAtDepth;
      c.detail = "eta(n) decreases along every prefix";
    }
  }

  // Consecutive log-derivative ratios at each sample point.
  std::array<std::vector<SeriesPoint>, 3> ratios;
  for (size_t k = 0; k < 3; ++k) {
    for (long n = 1; n + 1 <= n_last; ++n) {
      const double a = ld[k][static_cast<size_t>(n)];
      if (a > 0) ratios[k].push_back({n, ld[k][static_cast<size_t>(n + 1)] / a});
    }
  }

  // (cond-ext-2)
  {
    auto& c = rep.cond_ext_2;
    c.id = "cond-ext-2";
    c.evidence = ratios[1];
    const auto bad = first_failing_prefix(c.evidence, [](const Split& s) { return s.tail_max >= 2 * s.head_max; });
    if (c.evidence.size() < 4) {
      c.verdict = Verdict::Indeterminate;
      c.detail = "too few indices with positive log-derivative";
    } else if (bad) {
      const Split s = split_prefix(c.evidence, *bad);
      c.verdict = Verdict::Fails;
      c.counterexample = Counterexample{s.tail_max_n, v.mid(), s.tail_max};
      c.detail = "ratio log f_{n+1}'(v)/log f_n'(v) keeps growing: " + fmt_double(s.tail_max) + " at n = " +
                 std::to_string(s.tail_max_n) + " vs head maximum " + fmt_double(s.head_max);
    } else {
      double m = 0;
      for (const auto& p : c.evidence) m = std::max(m, p.value);
      rep.M_estimate = m;
      c.verdict = Verdict::HoldsAtDepth;
      c.detail = "M estimate " + fmt_double(m);
    }
    if (fam.is_linear()) c.detail += " (not required for linear families)";
  }

  // (general-cond-2) and (general-cond-3)
  {
    auto& c = rep.general_cond_2;
    c.id = "general-cond-2";
    c.verdict = Verdict::HoldsAtDepth;
    for (size_t k = 0; k < 3; ++k) {
      std::vector<SeriesPoint> s;
      for (long n = 2; n <= N; ++n) s.push_back({n, ld[k][static_cast<size_t>(n)] / std::log(static_cast<double>(n))});
      const auto bad = first_failing_prefix(s, [](const Split& sp) { return sp.tail_max <= sp.head_max * (1 + 1e-9); });
      if (k == 1) c.evidence = s;
      if (bad && c.verdict != Verdict::Fails) {
        const Split sp = split_prefix(s, *bad);
        c.verdict = Verdict::Fails;
        c.counterexample = Counterexample{sp.tail_max_n, point_x[k], sp.tail_max};
        c.detail = "log f_n'(x)/log n does not grow at x = " + fmt_double(point_x[k]) + ": tail maximum " +
                   fmt_double(sp.tail_max) + " <= head maximum " + fmt_double(sp.head_max);
      }
    }
    if (c.verdict == Verdict::HoldsAtDepth) c.detail = "log f_n'(x)/log n grows along every prefix";

    auto& g = rep.general_cond_3;
    g.id = "general-cond-3";
    if (c.verdict == Verdict::HoldsAtDepth) {
      g.verdict = Verdict::HoldsAtDepth;
      g.detail = "implied by general-cond-2";
    } else {
      g.verdict = Verdict::Indeterminate;
      g.detail = "sufficient condition general-cond-2 failed; summability is not decidable from finitely many terms";
    }
  }

  // (hyp-1)
  {
    auto& c = rep.hyp_1;
    c.id = "hyp-1";
    if (!delta) {
      c.verdict = Verdict::Indeterminate;
      c.detail = "no delta sequence supplied";
    } else {
      const Enclosure ln2 = ln(Enclosure::exact(2, 64), kCtx);
      bool undecided = false;
      c.verdict = Verdict::HoldsAtDepth;
      for (long n = 1; n + 1 <= n_last && n <= N; ++n) {
        const Enclosure ln_delta = ln(delta->at(n, kCtx), kCtx);
        Enclosure log_ratio;
        bool certain_endpoints = fam.derivative_increasing(n) && fam.derivative_increasing(n + 1);
        if (certain_endpoints) {
          log_ratio = sub(fam.log_deriv(n + 1, points[0], kCtx), fam.log_deriv(n, points[2], kCtx), kCtx);
        } else {
          log_ratio = sub(fam.log_deriv(n + 1, window, kCtx), fam.log_deriv(n, window, kCtx), kCtx);
        }
        log_ratio = add(log_ratio, ln_delta, kCtx);
        c.evidence.push_back({n, log_ratio.mid()});
        if (log_ratio.lo() >= ln2.hi()) continue;
        bool fails = certain_endpoints && log_ratio.hi() < ln2.lo();
        if (!certain_endpoints) {
          // Sampled inf of f'_{n+1} over-estimates the true inf and sampled
          // sup of f'_n under-estimates the true sup.
          constexpr int kGrid = 32;
          double inf_next = kInf, sup_cur = -kInf;
          const double a = window.lo().to_double(), b = window.hi().to_double();
          for (int j = 0; j <= kGrid; ++j) {
            const Enclosure x = Enclosure::from_double(a + (b - a) * j / kGrid);
            inf_next = std::min(inf_next, fam.log_deriv(n + 1, x, kCtx).mid());
            sup_cur = std::max(sup_cur, fam.log_deriv(n, x, kCtx).mid());
          }
          fails = inf_next - sup_cur + ln_delta.mid() < std::log(2.0) - 1e-12;
        }
        if (fails) {
          c.verdict = Verdict::Fails;
          c.counterexample = Counterexample{n, point_x[0], std::exp(log_ratio.mid())};
          c.detail = "inf f_{n+1}' / sup f_n' * delta_n = " + fmt_double(std::exp(log_ratio.mid())) +
                     " < 2 at n = " + std::to_string(n);
          break;
        }
        undecided = true;
      }
      if (c.verdict != Verdict::Fails) {
        c.verdict = undecided ? Verdict::Indeterminate : Verdict::HoldsAtDepth;
        c.detail = undecided ? "some index straddles the threshold 2" : "ratio * delta_n >= 2 for every n checked";
      }
    }
  }

  // (hyp-2)
  {
    auto& c = rep.hyp_2;
    c.id = "hyp-2";
    c.verdict = Verdict::HoldsAtDepth;
    c.evidence = ratios[1];
    for (size_t k = 0; k < 3; ++k) {
      if (ratios[k].size() < 4) {
        c.verdict = Verdict::Indeterminate;
        c.detail = "too few indices with positive log-derivative";
        break;
      }
      const auto bad = first_failing_prefix(ratios[k], [](const Split& s) { return s.tail_max <= s.head_max; });
      if (bad) {
        const Split s = split_prefix(ratios[k], *bad);
        c.verdict = Verdict::Fails;
        c.counterexample = Counterexample{s.tail_max_n, point_x[k], s.tail_max};
        c.detail = "log f_{n+1}'(x)/log f_n'(x) does not grow at x = " + fmt_double(point_x[k]) +
                   ": tail maximum " + fmt_double(s.tail_max) + " <= head maximum " + fmt_double(s.head_max);
        break;
      }
    }
    if (c.verdict == Verdict::HoldsAtDepth) c.detail = "log-derivative ratio grows along every prefix";
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

std::string decimal_term(const Sequence& s, long n) {
  if (s.kind() == Sequence::Kind::List) return s.values()[static_cast<size_t>(n - 1)].text();
  const Enclosure e = s.at(n, PrecisionContext(192));
  return e.is_point() ? e.lo().to_decimal() : e.midpoint(192).to_decimal();
}

// Solves ln q + (q - 1) ln v = L for q > 0.
double exponent_for_log_derivative(double L, double ln_v) {
  double lo = 1e-300, hi = std::max(2.0, L / ln_v + 2);
  auto g = [&](double q) { return std::log(q) + (q - 1) * ln_v - L; };
  while (g(hi) < 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0) lo = mid; else hi = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DensifyResult densify(const FunctionFamily& fam, const Sequence& delta, const Enclosure& v, const Enclosure& eps,
                      double gamma, long N) {
  if (fam.kind() != FamilyKind::PowerExponent) {
    throw Unsupported("densify is implemented for PowerExponent families only, got " + fam.id());
  }
  if (!(gamma > 0)) throw DomainError("gamma must be positive");
  if (N < 1) throw DomainError("densify needs N >= 1");
  require_terms(fam, N);
  const Enclosure window = window_of(v, eps);
  require_in_domain(fam, window, "window");
  const Sequence& q = *family_sequence(fam);
  const double ln_v = std::log(v.mid());

  DensifyResult out;
  std::vector<DecimalReal> q_new, d_new;
  for (long n = 1; n <= N; ++n) {
    q_new.emplace_back(decimal_term(q, n));
    d_new.emplace_back(decimal_term(delta, n));
    out.original_positions.push_back(static_cast<long>(q_new.size()));
    if (n == N) break;
    const double L0 = fam.log_deriv(n, v, kCtx).mid();
    const double L1 = fam.log_deriv(n + 1, v, kCtx).mid();
    const double e = eta(fam, n, window);
    const double R = e > 0 ? gamma / (2 * e) : kInf;
    out.thresholds.push_back(R);
    if (!(L0 > 0) || !(L1 / L0 > R)) continue;
    if (!(R > 1)) {
      throw DomainError("threshold gamma/(2 eta(" + std::to_string(n) + ")) = " + fmt_double(R) +
                        " <= 1 cannot be met by interpolation");
    }
    const double ratio = L1 / L0;
    long parts = static_cast<long>(std::ceil(std::log(ratio) / std::log(R)));
    // Guard against the double solve landing just above the threshold.
    while (std::pow(ratio, 1.0 / static_cast<double>(parts)) > R * (1 - 1e-9)) ++parts;
    const double step = std::pow(ratio, 1.0 / static_cast<double>(parts));
    double L = L0;
    for (long i = 1; i < parts; ++i) {
      L *= step;
      q_new.emplace_back(fmt_double(exponent_for_log_derivative(L, ln_v)));
      d_new.emplace_back("1");
    }
  }
  out.family = make_power_exponent(Sequence::list(std::move(q_new)));
  out.delta = Sequence::list(std::move(d_new));
  return out;
}

}  // namespace fracpow
