#include "fracpow/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

namespace fracpow {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

double log_mpz(const mpz_class& m) {
  if (m <= 0) throw DomainError("log of a non-positive count");
  if (m.fits_slong_p()) return std::log(m.get_d());
  const PrecisionContext ctx(64, 0);
  return ln(Enclosure::exact(m, 64), ctx).mid();
}

double log_positive(const Real& x) {
  Real r(64);
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r.to_double();
}

// exp(x) in scientific notation without underflow.
std::string decimal_from_log(double x) {
  const double l10 = x / std::log(10.0);
  const double e = std::floor(l10);
  return fmt::format("{:.15g}e{}", std::pow(10.0, l10 - e), static_cast<long>(e));
}

}  // namespace

double formula_asymptotic_power(double b, double v) {
  require(b > 1, "b must be > 1");
  require(v > 1, "v must be > 1");
  return std::log(v) / std::log(b * v);
}

DimensionBounds formula_general_bounds(double tau, double u, double l, bool linear) {
  require(tau > 0, "tau must be positive");
  require(std::isfinite(l) && l >= 0, "growth profile l must be finite and non-negative");
  require(!std::isnan(u) && u >= l, "growth profile needs u >= l");
  const double upper = 1 / (1 + tau * l);
  if (linear) return {upper, upper};
  return {1 / (1 + tau * u), upper};
}

DimensionBounds formula_general_bounds(double tau, const GrowthProfile& profile, bool linear) {
  return formula_general_bounds(tau, profile.u_estimate, profile.l_estimate, linear);
}

double formula_uniform(double B, double v) {
  require(B > 1, "B must be > 1");
  require(v > B, "the uniform formula needs v > B");
  const double r = (std::log(v) - std::log(B)) / (std::log(v) + std::log(B));
  return r * r;
}

double formula_uniform_theta_raw(double theta, double B, double v) {
  require(theta > 1, "theta must be > 1");
  require(B > 1, "B must be > 1");
  require(v > 1, "v must be > 1");
  const double lv = std::log(v), lB = std::log(B);
  return (lv - theta / (theta - 1) * lB) / (lv + theta * lB);
}

double formula_uniform_theta(double theta, double B, double v) {
  return std::max(0.0, formula_uniform_theta_raw(theta, B, v));
}

double formula_uniform_fixed_b(double theta, double b, double v) {
  require(theta > 1, "theta must be > 1");
  require(b > 1, "b must be > 1");
  require(v > 1, "v must be > 1");
  return ((theta - 1) * std::log(v) - std::log(b)) / ((theta - 1) * std::log(b * v));
}

BadFormula formula_bad(const FunctionFamily& fam, const Sequence& delta, double v, long N) {
  require(N >= 2, "formula_bad needs N >= 2");
  const PrecisionContext ctx(64);
  require(fam.contains(Enclosure::from_double(v)), "v is outside the family domain");
  BadFormula out;
  std::vector<SeriesPoint> candidates;
  double log_delta_sum = 0;
  for (long n = 1; n <= N; ++n) {
    const double d = delta.approx(n);
    require(d > 0, "delta_" + std::to_string(n) + " must be positive");
    const bool vacuous = d >= 0.5;
    require(vacuous || d < 0.25, "delta_" + std::to_string(n) + " must lie in (0, 1/4) or be vacuous (>= 1/2)");
    const double log_d = vacuous ? 0.0 : std::log(d);
    const double L = fam.log_deriv_at(n, v);
    const double den = L - log_d;
    if (den > 0) {
      const SeriesPoint p{n, (L + log_delta_sum) / den};
      out.series.push_back(p);
      if (!vacuous) candidates.push_back(p);
    }
    log_delta_sum += log_d;
  }
  if (!candidates.empty()) {
    const size_t tail = (candidates.size() + 1) / 2;
    out.value = std::min_element(candidates.end() - static_cast<long>(tail), candidates.end(),
                                 [](const SeriesPoint& a, const SeriesPoint& b) { return a.value < b.value; })
                    ->value;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<LevelStats> level_stats(const ConstructionCertificate& cert) {
  std::vector<LevelStats> out;
  for (const auto& rec : cert.levels) {
    LevelStats s;
    s.level = rec.level;
    s.n = rec.n;
    s.m = rec.child_count;
    if (rec.min_gap) s.log_eps = log_positive(rec.min_gap->midpoint(rec.min_gap->precision()));
    s.log_width = log_positive(rec.interval.width(rec.interval.precision()));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<LevelStats> middle_thirds_stats(long depth) {
  std::vector<LevelStats> out;
  for (long k = 1; k <= depth; ++k) {
    LevelStats s;
    s.level = k;
    s.n = k;
    s.m = 2;
    s.log_eps = -static_cast<double>(k) * std::log(3.0);
    s.log_width = -static_cast<double>(k) * std::log(3.0);
    out.push_back(s);
  }
  return out;
}

std::vector<Enclosure> middle_thirds_cover(long depth) {
  require(depth >= 0 && depth <= 20, "middle-thirds depth must lie in [0, 20]");
  // Left endpoints are sums of 2 * 3^{-i} over chosen digits; exact as rationals.
  const mpfr_prec_t prec = 2 * 20 + 8;
  std::vector<Enclosure> out;
  const long count = 1L << depth;
  mpz_class denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), 3, static_cast<unsigned long>(depth));
  for (long idx = 0; idx < count; ++idx) {
    mpz_class num = 0;
    for (long i = 0; i < depth; ++i) {
      num *= 3;
      if ((idx >> (depth - 1 - i)) & 1) num += 2;
    }
    out.push_back(Enclosure(Enclosure::from_rational(mpq_class(num, denom), prec).lo(),
                            Enclosure::from_rational(mpq_class(num + 1, denom), prec).hi()));
  }
  return out;
}

std::vector<SeriesPoint> empirical_lower(const std::vector<LevelStats>& levels) {
  require(levels.size() >= 3, "empirical series need at least 3 levels");
  std::vector<SeriesPoint> out;
  double log_prod = 0;
  for (size_t i = 0; i < levels.size(); ++i) {
    const LevelStats& s = levels[i];
    if (i > 0 && s.m < 2) throw DegenerateCertificate("level " + std::to_string(s.level) + " has fewer than 2 children");
    if (s.log_eps) {
      const double den = -(log_mpz(s.m) + *s.log_eps);
      if (den > 0) out.push_back({s.level, log_prod / den});
    }
    log_prod += log_mpz(s.m);
  }
  return out;
}

std::vector<SeriesPoint> empirical_upper(const std::vector<LevelStats>& levels) {
  require(levels.size() >= 3, "empirical series need at least 3 levels");
  std::vector<SeriesPoint> out;
  double log_prod = 0;
  for (size_t i = 0; i < levels.size(); ++i) {
    const LevelStats& s = levels[i];
    if (i > 0 && s.m < 2) throw DegenerateCertificate("level " + std::to_string(s.level) + " has fewer than 2 children");
    log_prod += log_mpz(s.m);
    if (s.log_width < 0) out.push_back({s.level, log_prod / -s.log_width});
  }
  return out;
}

std::vector<SeriesPoint> empirical_lower(const ConstructionCertificate& cert) { return empirical_lower(level_stats(cert)); }
std::vector<SeriesPoint> empirical_upper(const ConstructionCertificate& cert) { return empirical_upper(level_stats(cert)); }

// ---------------------------------------------------------------------------

BoxCountResult box_count(const std::vector<Enclosure>& intervals, const std::vector<double>& scales) {
  require(!intervals.empty(), "box counting needs at least one interval");
  require(scales.size() >= 2, "box counting needs at least 2 scales");
  const auto [smin, smax] = std::minmax_element(scales.begin(), scales.end());
  require(*smin > 0, "scales must be positive");
  require(*smax / *smin >= 100, "scales must span at least two decades");
  std::vector<std::pair<double, double>> iv;
  for (const auto& e : intervals) {
    require(e.is_bounded(), "intervals must be bounded");
    iv.emplace_back(e.lo().to_double(MPFR_RNDD), e.hi().to_double(MPFR_RNDU));
  }
  std::sort(iv.begin(), iv.end());
  for (size_t i = 1; i < iv.size(); ++i) {
    require(iv[i - 1].second < iv[i].first, "intervals must be pairwise disjoint");
  }
  BoxCountResult out;
  out.scales = scales;
  std::vector<double> xs, ys;
  for (double s : scales) {
    long count = 0;
    double last = -std::numeric_limits<double>::infinity();
    for (const auto& [lo, hi] : iv) {
      const double first = std::floor(lo / s), end = std::floor(hi / s);
      const double start = std::max(first, last + 1);
      if (end >= start) count += static_cast<long>(end - start) + 1;
      last = std::max(last, end);
    }
    out.counts.push_back(count);
    xs.push_back(-std::log(s));
    ys.push_back(std::log(static_cast<double>(count)));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n, my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.slope = sxy / sxx;
  double rss = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + out.slope * (xs[i] - mx));
    rss += r * r;
  }
  out.std_error = xs.size() > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  return out;
}

std::vector<double> default_scales(const std::vector<Enclosure>& intervals, int count) {
  require(!intervals.empty(), "no intervals");
  require(count >= 2, "need at least 2 scales");
  constexpr double inf = std::numeric_limits<double>::infinity();
  double lo = inf, hi = -inf, min_len = inf;
  for (const auto& e : intervals) {
    const double a = e.lo().to_double(MPFR_RNDD), b = e.hi().to_double(MPFR_RNDU);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
    if (b > a) min_len = std::min(min_len, b - a);
  }
  const double span = hi - lo;
  require(span > 0, "intervals have zero total span");
  const double top = span / 4;
  const double bottom = std::isfinite(min_len) ? std::min(2 * min_len, span / 400) : span * 1e-4;
  require(top / bottom >= 100, "intervals are too coarse for two decades of scales");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(top * std::pow(bottom / top, static_cast<double>(i) / (count - 1)));
  return out;
}

// ---------------------------------------------------------------------------

DimensionReport dimension_report(const ConstructionCertificate& cert, const FunctionFamily& fam) {
  DimensionReport rep;
  rep.truncation_depth = static_cast<long>(cert.levels.size());
  const double v = cert.v.approx();
  const ApproxRegime regime = parse_regime(cert.regime);
  if (const auto* a = std::get_if<regime::AsymptoticBase>(&regime)) {
    if (fam.kind() == FamilyKind::Power) {
      rep.closed_form.push_back({"asym-power", formula_asymptotic_power(a->b.approx(), v), {}, {}});
    }
  } else if (const auto* a = std::get_if<regime::Asymptotic>(&regime)) {
    const GrowthProfile p = growth_profile(fam, Enclosure::from_double(v), 40);
    const DimensionBounds b = formula_general_bounds(a->tau.approx(), p, fam.is_linear());
    rep.closed_form.push_back({"asym-general", {}, b.lower, b.upper});
  } else if (const auto* u = std::get_if<regime::Uniform>(&regime)) {
    const double B = u->B.approx(), theta = u->theta.approx();
    rep.closed_form.push_back({"uniform-theta", formula_uniform_theta(theta, B, v), {}, {}});
    if (v > B) rep.closed_form.push_back({"uniform", formula_uniform(B, v), {}, {}});
  } else if (const auto* b = std::get_if<regime::Bad>(&regime)) {
    long N = std::max<long>(5, cert.levels.empty() ? 5 : cert.levels.back().n);
    if (const auto m = fam.max_index()) N = std::min(N, *m);
    if (const auto len = b->delta.length()) N = std::min(N, *len);
    if (N >= 2) rep.closed_form.push_back({"bad", formula_bad(fam, b->delta, v, N).value, {}, {}});
  }
  rep.levels = level_stats(cert);
  if (rep.levels.size() >= 3) {
    rep.empirical_lower_series = empirical_lower(rep.levels);
    rep.empirical_upper_series = empirical_upper(rep.levels);
  }
  return rep;
}

std::string dimension_csv(const DimensionReport& report) {
  std::ostringstream os;
  os << "level,n_i,m_i,eps_i,ratio_lower,ratio_upper\n";
  auto lookup = [](const std::vector<SeriesPoint>& s, long level) -> std::string {
    for (const auto& p : s) {
      if (p.n == level) return fmt::format("{:.17g}", p.value);
    }
    return "";
  };
  for (const auto& l : report.levels) {
    os << l.level << ',' << l.n << ',' << l.m.get_str() << ',';
    if (l.log_eps) os << decimal_from_log(*l.log_eps);
    os << ',' << lookup(report.empirical_lower_series, l.level) << ',' << lookup(report.empirical_upper_series, l.level)
       << '\n';
  }
  return os.str();
}

}  // namespace fracpow
