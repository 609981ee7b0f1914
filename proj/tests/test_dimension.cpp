#include <doctest.h>

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <random>

#include "fracpow/dimension.hpp"

using namespace fracpow;

namespace {

// Maximizes formula_uniform_theta over theta in (1, hi) with Brent's method.
double brent_max_theta(double B, double v, double hi = 1000) {
  const auto neg = [&](double t) { return -formula_uniform_theta_raw(t, B, v); };
  const auto r = boost::math::tools::brent_find_minima(neg, 1.0 + 1e-9, hi, 52);
  return -r.second;
}

LevelStats stat(long level, long m, std::optional<double> log_eps, double log_width) {
  LevelStats s;
  s.level = level;
  s.n = level;
  s.m = m;
  s.log_eps = log_eps;
  s.log_width = log_width;
  return s;
}

}  // namespace

TEST_SUITE("formulas") {
  TEST_CASE("asymptotic power") {
    CHECK(formula_asymptotic_power(2, 2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(formula_asymptotic_power(4, 2) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    double prev = 0;
    for (double b : {2.0, 1.5, 1.1, 1.01, 1.0001}) {
      const double d = formula_asymptotic_power(b, 2);
      CHECK(d > prev);
      prev = d;
    }
    CHECK(prev > 0.999);
    CHECK_THROWS_AS(formula_asymptotic_power(1, 2), DomainError);
    CHECK_THROWS_AS(formula_asymptotic_power(2, 0.5), DomainError);
  }

  TEST_CASE("scale invariance and monotonicity") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(1.05, 10), t(0.1, 5);
    for (int i = 0; i < 200; ++i) {
      const double b = u(rng), v = u(rng), s = t(rng);
      CHECK(formula_asymptotic_power(std::pow(b, s), std::pow(v, s)) ==
            doctest::Approx(formula_asymptotic_power(b, v)).epsilon(1e-12));
      CHECK(formula_asymptotic_power(b * 1.01, v) < formula_asymptotic_power(b, v));
      CHECK(formula_asymptotic_power(b, v * 1.01) > formula_asymptotic_power(b, v));
    }
  }

  TEST_CASE("general bounds") {
    const auto b1 = formula_general_bounds(1, 1, 1);
    CHECK(b1.lower == doctest::Approx(0.5));
    CHECK(b1.upper == doctest::Approx(0.5));
    const auto b2 = formula_general_bounds(2, 1, 1);
    CHECK(b2.lower == doctest::Approx(1.0 / 3));
    CHECK(formula_general_bounds(2, 1e12, 1).lower < 1e-9);
    const auto lin = formula_general_bounds(2, 3, 1, true);
    CHECK(lin.lower == lin.upper);
    CHECK(lin.upper == doctest::Approx(1.0 / 3));
    const auto gen = formula_general_bounds(2, 3, 1);
    CHECK(gen.lower <= gen.upper);
    CHECK_THROWS_AS(formula_general_bounds(2, 1, 3), DomainError);
    CHECK_THROWS_AS(formula_general_bounds(0, 1, 1), DomainError);
  }

  TEST_CASE("general bounds reduce to the power formula") {
    for (double b : {1.5, 2.0, 3.0, 7.0}) {
      for (double v : {1.2, 2.0, 5.0}) {
        const double tau = std::log(b) / std::log(v);
        CHECK(formula_general_bounds(tau, 1, 1).lower == doctest::Approx(formula_asymptotic_power(b, v)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("general bounds from a profile") {
    const GrowthProfile p = growth_profile(*make_power(), Enclosure::exact(2), 100);
    const auto b = formula_general_bounds(1.5, p);
    CHECK(b.lower <= b.upper);
    CHECK(b.lower == doctest::Approx(1 / 2.5).epsilon(0.05));
  }

  TEST_CASE("uniform closed forms") {
    for (double B : {1.1, 1.5, 2.0, std::exp(1.0)}) {
      CHECK(formula_uniform(B, B * B) == doctest::Approx(1.0 / 9).epsilon(1e-12));
      CHECK(formula_uniform_theta(4, B, B * B) == doctest::Approx(1.0 / 9).epsilon(1e-12));
    }
    CHECK_THROWS_AS(formula_uniform(2, 2), DomainError);
    CHECK_THROWS_AS(formula_uniform(2, 1.5), DomainError);
    CHECK(formula_uniform(2, 2.0000001) < 1e-12);
    CHECK(formula_uniform_theta(1.01, 2, 3) == 0);
    CHECK(formula_uniform_theta_raw(1.01, 2, 3) < 0);
    CHECK_THROWS_AS(formula_uniform_theta(1, 2, 3), DomainError);
  }

  TEST_CASE("uniform monotonicity") {
    for (double B = 1.1; B < 3; B += 0.3) {
      for (double v = B + 0.1; v < 10; v += 0.7) {
        CHECK(formula_uniform(B, v + 0.1) > formula_uniform(B, v));
        CHECK(formula_uniform(B * 0.99, v) > formula_uniform(B, v));
      }
    }
  }

  TEST_CASE("maximizing over theta recovers the squared form") {
    const double e = std::exp(1.0);
    CHECK(brent_max_theta(e, e * e) == doctest::Approx(1.0 / 9).epsilon(1e-10));
    for (double B : {1.1, 1.7, 2.5, 4.0}) {
      for (double v : {B * 1.05, B * 2, B * B, 9.5}) {
        if (v <= B || v > 10) continue;
        CHECK(std::fabs(brent_max_theta(B, v) - formula_uniform(B, v)) < 1e-9);
      }
    }
  }

  TEST_CASE("theta to infinity at fixed b") {
    for (double b : {1.5, 2.0, 4.0}) {
      for (double v : {1.5, 2.0, 6.0}) {
        CHECK(std::fabs(formula_uniform_fixed_b(1e6, b, v) - formula_asymptotic_power(b, v)) < 1e-4);
        CHECK(formula_uniform_fixed_b(10, b, v) < formula_uniform_fixed_b(1000, b, v));
      }
    }
  }

  TEST_CASE("bad formula for q = 3^n, delta = 1/8, v = 2") {
    const auto f = make_power_exponent(Sequence::geometric(DecimalReal(3)));
    const BadFormula r = formula_bad(*f, Sequence::constant(DecimalReal("1/8")), 2, 10);
    REQUIRE(r.series.size() == 10);
    const double l2 = std::log(2.0), l8 = std::log(8.0);
    const double term5 = (std::log(243.0) + 242 * l2 - 4 * l8) / (std::log(243.0) + 242 * l2 + l8);
    CHECK(term5 == doctest::Approx(0.94).epsilon(0.01));
    CHECK(r.series[4].n == 5);
    CHECK(std::fabs(r.series[4].value - term5) < 1e-9);
    for (const auto& s : r.series) {
      CHECK(s.value <= 1);
      CHECK(s.value >= 0);
    }
  }

  TEST_CASE("vacuous deltas give one") {
    const auto f = make_power();
    const BadFormula r = formula_bad(*f, Sequence::constant(DecimalReal(1)), 2, 20);
    CHECK(r.value == 1);
  }

  TEST_CASE("bad formula tends to one under hyp-2") {
    const auto f = make_power_exponent(Sequence::superexp(DecimalReal(2)));
    const BadFormula r = formula_bad(*f, Sequence::constant(DecimalReal("1/8")), 2, 25);
    for (size_t i = 5; i < r.series.size(); ++i) CHECK(r.series[i].value >= r.series[i - 1].value - 1e-12);
    CHECK(r.series.back().value > 0.99);
  }

  TEST_CASE("shrinking a delta never raises the value") {
    const auto f = make_power_exponent(Sequence::geometric(DecimalReal(3)));
    std::vector<DecimalReal> d(12, DecimalReal("1/8"));
    const double base = formula_bad(*f, Sequence::list(d), 2, 12).value;
    for (size_t j = 0; j < d.size(); ++j) {
      auto e = d;
      e[j] = DecimalReal("1/64");
      CHECK(formula_bad(*f, Sequence::list(e), 2, 12).value <= base + 1e-15);
    }
  }

  TEST_CASE("bad formula argument checks") {
    const auto f = make_power();
    CHECK_THROWS_AS(formula_bad(*f, Sequence::constant(DecimalReal("0.3")), 2, 10), DomainError);
    CHECK_THROWS_AS(formula_bad(*f, Sequence::constant(DecimalReal("1/8")), 0.5, 10), DomainError);
    CHECK_THROWS_AS(formula_bad(*f, Sequence::constant(DecimalReal("1/8")), 2, 1), DomainError);
  }
}

TEST_SUITE("empirical") {
  TEST_CASE("middle-thirds profile") {
    const auto stats = middle_thirds_stats(12);
    const auto lo = empirical_lower(stats), up = empirical_upper(stats);
    const double target = std::log(2.0) / std::log(3.0);
    CHECK(std::fabs(up.back().value - target) < 1e-9);
    CHECK(std::fabs(lo.back().value - target) < 0.06);
    for (size_t i = 1; i < lo.size(); ++i) CHECK(lo[i].value >= lo[i - 1].value);
  }

  TEST_CASE("m = 2, eps = 4^-k") {
    std::vector<LevelStats> s;
    for (long k = 1; k <= 40; ++k) s.push_back(stat(k, 2, -k * std::log(4.0), -k * std::log(4.0)));
    const auto lo = empirical_lower(s);
    for (const auto& p : lo) {
      const double k = static_cast<double>(p.n);
      CHECK(p.value == doctest::Approx((k - 1) * std::log(2.0) / (k * std::log(4.0) - std::log(2.0))));
    }
    CHECK(std::fabs(lo.back().value - 0.5) < 0.02);
  }

  TEST_CASE("single child at level one") {
    std::vector<LevelStats> s{stat(1, 1, std::nullopt, -2)};
    for (long k = 2; k <= 6; ++k) s.push_back(stat(k, 3, -2.0 * k, -2.0 * k));
    const auto lo = empirical_lower(s);
    const auto up = empirical_upper(s);
    CHECK_FALSE(lo.empty());
    CHECK(up.front().value == 0);
  }

  TEST_CASE("degenerate certificates") {
    std::vector<LevelStats> s{stat(1, 3, -1, -1), stat(2, 1, std::nullopt, -2), stat(3, 3, -3, -3)};
    CHECK_THROWS_AS(empirical_lower(s), DegenerateCertificate);
    CHECK_THROWS_AS(empirical_upper(std::vector<LevelStats>(s.begin(), s.begin() + 1)), DomainError);
  }

  TEST_CASE("certificate series") {
    const auto c = construct(*make_power(), DecimalReal("2"), DecimalReal("0.25"), parse_regime("asym-base b=2"),
                             TargetSequence(), 5);
    const auto lo = empirical_lower(c), up = empirical_upper(c);
    CHECK(lo.size() >= 3);
    CHECK(up.size() == 5);
    for (const auto& p : up) CHECK(p.value >= 0);
    const DimensionReport r = dimension_report(c, *make_power());
    CHECK(r.truncation_depth == 5);
    REQUIRE_FALSE(r.closed_form.empty());
    CHECK(r.closed_form.front().name == "asym-power");
    CHECK(*r.closed_form.front().value == doctest::Approx(0.5));
    const std::string csv = dimension_csv(r);
    CHECK(csv.rfind("level,n_i,m_i,eps_i,ratio_lower,ratio_upper\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  }
}

TEST_SUITE("box-count") {
  TEST_CASE("middle-thirds cover at depth 8") {
    const auto cover = middle_thirds_cover(8);
    REQUIRE(cover.size() == 256);
    const auto r = box_count(cover, default_scales(cover));
    CHECK(std::fabs(r.slope - std::log(2.0) / std::log(3.0)) < 0.05);
    CHECK(r.std_error >= 0);
  }

  TEST_CASE("one interval") {
    const std::vector<Enclosure> one{Enclosure(Real::from_si(0, 64), Real::from_si(1, 64))};
    const auto r = box_count(one, default_scales(one));
    CHECK(std::fabs(r.slope - 1) < 0.05);
  }

  TEST_CASE("two points") {
    const std::vector<Enclosure> pts{Enclosure::exact(0), Enclosure::exact(1)};
    const auto r = box_count(pts, default_scales(pts));
    CHECK(std::fabs(r.slope) < 0.05);
  }

  TEST_CASE("input checks") {
    const auto cover = middle_thirds_cover(4);
    CHECK_THROWS_AS(box_count(cover, {0.1}), DomainError);
    CHECK_THROWS_AS(box_count(cover, {0.1, 0.05}), DomainError);
    const std::vector<Enclosure> overlap{Enclosure(Real::from_si(0, 64), Real::from_si(2, 64)),
                                         Enclosure(Real::from_si(1, 64), Real::from_si(3, 64))};
    CHECK_THROWS_AS(box_count(overlap, {1, 0.1, 0.001}), DomainError);
  }
}
