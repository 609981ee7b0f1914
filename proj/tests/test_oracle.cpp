#include <doctest.h>

#include <cmath>

#include "fracpow/construction.hpp"
#include "fracpow/oracle.hpp"

using namespace fracpow;

namespace {

std::vector<long> range(long a, long b) {
  std::vector<long> out;
  for (long n = a; n <= b; ++n) out.push_back(n);
  return out;
}

const ConstructionCertificate& witness_cert() {
  static const ConstructionCertificate c =
      construct(*make_power(), DecimalReal("2"), DecimalReal("0.25"), parse_regime("asym-base b=2"),
                TargetSequence::seeded(21), 5);
  return c;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("integers are perfectly approximable") {
    const auto v = verify_asymptotic(Enclosure::exact(2), TargetSequence(), DecimalReal(2), range(1, 20));
    CHECK(v.verdict == Membership::Pass);
    CHECK(v.margins.size() == 20);
    CHECK_FALSE(v.first_failure.has_value());
    CHECK(v.scope == "finite index range");
  }

  TEST_CASE("1.5 with b = 4 fails at index 2") {
    const auto v = verify_asymptotic(Enclosure::from_text("1.5", 64), TargetSequence(), DecimalReal(4), {2});
    CHECK(v.verdict == Membership::Fail);
    REQUIRE(v.first_failure.has_value());
    CHECK(*v.first_failure == 2);
    // ||2.25|| - 4^-2 = 0.25 - 0.0625
    CHECK(v.margins[0].margin.contains(Real::parse("0.1875", 64)));
    CHECK(v.margins[0].margin.lo().sign() > 0);
  }

  TEST_CASE("uniform check for an integer") {
    for (const char* B : {"1.1", "2", "10"}) {
      CHECK(verify_uniform(Enclosure::exact(3), TargetSequence(), DecimalReal(B), 1, 30).verdict == Membership::Pass);
    }
  }

  TEST_CASE("golden ratio distances follow the Pisot identity") {
    const XProvider phi = pisot_fixture("golden");
    const PrecisionContext ctx(256);
    const Enclosure x = phi(ctx.working());
    const Enclosure inv = div(Enclosure::exact(1), x, ctx);
    for (long n = 1; n <= 40; ++n) {
      const Enclosure d = power_distance(x, TargetSequence(), n, 256);
      const Enclosure expected = n == 1 ? sub(x, Enclosure::exact(2), ctx) : pow_int(inv, n, ctx);
      CHECK(d.intersects(abs(expected)));
    }
  }

  TEST_CASE("golden ratio is uniformly approximable with B = 1.5") {
    const auto v = verify_uniform(pisot_fixture("golden"), TargetSequence(), DecimalReal("1.5"), 1, 25);
    CHECK(v.verdict == Membership::Pass);
    CHECK(v.n_min == 1);
    CHECK(v.n_max == 25);
  }

  TEST_CASE("1.5 is not uniformly approximable with B = 2 at N = 3") {
    const auto v = verify_uniform(Enclosure::from_text("1.5", 64), TargetSequence(), DecimalReal(2), 3, 3);
    CHECK(v.verdict == Membership::Fail);
    REQUIRE(v.margins.size() == 1);
    // distances 0.5, 0.25, 0.375 against 2^-3
    CHECK(v.margins[0].margin.contains(Real::parse("0.125", 64)));
  }

  TEST_CASE("wide inputs are indeterminate") {
    const Enclosure x(Real::parse("1.4", 64), Real::parse("1.6", 64));
    const auto v = verify_asymptotic(x, TargetSequence(), DecimalReal(2), {2});
    CHECK(v.verdict == Membership::Indeterminate);
    CHECK(v.margins[0].status == Membership::Indeterminate);
    CHECK(v.margins[0].margin.contains_zero());
  }

  TEST_CASE("witnesses pass their own indices") {
    const auto& c = witness_cert();
    const auto v = verify_asymptotic(c.witness, TargetSequence::seeded(21), DecimalReal(2), c.subsequence);
    CHECK(v.verdict == Membership::Pass);
    for (const auto& m : v.margins) CHECK(m.margin.hi().sign() < 0);
  }

  TEST_CASE("raising b past the certified margin flips the verdict") {
    const auto& c = witness_cert();
    const TargetSequence y = TargetSequence::seeded(21);
    for (long n : c.subsequence) {
      const Enclosure d = power_distance(c.witness, y, n, 3 * n + 256);
      const auto b = failing_base(d, n);
      REQUIRE(b.has_value());
      const auto v = verify_asymptotic(c.witness, y, DecimalReal(b->to_decimal()), {n});
      CHECK(v.verdict == Membership::Fail);
      CHECK(v.first_failure == n);
    }
    CHECK_FALSE(failing_base(Enclosure::exact(0), 3).has_value());
  }

  TEST_CASE("asymptotic at floor(theta^k) implies uniform on the range") {
    const auto c = construct(*make_power(), DecimalReal("2"), DecimalReal("0.25"), parse_regime("uniform B=1.3 theta=2"),
                             TargetSequence(), 4);
    const auto a = verify_asymptotic(c.witness, TargetSequence(), DecimalReal("1.69"), c.subsequence);
    REQUIRE(a.verdict == Membership::Pass);
    CHECK(verify_uniform(c.witness, TargetSequence(), DecimalReal("1.3"), c.subsequence.front(), c.subsequence.back())
              .verdict == Membership::Pass);
  }

  TEST_CASE("bad-approximation checks") {
    const auto f = make_power_exponent(Sequence::geometric(DecimalReal(3)));
    const auto c = construct(*f, DecimalReal("2"), DecimalReal("0.1"), parse_regime("bad delta=const(1/8)"),
                             TargetSequence(), 4);
    const Sequence delta = Sequence::constant(DecimalReal("1/8"));
    CHECK(verify_bad(c.witness, *f, TargetSequence(), delta, 4).verdict == Membership::Pass);
    CHECK(verify_bad(Enclosure::from_text("1.7", 64), *f, TargetSequence(), Sequence::constant(DecimalReal(1)), 6)
              .verdict == Membership::Pass);
    // move the witness outside the deepest interval
    const Enclosure& deep = c.levels.back().interval;
    const Real shift = Real::pow2(mpfr_get_exp(deep.width(64).get()) + 2);
    Real moved(deep.hi().precision());
    mpfr_add(moved.get(), c.witness.hi().get(), shift.get(), MPFR_RNDU);
    const auto v = verify_bad(Enclosure::point(moved), *f, TargetSequence(), delta, 4);
    CHECK(v.verdict == Membership::Fail);
  }

  TEST_CASE("tau membership") {
    const auto f = make_power();
    CHECK(verify_asymptotic_tau(Enclosure::exact(3), *f, TargetSequence(), DecimalReal(2), range(1, 10)).verdict ==
          Membership::Pass);
    CHECK(verify_asymptotic_tau(Enclosure::from_text("1.5", 64), *f, TargetSequence(), DecimalReal(2), {2}).verdict ==
          Membership::Fail);
  }

  TEST_CASE("x parsing") {
    const Enclosure g = parse_x("golden")(128);
    CHECK(g.mid() == doctest::Approx((1 + std::sqrt(5.0)) / 2));
    CHECK(parse_x("phi")(64).mid() == doctest::Approx(g.mid()));
    CHECK(parse_x("silver")(64).mid() == doctest::Approx(1 + std::sqrt(2.0)));
    CHECK(parse_x("3/2")(64).contains(Real::parse("1.5", 64)));
    CHECK_THROWS_AS(parse_x("tau"), ConfigError);
  }
}

TEST_SUITE("estimators") {
  TEST_CASE("P of an integer") {
    const PEstimate p = mahler_szekeres_P(Enclosure::exact(2), 20, 1);
    CHECK(p.estimate == 0);
    CHECK(p.argmin == 1);
  }

  TEST_CASE("P of the golden ratio") {
    const PEstimate p = mahler_szekeres_P(pisot_fixture("golden"), 20);
    CHECK(std::fabs(p.estimate - 2 / (1 + std::sqrt(5.0))) < 1e-6);
  }

  TEST_CASE("P of 3/2") {
    const PEstimate p = mahler_szekeres_P(Enclosure::from_text("3/2", 64), 40);
    CHECK(p.estimate > 0);
    CHECK(p.estimate < 1);
    CHECK(p.argmin >= 2);
    CHECK(p.enclosure.contains(Real::from_double(p.estimate)) ==
          (p.enclosure.lo().to_double() <= p.estimate && p.estimate <= p.enclosure.hi().to_double()));
  }

  TEST_CASE("P is antitone in N") {
    for (const char* x : {"3/2", "1.3", "2.7"}) {
      double prev = 1;
      for (long N = 2; N <= 30; ++N) {
        const double p = mahler_szekeres_P(Enclosure::from_text(x, 64), N).estimate;
        CHECK(p <= prev + 1e-15);
        prev = p;
      }
    }
  }

  TEST_CASE("convergence exponents") {
    CHECK(std::fabs(convergence_exponent(Sequence::geometric(DecimalReal(2)), 1000)) < 0.05);
    CHECK(std::fabs(convergence_exponent(Sequence::poly(DecimalReal(1)), 1000) - 1) < 0.05);
    CHECK(std::fabs(convergence_exponent(Sequence::poly(DecimalReal(2)), 1000) - 0.5) < 0.05);
    CHECK_THROWS_AS(convergence_exponent(Sequence::poly(DecimalReal(1)), 5), DomainError);
  }
}
