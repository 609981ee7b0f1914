#include <doctest.h>

#include <cmath>

#include "fracpow/construction.hpp"
#include "fracpow/family_analysis.hpp"
#include "fracpow/io.hpp"
#include "fracpow/oracle.hpp"

using namespace fracpow;

namespace {

mpq_class exact_q(const Real& x) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x.get());
  return q;
}

mpq_class pow_q(const mpq_class& x, int n) {
  mpq_class r = 1;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

Enclosure num(const char* s) { return Enclosure::from_text(s, 128); }

const ConstructionCertificate& power_base2_cert() {
  static const ConstructionCertificate cert =
      construct(*make_power(), DecimalReal("2"), DecimalReal("0.25"), parse_regime("asym-base b=2"), TargetSequence(), 5);
  return cert;
}

Enclosure parent_of(const ConstructionCertificate& c, size_t idx) {
  return idx == 0 ? c.window : c.levels[idx - 1].interval;
}

// f_n(I) inside [k + y - w, k + y + w], re-evaluated at the recorded precision.
bool images_sound(const ConstructionCertificate& c, const FunctionFamily& f) {
  for (const auto& l : c.levels) {
    const PrecisionContext ctx(l.bits - c.guard_bits, c.guard_bits);
    const Enclosure img = f.eval(l.n, l.interval, ctx);
    const Enclosure centre = add(Enclosure::exact(l.k, ctx.working()), l.target, ctx);
    const Enclosure lo = sub(centre, l.half_width, ctx), hi = add(centre, l.half_width, ctx);
    if (!(lo.hi() <= img.lo() && img.hi() <= hi.lo())) return false;
  }
  return true;
}

bool nested(const ConstructionCertificate& c) {
  Enclosure parent = c.window;
  for (const auto& l : c.levels) {
    if (!parent.strictly_contains(l.interval)) return false;
    if (!l.interval.contains(c.witness)) return false;
    parent = l.interval;
  }
  return true;
}

}  // namespace

TEST_SUITE("regime") {
  TEST_CASE("parse and spec round trip") {
    for (const char* text : {"asym tau=2", "asym-base b=2", "uniform B=1.3 theta=2", "bad delta=const(1/8)"}) {
      const ApproxRegime r = parse_regime(text);
      CHECK(regime_spec(parse_regime(regime_spec(r))) == regime_spec(r));
    }
    CHECK(std::holds_alternative<regime::Uniform>(parse_regime("uniform B=1.3 theta=2")));
    CHECK_THROWS_AS(parse_regime("sideways x=1"), ConfigError);
  }

  TEST_CASE("parameter ranges") {
    CHECK_THROWS_AS(validate_regime(parse_regime("asym tau=1")), DomainError);
    CHECK_THROWS_AS(validate_regime(parse_regime("asym-base b=1")), DomainError);
    CHECK_THROWS_AS(validate_regime(parse_regime("uniform B=1.3 theta=1")), DomainError);
    CHECK_THROWS_AS(validate_regime(parse_regime("uniform B=1 theta=2")), DomainError);
    CHECK_THROWS_AS(validate_regime(parse_regime("bad delta=const(1/4)")), DomainError);
    CHECK_NOTHROW(validate_regime(parse_regime("bad delta=const(0.2)")));
  }

  TEST_CASE("selector grammar") {
    CHECK(Selector::parse("leftmost").kind == Selector::Kind::Leftmost);
    CHECK(Selector::parse("median").kind == Selector::Kind::Median);
    const Selector s = Selector::parse("seeded:99");
    CHECK(s.kind == Selector::Kind::Seeded);
    CHECK(s.seed == 99);
    CHECK(Selector::parse(s.spec()).seed == 99);
    CHECK_THROWS_AS(Selector::parse("random"), ConfigError);
  }
}

TEST_SUITE("children") {
  TEST_CASE("power n = 4 on [1.5, 2.5] against exact rationals") {
    const auto f = make_power();
    const PrecisionContext ctx(128);
    const Enclosure parent(Real::parse("1.5", 64), Real::parse("2.5", 64));
    const Enclosure y = Enclosure::exact(0), w = Enclosure::from_text("1/8", 64);
    const auto kids = level_children(*f, parent, 4, y, w, ctx);
    // ceil(1.5^4 + 1) = 7 up to floor(2.5^4 - 1) = 38
    const mpq_class fc = pow_q(mpq_class(3, 2), 4), fd = pow_q(mpq_class(5, 2), 4), wq(1, 8);
    mpz_class k_lo, k_hi;
    mpz_cdiv_q(k_lo.get_mpz_t(), mpq_class(fc + 1).get_num_mpz_t(), mpq_class(fc + 1).get_den_mpz_t());
    mpz_fdiv_q(k_hi.get_mpz_t(), mpq_class(fd - 1).get_num_mpz_t(), mpq_class(fd - 1).get_den_mpz_t());
    REQUIRE(k_lo == 7);
    REQUIRE(k_hi == 38);
    REQUIRE(kids.size() == 32);
    for (size_t i = 0; i < kids.size(); ++i) {
      CHECK(kids[i].k == k_lo + static_cast<long>(i));
      const mpq_class lo = exact_q(kids[i].interval.lo()), hi = exact_q(kids[i].interval.hi());
      const mpq_class k(kids[i].k);
      CHECK(pow_q(lo, 4) >= k - wq);
      CHECK(pow_q(hi, 4) <= k + wq);
      CHECK(pow_q(lo, 4) - (k - wq) < mpq_class(1, 1000000));
      CHECK((k + wq) - pow_q(hi, 4) < mpq_class(1, 1000000));
      CHECK(parent.strictly_contains(kids[i].interval));
      if (i > 0) CHECK(kids[i - 1].interval.certainly_less(kids[i].interval));
    }
  }

  TEST_CASE("leftmost child brackets the fourth roots") {
    const auto f = make_power();
    const PrecisionContext ctx(128);
    const Enclosure parent(Real::parse("1.5", 64), Real::parse("2.5", 64));
    const Enclosure w = Enclosure::from_text("1/8", 64);
    const Enclosure child = child_interval(*f, parent, 4, 8, Enclosure::exact(0), w, 100, ctx);
    const double lo = std::pow(8 - 0.125, 0.25), hi = std::pow(8 + 0.125, 0.25);
    CHECK(child.lo().to_double() == doctest::Approx(lo).epsilon(1e-14));
    CHECK(child.hi().to_double() == doctest::Approx(hi).epsilon(1e-14));
  }

  TEST_CASE("empty level") {
    const PrecisionContext ctx(128);
    const Enclosure parent(Real::parse("1.9", 64), Real::parse("2.1", 64));
    CHECK_THROWS_AS(level_children(*make_power(), parent, 1, Enclosure::exact(0), Enclosure::from_text("0.1", 64), ctx),
                    EmptyLevel);
  }

  TEST_CASE("half-width above a quarter is rejected") {
    const PrecisionContext ctx(128);
    const Enclosure parent(Real::parse("1.5", 64), Real::parse("2.5", 64));
    CHECK_THROWS_AS(level_children(*make_power(), parent, 4, Enclosure::exact(0), Enclosure::from_text("0.3", 64), ctx),
                    DomainError);
  }

  TEST_CASE("too many children") {
    const PrecisionContext ctx(128);
    const Enclosure parent(Real::parse("1.5", 64), Real::parse("2.5", 64));
    CHECK_THROWS_AS(level_children(*make_power(), parent, 30, Enclosure::exact(0), Enclosure::from_text("0.1", 64), ctx,
                                   1000),
                    OutOfRange);
  }

  TEST_CASE("children with a non-zero target") {
    const PrecisionContext ctx(128);
    const Enclosure parent(Real::parse("1.5", 64), Real::parse("2.5", 64));
    const Enclosure y = Enclosure::from_text("0.9", 64), w = Enclosure::from_text("0.2", 64);
    const auto kids = level_children(*make_power(), parent, 4, y, w, ctx);
    for (const auto& c : kids) {
      const Enclosure img = pow_int(c.interval, 4, ctx);
      const Enclosure centre = add(Enclosure::exact(c.k, 64), y, ctx);
      CHECK(sub(centre, w, ctx).hi() <= img.lo());
      CHECK(img.hi() <= add(centre, w, ctx).lo());
      CHECK(parent.strictly_contains(c.interval));
    }
  }
}

TEST_SUITE("selection") {
  TEST_CASE("uniform indices are floor(theta^k)") {
    SelectionOptions opts;
    opts.depth = 6;
    const auto idx = select_subsequence(*make_power(), num("2"), num("0.25"), 0.5,
                                        parse_regime("uniform B=1.3 theta=2"), 1000, opts);
    CHECK(idx == std::vector<long>{2, 4, 8, 16, 32, 64});
    opts.depth = 5;
    const auto frac = select_subsequence(*make_power(), num("2"), num("0.25"), 0.5,
                                         parse_regime("uniform B=1.1 theta=1.5"), 1000, opts);
    CHECK(frac == std::vector<long>{1, 2, 3, 5, 7});
  }

  TEST_CASE("both Ki inequalities hold on short prefixes") {
    const auto f = make_power();
    const Enclosure v = num("2"), eps = num("0.25");
    const double gamma = 0.1;
    const ConditionReport rep = check_conditions(*f, v, eps, 20);
    REQUIRE(rep.M_estimate.has_value());
    const double M = *rep.M_estimate;
    const Enclosure window(Real::parse("1.75", 128), Real::parse("2.25", 128));
    for (long depth = 2; depth <= 4; ++depth) {
      SelectionOptions opts;
      opts.depth = depth;
      opts.policy = SelectionPolicy::PaperKi;
      const auto idx = select_subsequence(*f, v, eps, gamma, parse_regime("asym-base b=2"), 1L << 20, opts);
      REQUIRE(static_cast<long>(idx.size()) == depth);
      for (size_t i = 0; i + 1 < idx.size(); ++i) {
        const double n0 = static_cast<double>(idx[i]), n1 = static_cast<double>(idx[i + 1]);
        const double ratio = (std::log(n1) + (n1 - 1) * std::log(2.0)) / (std::log(n0) + (n0 - 1) * std::log(2.0));
        const double e = eta(*f, idx[i], window);
        if (e == 0) continue;  // both bounds are vacuous
        CHECK(ratio >= gamma / (2 * e * M));
        CHECK(ratio <= gamma / (2 * e));
      }
    }
  }

  TEST_CASE("upper Ki inequality holds under the default policy") {
    const auto f = make_power();
    const Enclosure window(Real::parse("1.75", 128), Real::parse("2.25", 128));
    const double gamma = 0.5;
    SelectionOptions opts;
    opts.depth = 8;
    const auto idx = select_subsequence(*f, num("2"), num("0.25"), gamma, parse_regime("asym-base b=2"), 1L << 22, opts);
    REQUIRE(idx.size() == 8);
    for (size_t i = 0; i + 1 < idx.size(); ++i) {
      CHECK(idx[i] < idx[i + 1]);
      const double ratio = f->log_deriv_at(idx[i + 1], 2) / f->log_deriv_at(idx[i], 2);
      CHECK(ratio <= gamma / (2 * eta(*f, idx[i], window)));
    }
  }

  TEST_CASE("linear family realises the growth profile at the last index") {
    const auto f = make_linear(Sequence::geometric(DecimalReal(2)));
    SelectionOptions opts;
    opts.depth = 8;
    const auto idx = select_subsequence(*f, num("3"), num("0.25"), 0.5, parse_regime("asym tau=2"), 1L << 20, opts);
    REQUIRE(idx.size() == 8);
    const long n = idx.back();
    const double ratio = f->log_eval_at(n, 3) / f->log_deriv_at(n, 3);
    CHECK(std::fabs(ratio - 1) < 0.05);
  }

  TEST_CASE("slow families run out of indices") {
    SelectionOptions opts;
    opts.depth = 6;
    CHECK_THROWS_AS(select_subsequence(*make_power(), num("2"), num("0.25"), 0.5, parse_regime("asym-base b=2"), 40, opts),
                    NoAdmissibleIndex);
  }

  TEST_CASE("bad regime uses consecutive indices") {
    SelectionOptions opts;
    opts.depth = 4;
    const auto idx = select_subsequence(*make_power_exponent(Sequence::geometric(DecimalReal(3))), num("2"), num("0.1"),
                                        0.5, parse_regime("bad delta=const(1/8)"), 100, opts);
    CHECK(idx == std::vector<long>{1, 2, 3, 4});
  }
}

TEST_SUITE("construct") {
  TEST_CASE("asymptotic witness for b = 2") {
    const auto& c = power_base2_cert();
    REQUIRE(c.levels.size() == 5);
    CHECK(nested(c));
    CHECK(images_sound(c, *make_power()));
    for (size_t i = 1; i < c.levels.size(); ++i) CHECK(c.levels[i].child_count >= 2);
    const MembershipVerdict v = verify_asymptotic(c.witness, TargetSequence(), DecimalReal(2), c.subsequence);
    CHECK(v.verdict == Membership::Pass);
    CHECK(replay(c, *make_power()).ok);
  }

  TEST_CASE("child count and gap lower bounds") {
    const auto& c = power_base2_cert();
    for (size_t i = 0; i < c.levels.size(); ++i) {
      const LevelRecord& l = c.levels[i];
      const Enclosure parent = parent_of(c, i);
      const PrecisionContext ctx(l.bits - c.guard_bits, c.guard_bits);
      const Enclosure len = sub(Enclosure::point(parent.hi()), Enclosure::point(parent.lo()), ctx);
      // inf f' over [c, d] is f'(c) for x^n
      const Enclosure d_inf = make_power()->deriv(l.n, Enclosure::point(parent.lo()), ctx);
      const Enclosure bound = sub(mul(d_inf, len, ctx), Enclosure::exact(2), ctx);
      CHECK(l.child_count >= floor_of(bound.lo()));
      if (l.min_gap) {
        const Enclosure d_sup = make_power()->deriv(l.n, Enclosure::point(parent.hi()), ctx);
        const Enclosure gap_bound = div(Enclosure::exact(1), mul(Enclosure::exact(2), d_sup, ctx), ctx);
        CHECK(gap_bound.hi() <= l.min_gap->lo());
      }
    }
  }

  TEST_CASE("determinism") {
    ConstructOptions opts;
    opts.selector = Selector::seeded(11);
    const auto a = construct(*make_power(), DecimalReal("2"), DecimalReal("0.25"), parse_regime("asym-base b=2"),
                             TargetSequence::seeded(3), 4, opts);
    const auto b = construct(*make_power(), DecimalReal("2"), DecimalReal("0.25"), parse_regime("asym-base b=2"),
                             TargetSequence::seeded(3), 4, opts);
    CHECK(dump_certificate(a) == dump_certificate(b));
    opts.selector = Selector::seeded(12);
    const auto c = construct(*make_power(), DecimalReal("2"), DecimalReal("0.25"), parse_regime("asym-base b=2"),
                             TargetSequence::seeded(3), 4, opts);
    CHECK(dump_certificate(a) != dump_certificate(c));
  }

  TEST_CASE("selectors and seeded targets all verify") {
    const auto f = make_power();
    for (const Selector& s : {Selector::leftmost(), Selector::median(), Selector::seeded(1), Selector::seeded(2)}) {
      for (const TargetSequence& y : {TargetSequence(), TargetSequence::seeded(5), TargetSequence::constant(DecimalReal("0.5"))}) {
        ConstructOptions opts;
        opts.selector = s;
        const auto c = construct(*f, DecimalReal("2"), DecimalReal("0.25"), parse_regime("asym-base b=2"), y, 4, opts);
        CHECK(nested(c));
        CHECK(images_sound(c, *f));
        CHECK(replay(c, *f).ok);
        CHECK(verify_asymptotic(c.witness, y, DecimalReal(2), c.subsequence).verdict == Membership::Pass);
        for (size_t i = 0; i < c.levels.size(); ++i) {
          const LevelRecord& l = c.levels[i];
          const Enclosure parent = parent_of(c, i);
          const PrecisionContext ctx(l.bits - c.guard_bits, c.guard_bits);
          const Enclosure len = sub(Enclosure::point(parent.hi()), Enclosure::point(parent.lo()), ctx);
          const Enclosure bound = sub(mul(f->deriv(l.n, Enclosure::point(parent.lo()), ctx), len, ctx), Enclosure::exact(2), ctx);
          // the top integer may be dropped when y > 0
          CHECK(l.child_count >= floor_of(bound.lo()) - 1);
        }
      }
    }
  }

  TEST_CASE("tau regime on the power family") {
    const auto f = make_power();
    const auto c = construct(*f, DecimalReal("2"), DecimalReal("0.25"), parse_regime("asym tau=1.5"), TargetSequence(), 4);
    CHECK(nested(c));
    CHECK(replay(c, *f).ok);
    CHECK(verify_asymptotic_tau(c.witness, *f, TargetSequence(), DecimalReal("1.5"), c.subsequence).verdict ==
          Membership::Pass);
  }

  TEST_CASE("tau regime on a linear family") {
    const auto f = make_linear(Sequence::geometric(DecimalReal(2)));
    const auto c = construct(*f, DecimalReal("3"), DecimalReal("0.25"), parse_regime("asym tau=2"),
                             TargetSequence::seeded(9), 5);
    CHECK(nested(c));
    CHECK(replay(c, *f).ok);
    CHECK(verify_asymptotic_tau(c.witness, *f, TargetSequence::seeded(9), DecimalReal(2), c.subsequence).verdict ==
          Membership::Pass);
  }

  TEST_CASE("tau as a function of x") {
    const auto f = make_power();
    regime::Asymptotic r;
    r.tau_of_x = [](double x) { return (1 + x) / 2; };
    r.tau_name = "(1+x)/2";
    const ApproxRegime reg = r;
    const auto c = construct(*f, DecimalReal("2"), DecimalReal("0.25"), reg, TargetSequence(), 3);
    CHECK(nested(c));
    CHECK(images_sound(c, *f));
    CHECK(replay(c, *f, reg).ok);
  }

  TEST_CASE("bad regime for q = 3^n") {
    const auto f = make_power_exponent(Sequence::geometric(DecimalReal(3)));
    const Sequence delta = Sequence::constant(DecimalReal("1/8"));
    const auto c = construct(*f, DecimalReal("2"), DecimalReal("0.1"), parse_regime("bad delta=const(1/8)"),
                             TargetSequence(), 4);
    REQUIRE(c.levels.size() == 4);
    for (size_t i = 1; i < c.levels.size(); ++i) CHECK(c.levels[i].child_count >= 2);
    CHECK(c.levels[0].child_count >= 1);
    CHECK(nested(c));
    CHECK(images_sound(c, *f));
    CHECK(replay(c, *f).ok);
    CHECK(verify_bad(c.witness, *f, TargetSequence(), delta, 4).verdict == Membership::Pass);
  }

  TEST_CASE("uniform regime with B = 1.3, theta = 2") {
    const auto c = construct(*make_power(), DecimalReal("2"), DecimalReal("0.25"), parse_regime("uniform B=1.3 theta=2"),
                             TargetSequence(), 5);
    REQUIRE(c.levels.size() == 5);
    CHECK(nested(c));
    CHECK(replay(c, *make_power()).ok);
    const ClosedFormCheck cf = check_uniform_closed_forms(c);
    CHECK_MESSAGE(cf.ok, cf.failure);
    const auto v = verify_uniform(c.witness, TargetSequence(), DecimalReal("1.3"), c.subsequence.front(),
                                  c.subsequence.back());
    CHECK(v.verdict == Membership::Pass);
    // b = B^theta at the construction indices
    CHECK(verify_asymptotic(c.witness, TargetSequence(), DecimalReal("1.69"), c.subsequence).verdict == Membership::Pass);
  }

  TEST_CASE("uniform regime requires the power family") {
    CHECK_THROWS_AS(construct(*make_linear(Sequence::geometric(DecimalReal(2))), DecimalReal("3"), DecimalReal("0.25"),
                              parse_regime("uniform B=1.3 theta=2"), TargetSequence(), 3),
                    DomainError);
  }

  TEST_CASE("invalid inputs") {
    const auto f = make_power();
    CHECK_THROWS_AS(construct(*f, DecimalReal("2"), DecimalReal("0"), parse_regime("asym-base b=2"), TargetSequence(), 3),
                    DomainError);
    CHECK_THROWS_AS(construct(*f, DecimalReal("2"), DecimalReal("0.25"), parse_regime("asym-base b=2"), TargetSequence(), 0),
                    DomainError);
    CHECK_THROWS_AS(construct(*f, DecimalReal("1"), DecimalReal("0.25"), parse_regime("asym-base b=2"), TargetSequence(), 3),
                    DomainError);
  }

  TEST_CASE("precision cap") {
    ConstructOptions opts;
    opts.max_bits = 256;
    CHECK_THROWS_AS(construct(*make_power(), DecimalReal("2"), DecimalReal("0.25"), parse_regime("asym-base b=2"),
                              TargetSequence(), 6, opts),
                    PrecisionExhausted);
  }
}

TEST_SUITE("replay") {
  TEST_CASE("depth zero is vacuously valid") {
    ConstructionCertificate c = power_base2_cert();
    c.levels.clear();
    c.subsequence.clear();
    c.precision_schedule.clear();
    CHECK(replay(c, *make_power()).ok);
  }

  TEST_CASE("perturbing any endpoint by 2^-10 is detected") {
    const auto& base = power_base2_cert();
    const Real delta = Real::pow2(-10);
    for (size_t i = 0; i < base.levels.size(); ++i) {
      for (int side = 0; side < 2; ++side) {
        for (int dir : {-1, 1}) {
          ConstructionCertificate c = base;
          const Enclosure& iv = c.levels[i].interval;
          Real lo = iv.lo(), hi = iv.hi();
          Real& e = side == 0 ? lo : hi;
          if (dir > 0) mpfr_add(e.get(), e.get(), delta.get(), MPFR_RNDN);
          else mpfr_sub(e.get(), e.get(), delta.get(), MPFR_RNDN);
          if (hi < lo) std::swap(lo, hi);
          c.levels[i].interval = Enclosure(lo, hi);
          const ReplayResult r = replay(c, *make_power());
          CHECK_FALSE(r.ok);
          CHECK(r.level == static_cast<long>(i) + 1);
          CHECK_FALSE(r.failure.empty());
        }
      }
    }
  }

  TEST_CASE("other mutations") {
    const auto& base = power_base2_cert();
    {
      ConstructionCertificate c = base;
      c.levels[2].k += 1;
      CHECK_FALSE(replay(c, *make_power()).ok);
    }
    {
      ConstructionCertificate c = base;
      c.levels[1].child_count += 1;
      CHECK_FALSE(replay(c, *make_power()).ok);
    }
    {
      ConstructionCertificate c = base;
      c.witness = c.window;
      CHECK_FALSE(replay(c, *make_power()).ok);
    }
    {
      ConstructionCertificate c = base;
      c.regime = "asym-base b=3";
      CHECK_FALSE(replay(c, *make_power()).ok);
    }
    CHECK_FALSE(replay(base, *make_linear(Sequence::geometric(DecimalReal(2)))).ok);
  }
}
