#include "fracpow/target.hpp"

#include <charconv>

#include "parse_util.hpp"

namespace fracpow {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

void require_unit(const DecimalReal& v) {
  const Enclosure e = v.at(64);
  if (e.lo().sign() < 0 || e.hi() > Real::from_si(1, 64)) {
    throw DomainError("target value " + v.text() + " is outside [0, 1]");
  }
}

}  // namespace

TargetSequence TargetSequence::constant(DecimalReal c) {
  require_unit(c);
  TargetSequence t;
  t.kind_ = Kind::Constant;
  t.value_ = std::move(c);
  return t;
}

TargetSequence TargetSequence::list(std::vector<DecimalReal> values) {
  if (values.empty()) throw ConfigError("target list is empty");
  for (const auto& v : values) require_unit(v);
  TargetSequence t;
  t.kind_ = Kind::List;
  t.values_ = std::move(values);
  return t;
}

TargetSequence TargetSequence::seeded(std::uint64_t seed) {
  TargetSequence t;
  t.kind_ = Kind::Seeded;
  t.seed_ = seed;
  return t;
}

TargetSequence TargetSequence::parse(std::string_view text) {
  const std::string t = detail::trim(text);
  const auto colon = t.find(':');
  if (colon == std::string::npos) throw ConfigError("target spec must be const:<c>, list:<...> or seed:<n>");
  const std::string head = t.substr(0, colon);
  const std::string body = detail::trim(t.substr(colon + 1));
  if (head == "const") return constant(DecimalReal(body));
  if (head == "list") {
    std::vector<DecimalReal> vals;
    for (const auto& item : detail::split(body, ',')) vals.emplace_back(detail::trim(item));
    return list(std::move(vals));
  }
  if (head == "seed") {
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), seed);
    if (ec != std::errc() || ptr != body.data() + body.size()) throw ConfigError("malformed seed '" + body + "'");
    return seeded(seed);
  }
  throw ConfigError("unknown target kind '" + head + "'");
}

Enclosure TargetSequence::at(long n, mpfr_prec_t prec) const {
  if (n < 1) throw DomainError("target index must be >= 1");
  switch (kind_) {
    case Kind::Constant: return value_.at(prec);
    case Kind::List:
      if (n > static_cast<long>(values_.size())) {
        throw OutOfRange("target index " + std::to_string(n) + " past the end of the list");
      }
      return values_[static_cast<size_t>(n - 1)].at(prec);
    case Kind::Seeded: {
      // y_n = (top 53 bits) / 2^53, an exact dyadic rational.
      const std::uint64_t bits = splitmix64(seed_ + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(n)) >> 11;
      Real y(std::max<mpfr_prec_t>(prec, 64));
      mpfr_set_ui(y.get(), 0, MPFR_RNDN);
      mpz_class z(static_cast<unsigned long>(bits));
      mpfr_set_z_2exp(y.get(), z.get_mpz_t(), -53, MPFR_RNDN);
      return Enclosure::point(y);
    }
  }
  throw DomainError("unknown target kind");
}

double TargetSequence::approx(long n) const { return at(n, 64).mid(); }

std::string TargetSequence::spec() const {
  switch (kind_) {
    case Kind::Constant: return "const:" + value_.text();
    case Kind::Seeded: return "seed:" + std::to_string(seed_);
    case Kind::List: {
      std::string out = "list:";
      for (size_t i = 0; i < values_.size(); ++i) {
        if (i) out += ",";
        out += values_[i].text();
      }
      return out;
    }
  }
  return {};
}

}  // namespace fracpow
