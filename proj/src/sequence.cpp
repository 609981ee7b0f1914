#include "fracpow/sequence.hpp"

#include <cmath>

#include "parse_util.hpp"

namespace fracpow {

Sequence Sequence::geometric(DecimalReal r) {
  if (!(r.at(64).lo().sign() > 0)) throw DomainError("geometric ratio must be positive");
  Sequence s;
  s.kind_ = Kind::Geometric;
  s.param_ = std::move(r);
  return s;
}

Sequence Sequence::poly(DecimalReal d) {
  Sequence s;
  s.kind_ = Kind::Poly;
  s.param_ = std::move(d);
  return s;
}

Sequence Sequence::superexp(DecimalReal r) {
  if (!(r.at(64).lo().sign() > 0)) throw DomainError("superexp base must be positive");
  Sequence s;
  s.kind_ = Kind::SuperExp;
  s.param_ = std::move(r);
  return s;
}

Sequence Sequence::list(std::vector<DecimalReal> values) {
  if (values.empty()) throw ConfigError("explicit sequence is empty");
  for (const auto& v : values) {
    if (!(v.at(64).lo().sign() > 0)) throw DomainError("sequence entries must be positive, got " + v.text());
  }
  Sequence s;
  s.kind_ = Kind::List;
  s.values_ = std::move(values);
  return s;
}

Sequence Sequence::constant(DecimalReal c) {
  if (!(c.at(64).lo().sign() > 0)) throw DomainError("constant sequence value must be positive");
  Sequence s;
  s.kind_ = Kind::Constant;
  s.param_ = std::move(c);
  return s;
}

Sequence Sequence::custom(std::string name, Generator gen, std::function<double(long)> log_value) {
  Sequence s;
  s.kind_ = Kind::Custom;
  s.name_ = std::move(name);
  s.gen_ = std::make_shared<const Generator>(std::move(gen));
  s.log_gen_ = std::make_shared<const std::function<double(long)>>(std::move(log_value));
  return s;
}

Sequence Sequence::parse(std::string_view text) {
  const std::string t = detail::trim(text);
  if (t.empty()) throw ConfigError("empty sequence expression");
  if (t.front() == '[') {
    if (t.back() != ']') throw ConfigError("unterminated list in '" + t + "'");
    std::vector<DecimalReal> vals;
    for (const auto& item : detail::split(t.substr(1, t.size() - 2), ',')) vals.emplace_back(detail::trim(item));
    return list(std::move(vals));
  }
  const auto open = t.find('(');
  if (open == std::string::npos) return constant(DecimalReal(t));
  if (t.back() != ')') throw ConfigError("malformed sequence expression '" + t + "'");
  const std::string head = detail::trim(t.substr(0, open));
  const std::string body = t.substr(open + 1, t.size() - open - 2);
  if (head == "list") {
    std::vector<DecimalReal> vals;
    for (const auto& item : detail::split(body, ',')) vals.emplace_back(detail::trim(item));
    return list(std::move(vals));
  }
  const DecimalReal arg(detail::trim(body));
  if (head == "geometric") return geometric(arg);
  if (head == "poly") return poly(arg);
  if (head == "superexp") return superexp(arg);
  if (head == "const" || head == "constant") return constant(arg);
  throw ConfigError("unknown sequence kind '" + head + "'");
}

Enclosure Sequence::at(long n, const PrecisionContext& ctx) const {
  if (n < 1) throw DomainError("sequence index must be >= 1");
  const mpfr_prec_t prec = ctx.working();
  switch (kind_) {
    case Kind::Geometric: return pow_int(param_.at(prec), n, ctx);
    case Kind::Poly: {
      const Enclosure nn = Enclosure::exact(n, prec);
      const Enclosure d = param_.at(prec);
      if (d.is_point() && mpfr_integer_p(d.lo().get()) && mpfr_fits_slong_p(d.lo().get(), MPFR_RNDN)) {
        return pow_int(nn, mpfr_get_si(d.lo().get(), MPFR_RNDN), ctx);
      }
      return pow(nn, d, ctx);
    }
    case Kind::SuperExp: return pow_int(param_.at(prec), n * n, ctx);
    case Kind::List: {
      if (n > static_cast<long>(values_.size())) {
        throw OutOfRange("sequence index " + std::to_string(n) + " past the end of a list of " +
                         std::to_string(values_.size()));
      }
      return values_[static_cast<size_t>(n - 1)].at(prec);
    }
    case Kind::Constant: return param_.at(prec);
    case Kind::Custom: return (*gen_)(n, ctx);
  }
  throw DomainError("unknown sequence kind");
}

double Sequence::log_at(long n) const {
  if (n < 1) throw DomainError("sequence index must be >= 1");
  const auto dn = static_cast<double>(n);
  switch (kind_) {
    case Kind::Geometric: return dn * std::log(param_.approx());
    case Kind::Poly: return param_.approx() * std::log(dn);
    case Kind::SuperExp: return dn * dn * std::log(param_.approx());
    case Kind::List: {
      const Enclosure v = at(n, PrecisionContext(64, 0));
      Real r(64);
      mpfr_log(r.get(), v.lo().get(), MPFR_RNDN);
      return r.to_double();
    }
    case Kind::Constant: return std::log(param_.approx());
    case Kind::Custom: return (*log_gen_)(n);
  }
  return 0;
}

double Sequence::approx(long n) const { return std::exp(log_at(n)); }

std::optional<long> Sequence::length() const {
  if (kind_ == Kind::List) return static_cast<long>(values_.size());
  return std::nullopt;
}

std::string Sequence::spec() const {
  switch (kind_) {
    case Kind::Geometric: return "geometric(" + param_.text() + ")";
    case Kind::Poly: return "poly(" + param_.text() + ")";
    case Kind::SuperExp: return "superexp(" + param_.text() + ")";
    case Kind::Constant: return "const(" + param_.text() + ")";
    case Kind::Custom: return "custom(" + name_ + ")";
    case Kind::List: {
      std::string out = "[";
      for (size_t i = 0; i < values_.size(); ++i) {
        if (i) out += ",";
        out += values_[i].text();
      }
      return out + "]";
    }
  }
  return {};
}

}  // namespace fracpow
