#include "fracpow/io.hpp"

namespace fracpow {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

Json series_json(const std::vector<SeriesPoint>& s) {
  Json arr = Json::array();
  for (const auto& p : s) arr.push_back({{"n", p.n}, {"value", p.value}});
  return arr;
}

Json verdict_json(const ConditionVerdict& v) {
  Json j{{"id", v.id}, {"verdict", std::string(to_string(v.verdict))}, {"detail", v.detail},
         {"evidence", series_json(v.evidence)}};
  if (v.counterexample) {
    j["counterexample"] = {{"n", v.counterexample->n}, {"x", v.counterexample->x}, {"value", v.counterexample->value}};
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

mpz_class mpz_from(const std::string& s) {
  mpz_class z;
  if (s.empty() || z.set_str(s, 10) != 0) throw ConfigError("malformed integer '" + s + "'");
  return z;
}

}  // namespace

Json real_to_json(const Real& x) { return {{"value", x.to_decimal()}, {"prec", x.precision()}}; }

Real real_from_json(const Json& j) {
  const auto text = field<std::string>(j, "value");
  const auto prec = field<long>(j, "prec");
  if (prec < MPFR_PREC_MIN || prec > (1L << 30)) throw ConfigError("precision tag out of range");
  if (text == "inf") return Real::infinity(1);
  if (text == "-inf") return Real::infinity(-1);
  return Real::parse(text, prec);
}

Json to_json(const Enclosure& e) { return {{"lo", real_to_json(e.lo())}, {"hi", real_to_json(e.hi())}}; }

Enclosure enclosure_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("enclosure must be an object");
  Real lo = real_from_json(j.at("lo"));
  Real hi = real_from_json(j.at("hi"));
  if (hi < lo) throw ConfigError("enclosure with lo > hi");
  return Enclosure(std::move(lo), std::move(hi));
}

Json to_json(const ConstructionCertificate& cert) {
  Json levels = Json::array();
  for (const auto& l : cert.levels) {
    levels.push_back({{"level", l.level},
                      {"n", l.n},
                      {"k", l.k.get_str()},
                      {"target", to_json(l.target)},
                      {"half_width", to_json(l.half_width)},
                      {"interval", to_json(l.interval)},
                      {"child_count", l.child_count.get_str()},
                      {"min_gap", l.min_gap ? to_json(*l.min_gap) : Json(nullptr)},
                      {"bits", l.bits},
                      {"tol_bits", l.tol_bits}});
  }
  return {{"format", kCertificateFormat},
          {"version", kCertificateVersion},
          {"regime", cert.regime},
          {"family", cert.family},
          {"target", cert.target},
          {"selector", cert.selector},
          {"v", cert.v.text()},
          {"eps", cert.eps.text()},
          {"gamma", cert.gamma.text()},
          {"window", to_json(cert.window)},
          {"subsequence", cert.subsequence},
          {"levels", levels},
          {"witness", to_json(cert.witness)},
          {"precision_schedule", cert.precision_schedule},
          {"guard_bits", cert.guard_bits}};
}

ConstructionCertificate certificate_from_json(const Json& j) {
  try {
    if (field<std::string>(j, "format") != kCertificateFormat) throw ConfigError("not a certificate file");
    if (field<int>(j, "version") != kCertificateVersion) throw ConfigError("unsupported certificate version");
    ConstructionCertificate c;
    c.regime = field<std::string>(j, "regime");
    c.family = field<std::string>(j, "family");
    c.target = field<std::string>(j, "target");
    c.selector = field<std::string>(j, "selector");
    c.v = DecimalReal(field<std::string>(j, "v"));
    c.eps = DecimalReal(field<std::string>(j, "eps"));
    c.gamma = DecimalReal(field<std::string>(j, "gamma"));
    c.window = enclosure_from_json(j.at("window"));
    c.subsequence = field<std::vector<long>>(j, "subsequence");
    c.witness = enclosure_from_json(j.at("witness"));
    c.precision_schedule = field<std::vector<int>>(j, "precision_schedule");
    c.guard_bits = field<int>(j, "guard_bits");
    for (const auto& lj : field<Json>(j, "levels")) {
      LevelRecord l;
      l.level = field<long>(lj, "level");
      l.n = field<long>(lj, "n");
      l.k = mpz_from(field<std::string>(lj, "k"));
      l.target = enclosure_from_json(lj.at("target"));
      l.half_width = enclosure_from_json(lj.at("half_width"));
      l.interval = enclosure_from_json(lj.at("interval"));
      l.child_count = mpz_from(field<std::string>(lj, "child_count"));
      if (!lj.at("min_gap").is_null()) l.min_gap = enclosure_from_json(lj.at("min_gap"));
      l.bits = field<int>(lj, "bits");
      l.tol_bits = field<int>(lj, "tol_bits");
      c.levels.push_back(std::move(l));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed certificate: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("malformed certificate: ") + e.what());
  }
}

std::string dump_certificate(const ConstructionCertificate& cert) { return to_json(cert).dump(2) + "\n"; }

ConstructionCertificate load_certificate(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("certificate is not valid JSON: ") + e.what());
  }
  return certificate_from_json(j);
}

// ---------------------------------------------------------------------------

Json to_json(const DimensionReport& r) {
  Json closed = Json::array();
  for (const auto& f : r.closed_form) {
    Json e{{"name", f.name}};
    e["value"] = f.value ? Json(*f.value) : Json(nullptr);
    e["lower"] = f.lower ? Json(*f.lower) : Json(nullptr);
    e["upper"] = f.upper ? Json(*f.upper) : Json(nullptr);
    closed.push_back(e);
  }
  Json levels = Json::array();
  for (const auto& l : r.levels) {
    levels.push_back({{"level", l.level},
                      {"n", l.n},
                      {"m", l.m.get_str()},
                      {"log_eps", l.log_eps ? Json(*l.log_eps) : Json(nullptr)},
                      {"log_width", l.log_width}});
  }
  Json box = nullptr;
  if (r.box_count_estimate) {
    box = {{"slope", r.box_count_estimate->slope},
           {"stderr", r.box_count_estimate->std_error},
           {"scales", r.box_count_estimate->scales},
           {"counts", r.box_count_estimate->counts}};
  }
  return {{"closed_form", closed},
          {"empirical_lower_series", series_json(r.empirical_lower_series)},
          {"empirical_upper_series", series_json(r.empirical_upper_series)},
          {"box_count_estimate", box},
          {"truncation_depth", r.truncation_depth},
          {"levels", levels}};
}

Json to_json(const MembershipVerdict& v) {
  Json margins = Json::array();
  for (const auto& m : v.margins) {
    margins.push_back({{"n", m.n}, {"margin", to_json(m.margin)}, {"status", std::string(to_string(m.status))},
                       {"bits", m.bits}});
  }
  return {{"condition", v.condition},
          {"n_min", v.n_min},
          {"n_max", v.n_max},
          {"margins", margins},
          {"verdict", std::string(to_string(v.verdict))},
          {"first_failure", v.first_failure ? Json(*v.first_failure) : Json(nullptr)},
          {"scope", v.scope}};
}

Json to_json(const GrowthProfile& p) {
  return {{"u_estimate", p.u_estimate}, {"l_estimate", p.l_estimate}, {"truncation_N", p.truncation_N},
          {"series", series_json(p.series)}};
}

Json to_json(const ConditionReport& r) {
  Json verdicts = Json::array();
  for (const auto* v : r.all()) verdicts.push_back(verdict_json(*v));
  return {{"N", r.N}, {"M_estimate", r.M_estimate ? Json(*r.M_estimate) : Json(nullptr)}, {"verdicts", verdicts}};
}

Json report_envelope(const std::string& kind, const Json& config, const Json& result) {
  return {{"schema", kReportSchema}, {"kind", kind}, {"config", config}, {"result", result}};
}

}  // namespace fracpow
