#include "fracpow/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fracpow/io.hpp"
#include "parse_util.hpp"

namespace fracpow {

namespace {

// Every numeric field stays a decimal string until the command converts it.
struct RunConfig {
  std::string family = "power";
  std::string target = "const:0";
  std::string regime;
  std::string v;
  std::string eps;
  std::string depth = "10";
  std::string gamma = "0.5";
  std::string max_bits = "0";
  std::string guard_bits = "64";
  std::string max_index = "4194304";
  std::string selector = "leftmost";
  std::string policy = "upper-only";
  std::string kappa = "4";
  std::string out;
  // verify
  std::string cert;
  std::string x;
  std::string indices;
  std::string n_min = "1";
  std::string n_max;
  // dimension / scan / conditions
  std::string formula;
  std::string b;
  std::string B;
  std::string tau;
  std::string theta;
  std::string u;
  std::string l;
  std::string delta;
  std::string N = "20";
  std::string csv;
  std::string jobs = "1";
  std::string config;
};

using FieldMap = std::map<std::string, std::string RunConfig::*>;

const FieldMap& fields() {
  static const FieldMap m{
      {"family", &RunConfig::family},     {"y", &RunConfig::target},          {"regime", &RunConfig::regime},
      {"v", &RunConfig::v},               {"eps", &RunConfig::eps},           {"depth", &RunConfig::depth},
      {"gamma", &RunConfig::gamma},       {"max-bits", &RunConfig::max_bits}, {"guard-bits", &RunConfig::guard_bits},
      {"max-index", &RunConfig::max_index}, {"selector", &RunConfig::selector}, {"policy", &RunConfig::policy},
      {"kappa", &RunConfig::kappa},       {"out", &RunConfig::out},
      {"cert", &RunConfig::cert},         {"x", &RunConfig::x},               {"indices", &RunConfig::indices},
      {"Nmin", &RunConfig::n_min},        {"Nmax", &RunConfig::n_max},        {"formula", &RunConfig::formula},
      {"b", &RunConfig::b},               {"B", &RunConfig::B},               {"tau", &RunConfig::tau},
      {"theta", &RunConfig::theta},       {"u", &RunConfig::u},               {"l", &RunConfig::l},
      {"delta", &RunConfig::delta},       {"N", &RunConfig::N},               {"csv", &RunConfig::csv},
      {"jobs", &RunConfig::jobs},
  };
  return m;
}

long to_long(const std::string& s, const char* name) {
  try {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("--") + name + " expects an integer, got '" + s + "'");
  }
}

double to_double(const std::string& s, const char* name) {
  if (s.empty()) throw ConfigError(std::string("--") + name + " is required");
  return DecimalReal(s).approx();
}

const std::string& required(const std::string& s, const char* name) {
  if (s.empty()) throw ConfigError(std::string("--") + name + " is required");
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

Json config_json(const RunConfig& c, const CLI::App& sub) {
  Json j = Json::object();
  for (const auto& [name, ptr] : fields()) {
    if (name == "out" || name == "csv" || name == "jobs") continue;
    // A certificate carries its own family, regime and parameters.
    if (!c.cert.empty() && name != "cert" && name != "max-bits") continue;
    const CLI::Option* opt = sub.get_option_no_throw("--" + name);
    if (opt && !(c.*ptr).empty()) j[name] = c.*ptr;
  }
  return j;
}

void merge_config_file(RunConfig& c, const CLI::App& sub) {
  if (c.config.empty()) return;
  Json j;
  try {
    j = Json::parse(read_file(c.config));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    const auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("unknown config key '" + key + "'");
    const CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (!opt) throw ConfigError("config key '" + key + "' does not apply to '" + sub.get_name() + "'");
    if (opt->count() > 0) continue;  // flags win
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_number_integer()) {
      text = std::to_string(value.get<long>());
    } else {
      throw ConfigError("config key '" + key + "' must be a string or an integer");
    }
    c.*(it->second) = text;
  }
}

void add_options(CLI::App& sub, RunConfig& c, const std::vector<std::string>& names) {
  sub.add_option("--config", c.config, "JSON config file; flags override it");
  for (const auto& n : names) sub.add_option("--" + n, c.*(fields().at(n)));
}

// ---------------------------------------------------------------------------

ConstructOptions construct_options(const RunConfig& c) {
  ConstructOptions o;
  o.selector = Selector::parse(c.selector);
  o.gamma = to_double(c.gamma, "gamma");
  o.guard_bits = static_cast<int>(to_long(c.guard_bits, "guard-bits"));
  o.max_bits = to_long(c.max_bits, "max-bits");
  o.max_index = to_long(c.max_index, "max-index");
  o.selection.kappa = to_double(c.kappa, "kappa");
  if (c.policy == "upper-only") {
    o.selection.policy = SelectionPolicy::UpperOnly;
  } else if (c.policy == "paper-ki") {
    o.selection.policy = SelectionPolicy::PaperKi;
  } else {
    throw ConfigError("--policy must be upper-only or paper-ki");
  }
  if (o.guard_bits < 0) throw ConfigError("--guard-bits must be >= 0");
  return o;
}

std::string abbreviated(const mpz_class& m) {
  const std::string s = m.get_str();
  if (s.size() <= 18) return s;
  return s.substr(0, 1) + "." + s.substr(1, 3) + "e" + std::to_string(s.size() - 1);
}

std::string summary(const ConstructionCertificate& cert) {
  std::ostringstream os;
  os << "regime " << cert.regime << ", family " << cert.family << ", target " << cert.target << "\n";
  os << fmt::format("{:>5} {:>10} {:>16} {:>14} {:>10}\n", "level", "n_i", "m_i", "log10|I_i|", "bits");
  for (const auto& l : cert.levels) {
    Real w = l.interval.width(l.interval.precision());
    Real lg(64);
    mpfr_log10(lg.get(), w.get(), MPFR_RNDN);
    os << fmt::format("{:>5} {:>10} {:>16} {:>14.6g} {:>10}\n", l.level, l.n, abbreviated(l.child_count),
                      lg.to_double(), l.bits);
  }
  return os.str();
}

int cmd_construct(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const FamilyPtr fam = parse_family(c.family);
  const ApproxRegime regime = parse_regime(required(c.regime, "regime"));
  const TargetSequence target = TargetSequence::parse(c.target);
  const DecimalReal v(required(c.v, "v"));
  const DecimalReal eps(required(c.eps, "eps"));
  if (!eps.at(64).certainly_positive()) throw ConfigError("--eps must be positive");
  const long depth = to_long(c.depth, "depth");
  if (depth < 1) throw ConfigError("--depth must be >= 1");
  const ConstructionCertificate cert = construct(*fam, v, eps, regime, target, depth, construct_options(c));
  const std::string text = dump_certificate(cert);
  if (c.out.empty() || c.out == "-") {
    out << text;
    err << summary(cert);
  } else {
    write_output(c.out, text, out);
    out << summary(cert);
  }
  return exit_code::kOk;
}

std::vector<long> parse_indices(const std::string& text) {
  std::vector<long> out;
  for (const auto& part : detail::split(text, ',')) {
    const std::string p = detail::trim(part);
    const auto dots = p.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_long(p, "indices"));
      continue;
    }
    const long a = to_long(p.substr(0, dots), "indices"), b = to_long(p.substr(dots + 2), "indices");
    if (b < a || b - a > 1000000) throw ConfigError("bad index range '" + p + "'");
    for (long n = a; n <= b; ++n) out.push_back(n);
  }
  if (out.empty()) throw ConfigError("--indices is empty");
  return out;
}

int membership_exit(const MembershipVerdict& v) {
  switch (v.verdict) {
    case Membership::Pass: return exit_code::kOk;
    case Membership::Fail: return exit_code::kVerificationFailed;
    case Membership::Indeterminate: return exit_code::kNumericExhaustion;
  }
  return exit_code::kNumericExhaustion;
}

MembershipVerdict verify_certificate_witness(const ConstructionCertificate& cert, const FunctionFamily& fam,
                                             const ApproxRegime& regime, const OracleOptions& oo) {
  const TargetSequence target = TargetSequence::parse(cert.target);
  const std::vector<long>& idx = cert.subsequence;
  if (idx.empty()) throw DomainError("certificate has no levels");
  return std::visit(
      [&](const auto& r) -> MembershipVerdict {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, regime::AsymptoticBase>) {
          if (fam.kind() != FamilyKind::Power) throw Unsupported("asym-base verification needs the power family");
          return verify_asymptotic(cert.witness, target, r.b, idx, oo);
        } else if constexpr (std::is_same_v<T, regime::Asymptotic>) {
          return verify_asymptotic_tau(cert.witness, fam, target, r.tau, idx, oo);
        } else if constexpr (std::is_same_v<T, regime::Uniform>) {
          return verify_uniform(cert.witness, target, r.B, idx.front(), idx.back(), oo);
        } else {
          return verify_bad(cert.witness, fam, target, r.delta, idx.back(), oo);
        }
      },
      regime);
}

int cmd_verify(const RunConfig& c, const CLI::App& sub, std::ostream& out) {
  OracleOptions oo;
  oo.max_bits = to_long(c.max_bits, "max-bits");
  Json result;
  int code = exit_code::kOk;
  if (!c.cert.empty()) {
    const ConstructionCertificate cert = load_certificate(read_file(c.cert));
    const FamilyPtr fam = parse_family(cert.family);
    const ApproxRegime regime = parse_regime(cert.regime);
    const ReplayResult rr = replay(cert, *fam, regime);
    result["replay"] = {{"ok", rr.ok}, {"level", rr.level}, {"failure", rr.failure}};
    const MembershipVerdict mv = verify_certificate_witness(cert, *fam, regime, oo);
    result["membership"] = to_json(mv);
    code = rr.ok ? membership_exit(mv) : exit_code::kVerificationFailed;
  } else {
    const XProvider x = parse_x(required(c.x, "x"));
    std::string regime_text = required(c.regime, "regime");
    // theta only shapes constructions; membership in F needs B alone.
    if (detail::trim(regime_text).rfind("uniform", 0) == 0 && regime_text.find("theta=") == std::string::npos) {
      regime_text += " theta=2";
    }
    const ApproxRegime regime = parse_regime(regime_text);
    const TargetSequence target = TargetSequence::parse(c.target);
    MembershipVerdict mv;
    if (const auto* u = std::get_if<regime::Uniform>(&regime)) {
      mv = verify_uniform(x, target, u->B, to_long(c.n_min, "Nmin"), to_long(required(c.n_max, "Nmax"), "Nmax"), oo);
    } else if (const auto* a = std::get_if<regime::AsymptoticBase>(&regime)) {
      const std::vector<long> idx =
          c.indices.empty() ? parse_indices(c.n_min + ".." + required(c.n_max, "Nmax")) : parse_indices(c.indices);
      mv = verify_asymptotic(x, target, a->b, idx, oo);
    } else {
      const FamilyPtr fam = parse_family(c.family);
      const Enclosure xe = x(256);
      if (const auto* t = std::get_if<regime::Asymptotic>(&regime)) {
        const std::vector<long> idx =
            c.indices.empty() ? parse_indices(c.n_min + ".." + required(c.n_max, "Nmax")) : parse_indices(c.indices);
        mv = verify_asymptotic_tau(xe, *fam, target, t->tau, idx, oo);
      } else {
        const auto& bad = std::get<regime::Bad>(regime);
        mv = verify_bad(xe, *fam, target, bad.delta, to_long(required(c.n_max, "Nmax"), "Nmax"), oo);
      }
    }
    result["membership"] = to_json(mv);
    code = membership_exit(mv);
  }
  const Json env = report_envelope("verify", config_json(c, sub), result);
  write_output(c.out, env.dump(2) + "\n", out);
  return code;
}

Json formula_result(const RunConfig& c) {
  const std::string& f = required(c.formula, "formula");
  Json r{{"formula", f}};
  if (f == "asym-power") {
    r["value"] = formula_asymptotic_power(to_double(c.b, "b"), to_double(c.v, "v"));
  } else if (f == "general") {
    const DimensionBounds b = formula_general_bounds(to_double(c.tau, "tau"), to_double(c.u, "u"), to_double(c.l, "l"),
                                                     parse_family(c.family)->is_linear());
    r["lower"] = b.lower;
    r["upper"] = b.upper;
  } else if (f == "uniform") {
    r["value"] = formula_uniform(to_double(c.B, "B"), to_double(c.v, "v"));
  } else if (f == "uniform-theta") {
    r["value"] = formula_uniform_theta(to_double(c.theta, "theta"), to_double(c.B, "B"), to_double(c.v, "v"));
  } else if (f == "bad") {
    const FamilyPtr fam = parse_family(c.family);
    const BadFormula bf = formula_bad(*fam, Sequence::parse(required(c.delta, "delta")), to_double(c.v, "v"),
                                      to_long(c.N, "N"));
    r["value"] = bf.value;
    Json s = Json::array();
    for (const auto& p : bf.series) s.push_back({{"n", p.n}, {"value", p.value}});
    r["series"] = s;
  } else {
    throw ConfigError("unknown formula '" + f + "' (asym-power | general | uniform | uniform-theta | bad)");
  }
  return r;
}

int cmd_dimension(const RunConfig& c, const CLI::App& sub, std::ostream& out) {
  Json result;
  if (!c.cert.empty()) {
    const ConstructionCertificate cert = load_certificate(read_file(c.cert));
    const FamilyPtr fam = parse_family(cert.family);
    const DimensionReport rep = dimension_report(cert, *fam);
    result = to_json(rep);
    if (!c.csv.empty()) write_output(c.csv, dimension_csv(rep), out);
  } else {
    result = formula_result(c);
  }
  const Json env = report_envelope("dimension", config_json(c, sub), result);
  write_output(c.out, env.dump(2) + "\n", out);
  return exit_code::kOk;
}

int cmd_conditions(const RunConfig& c, const CLI::App& sub, std::ostream& out) {
  const FamilyPtr fam = parse_family(c.family);
  const long N = to_long(c.N, "N");
  std::optional<Sequence> delta;
  if (!c.delta.empty()) delta = Sequence::parse(c.delta);
  const ConditionReport rep =
      check_conditions(*fam, DecimalReal(required(c.v, "v")).at(128), DecimalReal(required(c.eps, "eps")).at(128), N, delta);
  Json result = to_json(rep);
  result["growth_profile"] = to_json(growth_profile(*fam, DecimalReal(c.v).at(128), N));
  const Json env = report_envelope("conditions", config_json(c, sub), result);
  write_output(c.out, env.dump(2) + "\n", out);
  return exit_code::kOk;
}

// Grid axis: `a:b:step` (inclusive), `a,b,c`, or a single value.
std::vector<std::string> parse_axis(const std::string& spec, const char* name) {
  std::vector<std::string> out;
  if (spec.empty()) throw ConfigError(std::string("--") + name + " is required for this scan");
  if (spec.find(':') == std::string::npos) {
    for (const auto& p : detail::split(spec, ',')) {
      DecimalReal check(detail::trim(p));
      out.push_back(check.text());
    }
    return out;
  }
  const auto parts = detail::split(spec, ':');
  if (parts.size() != 3) throw ConfigError(std::string("--") + name + " grid must be start:stop:step");
  // Exact decimal stepping: work with the literal digits scaled by a power of 10.
  auto to_scaled = [](const std::string& s, long scale) {
    const std::string t = detail::trim(s);
    const auto dot = t.find('.');
    std::string digits = t;
    long frac = 0;
    if (dot != std::string::npos) {
      digits = t.substr(0, dot) + t.substr(dot + 1);
      frac = static_cast<long>(t.size() - dot - 1);
    }
    mpz_class z(digits, 10);
    for (long i = frac; i < scale; ++i) z *= 10;
    return z;
  };
  long scale = 0;
  for (const auto& p : parts) {
    const std::string t = detail::trim(p);
    if (t.find_first_not_of("+-0123456789.") != std::string::npos) {
      throw ConfigError(std::string("--") + name + " grid entries must be plain decimals");
    }
    const auto dot = t.find('.');
    if (dot != std::string::npos) scale = std::max(scale, static_cast<long>(t.size() - dot - 1));
  }
  const mpz_class a = to_scaled(parts[0], scale), b = to_scaled(parts[1], scale), st = to_scaled(parts[2], scale);
  if (st <= 0) throw ConfigError(std::string("--") + name + " grid step must be positive");
  if (b < a) throw ConfigError(std::string("--") + name + " grid stop is below start");
  if ((b - a) / st > 100000) throw ConfigError(std::string("--") + name + " grid is too large");
  mpz_class pow10 = 1;
  for (long i = 0; i < scale; ++i) pow10 *= 10;
  for (mpz_class z = a; z <= b; z += st) {
    mpz_class q = abs(z) / pow10, r = abs(z) % pow10;
    std::string s = (z < 0 ? "-" : "") + q.get_str();
    if (scale > 0) {
      std::string rs = r.get_str();
      rs.insert(0, static_cast<size_t>(scale) - rs.size(), '0');
      while (!rs.empty() && rs.back() == '0') rs.pop_back();
      if (!rs.empty()) s += "." + rs;
    }
    out.push_back(s);
  }
  return out;
}

int cmd_scan(const RunConfig& c, std::ostream& out) {
  const std::string& f = required(c.formula, "formula");
  std::vector<std::pair<std::string, std::string>> axes;  // name, spec
  if (f == "asym-power") {
    axes = {{"b", c.b}, {"v", c.v}};
  } else if (f == "uniform") {
    axes = {{"B", c.B}, {"v", c.v}};
  } else if (f == "uniform-theta") {
    axes = {{"theta", c.theta}, {"B", c.B}, {"v", c.v}};
  } else if (f == "general") {
    axes = {{"tau", c.tau}, {"u", c.u}, {"l", c.l}};
  } else {
    throw ConfigError("scan supports asym-power | uniform | uniform-theta | general");
  }
  std::vector<std::vector<std::string>> values;
  for (const auto& [name, spec] : axes) values.push_back(parse_axis(spec, name.c_str()));
  // Rows in lexicographic order of the numeric grid coordinates.
  for (auto& v : values) {
    std::stable_sort(v.begin(), v.end(), [](const std::string& a, const std::string& b) {
      return DecimalReal(a).at(128).mid() < DecimalReal(b).at(128).mid();
    });
  }
  std::vector<std::vector<std::string>> cells{{}};
  for (const auto& axis : values) {
    std::vector<std::vector<std::string>> next;
    for (const auto& prefix : cells) {
      for (const auto& v : axis) {
        auto row = prefix;
        row.push_back(v);
        next.push_back(std::move(row));
      }
    }
    cells = std::move(next);
  }
  const bool linear = f == "general" && parse_family(c.family)->is_linear();
  auto evaluate = [&](const std::vector<std::string>& row) -> std::string {
    std::vector<double> d;
    for (const auto& s : row) d.push_back(DecimalReal(s).approx());
    try {
      if (f == "asym-power") return fmt::format("{:.17g},ok", formula_asymptotic_power(d[0], d[1]));
      if (f == "uniform") return fmt::format("{:.17g},ok", formula_uniform(d[0], d[1]));
      if (f == "uniform-theta") return fmt::format("{:.17g},ok", formula_uniform_theta(d[0], d[1], d[2]));
      const DimensionBounds b = formula_general_bounds(d[0], d[1], d[2], linear);
      return fmt::format("{:.17g},{:.17g},ok", b.lower, b.upper);
    } catch (const DomainError&) {
      return f == "general" ? ",,domain" : ",domain";
    }
  };
  const long jobs = std::max(1L, to_long(c.jobs, "jobs"));
  std::vector<std::string> results(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < cells.size(); i = next++) results[i] = evaluate(cells[i]);
  };
  std::vector<std::thread> pool;
  for (long j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream os;
  for (const auto& [name, spec] : axes) os << name << ',';
  os << (f == "general" ? "lower,upper,status\n" : "value,status\n");
  for (size_t i = 0; i < cells.size(); ++i) {
    for (const auto& v : cells[i]) os << v << ',';
    os << results[i] << '\n';
  }
  write_output(c.out, os.str(), out);
  return exit_code::kOk;
}

int error_exit(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergence:
    case ErrorCode::PrecisionExhausted: return exit_code::kNumericExhaustion;
    default: return exit_code::kConfigError;
  }
}

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << Json{{"error", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Certified nested-interval constructions and dimension estimates for fractional parts of f_n(x)",
               "fracpow"};
  app.require_subcommand(1);
  auto* construct_cmd = app.add_subcommand("construct", "Build a certified witness and write its certificate");
  add_options(*construct_cmd, c,
              {"family", "y", "regime", "v", "eps", "depth", "gamma", "max-bits", "guard-bits", "max-index", "selector",
               "policy", "kappa", "out"});
  auto* verify_cmd = app.add_subcommand("verify", "Check membership of a witness or a number");
  add_options(*verify_cmd, c, {"family", "y", "regime", "cert", "x", "indices", "Nmin", "Nmax", "max-bits", "out"});
  auto* dimension_cmd = app.add_subcommand("dimension", "Evaluate a dimension formula or a certificate's series");
  add_options(*dimension_cmd, c,
              {"formula", "family", "b", "B", "v", "tau", "theta", "u", "l", "delta", "N", "cert", "csv", "out"});
  auto* scan_cmd = app.add_subcommand("scan", "Tabulate a dimension formula over a grid as CSV");
  add_options(*scan_cmd, c, {"formula", "family", "b", "B", "v", "tau", "theta", "u", "l", "jobs", "out"});
  auto* conditions_cmd = app.add_subcommand("conditions", "Report growth and hypothesis checks for a family");
  add_options(*conditions_cmd, c, {"family", "v", "eps", "N", "delta", "out"});

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return exit_code::kOk;
    }
    report_error(err, "ConfigError", e.what());
    return exit_code::kConfigError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    merge_config_file(c, *sub);
    if (sub == construct_cmd) return cmd_construct(c, out, err);
    if (sub == verify_cmd) return cmd_verify(c, *sub, out);
    if (sub == dimension_cmd) return cmd_dimension(c, *sub, out);
    if (sub == scan_cmd) return cmd_scan(c, out);
    return cmd_conditions(c, *sub, out);
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.code())), e.what());
    return error_exit(e.code());
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return exit_code::kConfigError;
  }
}

}  // namespace fracpow
