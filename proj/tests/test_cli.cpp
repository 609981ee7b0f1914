#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracpow/cli.hpp"
#include "fracpow/io.hpp"

using namespace fracpow;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fracpow-cli-tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kConstruct = {"construct", "--family", "power", "--regime", "asym-base b=2", "--v", "2",
                                             "--eps", "0.25", "--depth", "5", "--y", "const:0"};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("construct then verify") {
    auto args = kConstruct;
    const fs::path cert = scratch("c1.json");
    args.insert(args.end(), {"--out", cert.string()});
    const Run c = run(args);
    REQUIRE_MESSAGE(c.code == exit_code::kOk, c.err);
    const ConstructionCertificate loaded = load_certificate(slurp(cert));
    CHECK(loaded.levels.size() == 5);
    const Run v = run({"verify", "--cert", cert.string()});
    CHECK_MESSAGE(v.code == exit_code::kOk, v.err);
    const Json j = Json::parse(v.out);
    CHECK(j["schema"] == kReportSchema);
    CHECK(j["kind"] == "verify");
  }

  TEST_CASE("construct is byte-for-byte reproducible") {
    auto args = kConstruct;
    args.back() = "seed:9";
    args.insert(args.end(), {"--selector", "seeded:5"});
    auto a = args, b = args;
    a.insert(a.end(), {"--out", scratch("r1.json").string()});
    b.insert(b.end(), {"--out", scratch("r2.json").string()});
    REQUIRE(run(a).code == 0);
    REQUIRE(run(b).code == 0);
    CHECK(slurp(scratch("r1.json")) == slurp(scratch("r2.json")));
  }

  TEST_CASE("config files with flag overrides") {
    const fs::path cfg = scratch("cfg.json");
    std::ofstream(cfg) << R"({"family":"power","regime":"asym-base b=2","v":"2","eps":"0.25","depth":"7","y":"const:0"})";
    const Run r = run({"construct", "--config", cfg.string(), "--depth", "3", "--out", scratch("cfg-cert.json").string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(load_certificate(slurp(scratch("cfg-cert.json"))).levels.size() == 3);
  }

  TEST_CASE("empty window is a config error") {
    auto args = kConstruct;
    args[8] = "0";
    const Run r = run(args);
    CHECK(r.code == exit_code::kConfigError);
    const Json e = Json::parse(r.err);
    CHECK(e.contains("error"));
    CHECK(e.contains("message"));
  }

  TEST_CASE("unknown subcommands and options") {
    CHECK(run({"frobnicate"}).code == exit_code::kConfigError);
    CHECK(run({"construct", "--nope", "1"}).code == exit_code::kConfigError);
    CHECK(run({}).code == exit_code::kConfigError);
    CHECK(run({"construct", "--family", "cubic", "--regime", "asym-base b=2", "--v", "2", "--eps", "0.25", "--depth", "2"})
              .code == exit_code::kConfigError);
  }

  TEST_CASE("precision cap exits with numeric exhaustion") {
    auto args = kConstruct;
    args.insert(args.end(), {"--max-bits", "200", "--out", scratch("cap.json").string()});
    CHECK(run(args).code == exit_code::kNumericExhaustion);
  }

  TEST_CASE("verification failure exits with one") {
    const Run r = run({"verify", "--x", "3/2", "--regime", "asym-base b=4", "--indices", "2"});
    CHECK(r.code == exit_code::kVerificationFailed);
    CHECK(Json::parse(r.out)["result"]["membership"]["verdict"] == "fail");
  }

  TEST_CASE("golden ratio passes the uniform check") {
    const Run r = run({"verify", "--x", "golden", "--regime", "uniform B=1.5", "--Nmax", "25"});
    CHECK_MESSAGE(r.code == exit_code::kOk, r.err);
  }

  TEST_CASE("tampered certificate fails verification") {
    auto args = kConstruct;
    const fs::path cert = scratch("t.json");
    args.insert(args.end(), {"--out", cert.string()});
    REQUIRE(run(args).code == 0);
    Json j = Json::parse(slurp(cert));
    j["levels"][2]["k"] = std::to_string(std::stol(j["levels"][2]["k"].get<std::string>()) + 1);
    std::ofstream(scratch("t2.json")) << j.dump(2);
    CHECK(run({"verify", "--cert", scratch("t2.json").string()}).code == exit_code::kVerificationFailed);
  }

  TEST_CASE("dimension formula report") {
    const Run r = run({"dimension", "--formula", "asym-power", "--b", "2", "--v", "2"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["kind"] == "dimension");
    CHECK(r.out.find("0.5") != std::string::npos);
    CHECK(run({"dimension", "--formula", "uniform", "--B", "2", "--v", "1.5"}).code == exit_code::kConfigError);
  }

  TEST_CASE("dimension csv from a certificate") {
    auto args = kConstruct;
    const fs::path cert = scratch("d.json");
    args.insert(args.end(), {"--out", cert.string()});
    REQUIRE(run(args).code == 0);
    const fs::path csv = scratch("d.csv");
    const Run r = run({"dimension", "--cert", cert.string(), "--csv", csv.string()});
    CHECK_MESSAGE(r.code == 0, r.err);
    const std::string text = slurp(csv);
    CHECK(text.rfind("level,n_i,m_i,eps_i,ratio_lower,ratio_upper", 0) == 0);
  }

  TEST_CASE("scan rows are ordered and the uniform column increases") {
    const Run r = run({"scan", "--formula", "uniform", "--B", "1.5", "--v", "2:10:0.5", "--jobs", "4"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    std::istringstream in(r.out);
    std::string header, line;
    std::getline(in, header);
    const auto cols = [](const std::string& s) {
      std::vector<std::string> out;
      std::stringstream ss(s);
      std::string cell;
      while (std::getline(ss, cell, ',')) out.push_back(cell);
      return out;
    };
    const auto names = cols(header);
    const auto vi = std::find(names.begin(), names.end(), "v") - names.begin();
    const auto val = std::find(names.begin(), names.end(), "value") - names.begin();
    REQUIRE(static_cast<size_t>(val) < names.size());
    double prev_v = 0, prev = -1;
    int rows = 0;
    while (std::getline(in, line)) {
      const auto c = cols(line);
      const double v = std::stod(c[static_cast<size_t>(vi)]), x = std::stod(c[static_cast<size_t>(val)]);
      CHECK(v > prev_v);
      CHECK(x > prev);
      prev_v = v;
      prev = x;
      ++rows;
    }
    CHECK(rows == 17);
  }

  TEST_CASE("scan grid steps with leading zeros are decimal") {
    const Run r = run({"scan", "--formula", "asym-power", "--b", "1.5:2:0.25", "--v", "2"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("\n1.75,2,") != std::string::npos);
    CHECK(r.out.find("\n2,2,0.5,ok") != std::string::npos);
    const Run neg = run({"scan", "--formula", "asym-power", "--b", "-0.5:0:0.25", "--v", "2"});
    REQUIRE_MESSAGE(neg.code == 0, neg.err);
    CHECK(neg.out.find("\n-0.25,2,,domain") != std::string::npos);
  }

  TEST_CASE("conditions report") {
    const Run r = run({"conditions", "--family", "powerexp q=geometric(3)", "--v", "2", "--eps", "0.1", "--N", "20",
                       "--delta", "const(1/8)"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const Json j = Json::parse(r.out);
    CHECK(j["kind"] == "conditions");
  }
}
