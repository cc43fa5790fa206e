#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "wpart/cli.hpp"
#include "wpart/errors.hpp"

using namespace wpart;
using namespace wpart::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) v.push_back(line);
  return v;
}

}  // namespace

TEST_CASE("count examples") {
  auto r = invoke({"count", "--weights", "power-law:rho=1,r=1", "--kind", "multiset", "--n", "10"});
  CHECK(r.code == kExitOk);
  CHECK(lines(r.out).back() == "10,42");

  r = invoke({"count", "--weights", "forest", "--kind", "assembly", "--n", "3", "--labelled"});
  CHECK(r.code == kExitOk);
  CHECK(lines(r.out).back() == "3,13/6,13");

  r = invoke({"count", "--n", "0"});
  CHECK(r.code == kExitOk);
  CHECK(lines(r.out).back() == "0,1");

  r = invoke({"count", "--n", "0:5", "--bruteforce"});
  CHECK(lines(r.out).size() == 7);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"count", "--weights", "nonsense", "--n", "3"}).code == kExitConfig);
  CHECK(invoke({"count", "--n", "3", "--bogus"}).code == kExitConfig);
  CHECK(invoke({"frobnicate"}).code == kExitConfig);
  CHECK(invoke({}).code == kExitConfig);
  const auto halves = std::filesystem::temp_directory_path() / "wpart_cli_halves.txt";
  std::ofstream(halves) << "1/2\n1\n";
  const auto r = invoke({"count", "--weights", "@" + halves.string(), "--kind", "selection", "--n", "2"});
  CHECK(r.code == kExitDomain);
  CHECK(r.err.find("integer") != std::string::npos);
  CHECK(invoke({"delta", "--weights", "forest", "--kind", "selection", "--n", "1"}).code == kExitDomain);
  CHECK(invoke({"special", "--function", "bose-log-integral", "-x", "1"}).code == kExitDomain);
  CHECK(invoke({"count", "--n", "3", "--help"}).code == kExitOk);
}

TEST_CASE("compare output, header once, json equivalence") {
  const auto csv = invoke({"compare", "--n", "100,300,1000"});
  REQUIRE(csv.code == kExitOk);
  const auto rows = lines(csv.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "n,log_exact,log_meinardus,log_khintchine,ratio_meinardus,ratio_khintchine");
  int headers = 0;
  for (const auto& l : rows) headers += l.rfind("n,", 0) == 0;
  CHECK(headers == 1);

  const auto js = invoke({"compare", "--n", "100,300,1000", "--format", "json"});
  const auto doc = nlohmann::json::parse(js.out);
  REQUIRE(doc.size() == 3);
  double prev = 1.0;
  for (std::size_t i = 0; i < 3; ++i) {
    std::istringstream fields(rows[i + 1]);
    std::vector<std::string> f;
    for (std::string x; std::getline(fields, x, ',');) f.push_back(x);
    CHECK(std::stod(f[4]) == doc[i]["ratio_meinardus"].get<double>());
    CHECK(std::stod(f[1]) == doc[i]["log_exact"].get<double>());
    const double dev = std::fabs(doc[i]["ratio_meinardus"].get<double>() - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev <= 0.03);
}

TEST_CASE("check, delta, llt and special wrappers") {
  auto r = invoke({"check", "--weights", "example2", "--condition", "iii", "--delta-grid", "1e-2,1e-3", "--format", "json"});
  CHECK(r.code == kExitOk);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["verdict"] == "fail");
  CHECK(doc["witness_alpha"].get<double>() == 0.25);

  r = invoke({"delta", "--weights", "power-law:rho=1,r=1", "--kind", "multiset", "--n", "100", "--format", "json"});
  CHECK(r.code == kExitOk);
  doc = nlohmann::json::parse(r.out);
  CHECK(doc[0]["delta_n"].get<double>() == doctest::Approx(0.1258).epsilon(1e-3));
  CHECK(doc[0].contains("residual"));

  r = invoke({"llt", "--n", "200", "--format", "json"});
  CHECK(r.code == kExitOk);
  doc = nlohmann::json::parse(r.out);
  const double conv = doc[0]["p_convolution"].get<double>();
  const double quad = doc[0]["p_quadrature"].get<double>();
  CHECK(std::fabs(conv - quad) <= 1e-8 * conv);

  r = invoke({"special", "--function", "zeta", "-x", "0,-1"});
  CHECK(r.code == kExitOk);
  CHECK(lines(r.out).size() == 3);
}

TEST_CASE("determinism") {
  const std::vector<std::string> args = {"compare", "--n", "50:60", "--kind", "selection"};
  CHECK(invoke(args).out == invoke(args).out);
}

TEST_CASE("canonical config round trip") {
  const std::vector<std::vector<std::string>> cases = {
      {"count", "--n", "0:10:2", "--log"},
      {"check", "-w", "example3", "-c", "iii-prime", "-k", "assembly", "--epsilon", "0.25", "--refine", "2"},
      {"llt", "--n", "200", "--delta", "0.1", "-m", "quadrature", "-f", "json"},
      {"special", "--function", "bose-log-integral", "-x", "1.5,2"},
      {"asymptote", "-w", "forest", "-k", "3", "--n", "10", "--delta", "0.01"},
  };
  for (const auto& args : cases) {
    const RunConfig c = parse_command_line(args);
    const std::string text = to_text(c);
    CHECK(from_text(text) == c);
    CHECK(to_text(from_text(text)) == text);
    auto dry = args;
    dry.push_back("--dry-run");
    const auto r = invoke(dry);
    CHECK(r.code == kExitOk);
    CHECK(r.out == text);
  }
  CHECK_THROWS_AS(from_text("command=count\nbogus=1\n"), ConfigError);
}

TEST_CASE("n lists") {
  CHECK(parse_n_list("10") == std::vector<std::int64_t>{10});
  CHECK(parse_n_list("1,5,10") == std::vector<std::int64_t>{1, 5, 10});
  CHECK(parse_n_list("0:3") == std::vector<std::int64_t>{0, 1, 2, 3});
  CHECK(parse_n_list("0:100:50") == std::vector<std::int64_t>{0, 50, 100});
  CHECK_THROWS_AS(parse_n_list("5:1"), ConfigError);
  CHECK_THROWS_AS(parse_n_list("x"), ConfigError);
  CHECK_THROWS_AS(parse_n_list("-1"), ConfigError);
  CHECK(parse_real_list("1e-2,0.5") == std::vector<double>{1e-2, 0.5});
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "wpart_cli_out.csv";
  const auto r = invoke({"count", "--n", "10", "-o", path.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(lines(body.str()).back() == "10,42");
}
