#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "commands.hpp"
#include "io.hpp"
#include "lolb/scalars.hpp"

using namespace lolb;
using namespace lolb::cli;
using nlohmann::json;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::vector<const char*> argv{"lolb"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun result;
  result.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string("/tmp/lolb_test_") + name;
  std::ofstream file(path);
  file << content;
  return path;
}

}  // namespace

TEST_CASE("input document parsing and schema errors") {
  CHECK(parse_input_document(json::parse(R"({"kind":"prob1","probs":[0.2,0.3,0.5]})")).prob->size() ==
        3);
  CHECK_THROWS_AS(parse_input_document(json::parse(R"({"kind":"prob1","probs":[0.2,"x"]})")),
                  schema_error);
  CHECK_THROWS_AS(parse_input_document(json::parse(R"({"kind":"prob1","probs":[-0.2,1.2]})")),
                  schema_error);
  CHECK_THROWS_AS(parse_input_document(json::parse(R"({"kind":"mystery"})")), schema_error);
  CHECK_THROWS_AS(parse_input_document(json::parse(R"({"kind":"prob2","matrix":[[0.5],[0.2,0.3]]})")),
                  schema_error);

  const auto density = parse_input_document(
      json::parse(R"({"kind":"density","re":[[0.5,0.1],[0.1,0.5]]})"));
  CHECK(density.density->dim() == 2);
  const auto diag = parse_input_document(
      json::parse(R"({"kind":"density","spectrum":[0.9,0.05,0.05]})"));
  CHECK(diag.density->dim() == 3);

  const auto pair = parse_input_document(json::parse(
      R"({"kind":"spectrum_pair","p":[0.5,0.5],"q":[0.75,0.25]})"));
  CHECK(pair.first->prob->size() == 2);

  const auto qc = parse_input_document(json::parse(
      R"({"kind":"qc","weights":[0.5,0.5],"states":[{"spectrum":[1.0,0.0]},{"spectrum":[0.5,0.5]}]})"));
  CHECK(qc.ensemble->size() == 2);
}

TEST_CASE("spectrum parsing") {
  CHECK(parse_spectrum(json::parse(R"({"levels":[0,1,2]})")).levels().size() == 3);
  CHECK(parse_spectrum(json::parse(R"([0,1,2,3])")).levels().size() == 4);
  CHECK(parse_spectrum(json::parse(R"({"family":"oscillator","cap":32})")).has_tail());
  CHECK_THROWS_AS(parse_spectrum(json::parse(R"({"family":"hydrogen","cap":3})")), schema_error);
  CHECK_THROWS_AS(parse_spectrum(json::parse(R"({"levels":[2,1]})")), schema_error);
}

TEST_CASE("report JSON round trip recomputes raw_value") {
  const std::string input = write_temp("rt.json", R"({"kind":"prob1","probs":[0.2,0.3,0.5]})");
  const auto run1 = run({"bound", "--input", input, "--functional", "entropy",
                         "--epsilon", "0.25"});
  REQUIRE(run1.code == 0);
  const json arr = json::parse(run1.out);
  REQUIRE(arr.is_array());
  REQUIRE(!arr.empty());
  for (const auto& item : arr) {
    const BoundReport report = report_from_json(item);
    CHECK(std::abs(recompute_raw(report) - report.raw_value) <= 1e-10);
    const json again = report_to_json(report);
    CHECK(again == item);
  }
}

TEST_CASE("CSV output is byte-stable with frozen headers") {
  const std::string input = write_temp(
      "csv.json", R"({"kind":"prob2","matrix":[[0.25,0.25],[0.25,0.25]]})");
  const std::vector<std::string> args{"curve", "--input", input, "--functional", "mi",
                                      "--eps-grid", "0.2,0.05,0.1"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  std::istringstream lines(a.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "epsilon,bound_id,target,value,raw_value,clamped,terms");
  // Rows sorted ascending by epsilon.
  std::string row;
  double prev = 0.0;
  while (std::getline(lines, row)) {
    const double eps = std::stod(row.substr(0, row.find(',')));
    CHECK(eps >= prev);
    prev = eps;
  }
}

TEST_CASE("bound command fixtures and exit codes") {
  // Affine-functional fixture: energy bound 0.55.
  const std::string prob = write_temp("p.json", R"({"kind":"prob1","probs":[0.2,0.3,0.5]})");
  const auto energy = run({"bound", "--input", prob, "--functional", "energy", "--epsilon",
                           "0.25", "--energy-spectrum", "[0,1,2]"});
  REQUIRE(energy.code == 0);
  const json one = json::parse(energy.out);
  CHECK(one[0].at("value").get<double>() == doctest::Approx(0.55).epsilon(1e-12));

  // Hanson-Datta center: three entropy bounds, B-lb-1 at 0.
  const std::string hd = write_temp(
      "hd.json", R"({"kind":"density","spectrum":[0.9,0.05,0.05]})");
  const auto ent = run({"bound", "--input", hd, "--functional", "entropy", "--epsilon", "0.1"});
  REQUIRE(ent.code == 0);
  const json reports = json::parse(ent.out);
  CHECK(reports.size() == 3);
  bool saw_rank_bound = false;
  for (const auto& r : reports) {
    if (r.at("bound_id") == "B-lb-1") {
      saw_rank_bound = true;
      CHECK(std::abs(r.at("value").get<double>()) <= 1e-9);
    }
  }
  CHECK(saw_rank_bound);

  // Schema error -> 2.
  const std::string broken = write_temp("broken.json", R"({"kind":"prob1","probs":"zzz"})");
  CHECK(run({"bound", "--input", broken, "--functional", "entropy", "--epsilon", "0.1"}).code ==
        2);
  // Incompatible functional -> 2.
  CHECK(run({"bound", "--input", prob, "--functional", "qce", "--epsilon", "0.1"}).code == 2);

  // Support violation -> 3 with the documented message.
  const std::string bad_pair = write_temp(
      "pair.json",
      R"({"kind":"spectrum_pair","first":{"kind":"density","spectrum":[0.5,0.5]},)"
      R"("second":{"kind":"density","spectrum":[1.0,0.0]}})");
  const auto violation =
      run({"bound", "--input", bad_pair, "--functional", "re", "--epsilon", "0.1"});
  CHECK(violation.code == 3);
  CHECK(violation.err.find("+∞ on a neighborhood") != std::string::npos);
}

TEST_CASE("curve command validates its grid") {
  const std::string prob = write_temp("c.json", R"({"kind":"prob1","probs":[0.6,0.4]})");
  CHECK(run({"curve", "--input", prob, "--functional", "entropy", "--eps-grid", ""}).code == 2);
  CHECK(run({"curve", "--input", prob, "--functional", "entropy", "--eps-grid", "0.1,2.0"})
            .code == 2);
  // Faithful bound approaches H(p) along the grid.
  const auto curve = run({"curve", "--input", prob, "--functional", "entropy", "--eps-grid",
                          "1e-1,1e-2,1e-3,1e-4,1e-5,1e-6"});
  REQUIRE(curve.code == 0);
  std::istringstream lines(curve.out);
  std::string line, last;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    if (!line.empty()) last = line;
  }
  // Last row is the largest eps; find the eps = 1e-6 row instead.
  const double H = shannon_entropy_ext(ProbArray({0.6, 0.4}));
  std::istringstream again(curve.out);
  std::getline(again, line);
  bool checked = false;
  while (std::getline(again, line)) {
    if (line.rfind("9.9999999999999995e-07,", 0) == 0 || line.rfind("1e-06,", 0) == 0) {
      const auto v0 = line.find(',', line.find(',', line.find(',') + 1) + 1);
      const double value = std::stod(line.substr(v0 + 1));
      CHECK(std::abs(value - H) <= 1e-3);
      checked = true;
    }
  }
  CHECK(checked);
}

TEST_CASE("verify command certifies the Example-3 fixture") {
  const std::string excited = write_temp(
      "e3.json", R"({"kind":"density","spectrum":[0.0,0.0,0.0,1.0,0.0]})");
  const auto verify = run({"verify", "--input", excited, "--functional", "energy",
                           "--epsilon", "0.3", "--energy-spectrum", "[0,1,2,3,4]",
                           "--seed", "7"});
  CHECK(verify.code == 0);
  CHECK(verify.out.find("H-LB+") != std::string::npos);
  CHECK(verify.out.find("true") != std::string::npos);

  // Random dim-4 state: every entropy bound certifies sound.
  const std::string dim4 = write_temp(
      "dim4.json",
      R"({"kind":"density","re":[[0.4,0.05,0.02,0.01],[0.05,0.3,0.03,0.02],)"
      R"([0.02,0.03,0.2,0.01],[0.01,0.02,0.01,0.1]]})");
  const auto random_verify = run({"verify", "--input", dim4, "--functional", "entropy",
                                  "--epsilon", "0.2", "--seed", "7"});
  CHECK(random_verify.code == 0);
  CHECK(random_verify.out.find("false") == std::string::npos);

  // Desk-scale enforcement.
  std::string big = R"({"kind":"prob1","probs":[)";
  for (int i = 0; i < 65; ++i) big += (i ? std::string(",") : std::string()) + "0.01538";
  big += "]}";
  const std::string big_path = write_temp("big.json", big);
  CHECK(run({"verify", "--input", big_path, "--functional", "entropy", "--epsilon", "0.1"})
            .code == 3);
}

TEST_CASE("gibbs command") {
  const auto table = run({"gibbs", "--energy-spectrum", "[0,1]", "--E-grid", "0.25"});
  REQUIRE(table.code == 0);
  std::istringstream lines(table.out);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "E,beta,F,tail_error,status");
  std::getline(lines, row);
  const auto first_comma = row.find(',');
  const double beta = std::stod(row.substr(first_comma + 1));
  CHECK(std::abs(beta - std::log(3.0)) <= 1e-10);

  // Out-of-range E yields a row-level error and exit 3.
  const auto bad = run({"gibbs", "--energy-spectrum", "[0,1]", "--E-grid", "0.25,0.9"});
  CHECK(bad.code == 3);
  CHECK(bad.out.find("error") != std::string::npos);

  // Oscillator F column matches g(E).
  const auto osc = run({"gibbs", "--energy-spectrum", R"({"family":"oscillator","cap":512})",
                        "--E-grid", "1"});
  REQUIRE(osc.code == 0);
  std::istringstream osc_lines(osc.out);
  std::getline(osc_lines, header);
  std::getline(osc_lines, row);
  std::size_t c1 = row.find(',');
  std::size_t c2 = row.find(',', c1 + 1);
  const double F = std::stod(row.substr(c2 + 1));
  CHECK(std::abs(F - g_fun(1.0)) <= 1e-8);
}

TEST_CASE("no-clamp flag reports raw values") {
  const std::string point = write_temp("pm.json", R"({"kind":"prob1","probs":[1.0,0.0]})");
  const auto clamped = run({"bound", "--input", point, "--functional", "entropy",
                            "--epsilon", "0.1"});
  const auto raw = run({"bound", "--input", point, "--functional", "entropy", "--epsilon",
                        "0.1", "--no-clamp"});
  const double v_clamped = json::parse(clamped.out)[0].at("value").get<double>();
  const double v_raw = json::parse(raw.out)[0].at("value").get<double>();
  CHECK(v_clamped == 0.0);
  CHECK(v_raw == doctest::Approx(-g_fun(0.1)).epsilon(1e-12));
}
