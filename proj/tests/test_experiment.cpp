#include <filesystem>

#include "doctest.h"
#include "wnlp/error.hpp"
#include "wnlp/experiment.hpp"

using namespace wnlp;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config_text(
      R"({"schema": 1, "experiment": "compa", "p_grid": [1, 2.5, "inf"], "seed": 99, "trials": 3,
          "tolerances": {"bound_slack": 1e-7}, "budget": {"factor": 4}})");
  CHECK(c.experiment == "compa");
  REQUIRE(c.p_grid.size() == 3);
  CHECK(std::isinf(c.p_grid[2]));
  CHECK(c.seed == 99);
  CHECK(*c.trials == 3);
  CHECK(c.bound_slack == 1e-7);
  CHECK(c.budget.factor == 4.0);
  const ExperimentConfig back = parse_config(config_to_json(c));
  CHECK(back.p_grid.size() == 3);
  CHECK(back.seed == 99);
}

TEST_CASE("config errors carry the config code") {
  CHECK(code_of(R"({"schema": 2, "experiment": "compa"})") == ErrorCode::Config);
  CHECK(code_of(R"({"experiment": "compa"})") == ErrorCode::Config);
  CHECK(code_of(R"({"schema": 1, "experiment": "nope"})") == ErrorCode::Config);
  CHECK(code_of(R"({"schema": 1, "experiment": "compa", "extra": 1})") == ErrorCode::Config);
  CHECK(code_of(R"({"schema": 1, "experiment": "compa", "p_grid": [0.5]})") == ErrorCode::Config);
  CHECK(code_of(R"({"schema": 1, "experiment": "compa", "families": ["Custom"]})") == ErrorCode::Config);
  CHECK(code_of("{not json") == ErrorCode::Config);
  try {
    parse_config_text("[]");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("schema") != std::string::npos);
  }
}

TEST_CASE("reports are deterministic under a fixed seed") {
  ExperimentConfig c = parse_config_text(R"({"schema": 1, "experiment": "compa", "trials": 20, "seed": 7})");
  const std::string a = run(c).to_json(false).dump();
  const std::string b = run(c).to_json(false).dump();
  CHECK(a == b);
  c.seed = 8;
  CHECK(run(c).to_json(false).dump() != a);
}

TEST_CASE("prop31 at n = 4, seed 7") {
  const Report r = run(parse_config_text(R"({"schema": 1, "experiment": "prop31", "dim": 4, "seed": 7})"));
  CHECK(r.violations() == 0);
  CHECK(r.exit_code() == 0);
  for (const auto& c : r.cases)
    if (c.id.rfind("quadrature/", 0) == 0) CHECK(c.value <= 1e-6);
}

TEST_CASE("counterexample lower bound at n = 100") {
  const Report r =
      run(parse_config_text(R"({"schema": 1, "experiment": "counterexample", "sizes": [4, 100]})"));
  REQUIRE(r.cases.size() == 2);
  CHECK(r.cases[1].value >= 25.0);
  CHECK(r.cases[1].value >= 101.0 * 101.0 / 400.0);
  CHECK(r.exit_code() == 0);
}

TEST_CASE("exit codes and serialisation") {
  Report r;
  CaseRecord ok;
  ok.experiment = "x";
  ok.id = "a,b";
  r.cases.push_back(ok);
  CHECK(r.exit_code() == 0);
  r.cases[0].converged = false;
  CHECK(r.exit_code() == 3);
  r.cases[0].passed = false;
  CHECK(r.exit_code() == 1);
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("experiment,case,n,p,theta,value,bound,ratio,passed,converged,note\n", 0) == 0);
  CHECK(csv.find("\"a,b\"") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "wnlp_report_test";
  std::filesystem::remove_all(dir);
  write_report(r, dir.string());
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "cases.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "report.json.tmp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("multipliers: TwoWeightRatio uppers stay under 3") {
  const Report r = run(parse_config_text(
      R"({"schema": 1, "experiment": "multipliers", "families": ["TwoWeightRatio"], "trials": 3, "quick": true})"));
  for (const auto& c : r.cases)
    if (c.id.rfind("TwoWeightRatio", 0) == 0) CHECK(c.value <= 3.0 + 1e-6);
  CHECK(r.violations() == 0);
}
