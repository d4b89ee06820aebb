#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wnlp/interpolation.hpp"

namespace wnlp {

inline constexpr int kConfigSchema = 1;

const std::vector<std::string>& experiment_names();

// Parsed form of the JSON config (schema 1). Unset optionals fall back to
// per-experiment defaults; see README for the full schema.
struct ExperimentConfig {
  std::string experiment = "all";
  std::optional<int> dim;
  std::vector<double> p_grid;  // +inf for ∞
  std::vector<double> theta_grid;
  std::optional<double> alpha0, alpha1;
  std::optional<int> trials;
  std::uint64_t seed = 1;
  double bound_slack = 1e-6;
  double cb_gap = 1e-6;
  double quadrature_rel = 1e-6;
  SandwichBudget budget;
  std::optional<SolverParams> solver;
  std::vector<std::string> families;
  std::vector<int> sizes;
  bool quick = false;
  std::string output;
};

// Throws Error(ErrorCode::Config) with a schema hint on invalid input.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_text(const std::string& text);
nlohmann::json config_to_json(const ExperimentConfig& c);

struct CaseRecord {
  std::string experiment;
  std::string id;
  int n = 0;
  std::string p;
  double theta = -1.0;  // negative when not applicable
  double value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool passed = true;
  bool converged = true;
  std::string note;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json witness;  // null unless the case failed
};

struct Report {
  ExperimentConfig config;
  std::vector<CaseRecord> cases;
  double wall_clock_seconds = 0.0;

  int violations() const;
  int nonconverged() const;
  double max_ratio() const;
  // 0 pass, 1 assertion failure, 3 numerical non-convergence.
  int exit_code() const;

  // wall_clock_seconds is the only field that varies between identical runs.
  nlohmann::json to_json(bool include_timing = true) const;
  std::string to_csv() const;
  std::string summary_table() const;
};

Report run(const ExperimentConfig& config);

// report.json and cases.csv under dir, each written to a temporary file
// and renamed into place.
void write_report(const Report& report, const std::string& dir);

}  // namespace wnlp
