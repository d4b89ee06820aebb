// Command line driver: one subcommand per experiment.
//
//   wnlp <experiment> [--config PATH] [--seed N] [--out DIR] [--quick] [--json]
//
// Exit codes: 0 pass, 1 assertion failure, 2 config error, 3 non-convergence.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wnlp/wnlp.h"

namespace {

const char* kExperiments[] = {"multipliers", "prop31",   "compa",          "triangular",
                              "fourier",     "sandwich", "counterexample", "all"};

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream s;
  s << in.rdbuf();
  text = s.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted noncommutative Lp numerics: seeded experiments with pass/fail reports"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool quick = false, print_json = false;
  for (const char* name : kExperiments) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "JSON config file (schema 1)")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "64-bit seed, overrides the config");
    sub->add_option("--out", out_dir, "directory for report.json and cases.csv");
    sub->add_flag("--quick", quick, "reduced trial counts");
    sub->add_flag("--json", print_json, "print the full JSON report instead of the table");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  const bool seed_given = app.get_subcommands().front()->count("--seed") > 0;

  std::string config_text;
  if (!config_path.empty() && !read_file(config_path, config_text)) {
    std::cerr << "error: cannot read " << config_path << "\n";
    return 2;
  }

  wnlp_run_options opts{};
  opts.has_seed = seed_given ? 1 : 0;
  opts.seed = seed;
  opts.quick = quick ? 1 : 0;
  opts.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();

  wnlp_report* report = nullptr;
  const wnlp_status st =
      wnlp_run_experiment(experiment.c_str(), config_path.empty() ? nullptr : config_text.c_str(), &opts, &report);
  if (st != WNLP_OK) {
    std::cerr << "error: " << wnlp_last_error() << "\n";
    if (st == WNLP_CONFIG || st == WNLP_INVALID_ARGUMENT) return 2;
    if (st == WNLP_NON_CONVERGENCE) return 3;
    return 1;
  }
  std::cout << (print_json ? wnlp_report_json(report) : wnlp_report_summary(report));
  if (print_json) std::cout << "\n";
  const int rc = wnlp_report_exit_code(report);
  wnlp_report_free(report);
  return rc;
}
