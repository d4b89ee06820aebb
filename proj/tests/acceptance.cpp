// Acceptance suite: one line per criterion, tolerances fixed below.
// Exit status is the number of failed criteria (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wnlp/experiment.hpp"

using namespace wnlp;

namespace {

constexpr double kBoundSlack = 1e-6;
constexpr double kQuadratureRel = 1e-6;
constexpr double kRatioLo = 2.0 / 3.0 - 1e-9;
constexpr double kRatioHi = 2.0 + 1e-9;
constexpr double kCommutingRatio = 1.1;
constexpr double kGrowth = 1.5;
constexpr double kDivergenceGrowth = 6.25;
constexpr double kProp31Seconds = 30.0;
constexpr double kCorrec0Seconds = 300.0;
constexpr double kSandwichSeconds = 600.0;

struct Outcome {
  bool ok = true;
  std::string detail;
};

Report run_json(const std::string& text) { return run(parse_config_text(text)); }

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

// All cases with the id prefix pass; at least `min_cases` of them exist.
Outcome all_pass(const Report& r, const std::string& prefix, std::size_t min_cases, double* worst = nullptr) {
  Outcome o;
  std::size_t count = 0;
  double w = 0.0;
  for (const auto& c : r.cases) {
    if (!starts_with(c.id, prefix)) continue;
    ++count;
    w = std::max(w, c.ratio);
    if (!c.passed && o.ok) {
      o.ok = false;
      o.detail = "first failure " + c.id + " value " + std::to_string(c.value) + " bound " + std::to_string(c.bound);
    }
  }
  if (count < min_cases) {
    o.ok = false;
    o.detail = prefix + ": only " + std::to_string(count) + " cases";
  }
  if (worst) *worst = w;
  return o;
}

char buf[512];

Outcome criterion_prop31() {
  const Report r = run_json(R"({"schema": 1, "experiment": "prop31", "trials": 50, "dim": 8, "seed": 1,
      "p_grid": [1, 1.5, 2, 4, "inf"], "tolerances": {"quadrature_rel": 1e-6}})");
  Outcome o = all_pass(r, "quadrature/", 50);
  double worst = 0.0;
  for (const auto& c : r.cases)
    if (starts_with(c.id, "quadrature/")) worst = std::max(worst, c.value);
  if (worst > kQuadratureRel) o.ok = false;
  const Outcome contraction = all_pass(r, "contraction/", 250);
  if (!contraction.ok) o = contraction;
  if (r.wall_clock_seconds > kProp31Seconds) o.ok = false;
  std::snprintf(buf, sizeof buf, "max quadrature rel error %.2e, %d contraction checks, %.1f s", worst,
                static_cast<int>(r.cases.size()) - 50, r.wall_clock_seconds);
  if (o.detail.empty()) o.detail = buf;
  return o;
}

Outcome family_criterion(const std::string& families, const std::vector<std::string>& names, double seconds) {
  const Report r = run_json(R"({"schema": 1, "experiment": "multipliers", "trials": 100, "dim": 10, "seed": 2,
      "theta_grid": [0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1], "families": )" +
                            families + "}");
  Outcome o;
  std::string detail;
  for (const auto& name : names) {
    double worst = 0.0;
    const Outcome f = all_pass(r, name + "/", 1100, &worst);
    if (!f.ok && o.ok) o = f;
    std::snprintf(buf, sizeof buf, "%s max upper/bound %.4f; ", name.c_str(), worst);
    detail += buf;
  }
  if (r.nonconverged() > 0) {
    o.ok = false;
    detail += std::to_string(r.nonconverged()) + " nonconverged; ";
  }
  if (seconds > 0.0 && r.wall_clock_seconds > seconds) o.ok = false;
  std::snprintf(buf, sizeof buf, "%.1f s", r.wall_clock_seconds);
  if (o.ok) o.detail = detail + buf;
  return o;
}

Outcome criterion_gmean() {
  const Report r = run_json(R"({"schema": 1, "experiment": "fourier", "seed": 4, "dim": 10})");
  Outcome o = all_pass(r, "closed-vs-numeric/", 5);
  for (const char* prefix : {"l1/theta=0.5", "g-mean-fit", "g-mean-sdp/"}) {
    const Outcome p = all_pass(r, prefix, 1);
    if (!p.ok && o.ok) o = p;
  }
  if (o.ok) {
    double half = 0.0, fit = 0.0;
    for (const auto& c : r.cases) {
      if (c.id == "l1/theta=0.5") half = c.value;
      if (c.id == "g-mean-fit") fit = c.value;
    }
    if (std::abs(half - 0.5) > 1e-8 || fit > 0.1) o.ok = false;
    std::snprintf(buf, sizeof buf, "L1 at 1/2 = %.12f, fit residual %.3f", half, fit);
    o.detail = buf;
  }
  return o;
}

Outcome criterion_divergence() {
  const Report r = run_json(R"({"schema": 1, "experiment": "counterexample", "sizes": [4, 8, 16, 32, 64, 100]})");
  Outcome o = all_pass(r, "lower/", 6);
  double v4 = 0.0, v100 = 0.0;
  for (const auto& c : r.cases) {
    const double target = (c.n + 1.0) * (c.n + 1.0) / (4.0 * c.n);
    if (c.value < target) o.ok = false;
    if (c.n == 4) v4 = c.value;
    if (c.n == 100) v100 = c.value;
  }
  if (v100 < 25.0 || v4 <= 0.0 || v100 < kDivergenceGrowth * v4) o.ok = false;
  std::snprintf(buf, sizeof buf, "n=4 %.4f, n=100 %.4f, growth %.2f", v4, v100, v4 > 0 ? v100 / v4 : 0.0);
  if (o.detail.empty()) o.detail = buf;
  return o;
}

Outcome criterion_compa() {
  const Report r = run_json(R"({"schema": 1, "experiment": "compa", "trials": 500, "dim": 10, "seed": 6,
      "p_grid": [1, 2, "inf"]})");
  Outcome o = all_pass(r, "compa/", 500);
  double lo = 10.0, hi = 0.0;
  int degenerate = 0;
  for (const auto& c : r.cases) {
    if (c.note.empty()) {
      lo = std::min(lo, c.value);
      hi = std::max(hi, c.value);
      if (c.value < kRatioLo || c.value > kRatioHi) o.ok = false;
    } else {
      ++degenerate;
    }
  }
  std::snprintf(buf, sizeof buf, "ratios in [%.4f, %.4f], %d degenerate draws", lo, hi, degenerate);
  if (o.detail.empty()) o.detail = buf;
  return o;
}

Outcome criterion_positivity() {
  const Report r = run_json(R"({"schema": 1, "experiment": "fourier", "trials": 100, "seed": 7, "dim": 2,
      "theta_grid": [0.5]})");
  Outcome o = all_pass(r, "positivity/", 100);
  double worst = 1.0;
  for (const auto& c : r.cases)
    if (starts_with(c.id, "positivity/")) worst = std::min(worst, c.value);
  std::snprintf(buf, sizeof buf, "smallest kernel eigenvalue %.3e", worst);
  if (o.detail.empty()) o.detail = buf;
  return o;
}

Outcome criterion_sandwich() {
  const Report r = run_json(R"({"schema": 1, "experiment": "sandwich", "trials": 20, "seed": 8,
      "budget": {"factor": 8}})");
  Outcome o = all_pass(r, "random/", 20);
  for (const char* prefix : {"dim1/", "diagonal/"}) {
    const Outcome p = all_pass(r, prefix, 5);
    if (!p.ok && o.ok) o = p;
  }
  double commuting = 0.0, random_worst = 0.0;
  for (const auto& c : r.cases) {
    const double up = c.inputs.value("upper_ratio", 0.0), lo = c.inputs.value("lower_ratio", 0.0);
    const double lower = c.inputs.value("lower", 0.0), upper = c.inputs.value("upper", 0.0);
    if (!(std::isfinite(upper) && lower > 0.0 && lower <= upper * (1.0 + 1e-9))) o.ok = false;
    if (starts_with(c.id, "random/")) {
      random_worst = std::max({random_worst, up, lo});
    } else {
      commuting = std::max({commuting, up, lo});
      if (up > kCommutingRatio || lo > kCommutingRatio) o.ok = false;
    }
  }
  if (r.wall_clock_seconds > kSandwichSeconds) o.ok = false;
  std::snprintf(buf, sizeof buf, "commuting max ratio %.4f, random max ratio %.4f, %.1f s", commuting, random_worst,
                r.wall_clock_seconds);
  if (o.detail.empty()) o.detail = buf;
  return o;
}

Outcome criterion_triangular() {
  const Report r = run_json(R"({"schema": 1, "experiment": "triangular", "sizes": [8, 32, 128], "seed": 9})");
  Outcome o = all_pass(r, "", 7);
  double v8 = 0.0, v128 = 0.0;
  for (const auto& c : r.cases) {
    if (c.id == "growth/n=8") v8 = c.value;
    if (c.id == "growth/n=128") v128 = c.value;
  }
  if (v128 < kGrowth * v8) o.ok = false;
  std::snprintf(buf, sizeof buf, "n=8 %.4f, n=128 %.4f, growth %.3f", v8, v128, v8 > 0 ? v128 / v8 : 0.0);
  if (o.detail.empty()) o.detail = buf;
  return o;
}

Outcome criterion_transference() {
  const Report r = run_json(R"({"schema": 1, "experiment": "multipliers", "trials": 0, "seed": 10,
      "families": ["MinOverMax"]})");
  Outcome o = all_pass(r, "transference/", 100);
  double worst = 0.0;
  for (const auto& c : r.cases)
    if (starts_with(c.id, "transference/")) worst = std::max(worst, c.value - c.bound);
  if (worst > kBoundSlack) o.ok = false;
  std::snprintf(buf, sizeof buf, "max excess over certificate %.3e", worst);
  if (o.detail.empty()) o.detail = buf;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 geo-mean integral representation and 1/2 contraction", criterion_prop31},
      {"2 endpoint kernel families under their claimed bounds",
       [] {
         return family_criterion(R"(["MinOverMax", "SumPowOverMaxPow", "MaxPowOverSumPow", "MinPowOverSumPow"])",
                                 {"MinOverMax", "SumPowOverMaxPow", "MaxPowOverSumPow", "MinPowOverSumPow"},
                                 kCorrec0Seconds);
       }},
      {"3 two-weight kernels under 9-4sqrt2 and 3, correction kernel under 9-4sqrt2",
       [] {
         return family_criterion(R"(["TwoWeightMean", "TwoWeightRatio", "InterpCorrection"])",
                                 {"TwoWeightMean", "TwoWeightRatio", "InterpCorrection"}, 0.0);
       }},
      {"4 g-mean transform, L1 norm, logarithmic fit, exponential points", criterion_gmean},
      {"5 opposite-sign kernel lower bounds diverge", criterion_divergence},
      {"6 triangular compatibility ratio in [2/3, 2]", criterion_compa},
      {"7 positive definiteness of convex decreasing profiles", criterion_positivity},
      {"8 interpolation sandwich", criterion_sandwich},
      {"9 triangular truncation growth", criterion_triangular},
      {"10 blockwise transference", criterion_transference},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s: %s (%.1f s)\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
