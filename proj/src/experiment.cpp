#include "wnlp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "wnlp/error.hpp"
#include "wnlp/fourier.hpp"
#include "wnlp/rng.hpp"
#include "wnlp/schur.hpp"
#include "wnlp/weighted.hpp"

namespace wnlp {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* kSchemaHint =
    "expected {\"schema\": 1, \"experiment\": <name>, optional: dim, p_grid, theta_grid, alpha0, alpha1, "
    "trials, seed, tolerances{bound_slack, cb_gap, quadrature_rel}, budget{factor}, solver{degree, "
    "iterations, optimization_grid, certification_grid, starts}, families, sizes, quick, output}";

[[noreturn]] void config_error(const std::string& what) {
  fail(ErrorCode::Config, "invalid config: " + what + "; " + kSchemaHint);
}

double parse_p(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    config_error("p value '" + s + "' is neither a number nor \"inf\"");
  }
  if (!v.is_number()) config_error("p values must be numbers or \"inf\"");
  const double p = v.get<double>();
  if (!(p >= 1.0)) config_error("p values must be >= 1");
  return p;
}

template <class T>
T get_number(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) config_error(std::string("'") + key + "' must be a number");
  return v.get<T>();
}

json p_json(double p) { return std::isinf(p) ? json("inf") : json(p); }

std::string p_str(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream s;
  s << p;
  return s.str();
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const RealVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

struct Context {
  const ExperimentConfig& cfg;
  Report& report;
  bool quick() const { return cfg.quick; }
  int trials(int full, int reduced) const { return cfg.trials ? *cfg.trials : (quick() ? reduced : full); }
  int dim(int full, int reduced) const { return cfg.dim ? *cfg.dim : (quick() ? reduced : full); }
  std::vector<double> thetas(std::vector<double> full, std::vector<double> reduced) const {
    if (!cfg.theta_grid.empty()) return cfg.theta_grid;
    return quick() ? reduced : full;
  }
  std::vector<double> ps(std::vector<double> full) const { return cfg.p_grid.empty() ? full : cfg.p_grid; }
  std::vector<int> sizes(std::vector<int> full, std::vector<int> reduced) const {
    if (!cfg.sizes.empty()) return cfg.sizes;
    return quick() ? reduced : full;
  }
  SolverParams solver() const {
    if (cfg.solver) return *cfg.solver;
    SolverParams sp;
    sp.degree = 4;
    sp.iterations = quick() ? 150 : 400;
    sp.optimization_grid = 32;
    sp.certification_grid = 256;
    sp.seed = cfg.seed;
    return sp;
  }
  CounterRng rng(std::uint64_t stream) const { return CounterRng(cfg.seed, stream); }
  CaseRecord& add(CaseRecord c) {
    report.cases.push_back(std::move(c));
    return report.cases.back();
  }
};

CaseRecord make_case(const std::string& experiment, const std::string& id, int n, double value, double bound,
                     bool passed) {
  CaseRecord c;
  c.experiment = experiment;
  c.id = id;
  c.n = n;
  c.value = value;
  c.bound = bound;
  c.ratio = bound != 0.0 && std::isfinite(bound) ? value / bound : 0.0;
  c.passed = passed;
  return c;
}

// ------------------------------------------------------------- prop31

void run_prop31(Context& ctx) {
  const int trials = ctx.trials(50, 10);
  const int max_n = ctx.dim(8, 4);
  const std::vector<double> ps = ctx.ps({1.0, 1.5, 2.0, 4.0, kInf});
  for (int t = 0; t < trials; ++t) {
    CounterRng rng = ctx.rng(0x10000 + t);
    const int n = rng.uniform_int(1, max_n);
    const double cond = std::exp(rng.uniform(0.0, std::log(1e3)));
    const Density d = random_density(n, cond, rng);
    const Matrix x = gaussian_matrix(n, rng);
    const Matrix closed = geo_mean_map(d, x);
    QuadratureSpec q;
    q.half_width = 12.0;
    const QuadratureResult num = geo_mean_quadrature(d, x, q);
    const double rel = (num.value - closed).norm() / closed.norm();
    CaseRecord c = make_case("prop31", "quadrature/" + std::to_string(t), n, rel, ctx.cfg.quadrature_rel,
                             rel <= ctx.cfg.quadrature_rel);
    c.note = "tail bound " + std::to_string(num.tail_bound);
    c.inputs = {{"condition", d.condition()}, {"eigenvalues", vector_json(d.eigenvalues())}};
    if (!c.passed) c.witness = {{"x", matrix_json(x)}, {"density", matrix_json(d.matrix())}};
    ctx.add(c);
    for (double p : ps) {
      const PNorm pn(p);
      const double nx = schatten_norm(x, pn);
      const double ng = schatten_norm(closed, pn);
      CaseRecord cc = make_case("prop31", "contraction/" + std::to_string(t) + "/p=" + p_str(p), n, ng,
                                0.5 * nx + 1e-9, ng <= 0.5 * nx + 1e-9);
      cc.p = p_str(p);
      cc.ratio = nx > 0.0 ? ng / (0.5 * nx) : 0.0;
      if (!cc.passed) cc.witness = {{"x", matrix_json(x)}, {"density", matrix_json(d.matrix())}, {"p", p_json(p)}};
      ctx.add(cc);
    }
  }
}

// -------------------------------------------------------- multipliers

const std::vector<KernelTag>& default_families() {
  static const std::vector<KernelTag> f{KernelTag::MinOverMax,     KernelTag::SumPowOverMaxPow,
                                        KernelTag::MaxPowOverSumPow, KernelTag::MinPowOverSumPow,
                                        KernelTag::TwoWeightMean,  KernelTag::TwoWeightRatio,
                                        KernelTag::GeoMeanOverSum, KernelTag::InterpCorrection};
  return f;
}

bool endpoint_family(KernelTag t) {
  return t == KernelTag::MinOverMax || t == KernelTag::SumPowOverMaxPow || t == KernelTag::MaxPowOverSumPow ||
         t == KernelTag::MinPowOverSumPow || t == KernelTag::TwoWeightMean || t == KernelTag::TwoWeightRatio ||
         t == KernelTag::InterpCorrection;
}

std::vector<KernelTag> selected_families(const Context& ctx) {
  if (ctx.cfg.families.empty()) return default_families();
  std::vector<KernelTag> out;
  for (const auto& name : ctx.cfg.families) out.push_back(*kernel_tag_from_name(name));
  return out;
}

json family_json(const KernelFamily& f) {
  return {{"family", kernel_tag_name(f.tag)}, {"theta", f.theta}, {"lambda", f.lambda}, {"mu", f.mu}};
}

void certify_case(Context& ctx, const std::string& experiment, const std::string& id, const KernelFamily& f,
                  double bound, const std::string& bound_note) {
  const SchurKernel k = build_kernel(f);
  CbOptions opt;
  opt.tol = ctx.cfg.cb_gap;
  const NormCertificate cert = cb_norm_sdp(k, opt);
  const double slack = ctx.cfg.bound_slack;
  CaseRecord c = make_case(experiment, id, k.dim(), cert.upper, bound, cert.upper <= bound + slack);
  c.theta = f.theta;
  c.p = "cb";
  c.converged = cert.converged;
  c.note = "lower " + std::to_string(cert.lower) + ", bound " + bound_note;
  c.inputs = family_json(f);
  c.inputs["lower"] = cert.lower;
  c.inputs["gap"] = cert.gap();
  if (!c.passed) c.witness = {{"kernel", matrix_json(k.entries)}, {"family", family_json(f)}, {"p", "inf"}};
  ctx.add(c);
}

void run_multipliers(Context& ctx) {
  const int trials = ctx.trials(100, 5);
  const int max_n = ctx.dim(10, 6);
  for (KernelTag tag : selected_families(ctx)) {
    std::vector<double> thetas = ctx.thetas({0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}, {0.0, 0.5, 1.0});
    if (!endpoint_family(tag)) std::erase_if(thetas, [](double t) { return t <= 0.0 || t >= 1.0; });
    const bool monotone = tag == KernelTag::TwoWeightMean || tag == KernelTag::TwoWeightRatio ||
                          tag == KernelTag::InterpCorrection || tag == KernelTag::GeoMeanOverSum;
    for (int t = 0; t < trials; ++t) {
      CounterRng rng = ctx.rng(0x20000 + 1000 * static_cast<int>(tag) + t);
      const int n = rng.uniform_int(2, std::max(2, max_n));
      const RealVector l = random_spectrum(n, 1e-3, 1e3, rng, monotone);
      const RealVector m = random_spectrum(n, 1e-3, 1e3, rng, true);
      for (double th : thetas) {
        KernelFamily f;
        f.tag = tag;
        f.theta = th;
        f.lambda.assign(l.data(), l.data() + n);
        if (kernel_uses_mu(tag)) f.mu.assign(m.data(), m.data() + n);
        const ClaimedBound b = claimed_bound(f);
        std::ostringstream id;
        id << kernel_tag_name(tag) << "/" << t << "/theta=" << th;
        certify_case(ctx, "multipliers", id.str(), f, b.value, b.source);
      }
    }
  }

  // Reciprocal correction kernel: product of two three-fold compositions.
  const bool want_reciprocal =
      ctx.cfg.families.empty() ||
      std::find(ctx.cfg.families.begin(), ctx.cfg.families.end(), "InterpCorrection") != ctx.cfg.families.end();
  if (want_reciprocal) {
    const int rtrials = ctx.quick() ? 3 : std::max(1, trials / 5);
    for (int t = 0; t < rtrials; ++t) {
      CounterRng rng = ctx.rng(0x28000 + t);
      const int n = rng.uniform_int(2, std::max(2, max_n));
      const RealVector l = random_spectrum(n, 1e-3, 1e3, rng, true);
      const RealVector m = random_spectrum(n, 1e-3, 1e3, rng, true);
      KernelFamily f;
      f.tag = KernelTag::OppositeSignCounterexample;
      f.theta = rng.uniform(0.05, 0.95);
      f.lambda.assign(l.data(), l.data() + n);
      f.mu.assign(m.data(), m.data() + n);
      certify_case(ctx, "multipliers", "reciprocal-correction/" + std::to_string(t), f, 9.0, "3 x 3 composition");
    }
  }

  // Blockwise transference against the scalar certificate.
  const int blocks = ctx.quick() ? 10 : 100;
  for (int t = 0; t < blocks; ++t) {
    CounterRng rng = ctx.rng(0x29000 + t);
    const int n = rng.uniform_int(2, 8);
    const auto& fams = default_families();
    KernelFamily f;
    f.tag = fams[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(fams.size()) - 1))];
    f.theta = rng.uniform(0.1, 0.9);
    const RealVector l = random_spectrum(n, 1e-2, 1e2, rng, true);
    const RealVector m = random_spectrum(n, 1e-2, 1e2, rng, true);
    f.lambda.assign(l.data(), l.data() + n);
    if (kernel_uses_mu(f.tag)) f.mu.assign(m.data(), m.data() + n);
    const SchurKernel k = build_kernel(f);
    CbOptions opt;
    opt.tol = ctx.cfg.cb_gap;
    const NormCertificate cert = cb_norm_sdp(k, opt);
    const std::vector<double> ps{1.0, 2.0, kInf};
    const double p = ps[static_cast<std::size_t>(t % 3)];
    const Matrix x = gaussian_matrix(2 * n, rng);
    const TransferenceResult r = transference_check(k, x, 2, PNorm(p), cert.upper);
    CaseRecord c = make_case("multipliers", "transference/" + std::to_string(t), n, r.ratio, cert.upper, r.holds);
    c.p = p_str(p);
    c.theta = f.theta;
    c.inputs = family_json(f);
    c.inputs["block_size"] = 2;
    if (!c.passed) c.witness = {{"kernel", matrix_json(k.entries)}, {"blocks", matrix_json(x)}, {"p", p_json(p)}};
    ctx.add(c);
  }
}

// -------------------------------------------------------------- compa

ScalarFunction random_monotone(const Density& d, CounterRng& rng) {
  switch (rng.uniform_int(0, 2)) {
    case 0:
      return ScalarFunction::power(rng.uniform(0.0, 3.0), rng.uniform(0.5, 2.0));
    case 1:
      return ScalarFunction::exponential(rng.uniform(0.0, 1.0 / d.eigenvalues().maxCoeff()), 1.0);
    default: {
      std::vector<double> v(static_cast<std::size_t>(d.dim()));
      double acc = rng.uniform(0.1, 1.0);
      for (double& e : v) {
        acc += rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 2.0);
        e = acc;
      }
      return ScalarFunction::table(v);
    }
  }
}

void run_compa(Context& ctx) {
  const int trials = ctx.trials(500, 50);
  const int max_n = ctx.dim(10, 6);
  const std::vector<double> ps = ctx.ps({1.0, 2.0, kInf});
  const double lo = 2.0 / 3.0 - 1e-9, hi = 2.0 + 1e-9;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng = ctx.rng(0x30000 + t);
    const int n = rng.uniform_int(1, max_n);
    const Density d = random_density(n, std::exp(rng.uniform(0.0, std::log(1e3))), rng);
    const ScalarFunction f = random_monotone(d, rng);
    const double p = ps[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(ps.size()) - 1))];
    const TriangularPart part = rng.uniform() < 0.5 ? TriangularPart::Plus : TriangularPart::Minus;
    const Matrix x = gaussian_matrix(n, rng);
    const auto r = compa_ratio(x, d, f, PNorm(p), part);
    const std::string id = "compa/" + std::to_string(t) + (part == TriangularPart::Plus ? "/plus" : "/minus");
    CaseRecord c = make_case("compa", id, n, r.value_or(0.0), 2.0, !r || (*r >= lo && *r <= hi));
    c.p = p_str(p);
    if (!r) c.note = "degenerate: projection vanishes";
    c.inputs = {{"eigenvalues", vector_json(d.eigenvalues())}, {"f_values", vector_json(f.on_spectrum(d.eigenvalues()))}};
    if (!c.passed)
      c.witness = {{"x", matrix_json(x)}, {"density", matrix_json(d.matrix())}, {"p", p_json(p)},
                   {"f_values", vector_json(f.on_spectrum(d.eigenvalues()))}};
    ctx.add(c);
  }
}

// --------------------------------------------------------- triangular

void run_triangular(Context& ctx) {
  const std::vector<int> sizes = ctx.sizes({8, 32, 128}, {4, 8, 16});
  const int trials = ctx.trials(4, 2);
  double first = 0.0, prev = 0.0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const int n = sizes[k];
    const TriangularBound b = triangular_norm_lower(n, PNorm::infinity(), trials, ctx.cfg.seed + n);
    if (k == 0) first = b.value;
    const bool monotone = b.value >= prev - 1e-12;
    CaseRecord c = make_case("triangular", "growth/n=" + std::to_string(n), n, b.value, prev, monotone);
    c.p = "inf";
    c.ratio = first > 0.0 ? b.value / first : 0.0;
    c.note = "ratio column is the growth relative to the smallest size";
    if (!c.passed) c.witness = {{"n", n}, {"previous", prev}};
    ctx.add(c);
    prev = b.value;
  }
  if (sizes.size() >= 2 && sizes.back() >= 16 * sizes.front()) {
    const double growth = first > 0.0 ? prev / first : 0.0;
    CaseRecord c = make_case("triangular", "growth-factor", sizes.back(), growth, 1.5, growth >= 1.5);
    c.p = "inf";
    c.note = "n=" + std::to_string(sizes.back()) + " against n=" + std::to_string(sizes.front());
    ctx.add(c);
  }
  for (int n : sizes) {
    const TriangularBound b = triangular_norm_lower(n, PNorm(2.0), trials, ctx.cfg.seed + n, 20);
    CaseRecord c = make_case("triangular", "hilbert-schmidt/n=" + std::to_string(n), n, b.value, 1.0,
                             std::abs(b.value - 1.0) <= 1e-9);
    c.p = "2";
    ctx.add(c);
  }
}

// ------------------------------------------------------------ fourier

void run_fourier(Context& ctx) {
  // Closed form against quadrature of the defining integral.
  const std::vector<double> thetas = ctx.thetas({0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9}, {0.2, 0.5});
  std::vector<double> xis;
  for (int k = -40; k <= 40; ++k) xis.push_back(k * 0.025);
  for (double th : thetas) {
    if (th <= 0.0 || th >= 1.0) continue;
    const KernelFunction f = KernelFunction::gmean(th);
    const TransformSamples s = fourier_transform_num(f, xis, transform_window(f));
    double err = 0.0;
    for (std::size_t k = 0; k < xis.size(); ++k) err = std::max(err, std::abs(s.values[k] - gmean_ft_closed(th, xis[k])));
    CaseRecord c = make_case("fourier", "closed-vs-numeric/theta=" + p_str(th), 0, err, 1e-6, err <= 1e-6);
    c.theta = th;
    ctx.add(c);
  }
  {
    const L1Estimate half = l1_norm_ft(KernelFunction::gmean(0.5));
    const double err = std::abs(half.value - 0.5);
    CaseRecord c = make_case("fourier", "l1/theta=0.5", 0, half.value, 0.5, err <= 1e-8);
    c.theta = 0.5;
    c.note = "error bar " + std::to_string(half.error);
    ctx.add(c);
    const L1Estimate e = l1_norm_ft(KernelFunction::exp_decay());
    CaseRecord ce = make_case("fourier", "l1/exp-decay", 0, e.value, 1.0, std::abs(e.value - 1.0) <= 1e-6);
    ctx.add(ce);
  }
  // Fit a + b ln(1/(θ(1-θ))) by least squares.
  {
    const std::vector<double> fit_thetas{0.05, 0.1, 0.2, 0.3};
    Eigen::MatrixXd a(4, 2);
    Eigen::VectorXd y(4);
    for (int k = 0; k < 4; ++k) {
      const double th = fit_thetas[static_cast<std::size_t>(k)];
      a(k, 0) = 1.0;
      a(k, 1) = std::log(1.0 / (th * (1.0 - th)));
      y(k) = l1_norm_ft(KernelFunction::gmean(th)).value;
    }
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd fit = a * coef;
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(fit(k) - y(k)) / y(k));
    CaseRecord c = make_case("fourier", "g-mean-fit", 0, worst, 0.1, worst <= 0.1);
    c.note = "a=" + std::to_string(coef(0)) + " b=" + std::to_string(coef(1));
    c.inputs = {{"a", coef(0)}, {"b", coef(1)}, {"values", std::vector<double>(y.data(), y.data() + 4)}};
    ctx.add(c);
  }
  // Cb norms on exponential points against the transform's L1 norm.
  {
    const std::vector<double> sdp_thetas = ctx.thetas({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}, {0.25, 0.5});
    const int max_n = ctx.dim(10, 6);
    for (double th : sdp_thetas) {
      if (th <= 0.0 || th >= 1.0) continue;
      const double bound = l1_norm_ft(KernelFunction::gmean(1.0 - th)).upper();
      for (int n = 2; n <= max_n; ++n) {
        KernelFamily f;
        f.tag = KernelTag::GeoMeanOverSum;
        f.theta = th;
        for (int i = 1; i <= n; ++i) f.lambda.push_back(std::exp(static_cast<double>(i)));
        std::ostringstream id;
        id << "g-mean-sdp/n=" << n << "/theta=" << th;
        certify_case(ctx, "fourier", id.str(), f, bound, "L1 norm of the transform");
      }
    }
  }
  // Positive definiteness for convex nonincreasing profiles.
  {
    const int trials = ctx.trials(100, 10);
    for (int t = 0; t < trials; ++t) {
      CounterRng rng = ctx.rng(0x40000 + t);
      const int n = rng.uniform_int(1, 12);
      std::vector<double> pts(static_cast<std::size_t>(n));
      for (double& s : pts) s = rng.uniform(-5.0, 5.0);
      const double th = rng.uniform(0.05, 1.0);
      const int which = t % 3;
      const KernelFunction f = which == 0   ? KernelFunction::exp_decay()
                               : which == 1 ? KernelFunction::sum_pow(th)
                                            : KernelFunction::one_minus_inv_sum_pow(th);
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = f(std::abs(pts[i] - pts[j]));
      const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
      const bool ok = psd_kernel_check(f, pts);
      CaseRecord c = make_case("fourier", "positivity/" + std::to_string(t), n, min_eig, -1e-9 * f(0.0), ok);
      c.ratio = 0.0;
      c.theta = which == 0 ? -1.0 : th;
      c.note = which == 0 ? "exp(-t)" : (which == 1 ? "(1+exp(-t))^theta" : "1-(1+exp(-t))^-theta");
      c.inputs = {{"points", pts}};
      if (!c.passed) c.witness = {{"points", pts}, {"profile", c.note}, {"theta", th}};
      ctx.add(c);
    }
  }
}

// ----------------------------------------------------------- sandwich

void sandwich_case(Context& ctx, const std::string& id, const Matrix& x, const Couple& couple, double ratio_cap) {
  const SandwichReport r = sandwich_verify(x, couple, ctx.cfg.budget, ctx.solver());
  const double cap = std::min(ratio_cap, r.budget);
  const bool ok = r.passed && r.upper_ratio <= cap && r.lower_ratio <= cap;
  CaseRecord c = make_case("sandwich", id, couple.base().dim(), std::max(r.upper_ratio, r.lower_ratio), cap, ok);
  c.p = p_str(r.p);
  c.theta = couple.theta();
  c.note = r.diagnostics;
  c.inputs = {{"exact", r.exact},
              {"upper", r.upper},
              {"solver_upper", r.solver_upper},
              {"proof_upper", r.proof_upper},
              {"lower", r.lower},
              {"upper_ratio", r.upper_ratio},
              {"lower_ratio", r.lower_ratio},
              {"p0", p_json(couple.p0().value())},
              {"p1", p_json(couple.p1().value())}};
  if (!c.passed)
    c.witness = {{"x", matrix_json(x)},
                 {"base_density", matrix_json(couple.base().matrix())},
                 {"d0_eigenvalues", vector_json(couple.d0().eigenvalues())},
                 {"d1_eigenvalues", vector_json(couple.d1().eigenvalues())},
                 {"theta", couple.theta()},
                 {"p0", p_json(couple.p0().value())},
                 {"p1", p_json(couple.p1().value())}};
  ctx.add(c);
}

void run_sandwich(Context& ctx) {
  const double pairs[3][2] = {{1.0, kInf}, {2.0, kInf}, {1.0, 2.0}};
  const double thetas[3] = {0.25, 0.5, 0.75};
  const double alphas[2][2] = {{1.0, 0.0}, {2.0, 1.0}};
  const double a0 = ctx.cfg.alpha0.value_or(-1.0), a1 = ctx.cfg.alpha1.value_or(-1.0);
  auto alpha_pair = [&](int k, double& x0, double& x1) {
    x0 = a0 >= 0.0 ? a0 : alphas[k % 2][0];
    x1 = a1 >= 0.0 ? a1 : alphas[k % 2][1];
  };
  const int small = ctx.quick() ? 2 : 5;
  for (int t = 0; t < small; ++t) {
    CounterRng rng = ctx.rng(0x50000 + t);
    double x0, x1;
    alpha_pair(t, x0, x1);
    // Dimension one.
    {
      const Density d = Density::diagonal(RealVector::Constant(1, std::exp(rng.uniform(-2.0, 2.0))));
      const Couple c(d, ScalarFunction::power(x0), ScalarFunction::power(x1), PNorm(pairs[t % 3][0]),
                     PNorm(pairs[t % 3][1]), thetas[t % 3]);
      sandwich_case(ctx, "dim1/" + std::to_string(t), gaussian_matrix(1, rng), c, 1.1);
    }
    // Simultaneously diagonal.
    {
      const int n = 4;
      const Density d = Density::diagonal(random_spectrum(n, 0.5, 20.0, rng, false));
      Matrix x = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) x(i, i) = rng.complex_normal();
      const Couple c(d, ScalarFunction::power(x0), ScalarFunction::power(x1), PNorm(pairs[t % 3][0]),
                     PNorm(pairs[t % 3][1]), thetas[(t + 1) % 3]);
      sandwich_case(ctx, "diagonal/" + std::to_string(t), x, c, 1.1);
    }
  }
  const int trials = ctx.trials(20, 3);
  const int n = ctx.dim(4, 4);
  for (int t = 0; t < trials; ++t) {
    CounterRng rng = ctx.rng(0x51000 + t);
    RealVector spectrum(n);
    if (n == 4) {
      spectrum << 1.0, 2.0, 5.0, 10.0;
    } else {
      spectrum = random_spectrum(n, 1.0, 10.0, rng, true);
    }
    const Density d(spectrum, random_unitary(n, rng));
    double x0, x1;
    alpha_pair(t / 9, x0, x1);
    const Couple c(d, ScalarFunction::power(x0), ScalarFunction::power(x1), PNorm(pairs[t % 3][0]),
                   PNorm(pairs[t % 3][1]), thetas[(t / 3) % 3]);
    sandwich_case(ctx, "random/" + std::to_string(t), gaussian_matrix(n, rng), c, kInf);
  }
}

// ----------------------------------------------------- counterexample

void run_counterexample(Context& ctx) {
  const std::vector<int> sizes = ctx.sizes({4, 8, 16, 32, 64, 100}, {4, 16, 100});
  double base = 0.0;
  for (int n : sizes) {
    KernelFamily f;
    f.tag = KernelTag::OppositeSignCounterexample;
    f.theta = 0.5;
    for (int i = 1; i <= n; ++i) {
      f.lambda.push_back(i);
      f.mu.push_back(1.0 / i);
    }
    const SchurKernel k = build_kernel(f);
    const LowerBound lb = multiplier_norm_lower(k, PNorm::infinity(), 1, ctx.cfg.seed);
    const double target = (n + 1.0) * (n + 1.0) / (4.0 * n);
    if (base == 0.0) base = lb.value;
    CaseRecord c = make_case("counterexample", "lower/n=" + std::to_string(n), n, lb.value, target,
                             lb.value >= target * (1.0 - 1e-12));
    c.p = "inf";
    c.theta = 0.5;
    c.ratio = base > 0.0 ? lb.value / base : 0.0;
    c.note = "ratio column is growth relative to the smallest size";
    ctx.add(c);
  }
}

using Runner = void (*)(Context&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> r{
      {"prop31", run_prop31},     {"multipliers", run_multipliers}, {"compa", run_compa},
      {"triangular", run_triangular}, {"fourier", run_fourier},    {"sandwich", run_sandwich},
      {"counterexample", run_counterexample}};
  return r;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) fail(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::Io, "cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"multipliers", "prop31",        "compa", "triangular",
                                              "fourier",     "sandwich", "counterexample", "all"};
  return names;
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) config_error("top level must be an object");
  static const std::vector<std::string> known{"schema", "experiment", "dim",    "p_grid",   "theta_grid",
                                              "alpha0", "alpha1",     "trials", "seed",     "tolerances",
                                              "budget", "solver",     "families", "sizes", "quick", "output"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) config_error("unknown key '" + key + "'");
  if (!j.contains("schema")) config_error("missing 'schema'");
  if (!j["schema"].is_number_integer() || j["schema"].get<int>() != kConfigSchema)
    config_error("unsupported schema version");
  if (!j.contains("experiment") || !j["experiment"].is_string()) config_error("missing 'experiment'");
  ExperimentConfig c;
  c.experiment = j["experiment"].get<std::string>();
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end())
    config_error("unknown experiment '" + c.experiment + "'");
  if (j.contains("dim")) {
    const int d = get_number<int>(j, "dim");
    if (d < 1 || d > 32) config_error("'dim' must lie in [1, 32]");
    c.dim = d;
  }
  if (j.contains("p_grid")) {
    if (!j["p_grid"].is_array()) config_error("'p_grid' must be an array");
    for (const auto& v : j["p_grid"]) c.p_grid.push_back(parse_p(v));
  }
  if (j.contains("theta_grid")) {
    if (!j["theta_grid"].is_array()) config_error("'theta_grid' must be an array");
    for (const auto& v : j["theta_grid"]) {
      if (!v.is_number()) config_error("theta values must be numbers");
      const double t = v.get<double>();
      if (!(t >= 0.0 && t <= 1.0)) config_error("theta values must lie in [0, 1]");
      c.theta_grid.push_back(t);
    }
  }
  for (const char* key : {"alpha0", "alpha1"}) {
    if (!j.contains(key)) continue;
    const double a = get_number<double>(j, key);
    if (!(a >= 0.0 && std::isfinite(a))) config_error(std::string("'") + key + "' must be a finite nonnegative number");
    (std::string(key) == "alpha0" ? c.alpha0 : c.alpha1) = a;
  }
  if (j.contains("trials")) {
    const int t = get_number<int>(j, "trials");
    if (t < 0) config_error("'trials' must be nonnegative");
    c.trials = t;
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) config_error("'seed' must be an integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) config_error("'tolerances' must be an object");
    for (const auto& [key, value] : t.items()) {
      if (!value.is_number() || !(value.get<double>() > 0.0)) config_error("tolerance '" + key + "' must be positive");
      if (key == "bound_slack") c.bound_slack = value.get<double>();
      else if (key == "cb_gap") c.cb_gap = value.get<double>();
      else if (key == "quadrature_rel") c.quadrature_rel = value.get<double>();
      else config_error("unknown tolerance '" + key + "'");
    }
  }
  if (j.contains("budget")) {
    const json& b = j["budget"];
    if (!b.is_object()) config_error("'budget' must be an object");
    for (const auto& [key, value] : b.items()) {
      if (key != "factor") config_error("unknown budget key '" + key + "'");
      if (!value.is_number() || !(value.get<double>() > 0.0)) config_error("budget factor must be positive");
      c.budget.factor = value.get<double>();
    }
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    if (!s.is_object()) config_error("'solver' must be an object");
    SolverParams sp;
    sp.iterations = 400;
    sp.optimization_grid = 32;
    for (const auto& [key, value] : s.items()) {
      if (!value.is_number_integer() || value.get<int>() < 0) config_error("solver '" + key + "' must be a nonnegative integer");
      const int v = value.get<int>();
      if (key == "degree") sp.degree = v;
      else if (key == "iterations") sp.iterations = v;
      else if (key == "optimization_grid") sp.optimization_grid = std::max(2, v);
      else if (key == "certification_grid") sp.certification_grid = std::max(2, v);
      else if (key == "starts") sp.starts = std::max(1, v);
      else config_error("unknown solver key '" + key + "'");
    }
    c.solver = sp;
  }
  if (j.contains("families")) {
    if (!j["families"].is_array()) config_error("'families' must be an array of names");
    for (const auto& v : j["families"]) {
      if (!v.is_string() || !kernel_tag_from_name(v.get<std::string>()) || v.get<std::string>() == "Custom" ||
          v.get<std::string>() == "OppositeSignCounterexample")
        config_error("unknown or uncertifiable kernel family " + v.dump());
      c.families.push_back(v.get<std::string>());
    }
  }
  if (j.contains("sizes")) {
    if (!j["sizes"].is_array()) config_error("'sizes' must be an array");
    for (const auto& v : j["sizes"]) {
      if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 512) config_error("sizes must be integers in [1, 512]");
      c.sizes.push_back(v.get<int>());
    }
  }
  if (j.contains("quick")) {
    if (!j["quick"].is_boolean()) config_error("'quick' must be a boolean");
    c.quick = j["quick"].get<bool>();
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) config_error("'output' must be a string");
    c.output = j["output"].get<std::string>();
  }
  return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed JSON (") + e.what() + ")");
  }
  return parse_config(j);
}

json config_to_json(const ExperimentConfig& c) {
  json j{{"schema", kConfigSchema}, {"experiment", c.experiment}, {"seed", c.seed}, {"quick", c.quick}};
  if (c.dim) j["dim"] = *c.dim;
  if (!c.p_grid.empty()) {
    json ps = json::array();
    for (double p : c.p_grid) ps.push_back(p_json(p));
    j["p_grid"] = ps;
  }
  if (!c.theta_grid.empty()) j["theta_grid"] = c.theta_grid;
  if (c.alpha0) j["alpha0"] = *c.alpha0;
  if (c.alpha1) j["alpha1"] = *c.alpha1;
  if (c.trials) j["trials"] = *c.trials;
  j["tolerances"] = {{"bound_slack", c.bound_slack}, {"cb_gap", c.cb_gap}, {"quadrature_rel", c.quadrature_rel}};
  j["budget"] = {{"factor", c.budget.factor}};
  if (c.solver)
    j["solver"] = {{"degree", c.solver->degree},
                   {"iterations", c.solver->iterations},
                   {"optimization_grid", c.solver->optimization_grid},
                   {"certification_grid", c.solver->certification_grid},
                   {"starts", c.solver->starts}};
  if (!c.families.empty()) j["families"] = c.families;
  if (!c.sizes.empty()) j["sizes"] = c.sizes;
  if (!c.output.empty()) j["output"] = c.output;
  return j;
}

int Report::violations() const {
  return static_cast<int>(std::count_if(cases.begin(), cases.end(), [](const CaseRecord& c) { return !c.passed; }));
}

int Report::nonconverged() const {
  return static_cast<int>(std::count_if(cases.begin(), cases.end(), [](const CaseRecord& c) { return !c.converged; }));
}

double Report::max_ratio() const {
  double m = 0.0;
  for (const auto& c : cases)
    if (std::isfinite(c.ratio)) m = std::max(m, c.ratio);
  return m;
}

int Report::exit_code() const {
  if (violations() > 0) return 1;
  if (nonconverged() > 0) return 3;
  return 0;
}

json Report::to_json(bool include_timing) const {
  json cs = json::array();
  for (const auto& c : cases) {
    json e{{"experiment", c.experiment}, {"case", c.id},     {"n", c.n},           {"p", c.p},
           {"value", c.value},           {"bound", std::isfinite(c.bound) ? json(c.bound) : json("inf")},
           {"ratio", c.ratio},           {"passed", c.passed}, {"converged", c.converged},
           {"note", c.note},             {"inputs", c.inputs}};
    if (c.theta >= 0.0) e["theta"] = c.theta;
    if (!c.witness.is_null()) e["witness"] = c.witness;
    cs.push_back(e);
  }
  std::map<std::string, std::pair<int, int>> per;
  for (const auto& c : cases) {
    auto& [count, bad] = per[c.experiment];
    ++count;
    bad += c.passed ? 0 : 1;
  }
  json by = json::object();
  for (const auto& [name, v] : per) by[name] = {{"cases", v.first}, {"violations", v.second}};
  json j{{"schema", kConfigSchema},
         {"config", config_to_json(config)},
         {"cases", cs},
         {"summary",
          {{"cases", cases.size()},
           {"violations", violations()},
           {"nonconverged", nonconverged()},
           {"max_ratio", max_ratio()},
           {"exit_code", exit_code()},
           {"by_experiment", by}}}};
  if (include_timing) j["wall_clock_seconds"] = wall_clock_seconds;
  return j;
}

std::string Report::to_csv() const {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "experiment,case,n,p,theta,value,bound,ratio,passed,converged,note\n";
  for (const auto& c : cases) {
    out << c.experiment << ',' << csv_escape(c.id) << ',' << c.n << ',' << c.p << ',';
    if (c.theta >= 0.0) out << c.theta;
    out << ',' << c.value << ',' << c.bound << ',' << c.ratio << ',' << (c.passed ? 1 : 0) << ','
        << (c.converged ? 1 : 0) << ',' << csv_escape(c.note) << '\n';
  }
  return out.str();
}

std::string Report::summary_table() const {
  struct Row {
    int cases = 0, violations = 0, nonconverged = 0;
    double max_ratio = 0.0;
  };
  std::map<std::string, Row> rows;
  for (const auto& c : cases) {
    Row& r = rows[c.experiment];
    ++r.cases;
    r.violations += c.passed ? 0 : 1;
    r.nonconverged += c.converged ? 0 : 1;
    if (std::isfinite(c.ratio)) r.max_ratio = std::max(r.max_ratio, c.ratio);
  }
  std::ostringstream out;
  out << std::left << std::setw(16) << "experiment" << std::right << std::setw(8) << "cases" << std::setw(12)
      << "violations" << std::setw(14) << "nonconverged" << std::setw(14) << "max ratio" << '\n';
  for (const auto& [name, r] : rows)
    out << std::left << std::setw(16) << name << std::right << std::setw(8) << r.cases << std::setw(12) << r.violations
        << std::setw(14) << r.nonconverged << std::setw(14) << std::setprecision(6) << r.max_ratio << '\n';
  for (const auto& c : cases)
    if (!c.passed) out << "FAIL " << c.experiment << " " << c.id << ": value " << c.value << " bound " << c.bound << " " << c.note << '\n';
  out << "total " << cases.size() << " cases, " << violations() << " violations, " << nonconverged()
      << " nonconverged, " << std::fixed << std::setprecision(2) << wall_clock_seconds << " s\n";
  return out.str();
}

Report run(const ExperimentConfig& config) {
  Report report;
  report.config = config;
  const auto start = std::chrono::steady_clock::now();
  Context ctx{config, report};
  if (config.experiment == "all") {
    for (const auto& name : experiment_names())
      if (name != "all") runners().at(name)(ctx);
  } else {
    const auto it = runners().find(config.experiment);
    if (it == runners().end()) fail(ErrorCode::Config, "unknown experiment '" + config.experiment + "'");
    it->second(ctx);
  }
  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_report(const Report& report, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create output directory " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  atomic_write(base / "report.json", report.to_json().dump(2) + "\n");
  atomic_write(base / "cases.csv", report.to_csv());
}

}  // namespace wnlp
