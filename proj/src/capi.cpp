#include "wnlp/wnlp.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "wnlp/density.hpp"
#include "wnlp/error.hpp"
#include "wnlp/experiment.hpp"
#include "wnlp/fourier.hpp"
#include "wnlp/interpolation.hpp"
#include "wnlp/schur.hpp"
#include "wnlp/weighted.hpp"

struct wnlp_density {
  wnlp::Density d;
};

struct wnlp_kernel {
  wnlp::SchurKernel k;
  std::optional<wnlp::KernelFamily> family;
};

struct wnlp_report {
  wnlp::Report report;
  std::string summary, json, csv;
};

namespace {

thread_local std::string last_error;

wnlp_status status_of(wnlp::ErrorCode c) {
  switch (c) {
    case wnlp::ErrorCode::InvalidArgument: return WNLP_INVALID_ARGUMENT;
    case wnlp::ErrorCode::DimensionMismatch: return WNLP_DIMENSION_MISMATCH;
    case wnlp::ErrorCode::NotHermitian: return WNLP_NOT_HERMITIAN;
    case wnlp::ErrorCode::NonMonotone: return WNLP_NON_MONOTONE;
    case wnlp::ErrorCode::Degenerate: return WNLP_DEGENERATE;
    case wnlp::ErrorCode::NonConvergence: return WNLP_NON_CONVERGENCE;
    case wnlp::ErrorCode::Config: return WNLP_CONFIG;
    case wnlp::ErrorCode::Io: return WNLP_IO;
  }
  return WNLP_INTERNAL;
}

template <class F>
wnlp_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return WNLP_OK;
  } catch (const wnlp::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return WNLP_INTERNAL;
}

void need(const void* p, const char* what) {
  if (p == nullptr) wnlp::fail(wnlp::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

void need_dim(int n) {
  if (n < 1) wnlp::fail(wnlp::ErrorCode::InvalidArgument, "dimension must be positive");
}

wnlp::PNorm pnorm(double p) {
  if (std::isinf(p) && p > 0) return wnlp::PNorm::infinity();
  return wnlp::PNorm(p);
}

wnlp::Matrix read_matrix(const double* x, int n) {
  need(x, "matrix");
  need_dim(n);
  wnlp::Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = wnlp::cplx(x[2 * (i * n + j)], x[2 * (i * n + j) + 1]);
  return m;
}

void write_matrix(const wnlp::Matrix& m, double* out) {
  need(out, "output");
  const auto n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      out[2 * (i * n + j)] = m(i, j).real();
      out[2 * (i * n + j) + 1] = m(i, j).imag();
    }
}

}  // namespace

extern "C" {

const char* wnlp_version(void) { return "0.1.0"; }

const char* wnlp_last_error(void) { return last_error.c_str(); }

wnlp_status wnlp_schatten_norm(const double* x, int n, double p, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = wnlp::schatten_norm(read_matrix(x, n), pnorm(p));
  });
}

wnlp_status wnlp_density_create(const double* h, int n, wnlp_density** out) {
  return guarded([&] {
    need(out, "out");
    *out = new wnlp_density{wnlp::Density::from_matrix(read_matrix(h, n))};
  });
}

wnlp_status wnlp_density_diagonal(const double* values, int n, wnlp_density** out) {
  return guarded([&] {
    need(values, "values");
    need(out, "out");
    need_dim(n);
    *out = new wnlp_density{wnlp::Density::diagonal(Eigen::Map<const wnlp::RealVector>(values, n))};
  });
}

void wnlp_density_free(wnlp_density* d) { delete d; }

int wnlp_density_dim(const wnlp_density* d) { return d ? d->d.dim() : 0; }

wnlp_status wnlp_density_eigenvalues(const wnlp_density* d, double* values) {
  return guarded([&] {
    need(d, "density");
    need(values, "values");
    const auto& v = d->d.eigenvalues();
    std::copy(v.data(), v.data() + v.size(), values);
  });
}

wnlp_status wnlp_density_power(const wnlp_density* d, double alpha, wnlp_density** out) {
  return guarded([&] {
    need(d, "density");
    need(out, "out");
    *out = new wnlp_density{wnlp::apply_calculus(d->d, wnlp::ScalarFunction::power(alpha))};
  });
}

wnlp_status wnlp_weighted_norm(const double* x, const wnlp_density* d, double p, wnlp_weighted_kind kind,
                               double* out) {
  return guarded([&] {
    need(d, "density");
    need(out, "out");
    if (kind < WNLP_TWO_SIDED || kind > WNLP_DELTA_MAX) wnlp::fail(wnlp::ErrorCode::InvalidArgument, "unknown norm kind");
    *out = wnlp::weighted_norm(read_matrix(x, d->d.dim()), d->d, pnorm(p), static_cast<wnlp::WeightedNormKind>(kind));
  });
}

wnlp_status wnlp_geo_mean_map(const wnlp_density* d, const double* x, double* out) {
  return guarded([&] {
    need(d, "density");
    write_matrix(wnlp::geo_mean_map(d->d, read_matrix(x, d->d.dim())), out);
  });
}

wnlp_status wnlp_sigma_inverse(const wnlp_density* d, const double* y, double* out) {
  return guarded([&] {
    need(d, "density");
    write_matrix(wnlp::sigma_inverse(d->d, read_matrix(y, d->d.dim())), out);
  });
}

wnlp_status wnlp_compa_ratio(const double* x, const wnlp_density* d, double alpha, double p, int plus, double* out,
                             int* defined) {
  return guarded([&] {
    need(d, "density");
    need(out, "out");
    need(defined, "defined");
    const auto r = wnlp::compa_ratio(read_matrix(x, d->d.dim()), d->d, wnlp::ScalarFunction::power(alpha), pnorm(p),
                                     plus ? wnlp::TriangularPart::Plus : wnlp::TriangularPart::Minus);
    *defined = r.has_value() ? 1 : 0;
    *out = r.value_or(0.0);
  });
}

wnlp_status wnlp_kernel_create(const char* family, const double* lambda, const double* mu, int n, double theta,
                               wnlp_kernel** out) {
  return guarded([&] {
    need(family, "family");
    need(lambda, "lambda");
    need(out, "out");
    need_dim(n);
    const auto tag = wnlp::kernel_tag_from_name(family);
    if (!tag || *tag == wnlp::KernelTag::Custom)
      wnlp::fail(wnlp::ErrorCode::InvalidArgument, std::string("unknown kernel family '") + family + "'");
    wnlp::KernelFamily f;
    f.tag = *tag;
    f.theta = theta;
    f.lambda.assign(lambda, lambda + n);
    if (wnlp::kernel_uses_mu(*tag)) {
      need(mu, "mu");
      f.mu.assign(mu, mu + n);
    }
    *out = new wnlp_kernel{wnlp::build_kernel(f), f};
  });
}

wnlp_status wnlp_kernel_from_real(const double* entries, int n, wnlp_kernel** out) {
  return guarded([&] {
    need(entries, "entries");
    need(out, "out");
    need_dim(n);
    wnlp::Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = entries[i * n + j];
    *out = new wnlp_kernel{wnlp::kernel_from_matrix(m), std::nullopt};
  });
}

void wnlp_kernel_free(wnlp_kernel* k) { delete k; }

int wnlp_kernel_dim(const wnlp_kernel* k) { return k ? k->k.dim() : 0; }

wnlp_status wnlp_kernel_entry(const wnlp_kernel* k, int i, int j, double* re, double* im) {
  return guarded([&] {
    need(k, "kernel");
    need(re, "re");
    need(im, "im");
    if (i < 0 || j < 0 || i >= k->k.dim() || j >= k->k.dim())
      wnlp::fail(wnlp::ErrorCode::InvalidArgument, "entry index out of range");
    *re = k->k.entries(i, j).real();
    *im = k->k.entries(i, j).imag();
  });
}

wnlp_status wnlp_kernel_claimed_bound(const wnlp_kernel* k, double* out) {
  return guarded([&] {
    need(k, "kernel");
    need(out, "out");
    if (!k->family) wnlp::fail(wnlp::ErrorCode::InvalidArgument, "custom kernels carry no claimed bound");
    *out = wnlp::claimed_bound(*k->family).value;
  });
}

wnlp_status wnlp_kernel_apply(const wnlp_kernel* k, const double* x, double* out) {
  return guarded([&] {
    need(k, "kernel");
    write_matrix(wnlp::apply_multiplier(k->k, read_matrix(x, k->k.dim())), out);
  });
}

wnlp_status wnlp_kernel_norm_lower(const wnlp_kernel* k, double p, int trials, uint64_t seed, double* out) {
  return guarded([&] {
    need(k, "kernel");
    need(out, "out");
    *out = wnlp::multiplier_norm_lower(k->k, pnorm(p), trials, seed).value;
  });
}

wnlp_status wnlp_kernel_cb_norm(const wnlp_kernel* k, double tol, wnlp_cb_certificate* out) {
  return guarded([&] {
    need(k, "kernel");
    need(out, "out");
    wnlp::CbOptions opt;
    if (tol > 0.0) opt.tol = tol;
    const wnlp::NormCertificate c = wnlp::cb_norm_sdp(k->k, opt);
    *out = {c.lower, c.upper, c.iterations, c.converged ? 1 : 0, c.used_fallback ? 1 : 0};
  });
}

wnlp_status wnlp_gmean_ft(double theta, double xi, double* re, double* im) {
  return guarded([&] {
    need(re, "re");
    need(im, "im");
    const auto v = wnlp::gmean_ft_closed(theta, xi);
    *re = v.real();
    *im = v.imag();
  });
}

wnlp_status wnlp_gmean_l1(double theta, double* value, double* error) {
  return guarded([&] {
    need(value, "value");
    need(error, "error");
    const auto e = wnlp::l1_norm_ft(wnlp::KernelFunction::gmean(theta));
    *value = e.value;
    *error = e.error;
  });
}

wnlp_status wnlp_sandwich_verify(const double* x, const wnlp_density* d, double alpha0, double alpha1, double p0,
                                 double p1, double theta, double budget_factor, int iterations, wnlp_sandwich* out) {
  return guarded([&] {
    need(d, "density");
    need(out, "out");
    const wnlp::Couple c(d->d, wnlp::ScalarFunction::power(alpha0), wnlp::ScalarFunction::power(alpha1), pnorm(p0),
                         pnorm(p1), theta);
    wnlp::SandwichBudget b;
    if (budget_factor > 0.0) b.factor = budget_factor;
    wnlp::SolverParams sp;
    sp.iterations = iterations > 0 ? iterations : 400;
    sp.optimization_grid = 32;
    const auto r = wnlp::sandwich_verify(read_matrix(x, d->d.dim()), c, b, sp);
    *out = {r.p, r.exact, r.upper, r.lower, r.upper_ratio, r.lower_ratio, r.budget, r.passed ? 1 : 0};
  });
}

wnlp_status wnlp_run_experiment(const char* experiment, const char* config_json, const wnlp_run_options* options,
                                wnlp_report** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    wnlp::ExperimentConfig cfg;
    if (config_json != nullptr) {
      cfg = wnlp::parse_config_text(config_json);
      if (experiment != nullptr) {
        const auto& names = wnlp::experiment_names();
        if (std::find(names.begin(), names.end(), experiment) == names.end())
          wnlp::fail(wnlp::ErrorCode::Config, std::string("unknown experiment '") + experiment + "'");
        cfg.experiment = experiment;
      }
    } else {
      need(experiment, "experiment");
      nlohmann::json j{{"schema", wnlp::kConfigSchema}, {"experiment", experiment}};
      cfg = wnlp::parse_config(j);
    }
    std::string dir = cfg.output;
    if (options != nullptr) {
      if (options->has_seed) cfg.seed = options->seed;
      if (options->quick) cfg.quick = true;
      if (options->out_dir != nullptr) dir = options->out_dir;
    }
    auto r = std::make_unique<wnlp_report>();
    r->report = wnlp::run(cfg);
    r->summary = r->report.summary_table();
    r->json = r->report.to_json().dump(2);
    r->csv = r->report.to_csv();
    if (!dir.empty()) wnlp::write_report(r->report, dir);
    *out = r.release();
  });
}

void wnlp_report_free(wnlp_report* r) { delete r; }

int wnlp_report_exit_code(const wnlp_report* r) { return r ? r->report.exit_code() : 2; }

int wnlp_report_cases(const wnlp_report* r) { return r ? static_cast<int>(r->report.cases.size()) : 0; }

int wnlp_report_violations(const wnlp_report* r) { return r ? r->report.violations() : 0; }

double wnlp_report_max_ratio(const wnlp_report* r) { return r ? r->report.max_ratio() : 0.0; }

const char* wnlp_report_summary(const wnlp_report* r) { return r ? r->summary.c_str() : ""; }

const char* wnlp_report_json(const wnlp_report* r) { return r ? r->json.c_str() : ""; }

const char* wnlp_report_csv(const wnlp_report* r) { return r ? r->csv.c_str() : ""; }

wnlp_status wnlp_report_case_value(const wnlp_report* r, const char* prefix, double* value, double* bound,
                                   int* passed) {
  return guarded([&] {
    need(r, "report");
    need(prefix, "prefix");
    for (const auto& c : r->report.cases) {
      if (c.id.rfind(prefix, 0) != 0) continue;
      if (value) *value = c.value;
      if (bound) *bound = c.bound;
      if (passed) *passed = c.passed ? 1 : 0;
      return;
    }
    wnlp::fail(wnlp::ErrorCode::InvalidArgument, std::string("no case with prefix '") + prefix + "'");
  });
}

}  // extern "C"
