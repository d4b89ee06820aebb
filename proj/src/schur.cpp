#include "wnlp/schur.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wnlp/error.hpp"
#include "wnlp/rng.hpp"

namespace wnlp {

namespace {

struct TagName {
  KernelTag tag;
  const char* name;
};

constexpr TagName kTagNames[] = {
    {KernelTag::MinOverMax, "MinOverMax"},
    {KernelTag::SumPowOverMaxPow, "SumPowOverMaxPow"},
    {KernelTag::MaxPowOverSumPow, "MaxPowOverSumPow"},
    {KernelTag::MinPowOverSumPow, "MinPowOverSumPow"},
    {KernelTag::TwoWeightMean, "TwoWeightMean"},
    {KernelTag::TwoWeightRatio, "TwoWeightRatio"},
    {KernelTag::GeoMeanOverSum, "GeoMeanOverSum"},
    {KernelTag::OppositeSignCounterexample, "OppositeSignCounterexample"},
    {KernelTag::InterpCorrection, "InterpCorrection"},
    {KernelTag::Custom, "Custom"},
};

void check_family(const KernelFamily& f) {
  const std::size_t n = f.lambda.size();
  require(n >= 1, "kernel family needs at least one point");
  require(std::isfinite(f.theta) && f.theta >= 0.0 && f.theta <= 1.0, "kernel exponent theta must lie in [0, 1]");
  for (double l : f.lambda) require(std::isfinite(l) && l > 0.0, "kernel sequence lambda must be positive");
  if (kernel_uses_mu(f.tag)) {
    if (f.mu.size() != n) fail(ErrorCode::DimensionMismatch, "kernel sequences lambda and mu differ in length");
    for (double m : f.mu) require(std::isfinite(m) && m > 0.0, "kernel sequence mu must be positive");
  }
  const bool monotone = f.tag == KernelTag::TwoWeightMean || f.tag == KernelTag::TwoWeightRatio ||
                        f.tag == KernelTag::InterpCorrection;
  if (monotone) {
    for (std::size_t i = 1; i < n; ++i)
      if (f.lambda[i] < f.lambda[i - 1] || f.mu[i] < f.mu[i - 1])
        fail(ErrorCode::NonMonotone, std::string(kernel_tag_name(f.tag)) + " needs nondecreasing lambda and mu");
  }
  if (f.tag == KernelTag::GeoMeanOverSum)
    require(f.theta > 0.0 && f.theta < 1.0, "GeoMeanOverSum needs 0 < theta < 1");
}

// λ^{1-θ} μ^θ
double mix(double l, double m, double t) { return std::pow(l, 1.0 - t) * std::pow(m, t); }

}  // namespace

const char* kernel_tag_name(KernelTag tag) {
  for (const auto& t : kTagNames)
    if (t.tag == tag) return t.name;
  return "Unknown";
}

std::optional<KernelTag> kernel_tag_from_name(const std::string& name) {
  for (const auto& t : kTagNames)
    if (name == t.name) return t.tag;
  return std::nullopt;
}

bool kernel_uses_mu(KernelTag tag) {
  return tag == KernelTag::TwoWeightMean || tag == KernelTag::TwoWeightRatio ||
         tag == KernelTag::OppositeSignCounterexample || tag == KernelTag::InterpCorrection;
}

bool SchurKernel::is_real() const { return entries.imag().cwiseAbs().maxCoeff() == 0.0; }

SchurKernel build_kernel(const KernelFamily& f) {
  require(f.tag != KernelTag::Custom, "custom kernels are built with kernel_from_matrix");
  check_family(f);
  const int n = static_cast<int>(f.lambda.size());
  const double t = f.theta;
  SchurKernel k;
  k.provenance = f;
  k.entries.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double li = f.lambda[i], lj = f.lambda[j];
      const double lo = std::min(li, lj), hi = std::max(li, lj), sum = li + lj;
      double v = 0.0;
      switch (f.tag) {
        case KernelTag::MinOverMax:
          v = lo / hi;
          break;
        case KernelTag::SumPowOverMaxPow:
          v = std::pow(sum / hi, t);
          break;
        case KernelTag::MaxPowOverSumPow:
          v = std::pow(hi / sum, t);
          break;
        case KernelTag::MinPowOverSumPow:
          v = std::pow(lo / sum, t);
          break;
        case KernelTag::TwoWeightMean: {
          const double mi = f.mu[i], mj = f.mu[j];
          v = (mix(li, mi, t) + mix(lj, mj, t)) / mix(sum, mi + mj, t);
          break;
        }
        case KernelTag::TwoWeightRatio: {
          const double mi = f.mu[i], mj = f.mu[j];
          v = mix(mi + mj, sum, t) / (mix(mi, li, t) + mix(mj, lj, t));
          break;
        }
        case KernelTag::GeoMeanOverSum:
          v = std::pow(li, t) * std::pow(lj, 1.0 - t) / sum;
          break;
        case KernelTag::OppositeSignCounterexample:
        case KernelTag::InterpCorrection: {
          const double mi = f.mu[i], mj = f.mu[j];
          const double a = mix(li, mi, t) + mix(lj, mj, t);
          const double b = mix(li, mi, 1.0 - t) + mix(lj, mj, 1.0 - t);
          const double c = sum * (mi + mj);
          v = f.tag == KernelTag::InterpCorrection ? a * b / c : c / (a * b);
          break;
        }
        case KernelTag::Custom:
          break;
      }
      k.entries(i, j) = v;
    }
  }
  require_finite(k.entries, "build_kernel");
  return k;
}

SchurKernel kernel_from_matrix(const Matrix& entries) {
  require_square(entries, "kernel_from_matrix");
  require_finite(entries, "kernel_from_matrix");
  SchurKernel k;
  k.entries = entries;
  k.provenance.tag = KernelTag::Custom;
  return k;
}

ClaimedBound claimed_bound(const KernelFamily& f) {
  const double t = f.theta;
  ClaimedBound b;
  b.kind = BoundKind::Value;
  switch (f.tag) {
    case KernelTag::MinOverMax:
      b.value = 1.0;
      b.source = "1";
      break;
    case KernelTag::SumPowOverMaxPow:
      b.value = std::pow(2.0, t);
      b.source = "2^theta";
      break;
    case KernelTag::MaxPowOverSumPow:
    case KernelTag::MinPowOverSumPow:
      b.value = 2.0 - std::pow(2.0, -t);
      b.source = "2 - 2^-theta";
      break;
    case KernelTag::TwoWeightMean:
    case KernelTag::InterpCorrection:
      b.value = 9.0 - 4.0 * std::sqrt(2.0);
      b.source = "9 - 4 sqrt 2";
      break;
    case KernelTag::TwoWeightRatio:
      b.value = 3.0;
      b.source = "3";
      break;
    case KernelTag::GeoMeanOverSum: {
      // The kernel is f(s_i - s_j) with s = ln λ and f the g-mean function at 1-θ.
      require(t > 0.0 && t < 1.0, "GeoMeanOverSum needs 0 < theta < 1");
      b.value = l1_norm_ft(KernelFunction::gmean(1.0 - t)).upper();
      b.source = "L1 norm of the g-mean transform";
      break;
    }
    case KernelTag::OppositeSignCounterexample:
      b.kind = BoundKind::Unbounded;
      b.value = std::numeric_limits<double>::infinity();
      b.source = "unbounded";
      break;
    case KernelTag::Custom:
      b.kind = BoundKind::None;
      b.source = "none";
      break;
  }
  return b;
}

Matrix apply_multiplier(const SchurKernel& k, const Matrix& x) {
  require_same_dim(k.entries, x, "apply_multiplier");
  return k.entries.cwiseProduct(x);
}

double multiplier_norm_s2(const SchurKernel& k) {
  return k.entries.size() == 0 ? 0.0 : k.entries.cwiseAbs().maxCoeff();
}

LowerBound multiplier_norm_lower(const SchurKernel& k, const PNorm& p, int trials, std::uint64_t seed) {
  const int n = k.dim();
  require(n >= 1, "empty kernel");
  LowerBound out;
  Eigen::Index bi = 0, bj = 0;
  out.value = k.entries.cwiseAbs().maxCoeff(&bi, &bj);
  out.witness = matrix_unit(n, static_cast<int>(bi), static_cast<int>(bj));
  if (n == 1) return out;

  auto ratio = [&](const Matrix& x) {
    const double nx = schatten_norm(x, p);
    return nx == 0.0 ? 0.0 : schatten_norm(apply_multiplier(k, x), p) / nx;
  };
  Matrix best_x;
  double best_r = -1.0;
  auto consider = [&](const Matrix& x) {
    const double r = ratio(x);
    if (r > best_r) {
      best_r = r;
      best_x = x;
    }
    if (r > out.value) {
      out.value = r;
      out.witness = x / schatten_norm(x, p);
    }
  };

  consider(Matrix::Ones(n, n));
  CounterRng rng(seed, 0x6d6c);
  for (int t = 0; t < trials; ++t) {
    // Rank-one sign pattern and a complex Gaussian per trial.
    Eigen::VectorXcd a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a(i) = rng.uniform() < 0.5 ? -1.0 : 1.0;
      b(i) = rng.uniform() < 0.5 ? -1.0 : 1.0;
    }
    consider(a * b.transpose());
    consider(gaussian_matrix(n, rng));
  }

  // Ascent from the best candidate: x ← witness of S*(witness of S(x)).
  if (best_r > 0.0) {
    const PNorm pc = p.conjugate();
    const SchurKernel adj = kernel_from_matrix(k.entries.conjugate());
    Matrix x = best_x / schatten_norm(best_x, p);
    for (int it = 0; it < 50; ++it) {
      const Matrix w = norming_functional(apply_multiplier(k, x), p);
      Matrix next = norming_functional(apply_multiplier(adj, w), pc);
      const double nn = schatten_norm(next, p);
      if (nn == 0.0) break;
      next /= nn;
      const double before = ratio(x);
      consider(next);
      x = next;
      if (ratio(next) <= before * (1.0 + 1e-12)) break;
    }
  }
  return out;
}

double cb_upper_fourier(const KernelFunction& f, std::span<const double> points) {
  for (double s : points) require(std::isfinite(s), "kernel points must be finite");
  const L1Estimate l1 = l1_norm_ft(f);
  return std::abs(f.offset()) + l1.upper();
}

bool psd_kernel_check(const KernelFunction& f, std::span<const double> points) {
  const std::size_t n = points.size();
  if (n == 0) return true;
  double span = 0.0;
  for (double s : points) require(std::isfinite(s), "kernel points must be finite");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) span = std::max(span, std::abs(points[i] - points[j]));
  // Convex and nonincreasing on [0, span], checked on a grid.
  const int grid = 400;
  const double h = std::max(span, 1.0) / grid;
  const double f0 = f(0.0);
  const double slack = 1e-12 * std::max(1.0, std::abs(f0));
  for (int k = 0; k + 2 <= grid; ++k) {
    const double a = f(k * h), b = f((k + 1) * h), c = f((k + 2) * h);
    if (b > a + slack) fail(ErrorCode::InvalidArgument, "psd_kernel_check: function is not nonincreasing");
    if (a - 2.0 * b + c < -slack) fail(ErrorCode::InvalidArgument, "psd_kernel_check: function is not convex");
  }
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = f(std::abs(points[i] - points[j]));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -1e-9 * f0;
}

Matrix apply_blockwise(const SchurKernel& k, const Matrix& blocks, int block_size) {
  const int n = k.dim();
  require(block_size >= 1, "block size must be positive");
  if (blocks.rows() != n * block_size || blocks.cols() != n * block_size)
    fail(ErrorCode::DimensionMismatch, "block matrix does not match kernel size times block size");
  Matrix out = blocks;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out.block(i * block_size, j * block_size, block_size, block_size) *= k.entries(i, j);
  return out;
}

TransferenceResult transference_check(const SchurKernel& k, const Matrix& blocks, int block_size, const PNorm& p,
                                      double cb_upper) {
  if (k.dim() * block_size > kDefaultTolerances.transference_max_dim)
    fail(ErrorCode::InvalidArgument, "transference check larger than the size guard");
  TransferenceResult r;
  r.bound = cb_upper;
  const double nx = schatten_norm(blocks, p);
  r.ratio = nx == 0.0 ? 0.0 : schatten_norm(apply_blockwise(k, blocks, block_size), p) / nx;
  r.holds = r.ratio <= cb_upper + 1e-6;
  return r;
}

}  // namespace wnlp
