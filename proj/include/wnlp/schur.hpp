#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wnlp/fourier.hpp"
#include "wnlp/matrix.hpp"

namespace wnlp {

enum class KernelTag {
  MinOverMax,
  SumPowOverMaxPow,
  MaxPowOverSumPow,
  MinPowOverSumPow,
  TwoWeightMean,
  TwoWeightRatio,
  GeoMeanOverSum,
  OppositeSignCounterexample,
  InterpCorrection,
  Custom,
};

const char* kernel_tag_name(KernelTag tag);
std::optional<KernelTag> kernel_tag_from_name(const std::string& name);
bool kernel_uses_mu(KernelTag tag);

struct KernelFamily {
  KernelTag tag = KernelTag::Custom;
  std::vector<double> lambda;
  std::vector<double> mu;
  double theta = 0.5;
};

enum class BoundKind { Value, Unbounded, None };

struct ClaimedBound {
  BoundKind kind = BoundKind::None;
  double value = 0.0;
  std::string source;  // short description of how the number arises
};

struct SchurKernel {
  Matrix entries;
  KernelFamily provenance;
  int dim() const { return static_cast<int>(entries.rows()); }
  bool is_real() const;
};

SchurKernel build_kernel(const KernelFamily& family);
SchurKernel kernel_from_matrix(const Matrix& entries);
ClaimedBound claimed_bound(const KernelFamily& family);

Matrix apply_multiplier(const SchurKernel& k, const Matrix& x);

struct LowerBound {
  double value = 0.0;
  Matrix witness;
};

LowerBound multiplier_norm_lower(const SchurKernel& k, const PNorm& p, int trials,
                                 std::uint64_t seed);
double multiplier_norm_s2(const SchurKernel& k);

enum class UpperMethod { FourierL1, SDP, Composition };

struct NormCertificate {
  double lower = 0.0;
  double upper = 0.0;
  // Unit trace-class matrix a bᵀ with ‖k ∘ (a bᵀ)‖_1 = lower.
  Matrix lower_witness;
  UpperMethod method = UpperMethod::SDP;
  // Rows are ξ_i and η_j; φ_ij ≈ ⟨ξ_i, η_j⟩ = Σ_k ξ_ik conj(η_jk).
  Matrix xi, eta;
  double factorization_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool used_fallback = false;
  double gap() const { return upper - lower; }
};

struct CbOptions {
  double tol = 1e-6;
  int max_bfgs_iterations = 4000;
  bool allow_fallback = true;
  int fallback_bisection_steps = 30;
  int fallback_iteration_cap = 5000;
};

// Certified bracket on the cb norm: dual scalings for the lower end, an
// explicit Gram factorization for the upper end.
NormCertificate cb_norm_sdp(const SchurKernel& k, const CbOptions& options = {},
                            const Tolerances& tol = kDefaultTolerances);

// Bisection over PSD completions decided by alternating projections.
NormCertificate cb_norm_bisection(const SchurKernel& k, double gap, int bisection_steps,
                                  int iteration_cap, std::optional<double> lo = std::nullopt,
                                  std::optional<double> hi = std::nullopt,
                                  const Tolerances& tol = kDefaultTolerances);

// Upper factorization bound derived from given positive scalings.
struct FactorizationBound {
  double upper = 0.0;
  double residual = 0.0;
  Matrix xi, eta;
};
FactorizationBound factorization_from_scalings(const Matrix& phi, const RealVector& a,
                                               const RealVector& b,
                                               const Tolerances& tol = kDefaultTolerances);
// ‖D_a Φ D_b‖_1 for unit vectors a, b: a lower bound on the cb norm.
double dual_value(const Matrix& phi, const RealVector& a, const RealVector& b);

// ‖f̂‖₁ bound for the kernel (f(s_i - s_j)), valid for any points.
double cb_upper_fourier(const KernelFunction& f, std::span<const double> points);

// (f(|s_i - s_j|)) has min eigenvalue ≥ -1e-9 f(0). Requires f convex and
// nonincreasing on [0, ∞).
bool psd_kernel_check(const KernelFunction& f, std::span<const double> points);

struct TransferenceResult {
  double ratio = 0.0;
  double bound = 0.0;
  bool holds = true;
};

// Blockwise action of k on an (n·m)×(n·m) matrix of m×m blocks.
Matrix apply_blockwise(const SchurKernel& k, const Matrix& blocks, int block_size);
TransferenceResult transference_check(const SchurKernel& k, const Matrix& blocks, int block_size,
                                      const PNorm& p, double cb_upper);

}  // namespace wnlp
