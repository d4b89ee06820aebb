#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wnlp/density.hpp"
#include "wnlp/schur.hpp"

namespace wnlp {

// (L_{p0}(f0(d)), L_{p1}(f1(d))) at parameter θ ∈ (0, 1), with 1 < p < ∞.
class Couple {
 public:
  Couple(Density base, ScalarFunction f0, ScalarFunction f1, PNorm p0, PNorm p1, double theta);

  const Density& base() const { return base_; }
  const Density& d0() const { return d0_; }
  const Density& d1() const { return d1_; }
  const PNorm& p0() const { return p0_; }
  const PNorm& p1() const { return p1_; }
  double theta() const { return theta_; }
  PNorm p() const;
  // d0^{1-t} d1^{t}
  Density d_at(double t) const;
  Density d_theta() const { return d_at(theta_); }

 private:
  Density base_;
  Density d0_, d1_;
  PNorm p0_, p1_;
  double theta_;
};

// Coordinates in which both boundary norms act entrywise: the norm at the
// boundary line Re z = k of a matrix y (frame coordinates) is ‖w_k ∘ y‖_{q_k}.
struct FrameProblem {
  RealMatrix w0, w1;
  PNorm q0{1.0}, q1{1.0};
  double theta = 0.5;
  Matrix frame_left, frame_right;
  // Entries allowed to be nonzero in the coefficients; empty means all.
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;

  static FrameProblem primal(const Couple& c);
  // The couple of conjugate exponents with reciprocal weights; pairs with
  // the primal couple through tr(y* x).
  static FrameProblem dual(const Couple& c);
  static FrameProblem unweighted(int n, const PNorm& q0, const PNorm& q1, double theta);

  int dim() const { return static_cast<int>(w0.rows()); }
  Matrix to_frame(const Matrix& x) const { return frame_left.adjoint() * x * frame_right; }
  Matrix from_frame(const Matrix& y) const { return frame_left * y * frame_right.adjoint(); }
};

// F(z) = L · diag(e^{(θ-z)α}) (Σ_k B_k w(z)^k) diag(e^{(θ-z)β}) · R*, where
// w maps the strip 0 < Re z < 1 onto the unit disk with w(θ) = 0, and L, R
// are fixed unitary frames.
class AnalyticFamily {
 public:
  AnalyticFamily() = default;
  AnalyticFamily(double theta, std::vector<Matrix> coefficients, RealVector left, RealVector right,
                 Matrix frame_left, Matrix frame_right);

  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  double theta() const { return theta_; }
  const std::vector<Matrix>& coefficients() const { return coefficients_; }
  const RealVector& left_exponents() const { return left_; }
  const RealVector& right_exponents() const { return right_; }
  const Matrix& frame_left() const { return frame_left_; }
  const Matrix& frame_right() const { return frame_right_; }

  Matrix at(cplx z) const;
  // Boundary value at the point where w = e^{iφ}.
  Matrix at_circle(double phi) const;

  // w(z) = (ζ - e^{iπθ})/(ζ - e^{-iπθ}), ζ = e^{iπz}.
  static cplx disk_variable(double theta, cplx z);
  // Inverse of w restricted to the unit circle (φ ∉ 2πℤ).
  static cplx strip_point(double theta, double phi);

 private:
  double theta_ = 0.5;
  std::vector<Matrix> coefficients_;
  RealVector left_, right_;
  Matrix frame_left_, frame_right_;
};

struct BoundaryEvaluation {
  double value = 0.0;        // max over lines of (sampled max + inflation)
  double sampled_max = 0.0;  // max over samples only
  double line0 = 0.0;        // Re z = 0
  double line1 = 0.0;        // Re z = 1
  double inflation0 = 0.0;
  double inflation1 = 0.0;
};

// Line Re z = 1 corresponds to angles [0, 2πθ] on the circle and Re z = 0
// to [2πθ, 2π]. Each line is sampled at `grid` points; the sampled max is
// inflated by (h/2) Σ_k k ‖E ∘ B_k‖, which bounds the variation of the
// boundary norm between neighbouring samples.
BoundaryEvaluation boundary_objective(const AnalyticFamily& f, const FrameProblem& problem,
                                      int grid = 256);
BoundaryEvaluation boundary_objective(const AnalyticFamily& f, const Couple& c, int grid = 256);

struct SolverParams {
  int degree = 4;
  // Subgradient iterations per degree step of each start.
  int iterations = 5000;
  int optimization_grid = 48;
  int certification_grid = 256;
  double step = 0.3;
  int starts = 3;
  std::uint64_t seed = 1;
};

struct UpperResult {
  double value = 0.0;
  AnalyticFamily family;
  BoundaryEvaluation evaluation;
  int iterations = 0;
  // Best certified value after each degree step, in increasing degree.
  std::vector<std::pair<int, double>> ladder;
};

// Solve in frame coordinates: y is x expressed in the problem's frame.
UpperResult solve_frame(const Matrix& y, const FrameProblem& problem, const SolverParams& params,
                        const std::vector<std::pair<RealVector, RealVector>>& extra_exponents = {});

UpperResult interp_norm_upper(const Matrix& x, const Couple& c, const SolverParams& params = {});

struct LowerResult {
  double value = 0.0;
  Matrix witness;        // the dual element y
  double pairing = 0.0;  // |tr(y* x)|
  double dual_upper = 0.0;
};

LowerResult interp_norm_lower_dual(const Matrix& x, const Couple& c, const SolverParams& params = {});

struct ProofFamilyResult {
  AnalyticFamily plus, minus;
  double bound_plus = 0.0;
  double bound_minus = 0.0;
  // Boundary estimate through the triangular comparison constants.
  double comparison_bound = 0.0;
  double bound = 0.0;  // bound_plus + bound_minus
};

// Builds G₊(z) = F₊(z) d0^{z-1} d1^{-z} and G₋(z) = d0^{z-1} d1^{-z} F₋(z)
// where F± interpolate T₊(x)d_θ and d_θT₋(x) between unweighted Schatten
// classes, and evaluates both exactly on the boundary.
ProofFamilyResult proof_family(const Matrix& x, const Couple& c, const SolverParams& params = {});

// ‖x‖_{L_p(d_θ)}.
double exact_weighted_norm(const Matrix& x, const Couple& c);

SchurKernel schur_correction_kernel(const Couple& c);

struct SandwichBudget {
  double factor = 8.0;
  double tol = 1e-9;
  // factor · max(p, 2) · max(p, p')
  double evaluate(const PNorm& p) const;
};

struct SandwichReport {
  double p = 0.0;
  double exact = 0.0;
  double upper = 0.0;
  double solver_upper = 0.0;
  double proof_upper = 0.0;
  double lower = 0.0;
  double upper_ratio = 0.0;
  double lower_ratio = 0.0;
  double budget = 0.0;
  bool passed = false;
  std::string diagnostics;
};

SandwichReport sandwich_verify(const Matrix& x, const Couple& c, const SandwichBudget& budget = {},
                               const SolverParams& params = {}, bool use_proof_family = true);

struct TriangularInterpResult {
  double norm = 0.0;  // ‖x‖_p
  double lower_ratio = 0.0;
  double upper_ratio = 0.0;
};

// x must be upper triangular; coefficients of the families stay upper triangular.
TriangularInterpResult triangular_interp_check(const Matrix& x, const PNorm& p0, const PNorm& p1,
                                               double theta, const SolverParams& params = {});

}  // namespace wnlp
