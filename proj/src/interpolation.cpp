#include "wnlp/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wnlp/error.hpp"
#include "wnlp/rng.hpp"
#include "wnlp/weighted.hpp"

namespace wnlp {

namespace {

constexpr double kPi = std::numbers::pi;

using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

double norm_q(const Matrix& m, const PNorm& q) {
  if (!q.is_infinite() && q.value() == 2.0) return m.norm();
  return lp_norm(Eigen::JacobiSVD<Matrix>(m).singularValues(), q);
}

// Cheaper norm for the optimization loop only: singular values from the
// eigenvalues of m*m. Certified evaluations use norm_q.
double fast_norm_q(const Matrix& m, const PNorm& q) {
  if (!q.is_infinite() && q.value() == 2.0) return m.norm();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
  const RealVector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return lp_norm(s, q);
}

// Boundary weights after absorbing the exponents: E0 on Re z = 0, E1 on Re z = 1.
struct LineWeights {
  RealMatrix e0, e1;
};

LineWeights line_weights(const FrameProblem& pr, const RealVector& alpha, const RealVector& beta) {
  const int n = pr.dim();
  LineWeights lw{pr.w0, pr.w1};
  const double t = pr.theta;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double s = alpha(i) + beta(j);
      lw.e0(i, j) *= std::exp(t * s);
      lw.e1(i, j) *= std::exp((t - 1.0) * s);
    }
  return lw;
}

struct Sample {
  cplx w;
  int line;  // 0 or 1
};

// Angles on the unit circle: Re z = 1 ↔ [0, 2πθ], Re z = 0 ↔ [2πθ, 2π].
std::vector<Sample> boundary_samples(double theta, int grid, double& h0, double& h1) {
  std::vector<Sample> out;
  const double a1 = 2.0 * kPi * theta;
  const double a0 = 2.0 * kPi * (1.0 - theta);
  h1 = a1 / (grid - 1);
  h0 = a0 / (grid - 1);
  for (int k = 0; k < grid; ++k) out.push_back({std::polar(1.0, k * h1), 1});
  for (int k = 0; k < grid; ++k) out.push_back({std::polar(1.0, a1 + k * h0), 0});
  return out;
}

Matrix polynomial(const std::vector<Matrix>& b, cplx w) {
  Matrix acc = b.back();
  for (int k = static_cast<int>(b.size()) - 2; k >= 0; --k) acc = (acc * w + b[k]).eval();
  return acc;
}

BoundaryEvaluation evaluate(const std::vector<Matrix>& b, const LineWeights& lw, const FrameProblem& pr,
                            int grid) {
  double h0 = 0.0, h1 = 0.0;
  const std::vector<Sample> samples = boundary_samples(pr.theta, grid, h0, h1);
  BoundaryEvaluation ev;
  for (const Sample& s : samples) {
    const Matrix p = polynomial(b, s.w);
    if (s.line == 0) {
      ev.line0 = std::max(ev.line0, norm_q(lw.e0.cast<cplx>().cwiseProduct(p), pr.q0));
    } else {
      ev.line1 = std::max(ev.line1, norm_q(lw.e1.cast<cplx>().cwiseProduct(p), pr.q1));
    }
  }
  double lip0 = 0.0, lip1 = 0.0;
  for (std::size_t k = 1; k < b.size(); ++k) {
    lip0 += k * norm_q(lw.e0.cast<cplx>().cwiseProduct(b[k]), pr.q0);
    lip1 += k * norm_q(lw.e1.cast<cplx>().cwiseProduct(b[k]), pr.q1);
  }
  ev.inflation0 = 0.5 * h0 * lip0;
  ev.inflation1 = 0.5 * h1 * lip1;
  ev.sampled_max = std::max(ev.line0, ev.line1);
  ev.value = std::max(ev.line0 + ev.inflation0, ev.line1 + ev.inflation1);
  return ev;
}

bool constant_weights(const FrameProblem& pr) {
  return (pr.w0.array() == pr.w0(0, 0)).all() && (pr.w1.array() == pr.w1(0, 0)).all();
}

void apply_mask(Matrix& m, const BoolArray& mask) {
  if (mask.size() == 0) return;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!mask(i, j)) m(i, j) = 0.0;
}

// Exponent heuristics. For diagonal y they reproduce the exact extremal
// family F(z) = u |y|^{p((1-z)/p0 + z/p1)} scaled by the weight ratio.
std::pair<RealVector, RealVector> additive_fit(const RealMatrix& target) {
  const double grand = target.mean();
  RealVector a = target.rowwise().mean().array() - grand / 2.0;
  RealVector b = target.colwise().mean().transpose().array() - grand / 2.0;
  return {a, b};
}

// Least squares a_i + b_j ≈ target_ij with entry weights, by coordinate sweeps
// from the unweighted fit.
std::pair<RealVector, RealVector> additive_fit(const RealMatrix& target, const RealMatrix& weight) {
  auto [a, b] = additive_fit(target);
  const Eigen::Index n = target.rows();
  for (int sweep = 0; sweep < 60; ++sweep) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = weight.row(i).sum();
      if (w > 0.0) a(i) = (weight.row(i).array() * (target.row(i).array() - b.transpose().array())).sum() / w;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = weight.col(j).sum();
      if (w > 0.0) b(j) = (weight.col(j).array() * (target.col(j).array() - a.array())).sum() / w;
    }
  }
  return {a, b};
}

std::pair<RealVector, RealVector> structure_exponents(const Matrix& y, const FrameProblem& pr) {
  const int n = pr.dim();
  const PNorm p = PNorm::from_reciprocal((1.0 - pr.theta) * pr.q0.reciprocal() + pr.theta * pr.q1.reciprocal());
  const double c = p.is_infinite() ? 0.0 : p.value() * (pr.q0.reciprocal() - pr.q1.reciprocal());
  const RealMatrix ratio = (pr.w1.array() / pr.w0.array()).log();
  RealMatrix wt(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) wt(i, j) = std::pow(pr.w0(i, j), 1.0 - pr.theta) * std::pow(pr.w1(i, j), pr.theta);
  const Matrix yw = wt.cast<cplx>().cwiseProduct(y);
  RealMatrix mass = yw.cwiseAbs2();
  const double peak = mass.maxCoeff();
  mass = peak > 0.0 ? RealMatrix((mass.array() / peak + 1e-6).matrix()) : RealMatrix::Ones(n, n);
  auto [a, b] = additive_fit(ratio, mass);
  if (c != 0.0) {
    // Row and column sizes of the weighted element, normalized in S_p.
    const double total = schatten_norm(yw, p);
    if (total > 0.0) {
      for (int i = 0; i < n; ++i) {
        const double r = std::max(yw.row(i).norm() / total, 1e-8);
        const double s = std::max(yw.col(i).norm() / total, 1e-8);
        a(i) += 0.5 * c * std::log(r);
        b(i) += 0.5 * c * std::log(s);
      }
    }
  }
  return {a, b};
}

struct StartSpec {
  RealVector alpha, beta;
  bool random = false;
};

// One start: subgradient descent along a degree ladder with warm starts.
void run_start(const Matrix& y, const FrameProblem& pr, const SolverParams& params, const StartSpec& start,
               int start_index, UpperResult& best, bool& have_best) {
  const int n = pr.dim();
  const LineWeights lw = line_weights(pr, start.alpha, start.beta);
  std::vector<int> ladder{0};
  for (int d = 1; d < params.degree; d *= 2) ladder.push_back(d);
  if (params.degree > 0) ladder.push_back(params.degree);

  std::vector<Matrix> coeff{y};
  double h0 = 0.0, h1 = 0.0;
  const std::vector<Sample> samples = boundary_samples(pr.theta, params.optimization_grid, h0, h1);
  const double emax0 = lw.e0.maxCoeff(), emax1 = lw.e1.maxCoeff();

  auto record = [&](const std::vector<Matrix>& b, int degree) {
    const BoundaryEvaluation ev = evaluate(b, lw, pr, params.certification_grid);
    if (!have_best || ev.value < best.value) {
      best.value = ev.value;
      best.evaluation = ev;
      best.family = AnalyticFamily(pr.theta, b, start.alpha, start.beta, pr.frame_left, pr.frame_right);
      have_best = true;
    }
    bool found = false;
    for (auto& entry : best.ladder)
      if (entry.first == degree) {
        entry.second = std::min(entry.second, best.value);
        found = true;
      }
    if (!found) best.ladder.emplace_back(degree, best.value);
  };

  record(coeff, 0);
  for (std::size_t step = 1; step < ladder.size(); ++step) {
    const int degree = ladder[step];
    const int previous = static_cast<int>(coeff.size()) - 1;
    coeff.resize(degree + 1, Matrix::Zero(n, n));
    if (start.random) {
      for (int k = previous + 1; k <= degree; ++k) {
        CounterRng rng(params.seed, 0x5300 + 97 * start_index + k);
        coeff[k] = 0.05 * (y.norm() / std::max(1.0, std::sqrt(double(n)))) * gaussian_matrix(n, rng);
        apply_mask(coeff[k], pr.mask);
      }
    }
    std::vector<Matrix> current = coeff, best_local = coeff;
    double best_obj = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (int it = 0; it < params.iterations; ++it) {
      // Locate the active boundary sample.
      double obj = -1.0;
      std::size_t arg = 0;
      Matrix arg_val;
      for (std::size_t s = 0; s < samples.size(); ++s) {
        const Matrix p = polynomial(current, samples[s].w);
        const Matrix v = (samples[s].line == 0 ? lw.e0 : lw.e1).cast<cplx>().cwiseProduct(p);
        const double val = fast_norm_q(v, samples[s].line == 0 ? pr.q0 : pr.q1);
        if (val > obj) {
          obj = val;
          arg = s;
          arg_val = v;
        }
      }
      if (it == 0) scale = obj;
      if (obj < best_obj) {
        best_obj = obj;
        best_local = current;
      }
      if (obj == 0.0) break;
      const Sample& s = samples[arg];
      const RealMatrix& e = s.line == 0 ? lw.e0 : lw.e1;
      const Matrix g = e.cast<cplx>().cwiseProduct(norming_functional(arg_val, s.line == 0 ? pr.q0 : pr.q1));
      const double emax = s.line == 0 ? emax0 : emax1;
      const double eta = params.step * scale / (std::sqrt(it + 1.0) * emax * std::max(g.norm(), 1e-300));
      cplx wk = 1.0;
      for (int k = 1; k <= degree; ++k) {
        wk *= std::conj(s.w);
        Matrix upd = g * wk;
        apply_mask(upd, pr.mask);
        current[k] -= eta * upd;
      }
    }
    coeff = best_local;
    record(coeff, degree);
    best.iterations += params.iterations;
  }
}

}  // namespace

// ---------------------------------------------------------------- Couple

Couple::Couple(Density base, ScalarFunction f0, ScalarFunction f1, PNorm p0, PNorm p1, double theta)
    : base_(std::move(base)),
      d0_(apply_calculus(base_, f0)),
      d1_(apply_calculus(base_, f1)),
      p0_(p0),
      p1_(p1),
      theta_(theta) {
  require(std::isfinite(theta) && theta > 0.0 && theta < 1.0, "interpolation parameter must lie in (0, 1)");
  const double r = (1.0 - theta) * p0.reciprocal() + theta * p1.reciprocal();
  require(r > 0.0 && r < 1.0, "interpolated exponent p must satisfy 1 < p < inf");
}

PNorm Couple::p() const {
  return PNorm::from_reciprocal((1.0 - theta_) * p0_.reciprocal() + theta_ * p1_.reciprocal());
}

Density Couple::d_at(double t) const {
  require(t >= 0.0 && t <= 1.0, "d_at needs t in [0, 1]");
  const RealVector v = (d0_.eigenvalues().array().pow(1.0 - t) * d1_.eigenvalues().array().pow(t)).matrix();
  return base_.with_spectrum(v);
}

// ---------------------------------------------------------- FrameProblem

FrameProblem FrameProblem::primal(const Couple& c) {
  const int n = c.base().dim();
  FrameProblem pr;
  pr.w0.resize(n, n);
  pr.w1.resize(n, n);
  const RealVector& a = c.d0().eigenvalues();
  const RealVector& b = c.d1().eigenvalues();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      pr.w0(i, j) = a(i) + a(j);
      pr.w1(i, j) = b(i) + b(j);
    }
  pr.q0 = c.p0();
  pr.q1 = c.p1();
  pr.theta = c.theta();
  pr.frame_left = c.base().eigenbasis();
  pr.frame_right = c.base().eigenbasis();
  return pr;
}

FrameProblem FrameProblem::dual(const Couple& c) {
  FrameProblem pr = primal(c);
  pr.w0 = pr.w0.cwiseInverse();
  pr.w1 = pr.w1.cwiseInverse();
  pr.q0 = c.p0().conjugate();
  pr.q1 = c.p1().conjugate();
  return pr;
}

FrameProblem FrameProblem::unweighted(int n, const PNorm& q0, const PNorm& q1, double theta) {
  require(n >= 1, "dimension must be positive");
  require(theta > 0.0 && theta < 1.0, "interpolation parameter must lie in (0, 1)");
  FrameProblem pr;
  pr.w0 = RealMatrix::Ones(n, n);
  pr.w1 = RealMatrix::Ones(n, n);
  pr.q0 = q0;
  pr.q1 = q1;
  pr.theta = theta;
  pr.frame_left = Matrix::Identity(n, n);
  pr.frame_right = Matrix::Identity(n, n);
  return pr;
}

// -------------------------------------------------------- AnalyticFamily

AnalyticFamily::AnalyticFamily(double theta, std::vector<Matrix> coefficients, RealVector left, RealVector right,
                               Matrix frame_left, Matrix frame_right)
    : theta_(theta),
      coefficients_(std::move(coefficients)),
      left_(std::move(left)),
      right_(std::move(right)),
      frame_left_(std::move(frame_left)),
      frame_right_(std::move(frame_right)) {
  require(!coefficients_.empty(), "analytic family needs a constant term");
  require(theta > 0.0 && theta < 1.0, "interpolation parameter must lie in (0, 1)");
}

cplx AnalyticFamily::disk_variable(double theta, cplx z) {
  const cplx zeta = std::exp(cplx(0.0, kPi) * z);
  const cplx a = std::polar(1.0, kPi * theta);
  return (zeta - a) / (zeta - std::conj(a));
}

cplx AnalyticFamily::strip_point(double theta, double phi) {
  const cplx w = std::polar(1.0, phi);
  const cplx a = std::polar(1.0, kPi * theta);
  const cplx zeta = (a - w * std::conj(a)) / (1.0 - w);
  double arg = std::arg(zeta);
  if (arg < -kPi / 2.0) arg += 2.0 * kPi;
  arg = std::clamp(arg, 0.0, kPi);
  return cplx(arg / kPi, -std::log(std::abs(zeta)) / kPi);
}

Matrix AnalyticFamily::at(cplx z) const {
  const cplx w = disk_variable(theta_, z);
  Matrix p = polynomial(coefficients_, w);
  const cplx shift = theta_ - z;
  for (Eigen::Index i = 0; i < p.rows(); ++i) p.row(i) *= std::exp(shift * left_(i));
  for (Eigen::Index j = 0; j < p.cols(); ++j) p.col(j) *= std::exp(shift * right_(j));
  return frame_left_ * p * frame_right_.adjoint();
}

Matrix AnalyticFamily::at_circle(double phi) const { return at(strip_point(theta_, phi)); }

// ------------------------------------------------------------- objective

BoundaryEvaluation boundary_objective(const AnalyticFamily& f, const FrameProblem& problem, int grid) {
  require(grid >= 2, "boundary grid needs at least two points per line");
  require(f.theta() == problem.theta, "family and couple use different parameters");
  const int n = problem.dim();
  if (f.coefficients().front().rows() != n) fail(ErrorCode::DimensionMismatch, "family and couple differ in size");
  if (!constant_weights(problem)) {
    const double dl = (f.frame_left() - problem.frame_left).cwiseAbs().maxCoeff();
    const double dr = (f.frame_right() - problem.frame_right).cwiseAbs().maxCoeff();
    require(dl < 1e-12 && dr < 1e-12, "family frame must be the eigenbasis of the couple");
  }
  return evaluate(f.coefficients(), line_weights(problem, f.left_exponents(), f.right_exponents()), problem, grid);
}

BoundaryEvaluation boundary_objective(const AnalyticFamily& f, const Couple& c, int grid) {
  return boundary_objective(f, FrameProblem::primal(c), grid);
}

// ---------------------------------------------------------------- solver

UpperResult solve_frame(const Matrix& y, const FrameProblem& problem, const SolverParams& params,
                        const std::vector<std::pair<RealVector, RealVector>>& extra_exponents) {
  const int n = problem.dim();
  if (y.rows() != n || y.cols() != n) fail(ErrorCode::DimensionMismatch, "element and couple differ in size");
  require(params.degree >= 0 && params.iterations >= 0, "solver degree and iterations must be nonnegative");
  require(params.optimization_grid >= 2 && params.certification_grid >= 2, "solver grids need two points");
  if (problem.mask.size() > 0) {
    Matrix masked = y;
    apply_mask(masked, problem.mask);
    require((masked - y).cwiseAbs().maxCoeff() == 0.0, "element lies outside the coefficient subspace");
  }

  std::vector<StartSpec> starts;
  auto [sa, sb] = structure_exponents(y, problem);
  starts.push_back({sa, sb, false});
  // Exponents of the explicit construction: right weight ln(w1/w0) on the diagonal.
  RealVector proof_beta(n);
  for (int i = 0; i < n; ++i) proof_beta(i) = std::log(problem.w1(i, i) / problem.w0(i, i));
  starts.push_back({RealVector::Zero(n), proof_beta, false});
  auto [la, lb] = additive_fit((problem.w1.array() / problem.w0.array()).log().matrix());
  starts.push_back({la, lb, true});
  for (const auto& e : extra_exponents) starts.push_back({e.first, e.second, false});

  UpperResult best;
  bool have_best = false;
  const int count = std::min<int>(static_cast<int>(starts.size()), std::max(1, params.starts) +
                                                                        static_cast<int>(extra_exponents.size()));
  for (int s = 0; s < count; ++s) run_start(y, problem, params, starts[s], s, best, have_best);
  return best;
}

UpperResult interp_norm_upper(const Matrix& x, const Couple& c, const SolverParams& params) {
  require_finite(x, "interp_norm_upper");
  FrameProblem pr = FrameProblem::primal(c);
  if (x.rows() != pr.dim() || x.cols() != pr.dim()) fail(ErrorCode::DimensionMismatch, "x and couple differ in size");
  if (constant_weights(pr)) {
    // Any frame works; the singular frame of x makes it diagonal.
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    pr.frame_left = svd.matrixU();
    pr.frame_right = svd.matrixV();
  }
  return solve_frame(pr.to_frame(x), pr, params);
}

LowerResult interp_norm_lower_dual(const Matrix& x, const Couple& c, const SolverParams& params) {
  require_finite(x, "interp_norm_lower_dual");
  const FrameProblem primal = FrameProblem::primal(c);
  FrameProblem dual = FrameProblem::dual(c);
  const int n = primal.dim();
  if (x.rows() != n || x.cols() != n) fail(ErrorCode::DimensionMismatch, "x and couple differ in size");
  const Matrix xt = primal.to_frame(x);
  const PNorm p = c.p();
  const double t = c.theta();

  // Weights transporting the S_p polar witness back to the dual side.
  RealMatrix w_theta(n, n), w_geo(n, n);
  const RealVector g = c.d_theta().eigenvalues();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      w_theta(i, j) = g(i) + g(j);
      w_geo(i, j) = std::pow(primal.w0(i, j), 1.0 - t) * std::pow(primal.w1(i, j), t);
    }
  LowerResult out;
  for (const RealMatrix* w : {&w_theta, &w_geo}) {
    const Matrix v = norming_functional(w->cast<cplx>().cwiseProduct(xt), p);
    const Matrix y = w->cast<cplx>().cwiseProduct(v);
    const double pairing = std::abs(trace_pairing(xt, y));
    if (pairing == 0.0) continue;
    FrameProblem dp = dual;
    Matrix yf = y;
    if (constant_weights(dp)) {
      Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
      dp.frame_left = primal.frame_left * svd.matrixU();
      dp.frame_right = primal.frame_right * svd.matrixV();
      yf = svd.matrixU().adjoint() * y * svd.matrixV();
    }
    const UpperResult up = solve_frame(yf, dp, params);
    if (up.value <= 0.0) continue;
    const double value = pairing / up.value;
    if (value > out.value) {
      out.value = value;
      out.witness = primal.from_frame(y);
      out.pairing = pairing;
      out.dual_upper = up.value;
    }
  }
  return out;
}

double exact_weighted_norm(const Matrix& x, const Couple& c) {
  return weighted_norm(x, c.d_theta(), c.p(), WeightedNormKind::TwoSided);
}

ProofFamilyResult proof_family(const Matrix& x, const Couple& c, const SolverParams& params) {
  require_finite(x, "proof_family");
  const FrameProblem primal = FrameProblem::primal(c);
  const int n = primal.dim();
  if (x.rows() != n || x.cols() != n) fail(ErrorCode::DimensionMismatch, "x and couple differ in size");
  const Matrix xt = primal.to_frame(x);
  const RealVector g = c.d_theta().eigenvalues();
  const RealVector f0 = c.d0().eigenvalues(), f1 = c.d1().eigenvalues();
  RealVector beta(n);
  for (int i = 0; i < n; ++i) beta(i) = std::log(f1(i) / f0(i));

  ProofFamilyResult out;
  for (int part = 0; part < 2; ++part) {
    const bool plus = part == 0;
    FrameProblem un = FrameProblem::unweighted(n, c.p0(), c.p1(), c.theta());
    un.frame_left = primal.frame_left;
    un.frame_right = primal.frame_right;
    un.mask.resize(n, n);
    Matrix y = xt;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        un.mask(i, j) = plus ? (j >= i) : (j < i);
        if (!un.mask(i, j)) y(i, j) = 0.0;
      }
    // Weighted element: T₊(x) d_θ on the right, d_θ T₋(x) on the left.
    if (plus) {
      y = y * g.cast<cplx>().asDiagonal();
    } else {
      y = g.cast<cplx>().asDiagonal() * y;
    }
    AnalyticFamily fam;
    double unweighted_bound = 0.0;
    if (y.cwiseAbs().maxCoeff() == 0.0) {
      fam = AnalyticFamily(c.theta(), {Matrix::Zero(n, n)}, RealVector::Zero(n), RealVector::Zero(n),
                           primal.frame_left, primal.frame_right);
    } else {
      const UpperResult r = solve_frame(y, un, params);
      unweighted_bound = r.value;
      // Multiply by d0^{z-1} d1^{-z} = d_θ^{-1} e^{(θ-z) ln(d1/d0)} on the matching side.
      std::vector<Matrix> coeff = r.family.coefficients();
      for (Matrix& m : coeff) m = plus ? Matrix(m * g.cwiseInverse().cast<cplx>().asDiagonal())
                                       : Matrix(g.cwiseInverse().cast<cplx>().asDiagonal() * m);
      RealVector left = r.family.left_exponents(), right = r.family.right_exponents();
      if (plus) {
        right += beta;
      } else {
        left += beta;
      }
      fam = AnalyticFamily(c.theta(), coeff, left, right, primal.frame_left, primal.frame_right);
    }
    const double bound = boundary_objective(fam, primal, params.certification_grid).value;
    if (plus) {
      out.plus = fam;
      out.bound_plus = bound;
    } else {
      out.minus = fam;
      out.bound_minus = bound;
    }
    out.comparison_bound += 2.0 * unweighted_bound;
  }
  out.bound = out.bound_plus + out.bound_minus;
  return out;
}

SchurKernel schur_correction_kernel(const Couple& c) {
  KernelFamily f;
  f.tag = KernelTag::InterpCorrection;
  f.theta = c.theta();
  const RealVector& a = c.d0().eigenvalues();
  const RealVector& b = c.d1().eigenvalues();
  f.lambda.assign(a.data(), a.data() + a.size());
  f.mu.assign(b.data(), b.data() + b.size());
  return build_kernel(f);
}

double SandwichBudget::evaluate(const PNorm& p) const {
  return factor * std::max(p.value(), 2.0) * max_conjugate(p);
}

SandwichReport sandwich_verify(const Matrix& x, const Couple& c, const SandwichBudget& budget,
                               const SolverParams& params, bool use_proof_family) {
  SandwichReport r;
  const PNorm p = c.p();
  r.p = p.value();
  r.exact = exact_weighted_norm(x, c);
  r.solver_upper = interp_norm_upper(x, c, params).value;
  r.upper = r.solver_upper;
  if (use_proof_family) {
    r.proof_upper = proof_family(x, c, params).bound;
    r.upper = std::min(r.upper, r.proof_upper);
  }
  const LowerResult lo = interp_norm_lower_dual(x, c, params);
  r.lower = lo.value;
  r.budget = budget.evaluate(p);
  r.upper_ratio = r.exact > 0.0 ? r.upper / r.exact : 1.0;
  r.lower_ratio = r.lower > 0.0 ? r.exact / r.lower : (r.exact > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  std::ostringstream diag;
  bool ok = true;
  if (r.lower > r.upper * (1.0 + budget.tol) + budget.tol) {
    ok = false;
    diag << "lower bound exceeds upper bound; ";
  }
  if (!(r.upper_ratio <= r.budget)) {
    ok = false;
    diag << "upper ratio " << r.upper_ratio << " exceeds budget " << r.budget << "; ";
  }
  if (!(r.lower_ratio <= r.budget)) {
    ok = false;
    diag << "lower ratio " << r.lower_ratio << " exceeds budget " << r.budget << "; ";
  }
  diag << "p=" << r.p << " p0=" << c.p0().str() << " p1=" << c.p1().str() << " theta=" << c.theta()
       << " exact=" << r.exact << " solver=" << r.solver_upper << " proof=" << r.proof_upper << " lower=" << r.lower
       << " dual_upper=" << lo.dual_upper;
  r.passed = ok;
  r.diagnostics = diag.str();
  return r;
}

TriangularInterpResult triangular_interp_check(const Matrix& x, const PNorm& p0, const PNorm& p1, double theta,
                                               const SolverParams& params) {
  require_square(x, "triangular_interp_check");
  require_finite(x, "triangular_interp_check");
  const int n = static_cast<int>(x.rows());
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i)
      require(x(i, j) == cplx(0.0), "triangular_interp_check needs an upper triangular matrix");
  FrameProblem up = FrameProblem::unweighted(n, p0, p1, theta);
  up.mask.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) up.mask(i, j) = j >= i;
  const PNorm p = PNorm::from_reciprocal((1.0 - theta) * p0.reciprocal() + theta * p1.reciprocal());
  TriangularInterpResult r;
  r.norm = schatten_norm(x, p);
  if (r.norm == 0.0) {
    r.lower_ratio = r.upper_ratio = 1.0;
    return r;
  }
  r.upper_ratio = solve_frame(x, up, params).value / r.norm;
  // Dual side: the S_p polar witness measured in the full conjugate couple,
  // which is diagonal in its singular frame.
  const Matrix y = norming_functional(x, p);
  Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  FrameProblem dp = FrameProblem::unweighted(n, p0.conjugate(), p1.conjugate(), theta);
  dp.frame_left = svd.matrixU();
  dp.frame_right = svd.matrixV();
  const double dual_upper = solve_frame(dp.to_frame(y), dp, params).value;
  r.lower_ratio = std::abs(trace_pairing(x, y)) / dual_upper / r.norm;
  return r;
}

}  // namespace wnlp
