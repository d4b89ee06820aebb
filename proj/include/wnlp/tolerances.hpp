#pragma once

namespace wnlp {

// All numerical thresholds used by the library live here.
struct Tolerances {
  // Relative Hermitian defect accepted by eigh.
  double hermitian = 1e-10;
  // Relative positive-definiteness floor for densities.
  double positivity = 1e-14;
  // Densities whose condition number exceeds this are flagged.
  double condition_flag = 1e6;
  // Quadrature accuracy is only promised below this condition number.
  double condition_contract = 1e3;
  // Slack allowed when checking monotonicity of a calculus on a spectrum.
  double monotone_slack = 0.0;
  // Singular values below rel_rank * s_max are treated as zero.
  double rel_rank = 1e-14;
  // Default bracket width for cb-norm certificates.
  double cb_gap = 1e-6;
  // Feasibility residual (Frobenius) for alternating projections.
  double ap_residual = 1e-8;
  int ap_iteration_cap = 50000;
  // Largest kernel handed to the cb solver.
  int cb_max_dim = 32;
  // Largest block matrix in transference checks.
  int transference_max_dim = 128;
  // Absolute per-panel target for adaptive L1 quadrature.
  double l1_panel = 1e-9;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace wnlp
