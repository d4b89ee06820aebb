#pragma once

#include <complex>

#include <Eigen/Dense>

#include "wnlp/pnorm.hpp"
#include "wnlp/tolerances.hpp"

namespace wnlp {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct EigenDecomposition {
  RealVector values;  // ascending
  Matrix vectors;     // columns are eigenvectors
};

// Hermitian eigendecomposition. Rejects inputs whose anti-Hermitian part
// exceeds tol.hermitian relative to the largest entry.
EigenDecomposition eigh(const Matrix& h, const Tolerances& tol = kDefaultTolerances);

RealVector singular_values(const Matrix& x);

// ℓ_p norm of a nonnegative vector, computed with max-scaling.
double lp_norm(const RealVector& s, const PNorm& p);
double schatten_norm(const Matrix& x, const PNorm& p);

// tr(y* x).
cplx trace_pairing(const Matrix& x, const Matrix& y);

// Polar witness y with ‖y‖_{p'} ≤ 1 and tr(y* x) = ‖x‖_p. Also a
// subgradient of ‖·‖_p at x for the real pairing Re tr(y* ·).
Matrix norming_functional(const Matrix& x, const PNorm& p);

bool all_finite(const Matrix& x);
void require_finite(const Matrix& x, const char* what);
void require_square(const Matrix& x, const char* what);
void require_same_dim(const Matrix& a, const Matrix& b, const char* what);

// Matrix unit e_ij (zero-based indices).
Matrix matrix_unit(int n, int i, int j);

}  // namespace wnlp
