#include "wnlp/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wnlp/error.hpp"

namespace wnlp {

void require_square(const Matrix& x, const char* what) {
  if (x.rows() != x.cols() || x.rows() == 0)
    fail(ErrorCode::InvalidArgument, std::string(what) + ": expected a nonempty square matrix");
}

void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::DimensionMismatch,
         std::string(what) + ": dimension mismatch (" + std::to_string(a.rows()) + " vs " +
             std::to_string(b.rows()) + ")");
}

bool all_finite(const Matrix& x) {
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const cplx v = x.data()[k];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

void require_finite(const Matrix& x, const char* what) {
  if (!all_finite(x)) fail(ErrorCode::InvalidArgument, std::string(what) + ": non-finite entry");
}

EigenDecomposition eigh(const Matrix& h, const Tolerances& tol) {
  require_square(h, "eigh");
  require_finite(h, "eigh");
  const double scale = h.cwiseAbs().maxCoeff();
  const double defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (defect > tol.hermitian * std::max(scale, 1e-300))
    fail(ErrorCode::NotHermitian, "eigh: input is not Hermitian (defect " + std::to_string(defect) +
                                      ", scale " + std::to_string(scale) + ")");
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) fail(ErrorCode::NonConvergence, "eigh: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

RealVector singular_values(const Matrix& x) {
  if (x.size() == 0) return RealVector();
  if (x.rows() <= 16) return Eigen::JacobiSVD<Matrix>(x).singularValues();
  return Eigen::BDCSVD<Matrix>(x).singularValues();
}

double lp_norm(const RealVector& s, const PNorm& p) {
  if (s.size() == 0) return 0.0;
  const double top = s.cwiseAbs().maxCoeff();
  if (p.is_infinite() || top == 0.0) return top;
  const double q = p.value();
  if (q == 1.0) return s.cwiseAbs().sum();
  if (q == 2.0) return s.norm();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) acc += std::pow(std::abs(s(k)) / top, q);
  return top * std::pow(acc, 1.0 / q);
}

double schatten_norm(const Matrix& x, const PNorm& p) {
  if (!p.is_infinite() && p.value() == 2.0) return x.norm();
  return lp_norm(singular_values(x), p);
}

cplx trace_pairing(const Matrix& x, const Matrix& y) {
  require_same_dim(x, y, "trace_pairing");
  // tr(y* x) = Σ conj(y_ij) x_ij
  return (y.conjugate().cwiseProduct(x)).sum();
}

Matrix norming_functional(const Matrix& x, const PNorm& p) {
  const Eigen::Index n = x.rows();
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  Eigen::JacobiSVD<Matrix> svd;
  Eigen::BDCSVD<Matrix> bdc;
  Matrix u, v;
  RealVector s;
  if (n <= 16) {
    svd.compute(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    v = svd.matrixV();
    s = svd.singularValues();
  } else {
    bdc.compute(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = bdc.matrixU();
    v = bdc.matrixV();
    s = bdc.singularValues();
  }
  if (s.size() == 0 || s(0) == 0.0) return out;
  if (p.is_infinite()) {
    // Dual exponent 1: rank-one witness on the top singular pair.
    return u.col(0) * v.col(0).adjoint();
  }
  const double q = p.value();
  if (q == 1.0) {
    const double cut = s(0) * 1e-14;
    for (Eigen::Index k = 0; k < s.size(); ++k)
      if (s(k) > cut) out += u.col(k) * v.col(k).adjoint();
    return out;
  }
  // y = Σ (s_k/‖s‖_p)^{p-1} u_k v_k*
  const double norm = lp_norm(s, p);
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) == 0.0) continue;
    out += std::pow(s(k) / norm, q - 1.0) * (u.col(k) * v.col(k).adjoint());
  }
  return out;
}

Matrix matrix_unit(int n, int i, int j) {
  Matrix e = Matrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

}  // namespace wnlp
