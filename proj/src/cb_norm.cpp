// cb norm of a Schur multiplier.
//
// Lower end: for unit a, b ≥ 0, ‖D_a Φ D_b‖_1 ≤ ‖Φ‖_cb. We maximize this over
// a = √u, b = √v (u, v in the simplex, log coordinates) with a log barrier of
// weight ε, which keeps the scalings strictly positive; at a stationary
// point the factorization below is within 2nε of the dual value.
//
// Upper end: with M = D_a Φ D_b = U S V*, the rows of Φ D_b V S^{-1/2} and
// Φ* D_a U S^{-1/2} factor Φ exactly (D_b M⁺ D_a is a generalized inverse of
// Φ). Any rounding residual E is paid for by adding max_j ‖E e_j‖.
#include <algorithm>
#include <cmath>
#include <limits>

#include "wnlp/error.hpp"
#include "wnlp/schur.hpp"

namespace wnlp {

namespace {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
struct DualEval {
  double g = 0.0;
  RealVector left_diag;   // diag |M*|
  RealVector right_diag;  // diag |M|
};

template <class Scalar>
DualEval<Scalar> dual_eval(const Mat<Scalar>& phi, const RealVector& a, const RealVector& b) {
  const Mat<Scalar> m = a.cast<Scalar>().asDiagonal() * phi * b.cast<Scalar>().asDiagonal();
  Eigen::JacobiSVD<Mat<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  DualEval<Scalar> e;
  e.g = s.sum();
  const Eigen::Index n = phi.rows();
  e.left_diag = RealVector::Zero(n);
  e.right_diag = RealVector::Zero(phi.cols());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    e.left_diag += s(k) * svd.matrixU().col(k).cwiseAbs2();
    e.right_diag += s(k) * svd.matrixV().col(k).cwiseAbs2();
  }
  return e;
}

template <class Scalar>
FactorizationBound factorize(const Mat<Scalar>& phi, const RealVector& a, const RealVector& b,
                             const Tolerances& tol) {
  const Eigen::Index n = phi.rows();
  const Mat<Scalar> da = a.cast<Scalar>().asDiagonal();
  const Mat<Scalar> db = b.cast<Scalar>().asDiagonal();
  const Mat<Scalar> m = da * phi * db;
  Eigen::JacobiSVD<Mat<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  FactorizationBound out;
  Eigen::Index r = 0;
  if (s.size() > 0 && s(0) > 0.0)
    while (r < s.size() && s(r) > s(0) * tol.rel_rank) ++r;
  Mat<Scalar> x = Mat<Scalar>::Zero(n, std::max<Eigen::Index>(r, 1));
  Mat<Scalar> y = Mat<Scalar>::Zero(phi.cols(), std::max<Eigen::Index>(r, 1));
  if (r > 0) {
    RealVector inv_sqrt = s.head(r).cwiseSqrt().cwiseInverse();
    x = phi * db * svd.matrixV().leftCols(r) * inv_sqrt.cast<Scalar>().asDiagonal();
    y = phi.adjoint() * da * svd.matrixU().leftCols(r) * inv_sqrt.cast<Scalar>().asDiagonal();
  }
  const Mat<Scalar> resid = phi - x * y.adjoint();
  double col = 0.0, row = 0.0;
  for (Eigen::Index j = 0; j < resid.cols(); ++j) col = std::max(col, resid.col(j).norm());
  for (Eigen::Index i = 0; i < resid.rows(); ++i) row = std::max(row, resid.row(i).norm());
  const double mx = x.rowwise().norm().maxCoeff();
  const double my = y.rowwise().norm().maxCoeff();
  out.upper = mx * my + std::min(col, row);
  out.residual = resid.cwiseAbs().maxCoeff();
  const double rho = (mx > 0.0 && my > 0.0) ? std::sqrt(my / mx) : 1.0;
  out.xi = (x * rho).template cast<cplx>();
  out.eta = (y / rho).template cast<cplx>();
  return out;
}

RealVector softmax(const RealVector& x) {
  const double top = x.maxCoeff();
  RealVector e = (x.array() - top).exp();
  return e / e.sum();
}

template <class Scalar>
NormCertificate certify_dual(const Mat<Scalar>& phi, const CbOptions& opt, const Tolerances& tol) {
  const int n = static_cast<int>(phi.rows());
  NormCertificate cert;
  cert.method = UpperMethod::SDP;
  const double top = phi.cwiseAbs().maxCoeff();
  if (top == 0.0) {
    cert.converged = true;
    cert.lower_witness = Matrix::Zero(n, n);
    cert.xi = Matrix::Zero(n, 1);
    cert.eta = Matrix::Zero(n, 1);
    return cert;
  }

  // Entry witness: φ_ij alone is a lower bound.
  Eigen::Index bi = 0, bj = 0;
  phi.cwiseAbs().maxCoeff(&bi, &bj);
  cert.lower = top;
  cert.lower_witness = matrix_unit(n, static_cast<int>(bi), static_cast<int>(bj));
  cert.upper = std::numeric_limits<double>::infinity();

  auto consider = [&](const RealVector& u, const RealVector& v, double g) {
    const RealVector a = u.cwiseSqrt(), b = v.cwiseSqrt();
    if (g > cert.lower) {
      cert.lower = g;
      cert.lower_witness = (a * b.transpose()).cast<cplx>();
    }
    FactorizationBound f = factorize<Scalar>(phi, a, b, tol);
    if (f.upper < cert.upper) {
      cert.upper = f.upper;
      cert.xi = f.xi;
      cert.eta = f.eta;
      cert.factorization_residual = f.residual;
    }
    return cert.upper - cert.lower <= opt.tol;
  };

  const int dim = 2 * n;
  RealVector x = RealVector::Zero(dim);
  auto objective = [&](const RealVector& z, double eps, RealVector& grad, double& g_out,
                       RealVector& u, RealVector& v) {
    u = softmax(z.head(n));
    v = softmax(z.tail(n));
    const DualEval<Scalar> e = dual_eval<Scalar>(phi, u.cwiseSqrt(), v.cwiseSqrt());
    g_out = e.g;
    grad.resize(dim);
    for (int k = 0; k < n; ++k) {
      grad(k) = -(e.left_diag(k) / 2.0 + eps - u(k) * (e.g / 2.0 + n * eps));
      grad(n + k) = -(e.right_diag(k) / 2.0 + eps - v(k) * (e.g / 2.0 + n * eps));
    }
    return -(e.g + eps * (u.array().log().sum() + v.array().log().sum()));
  };

  RealVector grad, u, v;
  double g = 0.0;
  objective(x, 0.0, grad, g, u, v);
  if (consider(u, v, g)) {
    cert.converged = true;
    return cert;
  }

  const double eps_final = opt.tol / (4.0 * n);
  double eps = 0.1 * g;
  int iterations = 0;
  while (true) {
    eps = std::max(eps, eps_final);
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(dim, dim);
    double f = objective(x, eps, grad, g, u, v);
    int stall = 0;
    for (int it = 0; it < 1000 && iterations < opt.max_bfgs_iterations; ++it, ++iterations) {
      if (grad.lpNorm<Eigen::Infinity>() <= 1e-13 * std::max(1.0, g)) break;
      RealVector dir = -h * grad;
      double slope = grad.dot(dir);
      if (slope >= 0.0) {
        h.setIdentity();
        dir = -grad;
        slope = grad.dot(dir);
      }
      // Cap the step in log coordinates.
      const double dn = dir.lpNorm<Eigen::Infinity>();
      double step = dn > 5.0 ? 5.0 / dn : 1.0;
      RealVector xn, gn, un, vn;
      double fn = 0.0, ggn = 0.0;
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls) {
        xn = x + step * dir;
        fn = objective(xn, eps, gn, ggn, un, vn);
        if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      const RealVector s = xn - x, yv = gn - grad;
      const double sy = s.dot(yv);
      if (sy > 1e-300) {
        const double rho = 1.0 / sy;
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
        h = (id - rho * s * yv.transpose()) * h * (id - rho * yv * s.transpose()) + rho * s * s.transpose();
      }
      stall = (f - fn <= 1e-16 * std::abs(f)) ? stall + 1 : 0;
      x = xn;
      f = fn;
      grad = gn;
      g = ggn;
      u = un;
      v = vn;
      if (it % 25 == 24 && consider(u, v, g)) {
        cert.iterations = iterations + 1;
        cert.converged = true;
        return cert;
      }
      if (stall >= 10) break;
    }
    if (consider(u, v, g)) {
      cert.iterations = iterations;
      cert.converged = true;
      return cert;
    }
    if (eps <= eps_final || iterations >= opt.max_bfgs_iterations) break;
    eps /= 10.0;
  }
  cert.iterations = iterations;
  cert.converged = false;
  return cert;
}

// Alternating projections for a PSD completion with diagonal ≤ t.
Matrix project_psd(const Matrix& z, Eigen::SelfAdjointEigenSolver<Matrix>& es) {
  es.compute(z);
  RealVector w = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

void project_affine(Matrix& z, const Matrix& phi, double t) {
  const Eigen::Index n = phi.rows();
  z.topRightCorner(n, n) = phi;
  z.bottomLeftCorner(n, n) = phi.adjoint();
  for (Eigen::Index i = 0; i < 2 * n; ++i) z(i, i) = std::min(z(i, i).real(), t);
}

struct ApOutcome {
  bool feasible = false;
  double residual = 0.0;
  FactorizationBound bound;
};

// Upper bound from any PSD matrix whose off-diagonal block approximates Φ.
FactorizationBound gram_bound(const Matrix& zp, const Matrix& phi, Eigen::SelfAdjointEigenSolver<Matrix>& es) {
  const Eigen::Index n = phi.rows();
  es.compute(zp);
  RealVector w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix wmat = es.eigenvectors() * w.cast<cplx>().asDiagonal();
  FactorizationBound out;
  out.xi = wmat.topRows(n);
  out.eta = wmat.bottomRows(n);
  const Matrix resid = phi - out.xi * out.eta.adjoint();
  double col = 0.0, row = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) col = std::max(col, resid.col(j).norm());
  for (Eigen::Index i = 0; i < n; ++i) row = std::max(row, resid.row(i).norm());
  out.upper = out.xi.rowwise().norm().maxCoeff() * out.eta.rowwise().norm().maxCoeff() + std::min(col, row);
  out.residual = resid.cwiseAbs().maxCoeff();
  return out;
}

ApOutcome alternating_projections(Matrix& z, const Matrix& phi, double t, int cap, double threshold) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(z.rows());
  ApOutcome out;
  Matrix zp = z;
  for (int it = 0; it < cap; ++it) {
    zp = project_psd(z, es);
    Matrix za = zp;
    project_affine(za, phi, t);
    out.residual = (zp - za).norm();
    z = za;
    if (out.residual <= threshold) {
      out.feasible = true;
      break;
    }
  }
  out.bound = gram_bound(zp, phi, es);
  return out;
}

}  // namespace

double dual_value(const Matrix& phi, const RealVector& a, const RealVector& b) {
  require_square(phi, "dual_value");
  return dual_eval<cplx>(phi, a / a.norm(), b / b.norm()).g;
}

FactorizationBound factorization_from_scalings(const Matrix& phi, const RealVector& a, const RealVector& b,
                                               const Tolerances& tol) {
  require_square(phi, "factorization_from_scalings");
  require(a.size() == phi.rows() && b.size() == phi.cols(), "scalings have the wrong length");
  require(a.minCoeff() > 0.0 && b.minCoeff() > 0.0, "scalings must be positive");
  return factorize<cplx>(phi, a, b, tol);
}

NormCertificate cb_norm_bisection(const SchurKernel& k, double gap, int bisection_steps, int iteration_cap,
                                  std::optional<double> lo, std::optional<double> hi, const Tolerances& tol) {
  const Matrix& phi = k.entries;
  const int n = k.dim();
  require(n >= 1, "empty kernel");
  if (n > tol.cb_max_dim) fail(ErrorCode::InvalidArgument, "cb norm: kernel larger than the cost guard");
  NormCertificate cert;
  cert.method = UpperMethod::SDP;
  const double top = phi.cwiseAbs().maxCoeff();
  Eigen::Index bi = 0, bj = 0;
  phi.cwiseAbs().maxCoeff(&bi, &bj);
  cert.lower = top;
  cert.lower_witness = matrix_unit(n, static_cast<int>(bi), static_cast<int>(bj));
  const RealVector uniform = RealVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  const double du = dual_value(phi, uniform, uniform);
  if (du > cert.lower) {
    cert.lower = du;
    cert.lower_witness = (uniform * uniform.transpose()).cast<cplx>();
  }
  if (lo) cert.lower = std::max(cert.lower, *lo);
  if (top == 0.0) {
    cert.upper = 0.0;
    cert.converged = true;
    cert.xi = Matrix::Zero(n, 1);
    cert.eta = Matrix::Zero(n, 1);
    return cert;
  }
  // Crude feasible point: ξ_i = e_i scaled, η_j = column j of Φ*.
  double search_lo = cert.lower;
  double search_hi = hi ? *hi : n * top;
  cert.upper = std::numeric_limits<double>::infinity();
  {
    const Matrix id = Matrix::Identity(n, n);
    FactorizationBound crude;
    crude.xi = id;
    crude.eta = phi.adjoint();
    double col = 0.0;
    for (int j = 0; j < n; ++j) col = std::max(col, phi.col(j).norm());
    crude.upper = col;
    cert.upper = crude.upper;
    cert.xi = crude.xi;
    cert.eta = crude.eta;
    search_hi = std::min(search_hi, cert.upper);
  }
  Matrix z = Matrix::Zero(2 * n, 2 * n);
  z.diagonal().setConstant(search_hi);
  project_affine(z, phi, search_hi);
  int total = 0;
  for (int step = 0; step < bisection_steps && cert.upper - cert.lower > gap; ++step) {
    const double t = 0.5 * (search_lo + std::min(search_hi, cert.upper));
    ApOutcome r = alternating_projections(z, phi, t, iteration_cap, tol.ap_residual);
    total += iteration_cap;
    if (r.bound.upper < cert.upper) {
      cert.upper = r.bound.upper;
      cert.xi = r.bound.xi;
      cert.eta = r.bound.eta;
      cert.factorization_residual = r.bound.residual;
    }
    if (r.feasible) {
      search_hi = t;
    } else {
      search_lo = t;
    }
    if (std::min(search_hi, cert.upper) - search_lo <= gap * 0.25) break;
  }
  cert.iterations = total;
  cert.converged = cert.upper - cert.lower <= gap;
  return cert;
}

NormCertificate cb_norm_sdp(const SchurKernel& k, const CbOptions& options, const Tolerances& tol) {
  const int n = k.dim();
  require(n >= 1, "empty kernel");
  require_finite(k.entries, "cb_norm_sdp");
  if (n > tol.cb_max_dim) fail(ErrorCode::InvalidArgument, "cb norm: kernel larger than the cost guard");
  NormCertificate cert;
  if (k.is_real()) {
    const Eigen::MatrixXd phi = k.entries.real();
    cert = certify_dual<double>(phi, options, tol);
  } else {
    cert = certify_dual<cplx>(k.entries, options, tol);
  }
  if (!cert.converged && options.allow_fallback) {
    NormCertificate alt = cb_norm_bisection(k, options.tol, options.fallback_bisection_steps,
                                            options.fallback_iteration_cap, cert.lower, cert.upper, tol);
    cert.used_fallback = true;
    cert.iterations += alt.iterations;
    if (alt.upper < cert.upper) {
      cert.upper = alt.upper;
      cert.xi = alt.xi;
      cert.eta = alt.eta;
      cert.factorization_residual = alt.factorization_residual;
    }
    cert.converged = cert.upper - cert.lower <= options.tol;
  }
  return cert;
}

}  // namespace wnlp
