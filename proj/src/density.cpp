#include "wnlp/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wnlp/error.hpp"

namespace wnlp {

ScalarFunction ScalarFunction::power(double alpha, double scale) {
  require(std::isfinite(alpha) && alpha >= 0.0, "power calculus needs a finite exponent alpha >= 0");
  require(std::isfinite(scale) && scale > 0.0, "calculus scale must be positive");
  ScalarFunction f;
  f.kind_ = Kind::Power;
  f.parameter_ = alpha;
  f.scale_ = scale;
  return f;
}

ScalarFunction ScalarFunction::exponential(double rate, double scale) {
  require(std::isfinite(rate), "exponential calculus needs a finite rate");
  require(std::isfinite(scale) && scale > 0.0, "calculus scale must be positive");
  ScalarFunction f;
  f.kind_ = Kind::Exponential;
  f.parameter_ = rate;
  f.scale_ = scale;
  return f;
}

ScalarFunction ScalarFunction::table(std::vector<double> values) {
  require(!values.empty(), "calculus table is empty");
  for (double v : values) require(std::isfinite(v), "calculus table has a non-finite value");
  ScalarFunction f;
  f.kind_ = Kind::Table;
  f.values_ = std::move(values);
  return f;
}

RealVector ScalarFunction::on_spectrum(const RealVector& ascending) const {
  RealVector out(ascending.size());
  switch (kind_) {
    case Kind::Power:
      for (Eigen::Index i = 0; i < ascending.size(); ++i)
        out(i) = scale_ * std::pow(ascending(i), parameter_);
      break;
    case Kind::Exponential:
      for (Eigen::Index i = 0; i < ascending.size(); ++i)
        out(i) = scale_ * std::exp(parameter_ * ascending(i));
      break;
    case Kind::Table:
      if (static_cast<Eigen::Index>(values_.size()) != ascending.size())
        fail(ErrorCode::DimensionMismatch, "calculus table length differs from the spectrum size");
      for (Eigen::Index i = 0; i < ascending.size(); ++i) out(i) = values_[i];
      break;
  }
  return out;
}

Density::Density(RealVector ascending, Matrix basis, const Tolerances& tol)
    : values_(std::move(ascending)), basis_(std::move(basis)) {
  const Eigen::Index n = values_.size();
  require(n > 0, "density must have positive dimension");
  if (basis_.rows() != n || basis_.cols() != n)
    fail(ErrorCode::DimensionMismatch, "density eigenbasis has the wrong shape");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(values_(i)) || values_(i) <= 0.0)
      fail(ErrorCode::InvalidArgument, "density eigenvalues must be finite and positive");
    if (i > 0 && values_(i) < values_(i - 1))
      fail(ErrorCode::InvalidArgument, "density eigenvalues must be ascending");
  }
  require_finite(basis_, "density eigenbasis");
  const double defect = (basis_.adjoint() * basis_ - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > 1e-8) fail(ErrorCode::InvalidArgument, "density eigenbasis is not unitary");
  (void)tol;
}

Density Density::from_matrix(const Matrix& h, const Tolerances& tol) {
  EigenDecomposition e = eigh(h, tol);
  const double top = e.values.cwiseAbs().maxCoeff();
  if (e.values(0) <= tol.positivity * top)
    fail(ErrorCode::InvalidArgument, "density must be positive definite");
  return Density(e.values, e.vectors, tol);
}

Density Density::diagonal(const RealVector& values) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });
  RealVector sorted(n);
  Matrix basis = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sorted(k) = values(order[k]);
    basis(order[k], k) = 1.0;
  }
  return Density(sorted, basis);
}

Density Density::scalar(int n, double lambda) {
  return Density(RealVector::Constant(n, lambda), Matrix::Identity(n, n));
}

Matrix Density::matrix() const {
  return basis_ * values_.cast<cplx>().asDiagonal() * basis_.adjoint();
}

Density Density::inverse() const {
  const int n = dim();
  RealVector inv(n);
  Matrix basis(n, n);
  for (int k = 0; k < n; ++k) {
    inv(k) = 1.0 / values_(n - 1 - k);
    basis.col(k) = basis_.col(n - 1 - k);
  }
  return Density(inv, basis);
}

Density Density::with_spectrum(const RealVector& ascending) const {
  if (ascending.size() != values_.size())
    fail(ErrorCode::DimensionMismatch, "replacement spectrum has the wrong length");
  return Density(ascending, basis_);
}

Density apply_calculus(const Density& d, const ScalarFunction& f, const Tolerances& tol) {
  const RealVector v = f.on_spectrum(d.eigenvalues());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i)) || v(i) <= 0.0)
      fail(ErrorCode::InvalidArgument,
           "calculus is not positive on the spectrum (value " + std::to_string(v(i)) + ")");
    if (i > 0 && v(i) < v(i - 1) * (1.0 - tol.monotone_slack))
      fail(ErrorCode::NonMonotone, "calculus is decreasing on the spectrum between eigenvalues " +
                                       std::to_string(i - 1) + " and " + std::to_string(i));
  }
  return d.with_spectrum(v);
}

}  // namespace wnlp
