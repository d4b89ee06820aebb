#pragma once

#include <vector>

#include "wnlp/matrix.hpp"

namespace wnlp {

// Closed set of scalar functions usable in functional calculus. Closing
// the set keeps monotonicity checkable on a spectrum.
class ScalarFunction {
 public:
  enum class Kind { Power, Exponential, Table };

  // scale · t^alpha
  static ScalarFunction power(double alpha, double scale = 1.0);
  // scale · e^{rate·t}
  static ScalarFunction exponential(double rate, double scale = 1.0);
  static ScalarFunction identity() { return power(1.0); }
  // Values listed against the ascending spectrum of the density it is
  // applied to.
  static ScalarFunction table(std::vector<double> values);

  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  double scale() const { return scale_; }
  const std::vector<double>& values() const { return values_; }

  // Evaluate on an ascending spectrum.
  RealVector on_spectrum(const RealVector& ascending) const;

 private:
  Kind kind_ = Kind::Power;
  double parameter_ = 1.0;
  double scale_ = 1.0;
  std::vector<double> values_;
};

// Positive definite matrix stored spectrally.
class Density {
 public:
  Density(RealVector ascending, Matrix basis, const Tolerances& tol = kDefaultTolerances);

  static Density from_matrix(const Matrix& h, const Tolerances& tol = kDefaultTolerances);
  // diag(values) in the standard basis; the stored eigenbasis is the sorting permutation.
  static Density diagonal(const RealVector& values);
  static Density scalar(int n, double lambda);

  int dim() const { return static_cast<int>(values_.size()); }
  const RealVector& eigenvalues() const { return values_; }
  const Matrix& eigenbasis() const { return basis_; }
  Matrix matrix() const;
  double condition() const { return values_(dim() - 1) / values_(0); }
  bool flagged(const Tolerances& tol = kDefaultTolerances) const {
    return condition() > tol.condition_flag;
  }

  Density inverse() const;
  // Same eigenbasis, new spectrum (must stay ascending and positive).
  Density with_spectrum(const RealVector& ascending) const;

  Matrix to_eigenbasis(const Matrix& x) const { return basis_.adjoint() * x * basis_; }
  Matrix from_eigenbasis(const Matrix& xt) const { return basis_ * xt * basis_.adjoint(); }

 private:
  RealVector values_;
  Matrix basis_;
};

// f(d). Rejects f that is nonpositive or decreasing on the spectrum.
Density apply_calculus(const Density& d, const ScalarFunction& f,
                       const Tolerances& tol = kDefaultTolerances);

}  // namespace wnlp
