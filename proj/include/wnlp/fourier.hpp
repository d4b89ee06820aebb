#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace wnlp {

// |f(s)| ≤ constant · e^{-rate |s|} outside the constant offset.
struct DecayCertificate {
  double constant = 1.0;
  double rate = 1.0;
};

class KernelFunction {
 public:
  enum class Family { ExpDecay, SumPow, OneMinusInvSumPow, GMean, CoshWeight, UserTable };

  // e^{-|s|}
  static KernelFunction exp_decay();
  // (1 + e^{-|s|})^θ
  static KernelFunction sum_pow(double theta);
  // 1 - (1 + e^{-|s|})^{-θ}
  static KernelFunction one_minus_inv_sum_pow(double theta);
  // 1/(e^{θs} + e^{(θ-1)s})
  static KernelFunction gmean(double theta);
  // 1/(2cosh πs)
  static KernelFunction cosh_weight();
  // Piecewise linear through (xs, ys), zero outside [xs.front(), xs.back()].
  static KernelFunction user_table(std::vector<double> xs, std::vector<double> ys,
                                   std::optional<DecayCertificate> decay = std::nullopt,
                                   bool symmetric = false);

  Family family() const { return family_; }
  // max |s| over the table abscissae (tables only).
  double support_radius() const;
  double theta() const { return theta_; }
  bool symmetric() const { return symmetric_; }

  double operator()(double s) const;
  // Constant c with f = c + g and g integrable (nonzero only for SumPow).
  double offset() const { return family_ == Family::SumPow ? 1.0 : 0.0; }
  double decaying_part(double s) const { return (*this)(s) - offset(); }
  std::optional<DecayCertificate> decay() const;
  // Closed-form transform of the decaying part when one is known.
  std::optional<std::complex<double>> transform_closed(double xi) const;
  // Certified bound on ∫_{|ξ|>Ξ} |ĝ| if available.
  std::optional<double> transform_tail(double xi_max) const;

 private:
  Family family_ = Family::ExpDecay;
  double theta_ = 0.5;
  bool symmetric_ = true;
  std::vector<double> xs_, ys_;
  std::optional<DecayCertificate> table_decay_;
};

struct TransformSamples {
  std::vector<std::complex<double>> values;
  // Bound on |truncation error| at every ξ; empty if no decay certificate.
  std::optional<double> tail_bound;
};

// ĝ(ξ) = ∫ g(s) e^{-2πiξs} ds over [-T, T] for the decaying part g.
TransformSamples fourier_transform_num(const KernelFunction& f, const std::vector<double>& xis,
                                       double window);
// Smallest T whose certified tail is below tail; the table radius for tables.
double transform_window(const KernelFunction& f, double tail = 1e-10);

struct L1Estimate {
  double value = 0.0;
  double error = 0.0;  // quadrature error estimate plus tail bound
  double upper() const { return value + error; }
};

// ∫ |ĝ| over ℝ for the decaying part.
L1Estimate l1_norm_ft(const KernelFunction& f);

// π / sin(π(θ + 2πiξ)), stable for large |ξ|.
std::complex<double> gmean_ft_closed(double theta, double xi);

double cosh_weight(double t);

}  // namespace wnlp
