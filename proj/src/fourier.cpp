#include "wnlp/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "wnlp/error.hpp"
#include "wnlp/weighted.hpp"

namespace wnlp {

namespace {

constexpr double kPi = std::numbers::pi;

void check_theta_closed(double theta) {
  require(std::isfinite(theta) && theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
}

// Gauss–Kronrod 7/15 on [a, b].
struct GkResult {
  double value;
  double error;
};

GkResult gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  static const double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                               0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                               0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                               0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static const double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                               0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                               0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                               0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                               0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = wk[7] * fc, g = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double f1 = f(c - h * xk[j]), f2 = f(c + h * xk[j]);
    k += wk[j] * (f1 + f2);
    if (j % 2 == 1) g += wg[j / 2] * (f1 + f2);
  }
  return {k * h, std::abs((k - g) * h)};
}

void adaptive(const std::function<double(double)>& f, double a, double b, double target, int depth,
              double& value, double& error) {
  const GkResult r = gauss_kronrod(f, a, b);
  if (r.error <= target || depth >= 40) {
    value += r.value;
    error += r.error;
    return;
  }
  const double m = 0.5 * (a + b);
  adaptive(f, a, m, target, depth + 1, value, error);
  adaptive(f, m, b, target, depth + 1, value, error);
}

// |ĝ| on [0, Ξ] over geometric panels [0,1], [1,2], [2,4], ...
void integrate_decaying(const std::function<double(double)>& f, double xi_max, double target,
                        double& value, double& error) {
  double a = 0.0, b = std::min(1.0, xi_max);
  while (a < xi_max) {
    adaptive(f, a, b, target, 0, value, error);
    a = b;
    b = std::min(2.0 * b, xi_max);
  }
}

// Fixed Gauss nodes on [0, T] fine enough for frequencies up to 2πΞ.
struct HalfLineRule {
  std::vector<double> s, w;
};

HalfLineRule half_line_rule(double window, double xi_max) {
  const double omega = 2.0 * kPi * xi_max;
  const double h = std::min(0.5, 2.0 / std::max(omega, 1e-300));
  const int panels = static_cast<int>(std::ceil(window / h));
  std::vector<double> gx, gw;
  gauss_legendre(12, gx, gw);
  HalfLineRule r;
  const double hh = window / panels;
  for (int k = 0; k < panels; ++k) {
    const double mid = (k + 0.5) * hh;
    for (std::size_t j = 0; j < gx.size(); ++j) {
      r.s.push_back(mid + 0.5 * hh * gx[j]);
      r.w.push_back(0.5 * hh * gw[j]);
    }
  }
  return r;
}

std::complex<double> transform_by_rule(const KernelFunction& f, const HalfLineRule& rule, double xi) {
  const double omega = 2.0 * kPi * xi;
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < rule.s.size(); ++k) {
    const double s = rule.s[k];
    const double gp = f.decaying_part(s);
    if (f.symmetric()) {
      re += 2.0 * rule.w[k] * gp * std::cos(omega * s);
    } else {
      const double gm = f.decaying_part(-s);
      re += rule.w[k] * (gp + gm) * std::cos(omega * s);
      im -= rule.w[k] * (gp - gm) * std::sin(omega * s);
    }
  }
  return {re, im};
}

}  // namespace

KernelFunction KernelFunction::exp_decay() {
  KernelFunction f;
  f.family_ = Family::ExpDecay;
  f.symmetric_ = true;
  return f;
}

KernelFunction KernelFunction::sum_pow(double theta) {
  check_theta_closed(theta);
  KernelFunction f;
  f.family_ = Family::SumPow;
  f.theta_ = theta;
  return f;
}

KernelFunction KernelFunction::one_minus_inv_sum_pow(double theta) {
  check_theta_closed(theta);
  KernelFunction f;
  f.family_ = Family::OneMinusInvSumPow;
  f.theta_ = theta;
  return f;
}

KernelFunction KernelFunction::gmean(double theta) {
  require(std::isfinite(theta) && theta > 0.0 && theta < 1.0, "gmean needs 0 < theta < 1");
  KernelFunction f;
  f.family_ = Family::GMean;
  f.theta_ = theta;
  f.symmetric_ = theta == 0.5;
  return f;
}

KernelFunction KernelFunction::cosh_weight() {
  KernelFunction f;
  f.family_ = Family::CoshWeight;
  return f;
}

KernelFunction KernelFunction::user_table(std::vector<double> xs, std::vector<double> ys,
                                          std::optional<DecayCertificate> decay, bool symmetric) {
  require(xs.size() >= 2 && xs.size() == ys.size(), "user table needs matching abscissae and values");
  for (std::size_t k = 1; k < xs.size(); ++k) require(xs[k] > xs[k - 1], "user table abscissae must increase");
  for (double y : ys) require(std::isfinite(y), "user table values must be finite");
  if (decay) require(decay->constant >= 0.0 && decay->rate > 0.0, "decay certificate needs a positive rate");
  KernelFunction f;
  f.family_ = Family::UserTable;
  f.xs_ = std::move(xs);
  f.ys_ = std::move(ys);
  f.table_decay_ = decay;
  f.symmetric_ = symmetric;
  return f;
}

double KernelFunction::support_radius() const {
  if (xs_.empty()) return 0.0;
  return std::max(std::abs(xs_.front()), std::abs(xs_.back()));
}

double KernelFunction::operator()(double s) const {
  const double a = std::abs(s);
  switch (family_) {
    case Family::ExpDecay:
      return std::exp(-a);
    case Family::SumPow:
      return std::pow(1.0 + std::exp(-a), theta_);
    case Family::OneMinusInvSumPow:
      return -std::expm1(-theta_ * std::log1p(std::exp(-a)));
    case Family::GMean:
      return s >= 0.0 ? std::exp(-theta_ * s) / (1.0 + std::exp(-s))
                      : std::exp((1.0 - theta_) * s) / (1.0 + std::exp(s));
    case Family::CoshWeight:
      return wnlp::cosh_weight(s);
    case Family::UserTable: {
      if (s < xs_.front() || s > xs_.back()) return 0.0;
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), s);
      if (it == xs_.end()) return ys_.back();
      const std::size_t k = static_cast<std::size_t>(it - xs_.begin());
      const double t = (s - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
      return (1.0 - t) * ys_[k - 1] + t * ys_[k];
    }
  }
  return 0.0;
}

std::optional<DecayCertificate> KernelFunction::decay() const {
  switch (family_) {
    case Family::ExpDecay:
      return DecayCertificate{1.0, 1.0};
    case Family::SumPow:
    case Family::OneMinusInvSumPow:
      // (1+u)^θ - 1 ≤ θu and 1 - (1+u)^{-θ} ≤ θu for u ≥ 0, θ ∈ [0, 1].
      return DecayCertificate{theta_, 1.0};
    case Family::GMean:
      return DecayCertificate{1.0, std::min(theta_, 1.0 - theta_)};
    case Family::CoshWeight:
      return DecayCertificate{1.0, kPi};
    case Family::UserTable:
      return table_decay_;
  }
  return std::nullopt;
}

std::optional<std::complex<double>> KernelFunction::transform_closed(double xi) const {
  switch (family_) {
    case Family::ExpDecay:
      return std::complex<double>(2.0 / (1.0 + 4.0 * kPi * kPi * xi * xi), 0.0);
    case Family::GMean:
      return gmean_ft_closed(theta_, xi);
    case Family::CoshWeight:
      return std::complex<double>(0.5 / std::cosh(std::min(std::abs(kPi * xi), 700.0)), 0.0);
    default:
      return std::nullopt;
  }
}

std::optional<double> KernelFunction::transform_tail(double xi_max) const {
  switch (family_) {
    case Family::ExpDecay:
      return 2.0 / kPi * std::atan(1.0 / (2.0 * kPi * xi_max));
    case Family::CoshWeight:
      // ½ sech(πξ) ≤ e^{-π|ξ|}
      return 2.0 * std::exp(-kPi * xi_max) / kPi;
    case Family::GMean:
      // |ĝ(ξ)| ≤ π / sinh(2π²|ξ|)
      return -std::log(std::tanh(kPi * kPi * xi_max)) / kPi;
    case Family::SumPow:
    case Family::OneMinusInvSumPow: {
      // Even, convex and decreasing on [0, ∞): |ĝ(ξ)| ≤ |g'(0+)| / (π² ξ²).
      const double slope = family_ == Family::SumPow ? theta_ * std::pow(2.0, theta_ - 1.0)
                                                     : theta_ * std::pow(2.0, -theta_ - 1.0);
      return 2.0 * slope / (kPi * kPi * xi_max);
    }
    case Family::UserTable: {
      // Piecewise linear with compact support: |ĝ(ξ)| ≤ J / (4π²ξ²), J the total
      // jump of the derivative. A jump in the value itself is not integrable.
      if (std::abs(ys_.front()) > 0.0 || std::abs(ys_.back()) > 0.0) return std::nullopt;
      double jumps = 0.0, prev = 0.0;
      for (std::size_t k = 1; k < xs_.size(); ++k) {
        const double slope = (ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]);
        jumps += std::abs(slope - prev);
        prev = slope;
      }
      jumps += std::abs(prev);
      return jumps / (2.0 * kPi * kPi * xi_max);
    }
  }
  return std::nullopt;
}

TransformSamples fourier_transform_num(const KernelFunction& f, const std::vector<double>& xis,
                                       double window) {
  require(window > 0.0 && std::isfinite(window), "transform window must be positive");
  TransformSamples out;
  double xi_max = 0.0;
  for (double xi : xis) {
    require(std::isfinite(xi), "transform grid must be finite");
    xi_max = std::max(xi_max, std::abs(xi));
  }
  const HalfLineRule rule = half_line_rule(window, xi_max);
  for (double xi : xis) out.values.push_back(transform_by_rule(f, rule, xi));
  if (auto dec = f.decay()) out.tail_bound = 2.0 * dec->constant * std::exp(-dec->rate * window) / dec->rate;
  return out;
}

double transform_window(const KernelFunction& f, double tail) {
  require(tail > 0.0, "tail target must be positive");
  if (f.family() == KernelFunction::Family::UserTable) return f.support_radius();
  const auto dec = f.decay();
  if (!dec) fail(ErrorCode::InvalidArgument, "kernel has no decay certificate");
  return std::max(1.0, std::log(2.0 * dec->constant / (dec->rate * tail)) / dec->rate);
}

std::complex<double> gmean_ft_closed(double theta, double xi) {
  require(std::isfinite(theta) && theta > 0.0 && theta < 1.0,
          "gmean transform has poles at theta = 0 and theta = 1");
  require(std::isfinite(xi), "xi must be finite");
  // π / sin(a + ib) with a = πθ, b = 2π²ξ, written in e^{-|b|} to avoid overflow.
  const double a = kPi * theta;
  const double b = 2.0 * kPi * kPi * xi;
  const double e = std::exp(-std::abs(b));
  const double e2 = e * e;
  const double sgn = b >= 0.0 ? 1.0 : -1.0;
  const std::complex<double> den(std::sin(a) * (1.0 + e2), std::cos(a) * sgn * (1.0 - e2));
  return 2.0 * kPi * e / den;
}

double cosh_weight(double t) {
  const double e = std::exp(-kPi * std::abs(t));
  return e / (1.0 + e * e);
}

L1Estimate l1_norm_ft(const KernelFunction& f) {
  const double target = kDefaultTolerances.l1_panel;
  L1Estimate out;
  using F = KernelFunction::Family;
  double xi_max = 0.0;
  std::function<double(double)> integrand;
  HalfLineRule rule;
  switch (f.family()) {
    case F::ExpDecay:
      xi_max = 1e7;
      break;
    case F::CoshWeight:
      xi_max = 14.0;
      break;
    case F::GMean:
      xi_max = 3.0;
      break;
    default:
      xi_max = 40.0;
      break;
  }
  const auto tail = f.transform_tail(xi_max);
  if (!tail) fail(ErrorCode::NonConvergence, "transform is not certified integrable; no L1 bound");
  double quad_error = 0.0;
  if (f.transform_closed(0.0)) {
    integrand = [&f](double xi) { return std::abs(*f.transform_closed(xi)); };
  } else {
    double window = 0.0;
    if (f.family() == F::UserTable) {
      window = f.support_radius();
    } else {
      const auto dec = f.decay();
      if (!dec) fail(ErrorCode::NonConvergence, "no decay certificate; transform cannot be certified");
      // Window where the neglected mass of g is below 1e-13.
      const double c = std::max(dec->constant, 1e-300);
      window = std::max(1.0, std::log(2.0 * c / (dec->rate * 1e-13)) / dec->rate);
      // Truncation error per ξ, integrated over [-Ξ, Ξ].
      quad_error += 2.0 * xi_max * 2.0 * c * std::exp(-dec->rate * window) / dec->rate;
    }
    rule = half_line_rule(window, xi_max);
    integrand = [&f, &rule](double xi) { return std::abs(transform_by_rule(f, rule, xi)); };
  }
  double value = 0.0, error = 0.0;
  integrate_decaying(integrand, xi_max, target, value, error);
  // |ĝ(-ξ)| = |ĝ(ξ)| for real g.
  out.value = 2.0 * value;
  out.error = 2.0 * error + quad_error + *tail;
  return out;
}

}  // namespace wnlp
