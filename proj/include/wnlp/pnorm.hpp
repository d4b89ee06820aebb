#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wnlp/error.hpp"

namespace wnlp {

// Schatten exponent in [1, ∞]. Infinity is a separate token so that
// conjugation is exact: 1' = ∞ and ∞' = 1.
class PNorm {
 public:
  explicit PNorm(double p) {
    if (std::isnan(p) || p < 1.0) fail(ErrorCode::InvalidArgument, "exponent must lie in [1, inf]");
    infinite_ = std::isinf(p);
    value_ = infinite_ ? 0.0 : p;
  }
  static PNorm infinity() { return PNorm(std::numeric_limits<double>::infinity()); }
  // 1/p, with 1/∞ = 0.
  static PNorm from_reciprocal(double r) {
    if (!(r >= 0.0 && r <= 1.0)) fail(ErrorCode::InvalidArgument, "reciprocal exponent must lie in [0, 1]");
    if (r == 0.0) return infinity();
    return PNorm(1.0 / r);
  }

  bool is_infinite() const { return infinite_; }
  double value() const { return infinite_ ? std::numeric_limits<double>::infinity() : value_; }
  double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

  PNorm conjugate() const {
    if (infinite_) return PNorm(1.0);
    if (value_ == 1.0) return infinity();
    return PNorm(value_ / (value_ - 1.0));
  }

  std::string str() const { return infinite_ ? std::string("inf") : std::to_string(value_); }

  friend bool operator==(const PNorm& a, const PNorm& b) {
    return a.infinite_ == b.infinite_ && a.value_ == b.value_;
  }

 private:
  bool infinite_ = false;
  double value_ = 1.0;
};

// max(p, p') with max(1, ∞) = ∞ reported as +inf.
inline double max_conjugate(const PNorm& p) {
  return std::max(p.value(), p.conjugate().value());
}

}  // namespace wnlp
