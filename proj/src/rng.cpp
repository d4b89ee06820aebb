#include "wnlp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wnlp/density.hpp"
#include "wnlp/error.hpp"

namespace wnlp {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(splitmix64(seed ^ splitmix64(stream + kGolden))) {}

CounterRng::result_type CounterRng::operator()() {
  return splitmix64(key_ + (++counter_) * kGolden);
}

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

int CounterRng::uniform_int(int lo, int hi) {
  require(hi >= lo, "uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>((*this)() % span);
}

double CounterRng::normal() {
  // Box–Muller, one output per call so the stream position is predictable.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx CounterRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Matrix gaussian_matrix(int n, CounterRng& rng) {
  Matrix x(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) x(i, j) = rng.complex_normal();
  return x;
}

RealMatrix real_gaussian_matrix(int n, CounterRng& rng) {
  RealMatrix x(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) x(i, j) = rng.normal();
  return x;
}

Matrix random_unitary(int n, CounterRng& rng) {
  const Matrix g = gaussian_matrix(n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar.
  for (int k = 0; k < n; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0.0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

RealVector random_spectrum(int n, double lo, double hi, CounterRng& rng, bool sorted) {
  require(lo > 0.0 && hi >= lo, "random_spectrum: need 0 < lo <= hi");
  RealVector v(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) v(i) = std::exp(rng.uniform(a, b));
  if (sorted) std::sort(v.data(), v.data() + n);
  return v;
}

Density random_density(int n, double cond, CounterRng& rng) {
  require(cond >= 1.0, "random_density: condition number must be >= 1");
  RealVector v = random_spectrum(n, 1.0, cond, rng, true);
  if (n >= 2) {
    // Pin the extremes so the requested condition number is attained.
    v(0) = 1.0;
    v(n - 1) = cond;
  }
  return Density(v, random_unitary(n, rng));
}

}  // namespace wnlp
