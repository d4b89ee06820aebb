#pragma once

#include <cstdint>
#include <limits>

#include "wnlp/matrix.hpp"

namespace wnlp {

// Counter-based generator: output k of stream s under seed is
// splitmix64(key(seed, s) + k·golden). Streams are independent of the
// order in which trials consume them.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi);  // inclusive
  double normal();
  cplx complex_normal();  // E|z|² = 1

  CounterRng split(std::uint64_t stream) const { return CounterRng(seed_, stream_ * 0x9E3779B97F4A7C15ULL + stream + 1); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

Matrix gaussian_matrix(int n, CounterRng& rng);
RealMatrix real_gaussian_matrix(int n, CounterRng& rng);
// Haar-distributed unitary.
Matrix random_unitary(int n, CounterRng& rng);
// Spectrum log-uniform in [1, cond], shuffled into a random eigenbasis.
class Density;
Density random_density(int n, double cond, CounterRng& rng);
// n positive values, log-uniform in [lo, hi], ascending when sorted = true.
RealVector random_spectrum(int n, double lo, double hi, CounterRng& rng, bool sorted);

}  // namespace wnlp
