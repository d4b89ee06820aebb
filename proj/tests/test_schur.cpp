#include <cmath>

#include "doctest.h"
#include "wnlp/error.hpp"
#include "wnlp/fourier.hpp"
#include "wnlp/rng.hpp"
#include "wnlp/schur.hpp"

using namespace wnlp;

namespace {

KernelFamily family(KernelTag tag, std::vector<double> l, std::vector<double> m, double theta) {
  KernelFamily f;
  f.tag = tag;
  f.lambda = std::move(l);
  f.mu = std::move(m);
  f.theta = theta;
  return f;
}

}  // namespace

TEST_CASE("kernel entries at fixed points") {
  const SchurKernel a = build_kernel(family(KernelTag::MinOverMax, {1.0, 2.0, 4.0}, {}, 0.5));
  CHECK(a.entries(0, 2).real() == doctest::Approx(0.25));
  CHECK(a.entries(1, 1).real() == doctest::Approx(1.0));

  const SchurKernel b = build_kernel(family(KernelTag::TwoWeightMean, {1.0, 3.0}, {0.5, 2.0}, 0.3));
  CHECK(b.entries(0, 1).real() == doctest::Approx(0.9984747670771333).epsilon(1e-13));

  const SchurKernel c = build_kernel(family(KernelTag::GeoMeanOverSum, {1.0, 3.0}, {}, 0.3));
  CHECK(c.entries(0, 1).real() == doctest::Approx(0.5394173199936483).epsilon(1e-13));

  std::vector<double> l, m;
  for (int i = 1; i <= 4; ++i) {
    l.push_back(i);
    m.push_back(1.0 / i);
  }
  const SchurKernel os = build_kernel(family(KernelTag::OppositeSignCounterexample, l, m, 0.5));
  CHECK(os.entries(0, 3).real() == doctest::Approx(25.0 / 16.0).epsilon(1e-14));
  CHECK(os.is_real());
}

TEST_CASE("claimed bounds") {
  const double t = 0.4;
  CHECK(claimed_bound(family(KernelTag::MinOverMax, {1.0}, {}, t)).value == 1.0);
  CHECK(claimed_bound(family(KernelTag::SumPowOverMaxPow, {1.0}, {}, t)).value == doctest::Approx(std::pow(2.0, t)));
  CHECK(claimed_bound(family(KernelTag::MaxPowOverSumPow, {1.0}, {}, t)).value ==
        doctest::Approx(2.0 - std::pow(2.0, -t)));
  CHECK(claimed_bound(family(KernelTag::TwoWeightRatio, {1.0}, {1.0}, t)).value == 3.0);
  CHECK(claimed_bound(family(KernelTag::TwoWeightMean, {1.0}, {1.0}, t)).value ==
        doctest::Approx(9.0 - 4.0 * std::sqrt(2.0)));
  CHECK(claimed_bound(family(KernelTag::OppositeSignCounterexample, {1.0}, {1.0}, t)).kind == BoundKind::Unbounded);
}

TEST_CASE("kernel validation") {
  CHECK_THROWS_AS(build_kernel(family(KernelTag::MinOverMax, {1.0, -2.0}, {}, 0.5)), Error);
  CHECK_THROWS_AS(build_kernel(family(KernelTag::TwoWeightMean, {1.0, 2.0}, {1.0}, 0.5)), Error);
  CHECK_THROWS_AS(build_kernel(family(KernelTag::GeoMeanOverSum, {1.0, 2.0}, {}, 1.5)), Error);
  CHECK(kernel_tag_from_name("TwoWeightRatio") == KernelTag::TwoWeightRatio);
  CHECK_FALSE(kernel_tag_from_name("nope").has_value());
}

TEST_CASE("cb norms of known kernels") {
  Matrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  const NormCertificate ch = cb_norm_sdp(kernel_from_matrix(h));
  CHECK(ch.converged);
  CHECK(ch.lower <= std::sqrt(2.0) + 1e-9);
  CHECK(ch.upper >= std::sqrt(2.0) - 1e-9);
  CHECK(ch.gap() <= 1e-6);

  Matrix tri(2, 2);
  tri << 1.0, 1.0, 0.0, 1.0;
  const NormCertificate ct = cb_norm_sdp(kernel_from_matrix(tri));
  CHECK(ct.upper == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-6));

  // Positive semidefinite kernels: norm equals the largest diagonal entry.
  const NormCertificate cm = cb_norm_sdp(build_kernel(family(KernelTag::MinOverMax, {1.0, 2.0, 7.0, 9.0}, {}, 0.5)));
  CHECK(cm.upper == doctest::Approx(1.0).epsilon(1e-9));

  Matrix big = Matrix::Ones(40, 40);
  CHECK_THROWS_AS(cb_norm_sdp(kernel_from_matrix(big)), Error);
}

TEST_CASE("certificates bracket sampled lower bounds") {
  for (int t = 0; t < 10; ++t) {
    CounterRng rng(31, t);
    const int n = rng.uniform_int(2, 6);
    const SchurKernel k = kernel_from_matrix(real_gaussian_matrix(n, rng).cast<cplx>());
    const NormCertificate c = cb_norm_sdp(k);
    CHECK(c.lower <= c.upper + 1e-12);
    CHECK(c.gap() <= 1e-6 * std::max(1.0, c.upper));
    for (double p : {1.0, 2.0, 4.0}) {
      const LowerBound lb = multiplier_norm_lower(k, PNorm(p), 4, t);
      CHECK(lb.value <= c.upper + 1e-8);
    }
    CHECK(multiplier_norm_s2(k) <= c.upper + 1e-8);
  }
}

TEST_CASE("bisection fallback brackets the same value") {
  Matrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  const NormCertificate c = cb_norm_bisection(kernel_from_matrix(h), 1e-3, 30, 5000, 1.0, 2.0);
  CHECK(c.upper >= std::sqrt(2.0) - 1e-9);
  CHECK(c.upper <= std::sqrt(2.0) + 5e-3);
}

TEST_CASE("fourier upper bounds dominate certificates") {
  std::vector<double> pts{0.0, 0.7, 1.5, 3.2, 4.0};
  const double th = 0.3;
  const double fourier = cb_upper_fourier(KernelFunction::gmean(1.0 - th), pts);
  KernelFamily f = family(KernelTag::GeoMeanOverSum, {}, {}, th);
  for (double s : pts) f.lambda.push_back(std::exp(s));
  const NormCertificate c = cb_norm_sdp(build_kernel(f));
  CHECK(c.upper <= fourier + 1e-6);
  CHECK(psd_kernel_check(KernelFunction::exp_decay(), pts));
}

TEST_CASE("blockwise transference stays under the scalar certificate") {
  for (int t = 0; t < 10; ++t) {
    CounterRng rng(41, t);
    const int n = rng.uniform_int(2, 5);
    KernelFamily f = family(KernelTag::TwoWeightRatio, {}, {}, rng.uniform(0.1, 0.9));
    const RealVector l = random_spectrum(n, 0.1, 10.0, rng, true), m = random_spectrum(n, 0.1, 10.0, rng, true);
    f.lambda.assign(l.data(), l.data() + n);
    f.mu.assign(m.data(), m.data() + n);
    const SchurKernel k = build_kernel(f);
    const NormCertificate c = cb_norm_sdp(k);
    const TransferenceResult r = transference_check(k, gaussian_matrix(2 * n, rng), 2, PNorm::infinity(), c.upper);
    CHECK(r.holds);
    CHECK(r.ratio <= c.upper + 1e-6);
  }
}

TEST_CASE("multiplier application is entrywise") {
  Matrix k(2, 2), x(2, 2);
  k << 1.0, 2.0, 3.0, 4.0;
  x << 1.0, 1.0, 2.0, 0.5;
  const Matrix y = apply_multiplier(kernel_from_matrix(k), x);
  CHECK(y(1, 0).real() == 6.0);
  CHECK(y(1, 1).real() == 2.0);
}
