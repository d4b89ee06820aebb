#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wnlp/error.hpp"
#include "wnlp/fourier.hpp"

using namespace wnlp;

TEST_CASE("closed-form transforms at fixed points") {
  const double pi = std::numbers::pi;
  CHECK(gmean_ft_closed(0.5, 0.1).real() == doctest::Approx(0.8562813269054941).epsilon(1e-12));
  CHECK(std::abs(gmean_ft_closed(0.5, 0.1).imag()) < 1e-14);
  CHECK(gmean_ft_closed(0.5, 0.0).real() == doctest::Approx(pi).epsilon(1e-13));
  const auto e = KernelFunction::exp_decay().transform_closed(0.3);
  REQUIRE(e.has_value());
  CHECK(e->real() == doctest::Approx(0.4392652548160115).epsilon(1e-13));
  CHECK(cosh_weight(0.0) == doctest::Approx(0.5));
}

TEST_CASE("gmean closed form is stable at large frequency") {
  for (double th : {0.05, 0.3, 0.5, 0.95}) {
    const auto v = gmean_ft_closed(th, 40.0);
    CHECK(std::isfinite(v.real()));
    CHECK(std::abs(v) < 1e-100);
  }
}

TEST_CASE("numeric transforms agree with closed forms") {
  std::vector<double> xis{-0.7, -0.2, 0.0, 0.15, 0.4};
  for (double th : {0.1, 0.5, 0.8}) {
    const KernelFunction f = KernelFunction::gmean(th);
    const TransformSamples s = fourier_transform_num(f, xis, transform_window(f));
    for (std::size_t k = 0; k < xis.size(); ++k) CHECK(std::abs(s.values[k] - gmean_ft_closed(th, xis[k])) < 1e-8);
  }
  const TransformSamples s = fourier_transform_num(KernelFunction::cosh_weight(), xis, 30.0);
  for (std::size_t k = 0; k < xis.size(); ++k)
    CHECK(s.values[k].real() == doctest::Approx(0.5 / std::cosh(std::numbers::pi * xis[k])).epsilon(1e-9));
}

TEST_CASE("transform windows follow the decay rate") {
  CHECK(transform_window(KernelFunction::gmean(0.05)) > transform_window(KernelFunction::gmean(0.5)));
  const KernelFunction f = KernelFunction::gmean(0.05);
  const TransformSamples s = fourier_transform_num(f, {0.0}, transform_window(f, 1e-10));
  CHECK(s.tail_bound <= 1e-10 * 1.0001);
}

TEST_CASE("L1 norms of transforms") {
  const L1Estimate half = l1_norm_ft(KernelFunction::gmean(0.5));
  CHECK(std::abs(half.value - 0.5) < 1e-8);
  CHECK(half.error < 1e-7);
  CHECK(std::abs(l1_norm_ft(KernelFunction::exp_decay()).value - 1.0) < 1e-6);
  CHECK(std::abs(l1_norm_ft(KernelFunction::cosh_weight()).value - 0.5) < 1e-8);
  // Symmetry in θ ↔ 1-θ and growth toward the endpoints.
  const double a = l1_norm_ft(KernelFunction::gmean(0.2)).value;
  const double b = l1_norm_ft(KernelFunction::gmean(0.8)).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
  CHECK(l1_norm_ft(KernelFunction::gmean(0.05)).value > a);
  CHECK(a > 0.5);
}

TEST_CASE("positive kernels have positive transforms") {
  for (double th : {0.2, 0.7}) {
    const KernelFunction f = KernelFunction::sum_pow(th);
    const TransformSamples s = fourier_transform_num(f, {0.05, 0.3, 1.0}, transform_window(f));
    for (const auto& v : s.values) CHECK(v.real() > -1e-9);
  }
}

TEST_CASE("user tables") {
  const KernelFunction hat = KernelFunction::user_table({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
  CHECK(hat(0.5) == doctest::Approx(0.5));
  CHECK(hat(2.0) == 0.0);
  // Triangle transform is sinc², whose integral is the value at the origin.
  const L1Estimate e = l1_norm_ft(hat);
  CHECK(e.value <= 1.0 + 1e-9);
  CHECK(e.upper() >= 1.0 - 1e-9);
  CHECK(e.error < 0.01);
  CHECK_THROWS_AS(KernelFunction::user_table({0.0, 0.0}, {1.0, 1.0}), Error);
}
