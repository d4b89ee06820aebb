#include <cmath>

#include "doctest.h"
#include "wnlp/error.hpp"
#include "wnlp/rng.hpp"
#include "wnlp/weighted.hpp"

using namespace wnlp;

TEST_CASE("geo mean map on a diagonal density") {
  RealVector v(2);
  v << 1.0, 4.0;
  const Density d = Density::diagonal(v);
  const Matrix g = geo_mean_map(d, Matrix::Ones(2, 2));
  CHECK(g(0, 0).real() == doctest::Approx(0.5));
  CHECK(g(1, 1).real() == doctest::Approx(0.5));
  CHECK(g(0, 1).real() == doctest::Approx(0.4));
  CHECK(g(1, 0).real() == doctest::Approx(0.4));
  const Matrix s = sigma_inverse(d, Matrix::Ones(2, 2));
  CHECK(s(0, 1).real() == doctest::Approx(0.2));
  CHECK(s(1, 1).real() == doctest::Approx(0.125));
}

TEST_CASE("sigma and its inverse round trip") {
  for (int t = 0; t < 10; ++t) {
    CounterRng rng(21, t);
    const int n = rng.uniform_int(1, 6);
    const Density d = random_density(n, 50.0, rng);
    const Matrix x = gaussian_matrix(n, rng);
    CHECK((sigma_inverse(d, sigma_apply(d, x)) - x).norm() < 1e-10 * x.norm());
    CHECK((sigma_apply(d, x) - (d.matrix() * x + x * d.matrix())).norm() < 1e-10 * x.norm() * 50.0);
  }
}

TEST_CASE("weighted norm kinds") {
  RealVector v(2);
  v << 1.0, 3.0;
  const Density d = Density::diagonal(v);
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = 1.0;
  CHECK(weighted_norm(x, d, PNorm(2.0), WeightedNormKind::TwoSided) == doctest::Approx(4.0));
  CHECK(weighted_norm(x, d, PNorm(2.0), WeightedNormKind::RightOnly) == doctest::Approx(3.0));
  CHECK(weighted_norm(x, d, PNorm(2.0), WeightedNormKind::LeftOnly) == doctest::Approx(1.0));
  CHECK(weighted_norm(x, d, PNorm(2.0), WeightedNormKind::DeltaMax) == doctest::Approx(3.0));
}

TEST_CASE("weighted norms with scalar density reduce to scaled schatten norms") {
  CounterRng rng(4, 4);
  const Matrix x = gaussian_matrix(4, rng);
  const Density d = Density::scalar(4, 2.5);
  for (double p : {1.0, 2.0, 5.0}) {
    CHECK(weighted_norm(x, d, PNorm(p), WeightedNormKind::TwoSided) ==
          doctest::Approx(5.0 * schatten_norm(x, PNorm(p))).epsilon(1e-12));
  }
}

TEST_CASE("geo mean quadrature matches the closed form") {
  for (int t = 0; t < 8; ++t) {
    CounterRng rng(8, t);
    const int n = rng.uniform_int(1, 6);
    const Density d = random_density(n, 1e3, rng);
    const Matrix x = gaussian_matrix(n, rng);
    const QuadratureResult q = geo_mean_quadrature(d, x);
    const Matrix g = geo_mean_map(d, x);
    CHECK((q.value - g).norm() <= 1e-6 * g.norm());
    CHECK(q.tail_bound < 1e-15);
    for (double p : {1.0, 2.0, 4.0}) CHECK(schatten_norm(g, PNorm(p)) <= 0.5 * schatten_norm(x, PNorm(p)) + 1e-9);
  }
}

TEST_CASE("triangular projections split x") {
  CounterRng rng(9, 9);
  const Density d = random_density(5, 10.0, rng);
  const Matrix x = gaussian_matrix(5, rng);
  const Matrix up = triangular_project(x, d, TriangularPart::Plus);
  const Matrix lo = triangular_project(x, d, TriangularPart::Minus);
  CHECK((up + lo - x).norm() < 1e-12 * x.norm());
  const Matrix ut = d.to_eigenbasis(up);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < i; ++j) CHECK(std::abs(ut(i, j)) < 1e-12);
}

TEST_CASE("compa ratio: fixed instance and random bracket") {
  RealVector v(2);
  v << 1.0, 2.0;
  const Density d = Density::diagonal(v);
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = 1.0;
  // (f_i + f_j)/f_j with f = identity on (1, 2).
  const auto r = compa_ratio(x, d, ScalarFunction::identity(), PNorm(2.0), TriangularPart::Plus);
  REQUIRE(r.has_value());
  CHECK(*r == doctest::Approx(1.5));
  CHECK_FALSE(compa_ratio(x, d, ScalarFunction::identity(), PNorm(2.0), TriangularPart::Minus).has_value());

  for (int t = 0; t < 100; ++t) {
    CounterRng rng(10, t);
    const int n = rng.uniform_int(1, 8);
    const Density dd = random_density(n, 1e3, rng);
    const Matrix xx = gaussian_matrix(n, rng);
    const double p = t % 3 == 0 ? 1.0 : (t % 3 == 1 ? 2.0 : std::numeric_limits<double>::infinity());
    const TriangularPart part = t % 2 ? TriangularPart::Plus : TriangularPart::Minus;
    const auto rr = compa_ratio(xx, dd, ScalarFunction::power(1.0 + t % 3), PNorm(p), part);
    if (!rr) continue;
    CHECK(*rr >= 2.0 / 3.0 - 1e-9);
    CHECK(*rr <= 2.0 + 1e-9);
  }
}

TEST_CASE("triangular truncation lower bounds") {
  const TriangularBound two = triangular_norm_lower(2, PNorm::infinity(), 2, 1);
  CHECK(two.value <= 2.0 / std::sqrt(3.0) + 1e-9);
  CHECK(two.value >= 1.1);
  CHECK(triangular_norm_lower(6, PNorm(2.0), 1, 1, 10).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gauss legendre exactness") {
  std::vector<double> x, w;
  gauss_legendre(2, x, w);
  CHECK(std::abs(x[0]) == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(w[0] == doctest::Approx(1.0));
  gauss_legendre(7, x, w);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * std::pow(x[k], 12);
  CHECK(s == doctest::Approx(2.0 / 13.0).epsilon(1e-13));
}
