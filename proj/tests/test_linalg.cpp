#include <cmath>
#include <limits>

#include "doctest.h"
#include "wnlp/density.hpp"
#include "wnlp/error.hpp"
#include "wnlp/matrix.hpp"
#include "wnlp/rng.hpp"

using namespace wnlp;

namespace {

Matrix m1234() {
  Matrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  return a;
}

}  // namespace

TEST_CASE("pnorm conjugates") {
  CHECK(PNorm(1.0).conjugate().is_infinite());
  CHECK(PNorm::infinity().conjugate().value() == 1.0);
  CHECK(PNorm(4.0).conjugate().value() == doctest::Approx(4.0 / 3.0));
  CHECK(PNorm(2.0).conjugate().value() == 2.0);
  CHECK(PNorm::infinity().reciprocal() == 0.0);
  CHECK_THROWS_AS(PNorm(0.5), Error);
}

TEST_CASE("schatten norms of a fixed 2x2") {
  const Matrix a = m1234();
  CHECK(schatten_norm(a, PNorm(1.0)) == doctest::Approx(std::sqrt(34.0)).epsilon(1e-14));
  CHECK(schatten_norm(a, PNorm(2.0)) == doctest::Approx(std::sqrt(30.0)).epsilon(1e-14));
  CHECK(schatten_norm(a, PNorm::infinity()) == doctest::Approx(5.4649857042190427).epsilon(1e-14));
  CHECK(schatten_norm(a, PNorm(4.0)) == doctest::Approx(5.465013178953566).epsilon(1e-12));
}

TEST_CASE("schatten norms: monotone in p, unitarily invariant, duality") {
  for (int t = 0; t < 20; ++t) {
    CounterRng rng(11, t);
    const int n = rng.uniform_int(1, 7);
    const Matrix x = gaussian_matrix(n, rng);
    const double ps[] = {1.0, 1.5, 2.0, 3.0, 8.0};
    double prev = std::numeric_limits<double>::infinity();
    for (double p : ps) {
      const double v = schatten_norm(x, PNorm(p));
      CHECK(v <= prev * (1 + 1e-12));
      prev = v;
      const Matrix u = random_unitary(n, rng), w = random_unitary(n, rng);
      CHECK(schatten_norm(u * x * w, PNorm(p)) == doctest::Approx(v).epsilon(1e-10));
      // Norming functional: unit dual norm, pairing equals the norm.
      const Matrix y = norming_functional(x, PNorm(p));
      CHECK(schatten_norm(y, PNorm(p).conjugate()) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(std::abs(trace_pairing(x, y)) == doctest::Approx(v).epsilon(1e-10));
    }
    CHECK(schatten_norm(x, PNorm::infinity()) <= prev * (1 + 1e-12));
  }
}

TEST_CASE("eigh rejects non-hermitian input") {
  Matrix a = m1234();
  CHECK_THROWS_AS(eigh(a), Error);
  a(1, 0) = 2.0;
  const auto e = eigh(a);
  CHECK(e.values(0) <= e.values(1));
}

TEST_CASE("rng streams are deterministic and distinct") {
  CounterRng a(5, 3), b(5, 3), c(5, 4), d(6, 3);
  for (int k = 0; k < 10; ++k) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(c.uniform() != d.uniform());
  CounterRng e(5, 3);
  CHECK(e.uniform() != c.uniform());
}

TEST_CASE("gaussian draws have unit variance") {
  CounterRng rng(1, 1);
  double s = 0.0, s2 = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double v = rng.normal();
    s += v;
    s2 += v * v;
  }
  CHECK(std::abs(s / n) < 0.03);
  CHECK(std::abs(s2 / n - 1.0) < 0.05);
}

TEST_CASE("density construction and calculus") {
  RealVector v(3);
  v << 4.0, 1.0, 2.0;
  const Density d = Density::diagonal(v);
  CHECK(d.eigenvalues()(0) == 1.0);
  CHECK(d.eigenvalues()(2) == 4.0);
  CHECK((d.matrix() - v.cast<cplx>().asDiagonal().toDenseMatrix()).norm() < 1e-14);
  CHECK(d.condition() == 4.0);

  const Density sq = apply_calculus(d, ScalarFunction::power(0.5));
  CHECK(sq.eigenvalues()(2) == doctest::Approx(2.0));
  CHECK((sq.matrix() * sq.matrix() - d.matrix()).norm() < 1e-12);
  const Density inv = d.inverse();
  CHECK((inv.matrix() * d.matrix() - Matrix::Identity(3, 3)).norm() < 1e-12);

  CHECK_THROWS_AS(apply_calculus(d, ScalarFunction::power(-1.0)), Error);
  CHECK_THROWS_AS(apply_calculus(d, ScalarFunction::table({3.0, 2.0, 1.0})), Error);
  CHECK_THROWS_AS(Density::diagonal(RealVector::Constant(2, -1.0)), Error);

  Matrix h = m1234();
  CHECK_THROWS_AS(Density::from_matrix(h), Error);
}

TEST_CASE("random densities pin the requested condition number") {
  CounterRng rng(3, 0);
  for (int t = 0; t < 10; ++t) {
    const Density d = random_density(5, 100.0, rng);
    CHECK(d.condition() == doctest::Approx(100.0).epsilon(1e-10));
    const Matrix m = d.matrix();
    CHECK((m - m.adjoint()).norm() < 1e-10);
  }
}
