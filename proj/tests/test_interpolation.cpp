#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wnlp/error.hpp"
#include "wnlp/interpolation.hpp"
#include "wnlp/rng.hpp"

using namespace wnlp;

namespace {

SolverParams quick_params() {
  SolverParams sp;
  sp.iterations = 150;
  sp.optimization_grid = 32;
  sp.certification_grid = 128;
  return sp;
}

}  // namespace

TEST_CASE("strip to disk map") {
  const double pi = std::numbers::pi;
  for (double th : {0.25, 0.5, 0.8}) {
    CHECK(std::abs(AnalyticFamily::disk_variable(th, cplx(th, 0.0))) < 1e-14);
    for (double y : {-3.0, -0.4, 0.0, 1.2}) {
      CHECK(std::abs(AnalyticFamily::disk_variable(th, cplx(0.0, y))) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(AnalyticFamily::disk_variable(th, cplx(1.0, y))) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(AnalyticFamily::disk_variable(th, cplx(0.5 * th, y))) < 1.0);
    }
    for (double phi : {0.3, 1.0, 2.0, 4.0, 6.0}) {
      const cplx z = AnalyticFamily::strip_point(th, phi);
      CHECK(std::abs(AnalyticFamily::disk_variable(th, z) - std::polar(1.0, phi)) < 1e-10);
      CHECK(z.real() == doctest::Approx(phi < 2 * pi * th ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("analytic family evaluates to its constant term at theta") {
  CounterRng rng(2, 2);
  const int n = 3;
  std::vector<Matrix> b{gaussian_matrix(n, rng), gaussian_matrix(n, rng)};
  const RealVector a = RealVector::Random(n), c = RealVector::Random(n);
  const Matrix l = random_unitary(n, rng), r = random_unitary(n, rng);
  const AnalyticFamily f(0.4, b, a, c, l, r);
  CHECK((f.at(cplx(0.4, 0.0)) - l * b[0] * r.adjoint()).norm() < 1e-12);
  CHECK(f.degree() == 1);
}

TEST_CASE("unweighted interpolation reproduces schatten norms") {
  for (int t = 0; t < 3; ++t) {
    CounterRng rng(12, t);
    const int n = 3;
    const Matrix x = gaussian_matrix(n, rng);
    const double th = 0.5;
    const FrameProblem prob = FrameProblem::unweighted(n, PNorm(1.0), PNorm::infinity(), th);
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    FrameProblem framed = prob;
    framed.frame_left = svd.matrixU();
    framed.frame_right = svd.matrixV();
    const UpperResult up = solve_frame(framed.to_frame(x), framed, quick_params());
    const double exact = schatten_norm(x, PNorm(2.0));
    CHECK(up.value >= exact * (1.0 - 1e-9));
    CHECK(up.value <= exact * 1.05);
  }
}

TEST_CASE("dimension one is exact") {
  CounterRng rng(13, 0);
  const Density d = Density::diagonal(RealVector::Constant(1, 3.0));
  const Couple c(d, ScalarFunction::power(2.0), ScalarFunction::power(1.0), PNorm(2.0), PNorm::infinity(), 0.5);
  const Matrix x = gaussian_matrix(1, rng);
  CHECK(c.p().value() == doctest::Approx(4.0));
  const SandwichReport r = sandwich_verify(x, c, {}, quick_params());
  CHECK(r.passed);
  CHECK(r.upper_ratio <= 1.001);
  CHECK(r.lower_ratio <= 1.001);
  CHECK(r.lower <= r.upper * (1 + 1e-9));
}

TEST_CASE("commuting couples stay near the exact weighted norm") {
  CounterRng rng(14, 0);
  RealVector v(3);
  v << 0.5, 2.0, 7.0;
  const Density d = Density::diagonal(v);
  const Couple c(d, ScalarFunction::power(1.0), ScalarFunction::power(0.0), PNorm(1.0), PNorm(2.0), 0.25);
  Matrix x = Matrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) x(i, i) = rng.complex_normal();
  const SandwichReport r = sandwich_verify(x, c, {}, quick_params());
  CHECK(r.passed);
  CHECK(r.upper_ratio <= 1.1);
  CHECK(r.lower_ratio <= 1.1);
}

TEST_CASE("random sandwich brackets are ordered and finite") {
  CounterRng rng(15, 0);
  RealVector spectrum(3);
  spectrum << 1.0, 3.0, 8.0;
  const Density d(spectrum, random_unitary(3, rng));
  const Couple c(d, ScalarFunction::power(2.0), ScalarFunction::power(1.0), PNorm(1.0), PNorm(2.0), 0.5);
  const Matrix x = gaussian_matrix(3, rng);
  const SandwichReport r = sandwich_verify(x, c, {}, quick_params());
  CHECK(std::isfinite(r.upper));
  CHECK(r.lower > 0.0);
  CHECK(r.lower <= r.upper * (1 + 1e-9));
  CHECK(r.proof_upper >= r.lower);
  CHECK(r.passed);
  const ProofFamilyResult pf = proof_family(x, c, quick_params());
  CHECK(pf.bound == doctest::Approx(pf.bound_plus + pf.bound_minus));
}

TEST_CASE("boundary objective inflation is nonnegative") {
  CounterRng rng(16, 0);
  const Density d = random_density(3, 10.0, rng);
  const Couple c(d, ScalarFunction::power(1.0), ScalarFunction::power(0.0), PNorm(1.0), PNorm(2.0), 0.5);
  const UpperResult up = interp_norm_upper(gaussian_matrix(3, rng), c, quick_params());
  const BoundaryEvaluation e = boundary_objective(up.family, c, 128);
  CHECK(e.value >= e.sampled_max);
  CHECK(e.inflation0 >= 0.0);
  CHECK(e.inflation1 >= 0.0);
  CHECK_FALSE(up.ladder.empty());
}

TEST_CASE("sandwich budget") {
  SandwichBudget b;
  CHECK(b.evaluate(PNorm(4.0)) == doctest::Approx(128.0));
  CHECK(b.evaluate(PNorm(2.0)) == doctest::Approx(32.0));
  CHECK(b.evaluate(PNorm(1.5)) == doctest::Approx(48.0));
}

TEST_CASE("triangular interpolation check") {
  CounterRng rng(17, 0);
  Matrix x = gaussian_matrix(3, rng).triangularView<Eigen::Upper>();
  const TriangularInterpResult r = triangular_interp_check(x, PNorm(1.0), PNorm(2.0), 0.5, quick_params());
  CHECK(r.norm == doctest::Approx(schatten_norm(x, PNorm(4.0 / 3.0))));
  CHECK(r.upper_ratio >= 1.0 - 1e-9);
  CHECK(std::isfinite(r.lower_ratio));
  CHECK_THROWS_AS(triangular_interp_check(gaussian_matrix(3, rng), PNorm(1.0), PNorm(2.0), 0.5, quick_params()),
                  Error);
}

TEST_CASE("couple validation") {
  const Density d = Density::scalar(2, 1.0);
  CHECK_THROWS_AS(Couple(d, ScalarFunction::power(1.0), ScalarFunction::power(0.0), PNorm(1.0), PNorm(2.0), 1.5),
                  Error);
}
