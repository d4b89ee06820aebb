#include "wnlp/weighted.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wnlp/error.hpp"
#include "wnlp/fourier.hpp"
#include "wnlp/rng.hpp"

namespace wnlp {

namespace {

void check_dims(const Matrix& x, const Density& d, const char* what) {
  require_square(x, what);
  if (x.rows() != d.dim()) fail(ErrorCode::DimensionMismatch, std::string(what) + ": x and d differ in size");
}

// Entrywise kernel K_ij = g(λ_i, λ_j) applied in the eigenbasis of d.
template <class G>
Matrix eigen_entrywise(const Density& d, const Matrix& x, G g) {
  Matrix xt = d.to_eigenbasis(x);
  const RealVector& l = d.eigenvalues();
  for (int j = 0; j < d.dim(); ++j)
    for (int i = 0; i < d.dim(); ++i) xt(i, j) *= g(l(i), l(j));
  return d.from_eigenbasis(xt);
}

template <class M>
M norming_functional_t(const M& x, const PNorm& p) {
  using Svd = Eigen::BDCSVD<M>;
  Svd svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  M out = M::Zero(x.rows(), x.cols());
  if (s.size() == 0 || s(0) == 0.0) return out;
  if (p.is_infinite()) return svd.matrixU().col(0) * svd.matrixV().col(0).adjoint();
  const double q = p.value();
  if (q == 1.0) {
    for (Eigen::Index k = 0; k < s.size(); ++k)
      if (s(k) > s(0) * 1e-14) out += svd.matrixU().col(k) * svd.matrixV().col(k).adjoint();
    return out;
  }
  const double norm = lp_norm(s, p);
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > 0.0) out += std::pow(s(k) / norm, q - 1.0) * (svd.matrixU().col(k) * svd.matrixV().col(k).adjoint());
  return out;
}

template <class M>
double schatten_t(const M& x, const PNorm& p) {
  if (!p.is_infinite() && p.value() == 2.0) return x.norm();
  return lp_norm(Eigen::BDCSVD<M>(x).singularValues(), p);
}

template <class M>
M upper_part(const M& x) {
  M y = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = j + 1; i < x.rows(); ++i) y(i, j) = 0.0;
  return y;
}

// Power-type ascent for ‖T₊‖_{p→p}: each step does not decrease the ratio.
template <class M>
double triangular_ascent(M& x, const PNorm& p, int iterations, int& steps) {
  const PNorm pc = p.conjugate();
  double nx = schatten_t(x, p);
  if (nx == 0.0) return 0.0;
  x /= nx;
  double best = schatten_t(upper_part(x), p);
  M best_x = x;
  int stall = 0;
  for (int it = 0; it < iterations; ++it) {
    const M w = norming_functional_t<M>(upper_part(x), p);
    const M z = upper_part(w);
    M next = norming_functional_t<M>(z, pc);
    const double nn = schatten_t(next, p);
    if (nn == 0.0) break;
    next /= nn;
    const double r = schatten_t(upper_part(next), p);
    ++steps;
    x = next;
    if (r > best * (1.0 + 1e-13)) {
      best = r;
      best_x = x;
      stall = 0;
    } else if (++stall >= 5) {
      break;
    }
  }
  x = best_x;
  return best;
}

}  // namespace

double weighted_norm(const Matrix& x, const Density& d, const PNorm& p, WeightedNormKind kind) {
  check_dims(x, d, "weighted_norm");
  const Matrix dm = d.matrix();
  switch (kind) {
    case WeightedNormKind::TwoSided:
      return schatten_norm(sigma_apply(d, x), p);
    case WeightedNormKind::RightOnly:
      return schatten_norm(x * dm, p);
    case WeightedNormKind::LeftOnly:
      return schatten_norm(dm * x, p);
    case WeightedNormKind::DeltaMax:
      return std::max(schatten_norm(dm * x, p), schatten_norm(x * dm, p));
  }
  return 0.0;
}

Matrix sigma_apply(const Density& d, const Matrix& x) {
  check_dims(x, d, "sigma_apply");
  return eigen_entrywise(d, x, [](double a, double b) { return a + b; });
}

Matrix sigma_inverse(const Density& d, const Matrix& y) {
  check_dims(y, d, "sigma_inverse");
  return eigen_entrywise(d, y, [](double a, double b) { return 1.0 / (a + b); });
}

Matrix geo_mean_map(const Density& d, const Matrix& x) {
  check_dims(x, d, "geo_mean_map");
  return eigen_entrywise(d, x, [](double a, double b) { return std::sqrt(a * b) / (a + b); });
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  require(n >= 1, "gauss_legendre: need at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureResult geo_mean_quadrature(const Density& d, const Matrix& x, const QuadratureSpec& q) {
  check_dims(x, d, "geo_mean_quadrature");
  require(q.half_width > 0.0 && std::isfinite(q.half_width), "quadrature half-width must be positive");
  require(q.nodes >= 2, "quadrature needs at least two nodes");
  std::vector<double> ts, ws;
  const double T = q.half_width;
  if (q.rule == QuadratureRule::Trapezoid) {
    const int m = q.nodes;
    const double h = 2.0 * T / (m - 1);
    for (int k = 0; k < m; ++k) {
      ts.push_back(-T + k * h);
      ws.push_back((k == 0 || k == m - 1) ? h / 2.0 : h);
    }
  } else {
    require(q.panels >= 1, "quadrature needs at least one panel");
    const int order = std::max(2, q.nodes / q.panels);
    std::vector<double> gx, gw;
    gauss_legendre(order, gx, gw);
    const double h = 2.0 * T / q.panels;
    for (int k = 0; k < q.panels; ++k) {
      const double mid = -T + (k + 0.5) * h;
      for (int j = 0; j < order; ++j) {
        ts.push_back(mid + 0.5 * h * gx[j]);
        ws.push_back(0.5 * h * gw[j]);
      }
    }
  }
  // u_t(x) = e^{it ln d} x e^{-it ln d} is a phase e^{it(ln λ_i - ln λ_j)} per eigenbasis entry.
  const int n = d.dim();
  const Matrix xt = d.to_eigenbasis(x);
  RealVector logs = d.eigenvalues().array().log();
  Matrix acc = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double weight = ws[k] * cosh_weight(ts[k]);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) acc(i, j) += weight * std::polar(1.0, ts[k] * (logs(i) - logs(j))) * xt(i, j);
  }
  QuadratureResult out;
  out.value = d.from_eigenbasis(acc);
  out.tail_bound = std::exp(-std::numbers::pi * T) / std::numbers::pi;
  out.ill_conditioned = d.flagged();
  return out;
}

Matrix triangular_project(const Matrix& x, const Density& d, TriangularPart part) {
  check_dims(x, d, "triangular_project");
  Matrix xt = d.to_eigenbasis(x);
  const int n = d.dim();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const bool upper = j >= i;
      if (upper != (part == TriangularPart::Plus)) xt(i, j) = 0.0;
    }
  return d.from_eigenbasis(xt);
}

std::optional<double> compa_ratio(const Matrix& x, const Density& d, const ScalarFunction& f,
                                  const PNorm& p, TriangularPart part) {
  check_dims(x, d, "compa_ratio");
  const Density fd = apply_calculus(d, f);
  const RealVector& fv = fd.eigenvalues();
  const int n = d.dim();
  Matrix t = d.to_eigenbasis(x);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if ((j >= i) != (part == TriangularPart::Plus)) t(i, j) = 0.0;
  if (t.norm() <= 1e-14 * x.norm() || t.norm() == 0.0) return std::nullopt;
  Matrix num = t, den = t;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      num(i, j) *= fv(i) + fv(j);
      den(i, j) *= part == TriangularPart::Plus ? fv(j) : fv(i);
    }
  const double dn = schatten_norm(den, p);
  if (dn == 0.0) return std::nullopt;
  return schatten_norm(num, p) / dn;
}

TriangularBound triangular_norm_lower(int n, const PNorm& p, int trials, std::uint64_t seed,
                                      int ascent_iterations) {
  require(n >= 1, "triangular_norm_lower: n must be positive");
  TriangularBound out;
  out.witness = Matrix::Identity(n, n);
  out.value = 1.0;
  if (n == 1) return out;

  auto consider = [&](const Matrix& x) {
    const double nx = schatten_norm(x, p);
    if (nx == 0.0) return;
    const double r = schatten_norm(upper_part(x), p) / nx;
    if (r > out.value) {
      out.value = r;
      out.witness = x / nx;
    }
  };

  RealMatrix hilbert(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) hilbert(i, j) = 1.0 / (i - j + 0.5);
  consider(Matrix::Ones(n, n));
  consider(hilbert.cast<cplx>());

  CounterRng rng(seed, 0x7472);
  Matrix best_random;
  double best_random_ratio = -1.0;
  for (int t = 0; t < trials; ++t) {
    const Matrix g = gaussian_matrix(n, rng);
    const double r = schatten_norm(upper_part(g), p) / schatten_norm(g, p);
    if (r > best_random_ratio) {
      best_random_ratio = r;
      best_random = g;
    }
    consider(g);
  }

  if (ascent_iterations > 0) {
    RealMatrix h = hilbert;
    const double rh = triangular_ascent(h, p, ascent_iterations, out.ascent_steps);
    if (rh > out.value) {
      out.value = rh;
      out.witness = h.cast<cplx>();
    }
    if (best_random_ratio > 0.0) {
      Matrix g = best_random;
      const double rg = triangular_ascent(g, p, std::max(1, ascent_iterations / 4), out.ascent_steps);
      if (rg > out.value) {
        out.value = rg;
        out.witness = g;
      }
    }
  }
  return out;
}

}  // namespace wnlp
