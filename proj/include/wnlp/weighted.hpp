#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wnlp/density.hpp"

namespace wnlp {

enum class WeightedNormKind {
  TwoSided,   // ‖dx + xd‖_p
  RightOnly,  // ‖xd‖_p
  LeftOnly,   // ‖dx‖_p
  DeltaMax,   // max(‖dx‖_p, ‖xd‖_p)
};

double weighted_norm(const Matrix& x, const Density& d, const PNorm& p, WeightedNormKind kind);

// Σ_d(x) = dx + xd and its inverse (entrywise 1/(λ_i + λ_j) in the eigenbasis).
Matrix sigma_apply(const Density& d, const Matrix& x);
Matrix sigma_inverse(const Density& d, const Matrix& y);

// Entrywise √(λ_i λ_j)/(λ_i + λ_j) in the eigenbasis.
Matrix geo_mean_map(const Density& d, const Matrix& x);

enum class QuadratureRule { Trapezoid, GaussLegendrePanels };

struct QuadratureSpec {
  double half_width = 12.0;
  int nodes = 800;  // total node count; Gauss panels use nodes/panels points each
  QuadratureRule rule = QuadratureRule::GaussLegendrePanels;
  int panels = 40;
};

struct QuadratureResult {
  Matrix value;
  double tail_bound = 0.0;  // ∫_{|t|>T} dt/(2cosh πt) ≤ e^{-πT}/π, times ‖x‖ entrywise
  bool ill_conditioned = false;
};

// ∫ e^{it ln d} x e^{-it ln d} dt/(2cosh πt) over [-T, T].
QuadratureResult geo_mean_quadrature(const Density& d, const Matrix& x,
                                     const QuadratureSpec& q = {});

enum class TriangularPart { Plus, Minus };

// T₊ keeps eigenbasis entries with j ≥ i, T₋ the strictly lower rest.
Matrix triangular_project(const Matrix& x, const Density& d, TriangularPart part);

// ‖T±(x)‖_{L_p(f(d))} divided by ‖T₊(x) f(d)‖_p for the upper part and by
// ‖f(d) T₋(x)‖_p for the lower part. Empty when T±(x) vanishes.
std::optional<double> compa_ratio(const Matrix& x, const Density& d, const ScalarFunction& f,
                                  const PNorm& p, TriangularPart part);

struct TriangularBound {
  double value = 1.0;
  Matrix witness;
  int ascent_steps = 0;
};

// Lower bound on ‖T₊‖_{S_p→S_p} at dimension n in the standard basis.
TriangularBound triangular_norm_lower(int n, const PNorm& p, int trials, std::uint64_t seed,
                                      int ascent_iterations = 200);

// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace wnlp
