#pragma once

#include <array>

#include "darboux/scalar_field.hpp"

namespace darboux {

struct SymMat2 {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;
  double det() const { return a11 * a22 - a12 * a12; }
};

// Connection coefficients at a point, indexed gamma[l][i][j] (symmetric in i, j).
struct ChristoffelAt {
  double gamma[2][2][2] = {};
};

// Contravariant cofactor tensor of the covariant Hessian, divided by det g.
struct BTensorAt {
  double b11 = 0.0, b12 = 0.0, b22 = 0.0;
};

// Symmetric positive-definite 2x2 metric field. Index convention: x^1 = x,
// x^2 = y; raised indices always via the inverse matrix.
class Metric2 {
 public:
  Metric2() = default;
  Metric2(ScalarField g11, ScalarField g12, ScalarField g22);

  const Rect& domain() const { return domain_; }
  const ScalarField& g11() const { return g11_; }
  const ScalarField& g12() const { return g12_; }
  const ScalarField& g22() const { return g22_; }

  bool valid() const { return g11_.valid(); }

  // Point evaluation bundle: metric, inverse, determinant and Christoffel
  // jets. gamma carries degree gamma_deg, the metric jets one more.
  struct Eval {
    int gamma_deg = 0;
    Jet g11, g12, g22;
    Jet det, sqrt_det;
    Jet inv11, inv12, inv22;
    Jet gamma[2][2][2];  // [l][i][j]
  };
  Eval eval(Point p, int gamma_deg) const;

  SymMat2 values(Point p) const;

  // Largest degree usable for curvature jets (metric degree minus 2).
  int max_curvature_degree() const;

  static Metric2 euclidean(Rect domain);

 private:
  ScalarField g11_, g12_, g22_;
  Rect domain_;
};

ChristoffelAt christoffel(const Metric2& g, Point p);

// K = R_1212 / det g via the Riemann tensor route.
double gaussian_curvature(const Metric2& g, Point p);
Jet gaussian_curvature_jet(const Metric2& g, Point p, int deg);

// Independent cross-check of the curvature (Brioschi formula).
double gaussian_curvature_brioschi(const Metric2& g, Point p);

// K as an analytic field over the metric's domain.
ScalarField curvature_field(const Metric2& g);

// nabla_ij z = d_ij z - Gamma^l_ij d_l z.
SymMat2 covariant_hessian(const Metric2& g, const ScalarField& z, Point p);

// |grad_g z|^2 = g^{ij} d_i z d_j z.
double grad_norm_sq(const Metric2& g, const ScalarField& z, Point p);

BTensorAt b_tensor(const Metric2& g, const ScalarField& z, Point p);

// det(nabla_ij z) - K |g| (1 - |grad_g z|^2); zero iff z solves the Darboux
// equation at p for the given curvature field.
double darboux_residual(const Metric2& g, const ScalarField& z, const ScalarField& K, Point p);

// (nabla_i b^{i1}, nabla_i b^{i2}) straight from the tensor divergence
// formula; no curvature shortcut.
std::array<double, 2> b_divergence(const Metric2& g, const ScalarField& z, Point p);

// nabla_i b^{ij} + K z^j with z^j = g^{ji} d_i z; vanishes for every smooth z.
std::array<double, 2> divergence_identity_residual(const Metric2& g, const ScalarField& z,
                                                   Point p);

// d_2 Gamma^i_12 - d_1 Gamma^i_22 + Gamma^j_12 Gamma^i_j2 - Gamma^j_22 Gamma^i_j1
// + g^{i1} |g| K, for i = 1, 2.
std::array<double, 2> chi_identity_residual(const Metric2& g, Point p);

// Gamma^i_ij - |g|^{-1/2} d_j |g|^{1/2}, for j = 1, 2.
std::array<double, 2> christoffel_trace_residual(const Metric2& g, Point p);

// b^{ij} nabla_ij z - 2 |g|^{-1} det(nabla_ij z); identically zero.
double b_contraction_residual(const Metric2& g, const ScalarField& z, Point p);

}  // namespace darboux
