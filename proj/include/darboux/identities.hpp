#pragma once

#include "darboux/metric.hpp"
#include "darboux/quadrature.hpp"

namespace darboux {

// Interior integral of K (2 - 3 |grad_g z|^2) with the metric area element.
double curvature_interior_integral(const Metric2& g, const ScalarField& z, const ScalarField& K,
                                   Rect square, int order = kDefaultQuadOrder,
                                   int cells = kDefaultQuadCells);

// Boundary flux with Euclidean outward normal and length element:
// |g|^{-1/2} [(nabla_1 z nabla_22 z - nabla_2 z nabla_12 z) n1
//           + (nabla_2 z nabla_11 z - nabla_1 z nabla_12 z) n2].
// flip_normal reverses the traversal orientation (sign audit).
double hessian_boundary_flux(const Metric2& g, const ScalarField& z, Rect square,
                             int order = kDefaultQuadOrder, int cells = kDefaultQuadCells,
                             bool flip_normal = false);

// Integration-by-parts identity residual:
//   int 2|g|^{-1} det(nabla^2 z) dw - int K |grad_g z|^2 dw - flux.
// Vanishes for every sufficiently smooth z, Darboux solution or not.
double parts_identity_residual(const Metric2& g, const ScalarField& z, Rect square,
                               int order = kDefaultQuadOrder, int cells = kDefaultQuadCells);

// Interior-equals-flux identity for Darboux solutions. Refuses (throws
// PreconditionError with the measured residual) unless z solves the Darboux
// equation on the square to gate_tol.
double darboux_flux_residual(const Metric2& g, const ScalarField& z, const ScalarField& K,
                             Rect square, double gate_tol = 1e-6, int order = kDefaultQuadOrder,
                             int cells = kDefaultQuadCells);

// Dense scan of |nabla_22 z| on the vertical sides and |nabla_11 z| on the
// horizontal sides of a square, with golden-section refinement at the coarse
// argmax.
struct BoundaryScanResult {
  double max_vertical = 0.0;    // |nabla_22 z| over left/right sides
  double max_horizontal = 0.0;  // |nabla_11 z| over top/bottom sides
  double overall = 0.0;
  Point argmax;
  Side side = Side::Right;
};
BoundaryScanResult boundary_hessian_scan(const Metric2& g, const ScalarField& z, Rect square,
                                         int samples_per_side = 512);

// Dense-grid minimum of 2 - 3 |grad_g z|^2 over the square.
double gradient_smallness_min(const Metric2& g, const ScalarField& z, Rect square,
                              int samples = 257);

// Per-check record for the integral identities, serialized as
// {check, square, value_lhs, value_rhs, residual, tolerance, pass}.
struct IdentityCheck {
  std::string check;
  Rect square;
  double value_lhs = 0.0;
  double value_rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string to_json() const;
};

IdentityCheck parts_identity_check(const Metric2& g, const ScalarField& z, Rect square,
                                   double tolerance, int order = kDefaultQuadOrder,
                                   int cells = kDefaultQuadCells);

IdentityCheck darboux_flux_check(const Metric2& g, const ScalarField& z, const ScalarField& K,
                                 Rect square, double tolerance, int order = kDefaultQuadOrder,
                                 int cells = kDefaultQuadCells);

}  // namespace darboux
