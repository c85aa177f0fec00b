#pragma once

#include <optional>
#include <string>
#include <vector>

#include "darboux/metric.hpp"

namespace darboux {

// Surface patch in R^3 given by three coordinate fields on a common rectangle.
struct Embedding3 {
  ScalarField z1, z2, z3;
  const Rect& domain() const { return z3.domain(); }
};

// g_ij = sum_a d_i z_a d_j z_a; throws DegenerateMetric if the immersion
// condition fails where queried.
Metric2 induced_metric(const Embedding3& f);

// (nu . e3)^2 computed two ways: from the unit normal via the cross product,
// and as 1 - g^{ij} d_i z3 d_j z3. The difference is the Appendix identity.
struct NormalComponentSq {
  double via_cross = 0.0;
  double via_metric = 0.0;
  double difference() const { return via_cross - via_metric; }
};
NormalComponentSq normal_component_sq(const Embedding3& f, Point p);

// Max |darboux_residual(g, z3, K, .)| over a sample grid, with g induced and
// K = gaussian_curvature(g). Zero (to tolerance) for every embedding.
double max_darboux_residual(const Embedding3& f, int samples = 21);

// Composes with the rotation taking the unit normal at p to (0,0,1); the new
// third component has vanishing gradient at p and the induced metric is
// unchanged.
Embedding3 rigid_normalize(const Embedding3& f, Point p);

// h_ij = g_ij - d_i z d_j z.
Metric2 metric_minus_dz2(const Metric2& g, const ScalarField& z);

// Max |gaussian_curvature(g - dz^2)| over a sample grid. Requires
// |grad_g z| < 1 on the domain and h positive definite.
double flatness_residual(const Metric2& g, const ScalarField& z, int samples = 21);

// Cartesian coordinates for a flat metric: fields (z1, z2) with
// dz1^2 + dz2^2 = h, gauged so both vanish at base and the first coframe leg
// is along dx there. path_dependence records the largest discrepancy between
// the two axis-aligned integration orders over probe points.
struct FlatChart {
  ScalarField z1, z2;
  double path_dependence = 0.0;
};
FlatChart develop_flat(const Metric2& h, Point base, double flatness_tol = 1e-5,
                       double path_tol = 1e-5);

// Named analytic fixtures: plane, sphere, saddle, saddle2, cosmetric.
struct Fixture {
  std::string name;
  Rect domain;
  Metric2 metric;
  ScalarField curvature;  // closed-form K of the metric
  std::optional<Embedding3> embedding;
  std::optional<ScalarField> z;  // third embedding component, when present
};

Fixture make_fixture(const std::string& name);
const std::vector<std::string>& fixture_names();

}  // namespace darboux
