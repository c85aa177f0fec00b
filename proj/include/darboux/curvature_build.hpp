#pragma once

#include <string>
#include <vector>

#include "darboux/metric.hpp"

namespace darboux {

// Family of nested axis-aligned squares along the positive x-axis: inner
// square n and outer square n are centered at (1/n, 0) with side widths
// 1/(2n(n+1)) and 1/(n(n+1)).
struct SquareFamily {
  int n_max = 8;

  static double center_x(int n) { return 1.0 / n; }
  static double inner_half_width(int n) { return 1.0 / (4.0 * n * (n + 1.0)); }
  static double outer_half_width(int n) { return 1.0 / (2.0 * n * (n + 1.0)); }

  Rect inner_square(int n) const {
    return Rect::square({center_x(n), 0.0}, inner_half_width(n));
  }
  Rect outer_square(int n) const {
    return Rect::square({center_x(n), 0.0}, outer_half_width(n));
  }
};

// Exact (integer arithmetic) check that the closed outer squares are
// pairwise disjoint for all n <= n_max.
bool squares_disjoint_exact(long long n_max);

// Default bump: phi(x,y) = exp(-1/(1-x^2)) exp(-1/(1-y^2)) on (-1,1)^2,
// extended by 0; positive inside, vanishes to infinite order at the edge.
struct BumpProfile {
  static double value(double x, double y);
  static Jet eval(const Jet& x, const Jet& y);
  // B_k = 1.2 * sup_{|alpha|=k} |d^alpha phi| for k = 0..4 (dense sampling).
  static const std::array<double, 5>& derivative_bounds();
};

struct GammaSchedule {
  std::vector<double> gamma;  // gamma[n-1] for n = 1..n_max

  // gamma_n = 2^-n / max(1, (4n(n+1))^4 B_4): forces geometric decay of all
  // scaled derivatives up to order 4.
  static GammaSchedule paper_default(int n_max);
  double at(int n) const { return gamma.at(n - 1); }
};

struct CurvatureSpec {
  SquareFamily family;
  GammaSchedule schedule;
  bool default_schedule = true;

  static CurvatureSpec defaults(int n_max = 8);
  std::string to_json() const;
  static CurvatureSpec from_json(const std::string& text);
};

enum class RegionKind { Inner, Transition, Outside };
struct Region {
  RegionKind kind = RegionKind::Outside;
  int n = 0;
};
Region locate(const CurvatureSpec& spec, Point q);
std::string region_to_string(const Region& r);

// K(q) = gamma_n phi(4n(n+1)(q - q_n)) on the closed inner square n;
// 0 on the transition annuli and outside.
double k_eval(const CurvatureSpec& spec, Point q);
Jet k_eval_jet(const CurvatureSpec& spec, Point q, int deg);
ScalarField curvature_spec_field(const CurvatureSpec& spec, Rect domain);

// Samples finite differences of K of order <= k across the inner-square
// boundary. Certifies (a) each order-j difference against the scaled
// derivative bound 2 gamma_n (4n(n+1))^j B_j and (b) the order-k difference
// against the schedule decay target 2 * 2^-n, plus continuous extension by 0.
struct SmoothnessReport {
  int n = 0;
  int order = 0;
  double max_boundary_value = 0.0;
  std::vector<double> max_difference;    // index j-1 for order j = 1..k
  std::vector<double> derivative_bound;  // matching bounds
  double decay_bound = 0.0;
  double observed_at_order_k = 0.0;
  bool derivative_bounds_ok = false;
  bool decay_ok = false;
  bool boundary_zero_ok = false;
  bool pass = false;
};
SmoothnessReport smoothness_certificate(const CurvatureSpec& spec, int n, int order_k);

// Solves G_xx + K G = 0, G(0,y) = 1, G_x(0,y) = 0 line by line (classical
// RK4) and returns g = dx^2 + G^2 dy^2, which has Gaussian curvature K.
// Fails with IntegrationError if G <= 0 is reached.
struct CurvedMetric {
  Metric2 metric;
  ScalarField G;
  Grid2D grid;
};
CurvedMetric metric_from_curvature(const ScalarField& K, Rect domain, double step = 1e-3);

// Max |gaussian_curvature(metric) - K| over an interior sample grid.
double curvature_roundtrip_error(const CurvedMetric& cm, const ScalarField& K, int samples = 41);

}  // namespace darboux
