#pragma once

#include <vector>

#include "darboux/metric.hpp"

namespace darboux {

// Local change of coordinates t = x - p1, s = s(x,y) killing the mixed
// cofactor component: b11 s_x + b12 s_y = 0 with s(p1, y) = c y. Built by
// integrating the characteristic ODE dy/dx = b12/b11 back to the initial
// line from every grid point; the inverse map comes from forward
// characteristics polished by Newton iteration on the sampled forward map.
struct CoordinateChart {
  Point basepoint;
  double c = 0.0;
  double b11_at_p = 0.0;
  double h = 0.0;

  Grid2D ts_grid;  // grid coordinates are (t, s); (0,0) is a node
  int t0 = 0, s0 = 0;
  ScalarField y_of_ts;  // x(t,s) = p.x + t exactly
  ScalarField s_field;  // forward map sampled on xy_grid
  Grid2D xy_grid;
  Rect xy_rect;

  double transport_residual = 0.0;      // max |b11 s_x + b12 s_y| (FD of s_field)
  double max_abs_b = 0.0;          // scale for the relative residual
  double inverse_residual = 0.0;   // max |s(x, y(t,s)) - s| after polish
  double jacobian_condition = 0.0;

  double t_of(int i) const { return ts_grid.x(i); }
  double s_of(int j) const { return ts_grid.y(j); }
  Point map_to_xy(int i, int j) const {
    return {basepoint.x + t_of(i), y_of_ts.value({t_of(i), s_of(j)})};
  }
};

struct ChartOptions {
  double h = 5e-3;
  double t_half = 0.0;  // 0 = choose from the domain margins
  double s_half = 0.0;
  int max_shrink = 8;
  double min_b11_fraction = 0.5;
  double max_condition = 10.0;
};

CoordinateChart solve_characteristic_coords(const Metric2& g, const ScalarField& z, Point p,
                                            const ChartOptions& opt = {});

// Raw tensor transform of b on the chart grid against the closed forms
// b~11 = b11, b~12 = 0 and b~22 = (|g| b11)^{-1} (s_y)^2 K (1 - |grad_g z|^2).
struct BTransformResult {
  double max_b12_rel = 0.0;       // max |b~12_raw| / max |b|
  double max_b22_rel_diff = 0.0;  // max |b~22_raw - closed| / max |b~22|
  std::vector<double> b11, b12_raw, b22_raw, b22_closed;  // row-major on ts_grid
};
BTransformResult transform_b_tensor(const Metric2& g, const ScalarField& z, const ScalarField& K,
                                    const CoordinateChart& chart);

// gbar_ij = g_lm dx^l/dts^i dx^m/dts^j sampled on the chart grid.
Metric2 pullback_metric(const Metric2& g, const CoordinateChart& chart);

// z composed with the chart, sampled on the chart grid.
ScalarField pullback_scalar(const ScalarField& z, const CoordinateChart& chart);

// u(t,s) = z - iterated integral of (Gbar^1_11 z_t + Gbar^2_11 z_s) in t, so
// that d_tt u equals the covariant tt-Hessian of z in chart coordinates.
// max_utt_deviation (optional) receives max |d_tt u - nabla~_11 z|.
ScalarField build_u(const ScalarField& zbar, const CoordinateChart& chart, const Metric2& gbar,
                    double* max_utt_deviation = nullptr);

struct ReductionReport {
  double h = 0.0;
  double c = 0.0;
  double b11_p = 0.0;
  double fbar_ratio = 0.0;   // (b11)^{-1} fbar at p; must be 1
  double grad_norm_at_p = 0.0;
  double transport_residual_rel = 0.0;
  double b12_rel = 0.0;
  double b22_rel = 0.0;
  double chart_roundtrip = 0.0;
  double jacobian_condition = 0.0;
  double curvature_invariance = 0.0;  // max |K(gbar) - K o chart|
  double u_tt_check = 0.0;            // max |d_tt u - nabla~_11 z|
  double max_residual = 0.0;          // max |d_tt u + K d_ss u - K f|
  double min_f = 0.0;
  double f_at_p = 0.0;
};

// Chart plus the constructed fields, for dumps and inspection.
struct ReductionArtifacts {
  CoordinateChart chart;
  ScalarField u;     // on the chart grid
  ScalarField f;     // right-hand-side profile on the chart grid
  ScalarField zbar;  // z in chart coordinates, anchored at the basepoint
};

// Full pipeline at a point where nabla_22 z != 0 and z solves the Darboux
// equation nearby (both gated).
ReductionReport reduce_to_linear(const Metric2& g, const ScalarField& z, const ScalarField& K,
                                 Point p, const ChartOptions& opt = {},
                                 ReductionArtifacts* artifacts = nullptr);

// x/y-swapped convenience wrapper for points where nabla_11 z != 0 instead:
// transposes the inputs and runs the same pipeline.
ReductionReport reduce_to_linear_transposed(const Metric2& g, const ScalarField& z,
                                            const ScalarField& K, Point p,
                                            const ChartOptions& opt = {});

// Reflection of a field across the diagonal (x,y) -> (y,x).
ScalarField transpose_field(const ScalarField& f);

}  // namespace darboux
