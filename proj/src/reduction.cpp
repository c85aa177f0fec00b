#include "darboux/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "darboux/quadrature.hpp"

namespace darboux {

namespace {

struct BFields {
  const Metric2& g;
  const ScalarField& z;
  BTensorAt at(Point q) const { return b_tensor(g, z, q); }
  double slope(Point q) const {
    BTensorAt b = at(q);
    return b.b12 / b.b11;
  }
};

bool in_domain(const Rect& d, Point q, double margin) {
  return q.x >= d.x0 + margin && q.x <= d.x1 - margin && q.y >= d.y0 + margin &&
         q.y <= d.y1 - margin;
}

// RK4 for dy/dx = slope(x, y) from x0 to x1; returns false if the path
// leaves the domain or hits the b11 guard.
bool integrate_characteristic(const BFields& b, const Rect& dom, double x0, double y0, double x1,
                              double max_step, double b11_floor, double& y_out) {
  const double len = std::abs(x1 - x0);
  if (len == 0.0) {
    y_out = y0;
    return true;
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(len / max_step)));
  const double dx = (x1 - x0) / steps;
  double x = x0, y = y0;
  for (int k = 0; k < steps; ++k) {
    auto ok = [&](double xx, double yy, double& r) {
      if (!in_domain(dom, {xx, yy}, 0.0)) return false;
      BTensorAt bt = b.at({xx, yy});
      if (std::abs(bt.b11) < b11_floor) return false;
      r = bt.b12 / bt.b11;
      return true;
    };
    double k1, k2, k3, k4;
    if (!ok(x, y, k1)) return false;
    if (!ok(x + 0.5 * dx, y + 0.5 * dx * k1, k2)) return false;
    if (!ok(x + 0.5 * dx, y + 0.5 * dx * k2, k3)) return false;
    if (!ok(x + dx, y + dx * k3, k4)) return false;
    y += dx / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
    x += dx;
  }
  y_out = y;
  return in_domain(dom, {x1, y}, 0.0);
}

double jacobian_condition_2x2(double yt, double ys) {
  // J = [[1, 0], [yt, ys]]; singular values from J^T J.
  const double a = 1.0 + yt * yt, bq = yt * ys, c = ys * ys;
  const double tr = a + c;
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - (a * c - bq * bq)));
  const double lmax = 0.5 * tr + disc, lmin = 0.5 * tr - disc;
  if (!(lmin > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(lmax / lmin);
}

}  // namespace

CoordinateChart solve_characteristic_coords(const Metric2& g, const ScalarField& z, Point p,
                                            const ChartOptions& opt) {
  const Rect dom = g.domain();
  if (!dom.contains(p)) throw DomainError("solve_characteristic_coords: p outside domain");
  BFields b{g, z};

  BTensorAt bp = b.at(p);
  if (std::abs(bp.b11) < 1e-12)
    throw PreconditionError(
        "solve_characteristic_coords: b11(p) = 0, the line x = p1 is characteristic");
  const double gn2 = grad_norm_sq(g, z, p);
  if (!(gn2 < 1.0))
    throw PreconditionError("solve_characteristic_coords: |grad_g z(p)| >= 1, c undefined");
  const double c = bp.b11 * std::sqrt(g.values(p).det()) / std::sqrt(1.0 - gn2);

  const double h = opt.h;
  const double xm = std::min(p.x - dom.x0, dom.x1 - p.x);
  const double ym = std::min(p.y - dom.y0, dom.y1 - p.y);
  double T = opt.t_half > 0.0 ? opt.t_half : std::min(0.3 * xm, 0.12);
  double S = opt.s_half > 0.0 ? opt.s_half : std::min(0.3 * ym * std::abs(c), 0.12);
  const double b11_floor = opt.min_b11_fraction * std::abs(bp.b11);
  const double path_floor = 0.5 * b11_floor;

  std::string last_error = "chart construction failed";
  for (int attempt = 0; attempt <= opt.max_shrink; ++attempt, T *= 0.5, S *= 0.5) {
    const int mt = std::max(4, static_cast<int>(std::lround(T / h)));
    const int ms = std::max(4, static_cast<int>(std::lround(S / h)));
    const int nt = 2 * mt + 1, ns = 2 * ms + 1;
    // s = c y on the initial line, so the chart is centered at s = c p.y.
    Grid2D ts_grid({-mt * h, c * p.y - ms * h}, h, nt, ns);

    // Forward characteristics from the initial line, marching per s-line.
    std::vector<double> y_ts(ts_grid.size(), 0.0);
    bool ok = true;
    double ymin = p.y, ymax = p.y;
    for (int j = 0; j < ns && ok; ++j) {
      double y = ts_grid.y(j) / c;
      if (!in_domain(dom, {p.x, y}, 0.0)) {
        ok = false;
        last_error = "initial line leaves domain";
        break;
      }
      y_ts[ts_grid.index(mt, j)] = y;
      auto march = [&](int dir) {
        double yy = y;
        for (int i = mt; (dir > 0 ? i < nt - 1 : i > 0) && ok; i += dir) {
          const double xa = p.x + ts_grid.x(i);
          const double xb = p.x + ts_grid.x(i + dir);
          double ynext;
          if (!integrate_characteristic(b, dom, xa, yy, xb, 0.25 * h, path_floor, ynext)) {
            ok = false;
            last_error = "characteristic exits domain or hits the b11 guard";
            return;
          }
          yy = ynext;
          y_ts[ts_grid.index(i + dir, j)] = yy;
          ymin = std::min(ymin, yy);
          ymax = std::max(ymax, yy);
        }
      };
      march(+1);
      if (ok) march(-1);
    }
    if (!ok) continue;

    // Node guards: b11 magnitude and Jacobian conditioning.
    ScalarField y_field = ScalarField::sampled(ts_grid, y_ts);
    double cond = 0.0;
    for (int j = 0; j < ns && ok; ++j)
      for (int i = 0; i < nt && ok; ++i) {
        Point ts{ts_grid.x(i), ts_grid.y(j)};
        Point xy{p.x + ts.x, y_ts[ts_grid.index(i, j)]};
        if (std::abs(b.at(xy).b11) < b11_floor) {
          ok = false;
          last_error = "|b11| fell below half its basepoint value";
          break;
        }
        const double yt = y_field.derivative(ts, 1, 0);
        const double ys = y_field.derivative(ts, 0, 1);
        if (!(ys * (1.0 / c) > 0.0)) {
          ok = false;
          last_error = "chart folds (y_s changes sign)";
          break;
        }
        cond = std::max(cond, jacobian_condition_2x2(yt, ys));
      }
    if (ok && cond > opt.max_condition) {
      ok = false;
      last_error = "Jacobian condition number above limit";
    }
    if (!ok) continue;

    // Forward map s(x, y) on an xy grid that pads the characteristic range.
    const int pad = 5;
    const long j_lo = std::lround(std::floor((ymin - p.y) / h)) - pad;
    const long j_hi = std::lround(std::ceil((ymax - p.y) / h)) + pad;
    const int ny = static_cast<int>(j_hi - j_lo + 1);
    if (ny < 9) {
      last_error = "xy grid too small";
      continue;
    }
    Grid2D xy_grid({p.x - mt * h, p.y + j_lo * h}, h, nt, ny);
    if (!dom.contains(xy_grid.rect())) {
      last_error = "xy grid exceeds domain";
      continue;
    }
    std::vector<double> s_vals(xy_grid.size(), 0.0);
    ok = true;
    for (int j = 0; j < ny && ok; ++j)
      for (int i = 0; i < nt && ok; ++i) {
        const double x = xy_grid.x(i), y = xy_grid.y(j);
        double y_hit;
        if (!integrate_characteristic(b, dom, x, y, p.x, 0.25 * h, path_floor, y_hit)) {
          ok = false;
          last_error = "backward characteristic exits domain";
          break;
        }
        s_vals[xy_grid.index(i, j)] = c * y_hit;
      }
    if (!ok) continue;
    ScalarField s_field = ScalarField::sampled(xy_grid, std::move(s_vals));

    // Transport audit: the defining first-order equation, via FD of s.
    double transport = 0.0, max_b = 0.0;
    for (int j = 4; j < ny - 4; ++j)
      for (int i = 4; i < nt - 4; ++i) {
        Point q{xy_grid.x(i), xy_grid.y(j)};
        BTensorAt bt = b.at(q);
        max_b = std::max({max_b, std::abs(bt.b11), std::abs(bt.b12), std::abs(bt.b22)});
        const double sx = s_field.derivative(q, 1, 0);
        const double sy = s_field.derivative(q, 0, 1);
        transport = std::max(transport, std::abs(bt.b11 * sx + bt.b12 * sy));
      }

    // Newton polish of the inverse map against the sampled forward map.
    double inv_res = 0.0;
    for (int j = 0; j < ns; ++j)
      for (int i = 0; i < nt; ++i) {
        const double s_target = ts_grid.y(j);
        const double x = p.x + ts_grid.x(i);
        double y = y_ts[ts_grid.index(i, j)];
        for (int it = 0; it < 3; ++it) {
          const double f = s_field.value({x, y}) - s_target;
          const double fy = s_field.derivative({x, y}, 0, 1);
          y -= f / fy;
        }
        y_ts[ts_grid.index(i, j)] = y;
        inv_res = std::max(inv_res, std::abs(s_field.value({x, y}) - s_target));
      }
    if (inv_res > 1e-8) {
      last_error = "Newton polish of the inverse map did not converge";
      continue;
    }

    CoordinateChart chart;
    chart.basepoint = p;
    chart.c = c;
    chart.b11_at_p = bp.b11;
    chart.h = h;
    chart.ts_grid = ts_grid;
    chart.t0 = mt;
    chart.s0 = ms;
    chart.y_of_ts = ScalarField::sampled(ts_grid, std::move(y_ts));
    chart.s_field = std::move(s_field);
    chart.xy_grid = xy_grid;
    chart.xy_rect = xy_grid.rect();
    chart.transport_residual = transport;
    chart.max_abs_b = max_b;
    chart.inverse_residual = inv_res;
    chart.jacobian_condition = cond;
    return chart;
  }
  throw IntegrationError("solve_characteristic_coords: " + last_error +
                         " after maximum shrinking");
}

namespace {

struct ChartJacobians {
  std::vector<double> yt, ys;  // row-major on ts_grid
};

ChartJacobians chart_jacobians(const CoordinateChart& chart) {
  const Grid2D& gr = chart.ts_grid;
  ChartJacobians j;
  j.yt.resize(gr.size());
  j.ys.resize(gr.size());
  for (int jj = 0; jj < gr.ny; ++jj)
    for (int ii = 0; ii < gr.nx; ++ii) {
      Point ts{gr.x(ii), gr.y(jj)};
      j.yt[gr.index(ii, jj)] = chart.y_of_ts.derivative(ts, 1, 0);
      j.ys[gr.index(ii, jj)] = chart.y_of_ts.derivative(ts, 0, 1);
    }
  return j;
}

}  // namespace

BTransformResult transform_b_tensor(const Metric2& g, const ScalarField& z, const ScalarField& K,
                                    const CoordinateChart& chart) {
  const Grid2D& gr = chart.ts_grid;
  ChartJacobians jac = chart_jacobians(chart);
  BTransformResult res;
  res.b11.resize(gr.size());
  res.b12_raw.resize(gr.size());
  res.b22_raw.resize(gr.size());
  res.b22_closed.resize(gr.size());
  double max_b = 0.0, max_b22 = 0.0, max_b12 = 0.0, max_b22_diff = 0.0;
  for (int j = 0; j < gr.ny; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      const int id = gr.index(i, j);
      Point xy = chart.map_to_xy(i, j);
      BTensorAt b = b_tensor(g, z, xy);
      const double ys = jac.ys[id], yt = jac.yt[id];
      const double sy = 1.0 / ys, sx = -yt / ys;
      res.b11[id] = b.b11;
      res.b12_raw[id] = b.b11 * sx + b.b12 * sy;
      res.b22_raw[id] = b.b11 * sx * sx + 2.0 * b.b12 * sx * sy + b.b22 * sy * sy;
      const double det_g = g.values(xy).det();
      const double gn2 = grad_norm_sq(g, z, xy);
      res.b22_closed[id] = K(xy.x, xy.y) * (1.0 - gn2) * sy * sy / (det_g * b.b11);
      max_b = std::max({max_b, std::abs(b.b11), std::abs(b.b12), std::abs(b.b22)});
      max_b22 = std::max(max_b22, std::abs(res.b22_closed[id]));
      max_b12 = std::max(max_b12, std::abs(res.b12_raw[id]));
      max_b22_diff = std::max(max_b22_diff, std::abs(res.b22_raw[id] - res.b22_closed[id]));
    }
  res.max_b12_rel = max_b12 / max_b;
  res.max_b22_rel_diff = max_b22 > 0.0 ? max_b22_diff / max_b22 : max_b22_diff;
  return res;
}

Metric2 pullback_metric(const Metric2& g, const CoordinateChart& chart) {
  const Grid2D& gr = chart.ts_grid;
  ChartJacobians jac = chart_jacobians(chart);
  std::vector<double> g11(gr.size()), g12(gr.size()), g22(gr.size());
  for (int j = 0; j < gr.ny; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      const int id = gr.index(i, j);
      Point xy = chart.map_to_xy(i, j);
      SymMat2 m = g.values(xy);
      const double yt = jac.yt[id], ys = jac.ys[id];
      g11[id] = m.a11 + 2.0 * m.a12 * yt + m.a22 * yt * yt;
      g12[id] = m.a12 * ys + m.a22 * yt * ys;
      g22[id] = m.a22 * ys * ys;
    }
  return Metric2(ScalarField::sampled(gr, std::move(g11)), ScalarField::sampled(gr, std::move(g12)),
                 ScalarField::sampled(gr, std::move(g22)));
}

ScalarField pullback_scalar(const ScalarField& z, const CoordinateChart& chart) {
  const Grid2D& gr = chart.ts_grid;
  std::vector<double> v(gr.size());
  for (int j = 0; j < gr.ny; ++j)
    for (int i = 0; i < gr.nx; ++i) v[gr.index(i, j)] = z.value(chart.map_to_xy(i, j));
  // Anchor at the basepoint: only derivatives of the pulled-back field are
  // ever used, and small sample values keep the second-derivative stencils
  // clear of the eps/h^2 rounding floor.
  const double base = v[gr.index(chart.t0, chart.s0)];
  for (double& x : v) x -= base;
  return ScalarField::sampled(gr, std::move(v));
}

ScalarField build_u(const ScalarField& zbar, const CoordinateChart& chart, const Metric2& gbar,
                    double* max_utt_deviation) {
  const Grid2D& gr = chart.ts_grid;
  std::vector<double> w(gr.size());
  for (int j = 0; j < gr.ny; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      Point ts{gr.x(i), gr.y(j)};
      ChristoffelAt gam = christoffel(gbar, ts);
      const double zt = zbar.derivative(ts, 1, 0);
      const double zs = zbar.derivative(ts, 0, 1);
      w[gr.index(i, j)] = gam.gamma[0][0][0] * zt + gam.gamma[1][0][0] * zs;
    }

  // Iterated cumulative integral in t at fixed s, anchored at t = 0.
  std::vector<double> u(gr.size());
  for (int j = 0; j < gr.ny; ++j) {
    std::vector<double> row(gr.nx);
    for (int i = 0; i < gr.nx; ++i) row[i] = w[gr.index(i, j)];
    std::vector<double> W = cumulative_integral(row, gr.h, chart.t0);
    std::vector<double> U = cumulative_integral(W, gr.h, chart.t0);
    for (int i = 0; i < gr.nx; ++i) u[gr.index(i, j)] = zbar.value({gr.x(i), gr.y(j)}) - U[i];
  }
  ScalarField uf = ScalarField::sampled(gr, std::move(u));

  if (max_utt_deviation) {
    double worst = 0.0;
    for (int j = 4; j < gr.ny - 4; ++j)
      for (int i = 4; i < gr.nx - 4; ++i) {
        Point ts{gr.x(i), gr.y(j)};
        const double utt = uf.derivative(ts, 2, 0);
        const double h11 = covariant_hessian(gbar, zbar, ts).a11;
        worst = std::max(worst, std::abs(utt - h11));
      }
    *max_utt_deviation = worst;
  }
  return uf;
}

ReductionReport reduce_to_linear(const Metric2& g, const ScalarField& z, const ScalarField& K,
                                 Point p, const ChartOptions& opt,
                                 ReductionArtifacts* artifacts) {
  // Gates: noncharacteristic direction and the Darboux equation itself.
  SymMat2 hess_p = covariant_hessian(g, z, p);
  if (std::abs(hess_p.a22) < 1e-12)
    throw PreconditionError("reduce_to_linear: nabla_22 z vanishes at p");
  {
    const Rect dom = g.domain();
    const double m = std::min({p.x - dom.x0, dom.x1 - p.x, p.y - dom.y0, dom.y1 - p.y});
    const Rect gate = Rect::square(p, std::min(0.06, 0.8 * m));
    double worst = 0.0;
    for (int j = 0; j < 9; ++j)
      for (int i = 0; i < 9; ++i) {
        Point q{gate.x0 + gate.width() * i / 8.0, gate.y0 + gate.height() * j / 8.0};
        worst = std::max(worst, std::abs(darboux_residual(g, z, K, q)));
      }
    if (worst > 1e-6) {
      std::ostringstream msg;
      msg << "reduce_to_linear: z does not solve the Darboux equation near p (max residual "
          << worst << ")";
      throw PreconditionError(msg.str());
    }
  }

  CoordinateChart chart = solve_characteristic_coords(g, z, p, opt);
  BTransformResult bt = transform_b_tensor(g, z, K, chart);
  Metric2 gbar = pullback_metric(g, chart);
  ScalarField zbar = pullback_scalar(z, chart);

  ReductionReport rep;
  rep.h = opt.h;
  rep.c = chart.c;
  rep.b11_p = chart.b11_at_p;
  rep.grad_norm_at_p = std::sqrt(grad_norm_sq(g, z, p));
  rep.transport_residual_rel = chart.transport_residual / chart.max_abs_b;
  rep.b12_rel = bt.max_b12_rel;
  rep.b22_rel = bt.max_b22_rel_diff;
  rep.chart_roundtrip = chart.inverse_residual;
  rep.jacobian_condition = chart.jacobian_condition;

  ScalarField u = build_u(zbar, chart, gbar, &rep.u_tt_check);

  const Grid2D& gr = chart.ts_grid;
  ChartJacobians jac = chart_jacobians(chart);

  // fbar at the basepoint (center node).
  auto fbar_at = [&](int i, int j) {
    const int id = gr.index(i, j);
    Point xy = chart.map_to_xy(i, j);
    const double sy = 1.0 / jac.ys[id];
    const double det_g = g.values(xy).det();
    const double gn2 = grad_norm_sq(g, z, xy);
    const double b11 = b_tensor(g, z, xy).b11;
    return sy * sy * (1.0 - gn2) / (det_g * b11);
  };
  const double fbar_p = fbar_at(chart.t0, chart.s0);
  rep.fbar_ratio = fbar_p / chart.b11_at_p;

  // Exclude one-sided-stencil cells and keep the measured region stable
  // under h-halving: the margin is absolute (a fixed fraction of the chart
  // half-extent, never below 4 cells of the coarsest spacing used here).
  const double margin_t = std::max(4.0 * gr.h, 0.25 * gr.x(gr.nx - 1));
  const double margin_s = std::max(4.0 * gr.h, 0.25 * (gr.y(gr.ny - 1) - gr.y(chart.s0)));
  const int inset_t = std::max(4, static_cast<int>(std::lround(margin_t / gr.h)));
  const int inset_s = std::max(4, static_cast<int>(std::lround(margin_s / gr.h)));

  double worst_curv = 0.0, worst_res = 0.0;
  double min_f = std::numeric_limits<double>::infinity();
  double f_p = 0.0;
  std::vector<double> f_grid(gr.size(), 0.0);
  for (int j = 0; j < gr.ny; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      Point ts{gr.x(i), gr.y(j)};
      Point xy = chart.map_to_xy(i, j);
      const double Kxy = K(xy.x, xy.y);

      const double b11 = b_tensor(g, z, xy).b11;
      const double gn2 = grad_norm_sq(g, z, xy);
      const double fbar = fbar_at(i, j);
      ChristoffelAt gam = christoffel(gbar, ts);
      const double zt = zbar.derivative(ts, 1, 0);
      const double zs = zbar.derivative(ts, 0, 1);
      const double h22 = covariant_hessian(gbar, zbar, ts).a22;
      const double uss = u.derivative(ts, 0, 2);
      const double zss = zbar.derivative(ts, 0, 2);
      // (b11 - fbar) rather than (fbar(p) - fbar): the two agree at p, and
      // this is the form for which the reduced equation holds identically.
      const double f = (2.0 * (1.0 - gn2) + (b11 - fbar) * h22) / b11 +
                       gam.gamma[0][1][1] * zt + gam.gamma[1][1][1] * zs + (uss - zss);
      f_grid[gr.index(i, j)] = f;
      if (i == chart.t0 && j == chart.s0) f_p = f;
      const bool inside = i >= inset_t && i < gr.nx - inset_t && j >= inset_s &&
                          j < gr.ny - inset_s;
      if (!inside) continue;
      worst_curv = std::max(worst_curv, std::abs(gaussian_curvature(gbar, ts) - Kxy));
      const double utt = u.derivative(ts, 2, 0);
      worst_res = std::max(worst_res, std::abs(utt + Kxy * uss - Kxy * f));
      min_f = std::min(min_f, f);
    }
  rep.curvature_invariance = worst_curv;
  rep.max_residual = worst_res;
  rep.min_f = min_f;
  rep.f_at_p = f_p;
  if (artifacts) {
    artifacts->u = u;
    artifacts->f = ScalarField::sampled(gr, std::move(f_grid));
    artifacts->zbar = zbar;
    artifacts->chart = std::move(chart);
  }
  return rep;
}

ScalarField transpose_field(const ScalarField& f) {
  const Rect d = f.domain();
  const Rect dt{d.y0, d.y1, d.x0, d.x1};
  return ScalarField::analytic(dt, [f](double x, double y, int deg) {
    Jet j = f.jet({y, x}, std::min(deg, f.max_degree()));
    Jet r(0.0, j.degree());
    for (int a = 0; a <= j.degree(); ++a)
      for (int b = 0; a + b <= j.degree(); ++b) r.at(a, b) = j.coeff(b, a);
    return r;
  });
}

ReductionReport reduce_to_linear_transposed(const Metric2& g, const ScalarField& z,
                                            const ScalarField& K, Point p,
                                            const ChartOptions& opt) {
  Metric2 gt(transpose_field(g.g22()), transpose_field(g.g12()), transpose_field(g.g11()));
  return reduce_to_linear(gt, transpose_field(z), transpose_field(K), {p.y, p.x}, opt);
}

}  // namespace darboux
