#include "darboux/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "darboux/fd_weights.hpp"

namespace darboux {

Metric2::Metric2(ScalarField g11, ScalarField g12, ScalarField g22)
    : g11_(std::move(g11)), g12_(std::move(g12)), g22_(std::move(g22)) {
  domain_ = g11_.domain();
  if (!domain_.contains(g12_.domain()) || !g12_.domain().contains(domain_))
    domain_ = {std::max({g11_.domain().x0, g12_.domain().x0, g22_.domain().x0}),
               std::min({g11_.domain().x1, g12_.domain().x1, g22_.domain().x1}),
               std::max({g11_.domain().y0, g12_.domain().y0, g22_.domain().y0}),
               std::min({g11_.domain().y1, g12_.domain().y1, g22_.domain().y1})};
}

Metric2 Metric2::euclidean(Rect domain) {
  return Metric2(ScalarField::constant(domain, 1.0), ScalarField::constant(domain, 0.0),
                 ScalarField::constant(domain, 1.0));
}

int Metric2::max_curvature_degree() const {
  int d = std::min({g11_.max_degree(), g12_.max_degree(), g22_.max_degree()});
  return d - 2;
}

Metric2::Eval Metric2::eval(Point p, int gamma_deg) const {
  Eval ev;
  ev.gamma_deg = gamma_deg;
  const int gd = gamma_deg + 1;
  ev.g11 = g11_.jet(p, gd);
  ev.g12 = g12_.jet(p, gd);
  ev.g22 = g22_.jet(p, gd);
  ev.det = ev.g11 * ev.g22 - ev.g12 * ev.g12;
  if (!(ev.g11.value() > 0.0) || !(ev.det.value() > 0.0))
    throw DegenerateMetric("metric not positive definite at queried point");
  ev.sqrt_det = jsqrt(ev.det);
  Jet idet = ev.det.recip();
  ev.inv11 = ev.g22 * idet;
  ev.inv12 = -(ev.g12 * idet);
  ev.inv22 = ev.g11 * idet;

  // dg[m][i][j] = d_m g_ij
  Jet dg[2][2][2];
  dg[0][0][0] = ev.g11.deriv_x();
  dg[1][0][0] = ev.g11.deriv_y();
  dg[0][0][1] = ev.g12.deriv_x();
  dg[1][0][1] = ev.g12.deriv_y();
  dg[0][1][0] = dg[0][0][1];
  dg[1][1][0] = dg[1][0][1];
  dg[0][1][1] = ev.g22.deriv_x();
  dg[1][1][1] = ev.g22.deriv_y();

  const Jet* inv[2][2] = {{&ev.inv11, &ev.inv12}, {&ev.inv12, &ev.inv22}};
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        Jet acc(0.0, gamma_deg);
        for (int m = 0; m < 2; ++m) acc += (*inv[l][m]) * (dg[i][j][m] + dg[j][i][m] - dg[m][i][j]);
        ev.gamma[l][i][j] = acc * 0.5;
        ev.gamma[l][j][i] = ev.gamma[l][i][j];
      }
  return ev;
}

SymMat2 Metric2::values(Point p) const {
  SymMat2 m{g11_(p.x, p.y), g12_(p.x, p.y), g22_(p.x, p.y)};
  if (!(m.a11 > 0.0) || !(m.det() > 0.0))
    throw DegenerateMetric("metric not positive definite at queried point");
  return m;
}

ChristoffelAt christoffel(const Metric2& g, Point p) {
  Metric2::Eval ev = g.eval(p, 0);
  ChristoffelAt c;
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) c.gamma[l][i][j] = ev.gamma[l][i][j].value();
  return c;
}

namespace {

// R^i_{212} = d_1 Gamma^i_22 - d_2 Gamma^i_12 + Gamma^j_22 Gamma^i_j1
//           - Gamma^j_12 Gamma^i_j2   (jets one degree below gamma)
void riemann_212(const Metric2::Eval& ev, Jet r[2]) {
  for (int i = 0; i < 2; ++i) {
    Jet acc = ev.gamma[i][1][1].deriv_x() - ev.gamma[i][0][1].deriv_y();
    for (int j = 0; j < 2; ++j)
      acc += ev.gamma[j][1][1] * ev.gamma[i][j][0] - ev.gamma[j][0][1] * ev.gamma[i][j][1];
    r[i] = acc;
  }
}

Jet curvature_jet_from_eval(const Metric2::Eval& ev) {
  Jet r[2];
  riemann_212(ev, r);
  Jet r1212 = ev.g11 * r[0] + ev.g12 * r[1];
  return r1212 / ev.det;
}

struct HessJets {
  Jet h11, h12, h22;
};

// Covariant Hessian jets at degree min(z_deg - 2, gamma_deg).
HessJets hessian_jets(const Metric2::Eval& ev, const ScalarField& z, Point p, int deg) {
  Jet zj = z.jet(p, deg + 2);
  Jet zx = zj.deriv_x();
  Jet zy = zj.deriv_y();
  Jet zxx = zx.deriv_x(), zxy = zx.deriv_y(), zyy = zy.deriv_y();
  HessJets h;
  h.h11 = zxx - ev.gamma[0][0][0] * zx - ev.gamma[1][0][0] * zy;
  h.h12 = zxy - ev.gamma[0][0][1] * zx - ev.gamma[1][0][1] * zy;
  h.h22 = zyy - ev.gamma[0][1][1] * zx - ev.gamma[1][1][1] * zy;
  return h;
}

struct BJets {
  Jet b11, b12, b22;
};

BJets b_jets(const Metric2::Eval& ev, const HessJets& h) {
  Jet idet = ev.det.recip();
  return {h.h22 * idet, -(h.h12 * idet), h.h11 * idet};
}

}  // namespace

namespace {

// Spacing of the coarsest sampled backing involved; 0 when all analytic.
double sampled_grid_h(const Metric2& g, const ScalarField* z = nullptr) {
  double h = 0.0;
  auto upd = [&h](const ScalarField& f) {
    if (!f.analytic_backing()) h = std::max(h, f.grid()->h);
  };
  upd(g.g11());
  upd(g.g12());
  upd(g.g22());
  if (z) upd(*z);
  return h;
}

// Order-4 first derivative of a pointwise quantity along an axis, with the
// 5-point stencil shifted to stay inside the domain. Used for derivatives of
// derived fields (Christoffel, b, sqrt det) over sampled backings, where
// differentiating a single jet would hide the discretization entirely.
double fd_axis(const std::function<double(Point)>& F, Point p, int axis, double h,
               const Rect& dom) {
  const double lo = (axis == 0) ? dom.x0 : dom.y0;
  const double hi = (axis == 0) ? dom.x1 : dom.y1;
  const double q0 = (axis == 0) ? p.x : p.y;
  double shift = 0.0;
  if (q0 - 2.0 * h < lo) shift = lo - (q0 - 2.0 * h);
  if (q0 + 2.0 * h + shift > hi) shift = hi - (q0 + 2.0 * h);
  std::array<double, 5> nodes;
  for (int k = 0; k < 5; ++k) nodes[k] = q0 + shift + (k - 2) * h;
  auto w = fd_weights(q0, nodes, 1);
  double sum = 0.0;
  for (int k = 0; k < 5; ++k) {
    Point q = (axis == 0) ? Point{nodes[k], p.y} : Point{p.x, nodes[k]};
    sum += w[1][k] * F(q);
  }
  return sum;
}

double curvature_value_sampled(const Metric2& g, Point p, double hs) {
  Metric2::Eval ev = g.eval(p, 0);
  double r[2];
  for (int i = 0; i < 2; ++i) {
    const double d1 = fd_axis(
        [&g, i](Point q) { return christoffel(g, q).gamma[i][1][1]; }, p, 0, hs, g.domain());
    const double d2 = fd_axis(
        [&g, i](Point q) { return christoffel(g, q).gamma[i][0][1]; }, p, 1, hs, g.domain());
    r[i] = d1 - d2;
    for (int j = 0; j < 2; ++j)
      r[i] += ev.gamma[j][1][1].value() * ev.gamma[i][j][0].value() -
              ev.gamma[j][0][1].value() * ev.gamma[i][j][1].value();
  }
  const double r1212 = ev.g11.value() * r[0] + ev.g12.value() * r[1];
  return r1212 / ev.det.value();
}

}  // namespace

double gaussian_curvature(const Metric2& g, Point p) {
  const double hs = sampled_grid_h(g);
  if (hs == 0.0) return curvature_jet_from_eval(g.eval(p, 1)).value();
  return curvature_value_sampled(g, p, hs);
}

Jet gaussian_curvature_jet(const Metric2& g, Point p, int deg) {
  if (sampled_grid_h(g) != 0.0 && deg > 0)
    throw std::invalid_argument(
        "gaussian_curvature_jet: sampled metrics expose curvature values only");
  if (sampled_grid_h(g) != 0.0) return Jet(gaussian_curvature(g, p), 0);
  return curvature_jet_from_eval(g.eval(p, deg + 1));
}

ScalarField curvature_field(const Metric2& g) {
  const int cap = (sampled_grid_h(g) == 0.0) ? g.max_curvature_degree() : 0;
  return ScalarField::analytic(g.domain(), [g, cap](double x, double y, int deg) {
    return gaussian_curvature_jet(g, {x, y}, std::min(deg, cap));
  });
}

double gaussian_curvature_brioschi(const Metric2& g, Point p) {
  Jet E = g.g11().jet(p, 2), F = g.g12().jet(p, 2), G = g.g22().jet(p, 2);
  auto det3 = [](const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double Eu = E.partial(1, 0), Ev = E.partial(0, 1), Evv = E.partial(0, 2);
  const double Fu = F.partial(1, 0), Fv = F.partial(0, 1), Fuv = F.partial(1, 1);
  const double Gu = G.partial(1, 0), Gv = G.partial(0, 1), Guu = G.partial(2, 0);
  const double e = E.value(), f = F.value(), gg = G.value();
  const double m1[3][3] = {{-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev},
                           {Fv - 0.5 * Gu, e, f},
                           {0.5 * Gv, f, gg}};
  const double m2[3][3] = {{0.0, 0.5 * Ev, 0.5 * Gu}, {0.5 * Ev, e, f}, {0.5 * Gu, f, gg}};
  const double d = e * gg - f * f;
  return (det3(m1) - det3(m2)) / (d * d);
}

SymMat2 covariant_hessian(const Metric2& g, const ScalarField& z, Point p) {
  Metric2::Eval ev = g.eval(p, 0);
  HessJets h = hessian_jets(ev, z, p, 0);
  return {h.h11.value(), h.h12.value(), h.h22.value()};
}

double grad_norm_sq(const Metric2& g, const ScalarField& z, Point p) {
  Metric2::Eval ev = g.eval(p, 0);
  const double zx = z.derivative(p, 1, 0), zy = z.derivative(p, 0, 1);
  return ev.inv11.value() * zx * zx + 2.0 * ev.inv12.value() * zx * zy +
         ev.inv22.value() * zy * zy;
}

BTensorAt b_tensor(const Metric2& g, const ScalarField& z, Point p) {
  Metric2::Eval ev = g.eval(p, 0);
  HessJets h = hessian_jets(ev, z, p, 0);
  BJets b = b_jets(ev, h);
  return {b.b11.value(), b.b12.value(), b.b22.value()};
}

double darboux_residual(const Metric2& g, const ScalarField& z, const ScalarField& K, Point p) {
  Metric2::Eval ev = g.eval(p, 0);
  HessJets h = hessian_jets(ev, z, p, 0);
  const double det_h = h.h11.value() * h.h22.value() - h.h12.value() * h.h12.value();
  const double gn2 = grad_norm_sq(g, z, p);
  return det_h - K(p.x, p.y) * ev.det.value() * (1.0 - gn2);
}

namespace {

std::array<double, 2> b_divergence_from_eval(const Metric2::Eval& ev, const ScalarField& z,
                                             Point p) {
  HessJets h = hessian_jets(ev, z, p, 1);
  BJets b = b_jets(ev, h);
  const Jet* bj[2][2] = {{&b.b11, &b.b12}, {&b.b12, &b.b22}};
  std::array<double, 2> div = {0.0, 0.0};
  for (int j = 0; j < 2; ++j) {
    double acc = (j == 0 ? b.b11.deriv_x().value() + b.b12.deriv_y().value()
                         : b.b12.deriv_x().value() + b.b22.deriv_y().value());
    for (int i = 0; i < 2; ++i)
      for (int l = 0; l < 2; ++l)
        acc += ev.gamma[i][i][l].value() * bj[l][j]->value() +
               ev.gamma[j][i][l].value() * bj[i][l]->value();
    div[j] = acc;
  }
  return div;
}

}  // namespace

std::array<double, 2> b_divergence(const Metric2& g, const ScalarField& z, Point p) {
  const double hs = sampled_grid_h(g, &z);
  if (hs == 0.0) return b_divergence_from_eval(g.eval(p, 1), z, p);
  // Sampled backing: outer derivatives from finite differences of b values.
  Metric2::Eval ev = g.eval(p, 0);
  HessJets h = hessian_jets(ev, z, p, 0);
  BJets b = b_jets(ev, h);
  const double bv[2][2] = {{b.b11.value(), b.b12.value()}, {b.b12.value(), b.b22.value()}};
  auto b_comp = [&g, &z](int i, int j) {
    return [&g, &z, i, j](Point q) {
      BTensorAt bt = b_tensor(g, z, q);
      if (i == 0 && j == 0) return bt.b11;
      if (i == 1 && j == 1) return bt.b22;
      return bt.b12;
    };
  };
  std::array<double, 2> div;
  for (int j = 0; j < 2; ++j) {
    double acc = fd_axis(b_comp(0, j), p, 0, hs, g.domain()) +
                 fd_axis(b_comp(1, j), p, 1, hs, g.domain());
    for (int i = 0; i < 2; ++i)
      for (int l = 0; l < 2; ++l)
        acc += ev.gamma[i][i][l].value() * bv[l][j] + ev.gamma[j][i][l].value() * bv[i][l];
    div[j] = acc;
  }
  return div;
}

std::array<double, 2> divergence_identity_residual(const Metric2& g, const ScalarField& z,
                                                   Point p) {
  std::array<double, 2> div = b_divergence(g, z, p);
  const double K = gaussian_curvature(g, p);
  Metric2::Eval ev = g.eval(p, 0);
  const double zx = z.derivative(p, 1, 0), zy = z.derivative(p, 0, 1);
  const double z1 = ev.inv11.value() * zx + ev.inv12.value() * zy;
  const double z2 = ev.inv12.value() * zx + ev.inv22.value() * zy;
  return {div[0] + K * z1, div[1] + K * z2};
}

std::array<double, 2> chi_identity_residual(const Metric2& g, Point p) {
  const double hs = sampled_grid_h(g);
  const double K = gaussian_curvature(g, p);
  Metric2::Eval ev = g.eval(p, hs == 0.0 ? 1 : 0);
  std::array<double, 2> res;
  for (int i = 0; i < 2; ++i) {
    double chi;
    if (hs == 0.0) {
      chi = ev.gamma[i][0][1].deriv_y().value() - ev.gamma[i][1][1].deriv_x().value();
    } else {
      chi = fd_axis([&g, i](Point q) { return christoffel(g, q).gamma[i][0][1]; }, p, 1, hs,
                    g.domain()) -
            fd_axis([&g, i](Point q) { return christoffel(g, q).gamma[i][1][1]; }, p, 0, hs,
                    g.domain());
    }
    for (int j = 0; j < 2; ++j)
      chi += ev.gamma[j][0][1].value() * ev.gamma[i][j][1].value() -
             ev.gamma[j][1][1].value() * ev.gamma[i][j][0].value();
    const double gi1 = (i == 0 ? ev.inv11.value() : ev.inv12.value());
    res[i] = chi + gi1 * ev.det.value() * K;
  }
  return res;
}

std::array<double, 2> christoffel_trace_residual(const Metric2& g, Point p) {
  Metric2::Eval ev = g.eval(p, 0);
  const double hs = sampled_grid_h(g);
  double sx, sy;
  if (hs == 0.0) {
    sx = ev.sqrt_det.deriv_x().value();
    sy = ev.sqrt_det.deriv_y().value();
  } else {
    auto sd = [&g](Point q) { return std::sqrt(g.values(q).det()); };
    sx = fd_axis(sd, p, 0, hs, g.domain());
    sy = fd_axis(sd, p, 1, hs, g.domain());
  }
  const double s = ev.sqrt_det.value();
  return {ev.gamma[0][0][0].value() + ev.gamma[1][1][0].value() - sx / s,
          ev.gamma[0][0][1].value() + ev.gamma[1][1][1].value() - sy / s};
}

double b_contraction_residual(const Metric2& g, const ScalarField& z, Point p) {
  Metric2::Eval ev = g.eval(p, 0);
  HessJets h = hessian_jets(ev, z, p, 0);
  BJets b = b_jets(ev, h);
  const double contract = b.b11.value() * h.h11.value() + 2.0 * b.b12.value() * h.h12.value() +
                          b.b22.value() * h.h22.value();
  const double det_h = h.h11.value() * h.h22.value() - h.h12.value() * h.h12.value();
  return contract - 2.0 * det_h / ev.det.value();
}

}  // namespace darboux
