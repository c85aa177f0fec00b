#include "darboux/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "darboux/quadrature.hpp"

namespace darboux {

namespace {

Rect common_domain(const Embedding3& f) {
  Rect d = f.z1.domain();
  auto clip = [&d](const Rect& r) {
    d = {std::max(d.x0, r.x0), std::min(d.x1, r.x1), std::max(d.y0, r.y0), std::min(d.y1, r.y1)};
  };
  clip(f.z2.domain());
  clip(f.z3.domain());
  return d;
}

struct TangentJets {
  Jet dx[3], dy[3];
};

TangentJets tangents(const Embedding3& f, double x, double y, int deg) {
  TangentJets t;
  const ScalarField* zs[3] = {&f.z1, &f.z2, &f.z3};
  for (int a = 0; a < 3; ++a) {
    Jet j = zs[a]->jet({x, y}, deg + 1);
    t.dx[a] = j.deriv_x();
    t.dy[a] = j.deriv_y();
  }
  return t;
}

}  // namespace

Metric2 induced_metric(const Embedding3& f) {
  Rect dom = common_domain(f);
  const int cap = std::min({f.z1.max_degree(), f.z2.max_degree(), f.z3.max_degree()}) - 1;
  auto comp = [f, cap](int i, int j) {
    return [f, cap, i, j](double x, double y, int deg) {
      TangentJets t = tangents(f, x, y, std::min(deg, cap));
      const Jet* di = (i == 0 ? t.dx : t.dy);
      const Jet* dj = (j == 0 ? t.dx : t.dy);
      Jet acc = di[0] * dj[0];
      acc += di[1] * dj[1];
      acc += di[2] * dj[2];
      return acc;
    };
  };
  return Metric2(ScalarField::analytic(dom, comp(0, 0)), ScalarField::analytic(dom, comp(0, 1)),
                 ScalarField::analytic(dom, comp(1, 1)));
}

NormalComponentSq normal_component_sq(const Embedding3& f, Point p) {
  TangentJets t = tangents(f, p.x, p.y, 0);
  double a[3], b[3];
  for (int i = 0; i < 3; ++i) {
    a[i] = t.dx[i].value();
    b[i] = t.dy[i].value();
  }
  const double nx = a[1] * b[2] - a[2] * b[1];
  const double ny = a[2] * b[0] - a[0] * b[2];
  const double nz = a[0] * b[1] - a[1] * b[0];
  const double n2 = nx * nx + ny * ny + nz * nz;
  if (!(n2 > 0.0)) throw DegenerateMetric("normal_component_sq: degenerate tangent plane");
  NormalComponentSq r;
  r.via_cross = nz * nz / n2;
  Metric2 g = induced_metric(f);
  r.via_metric = 1.0 - grad_norm_sq(g, f.z3, p);
  return r;
}

double max_darboux_residual(const Embedding3& f, int samples) {
  Metric2 g = induced_metric(f);
  ScalarField K = curvature_field(g);
  Rect dom = common_domain(f);
  const Rect r = dom.inset(1e-3 * std::min(dom.width(), dom.height()));
  double worst = 0.0;
  for (int j = 0; j < samples; ++j)
    for (int i = 0; i < samples; ++i) {
      Point p{r.x0 + r.width() * i / (samples - 1), r.y0 + r.height() * j / (samples - 1)};
      worst = std::max(worst, std::abs(darboux_residual(g, f.z3, K, p)));
    }
  return worst;
}

Embedding3 rigid_normalize(const Embedding3& f, Point p) {
  TangentJets t = tangents(f, p.x, p.y, 0);
  double a[3], b[3];
  for (int i = 0; i < 3; ++i) {
    a[i] = t.dx[i].value();
    b[i] = t.dy[i].value();
  }
  double n[3] = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  const double nn = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (!(nn > 0.0)) throw DegenerateMetric("rigid_normalize: degenerate tangent plane");
  for (double& v : n) v /= nn;

  // Rodrigues rotation taking n to e3. Antipodal case: half-turn about x.
  double A[3][3];
  const double c = n[2];
  if (c < -1.0 + 1e-14) {
    const double R[3][3] = {{1, 0, 0}, {0, -1, 0}, {0, 0, -1}};
    std::copy(&R[0][0], &R[0][0] + 9, &A[0][0]);
  } else {
    // axis k = n x e3 (unnormalized), sin = |k|
    const double kx = n[1], ky = -n[0];
    const double s2 = kx * kx + ky * ky;
    const double fac = (s2 > 0.0) ? (1.0 - c) / s2 : 0.0;
    A[0][0] = c + fac * kx * kx;
    A[0][1] = fac * kx * ky;
    A[0][2] = ky;
    A[1][0] = fac * kx * ky;
    A[1][1] = c + fac * ky * ky;
    A[1][2] = -kx;
    A[2][0] = -ky;
    A[2][1] = kx;
    A[2][2] = c;
  }

  Rect dom = common_domain(f);
  auto rotated = [f, A, dom](int row) {
    const double r0 = A[row][0], r1 = A[row][1], r2 = A[row][2];
    return ScalarField::analytic(dom, [f, r0, r1, r2](double x, double y, int deg) {
      Jet acc = f.z1.jet({x, y}, deg) * r0;
      acc += f.z2.jet({x, y}, deg) * r1;
      acc += f.z3.jet({x, y}, deg) * r2;
      return acc;
    });
  };
  return {rotated(0), rotated(1), rotated(2)};
}

Metric2 metric_minus_dz2(const Metric2& g, const ScalarField& z) {
  Rect dom = g.domain();
  auto comp = [g, z](int i, int j) {
    return [g, z, i, j](double x, double y, int deg) {
      const ScalarField& gij = (i == 0 ? (j == 0 ? g.g11() : g.g12()) : g.g22());
      Jet zj = z.jet({x, y}, std::min(deg + 1, z.max_degree()));
      Jet zi = (i == 0) ? zj.deriv_x() : zj.deriv_y();
      Jet zjd = (j == 0) ? zj.deriv_x() : zj.deriv_y();
      return gij.jet({x, y}, deg) - zi * zjd;
    };
  };
  return Metric2(ScalarField::analytic(dom, comp(0, 0)), ScalarField::analytic(dom, comp(0, 1)),
                 ScalarField::analytic(dom, comp(1, 1)));
}

double flatness_residual(const Metric2& g, const ScalarField& z, int samples) {
  Rect r = g.domain().inset(1e-3 * std::min(g.domain().width(), g.domain().height()));
  Metric2 h = metric_minus_dz2(g, z);
  double worst = 0.0;
  for (int j = 0; j < samples; ++j)
    for (int i = 0; i < samples; ++i) {
      Point p{r.x0 + r.width() * i / (samples - 1), r.y0 + r.height() * j / (samples - 1)};
      if (grad_norm_sq(g, z, p) >= 1.0)
        throw PreconditionError("flatness_residual: |grad_g z| >= 1 on the domain");
      worst = std::max(worst, std::abs(gaussian_curvature(h, p)));
    }
  return worst;
}

namespace {

// Orthonormal-coframe data for a metric h: upper-triangular coframe
// theta^1 = w11 dx + w12 dy, theta^2 = w22 dy (Gram-Schmidt on dx, dy) and
// connection form omega with d(theta^1) = -omega ^ theta^2,
// d(theta^2) = omega ^ theta^1.
struct CoframeEval {
  Jet w11, w12, w22;
  Jet omega_x, omega_y;
};

CoframeEval coframe(const Metric2& h, double x, double y, int deg) {
  // omega needs first derivatives of the w's.
  Point p{x, y};
  Jet h11 = h.g11().jet(p, deg + 1);
  Jet h12 = h.g12().jet(p, deg + 1);
  Jet h22 = h.g22().jet(p, deg + 1);
  if (!(h11.value() > 0.0) || !(h11.value() * h22.value() - h12.value() * h12.value() > 0.0))
    throw DegenerateMetric("develop_flat: metric not positive definite");
  CoframeEval cf;
  cf.w11 = jsqrt(h11);
  cf.w12 = h12 / cf.w11;
  cf.w22 = jsqrt(h22 - h12 * h12 / h11);
  Jet c1 = cf.w12.deriv_x() - cf.w11.deriv_y();
  Jet c2 = cf.w22.deriv_x();
  cf.omega_x = -(c1 / cf.w22);
  cf.omega_y = (cf.w12 * cf.omega_x - c2) / cf.w11;
  return cf;
}

struct PathState {
  double psi = 0.0, z1 = 0.0, z2 = 0.0;
};

// RK4 transport of (psi, z1, z2) along one axis-aligned leg.
// axis 0: vary x at fixed y; axis 1: vary y at fixed x.
void integrate_leg(const Metric2& h, PathState& st, int axis, double fixed, double from, double to) {
  const double len = std::abs(to - from);
  if (len == 0.0) return;
  const int steps = std::max(16, static_cast<int>(std::ceil(len * 512.0)));
  const double dt = (to - from) / steps;
  auto rhs = [&](double pos, const PathState& s, double out[3]) {
    const double x = (axis == 0) ? pos : fixed;
    const double y = (axis == 0) ? fixed : pos;
    CoframeEval cf = coframe(h, x, y, 0);
    const double w11 = cf.w11.value(), w12 = cf.w12.value(), w22 = cf.w22.value();
    const double cp = std::cos(s.psi), sp = std::sin(s.psi);
    if (axis == 0) {
      out[0] = cf.omega_x.value();
      out[1] = cp * w11;  // rotated theta^1, x-component
      out[2] = -sp * w11;
    } else {
      out[0] = cf.omega_y.value();
      out[1] = cp * w12 + sp * w22;
      out[2] = -sp * w12 + cp * w22;
    }
  };
  double pos = from;
  for (int k = 0; k < steps; ++k) {
    double k1[3], k2[3], k3[3], k4[3];
    PathState t = st;
    rhs(pos, t, k1);
    t = {st.psi + 0.5 * dt * k1[0], st.z1 + 0.5 * dt * k1[1], st.z2 + 0.5 * dt * k1[2]};
    rhs(pos + 0.5 * dt, t, k2);
    t = {st.psi + 0.5 * dt * k2[0], st.z1 + 0.5 * dt * k2[1], st.z2 + 0.5 * dt * k2[2]};
    rhs(pos + 0.5 * dt, t, k3);
    t = {st.psi + dt * k3[0], st.z1 + dt * k3[1], st.z2 + dt * k3[2]};
    rhs(pos + dt, t, k4);
    st.psi += dt / 6.0 * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0]);
    st.z1 += dt / 6.0 * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1]);
    st.z2 += dt / 6.0 * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2]);
    pos += dt;
  }
}

PathState transport(const Metric2& h, Point base, Point target, bool x_leg_first) {
  PathState st;
  if (x_leg_first) {
    integrate_leg(h, st, 0, base.y, base.x, target.x);
    integrate_leg(h, st, 1, target.x, base.y, target.y);
  } else {
    integrate_leg(h, st, 1, base.x, base.y, target.y);
    integrate_leg(h, st, 0, target.y, base.x, target.x);
  }
  return st;
}

// Jet of the developed coordinate (alpha = 0 or 1) at a point, built from the
// transported values and the closed rotated coframe.
Jet developed_jet(const Metric2& h, Point base, double x, double y, int alpha, int deg) {
  PathState st = transport(h, base, {x, y}, true);
  const double val = (alpha == 0) ? st.z1 : st.z2;
  if (deg == 0) return Jet(val, 0);
  CoframeEval cf = coframe(h, x, y, std::max(deg - 2, 0));
  // psi jet from its exact differential omega.
  Jet psi = (deg >= 2) ? jet_from_gradient(st.psi, cf.omega_x, cf.omega_y).truncate(deg - 1)
                       : Jet(st.psi, 0);
  Jet cp = jcos(psi), sp = jsin(psi);
  Jet tx, ty;
  if (alpha == 0) {
    tx = cp * cf.w11;
    ty = cp * cf.w12 + sp * cf.w22;
  } else {
    tx = -(sp * cf.w11);
    ty = -(sp * cf.w12) + cp * cf.w22;
  }
  return jet_from_gradient(val, tx.truncate(deg - 1), ty.truncate(deg - 1)).truncate(deg);
}

}  // namespace

FlatChart develop_flat(const Metric2& h, Point base, double flatness_tol, double path_tol) {
  Rect dom = h.domain();
  if (!dom.contains(base)) throw DomainError("develop_flat: base outside domain");

  // Flatness gate.
  const int ns = 11;
  Rect r = dom.inset(1e-3 * std::min(dom.width(), dom.height()));
  double kmax = 0.0;
  for (int j = 0; j < ns; ++j)
    for (int i = 0; i < ns; ++i) {
      Point p{r.x0 + r.width() * i / (ns - 1), r.y0 + r.height() * j / (ns - 1)};
      kmax = std::max(kmax, std::abs(gaussian_curvature(h, p)));
    }
  if (kmax > flatness_tol)
    throw PreconditionError("develop_flat: metric is not flat to tolerance");

  // Path-independence audit at the domain corners and center.
  double pd = 0.0;
  const Point probes[5] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x0, r.y1}, {r.x1, r.y1}, r.center()};
  for (const Point& q : probes) {
    PathState a = transport(h, base, q, true);
    PathState b = transport(h, base, q, false);
    pd = std::max({pd, std::abs(a.z1 - b.z1), std::abs(a.z2 - b.z2)});
  }
  if (pd > path_tol)
    throw IntegrationError("develop_flat: path dependence above tolerance");

  FlatChart chart;
  chart.path_dependence = pd;
  chart.z1 = ScalarField::analytic(
      dom, [h, base](double x, double y, int deg) { return developed_jet(h, base, x, y, 0, deg); });
  chart.z2 = ScalarField::analytic(
      dom, [h, base](double x, double y, int deg) { return developed_jet(h, base, x, y, 1, deg); });
  return chart;
}

namespace {

ScalarField coordinate_field(Rect dom, int axis) {
  return ScalarField::analytic(
      dom, [axis](double x, double y, int deg) { return Jet::variable(axis == 0 ? x : y, axis, deg); });
}

Fixture graph_fixture(const std::string& name, Rect dom, AnalyticFn height, AnalyticFn curvature) {
  Fixture fx;
  fx.name = name;
  fx.domain = dom;
  Embedding3 emb{coordinate_field(dom, 0), coordinate_field(dom, 1),
                 ScalarField::analytic(dom, std::move(height))};
  fx.metric = induced_metric(emb);
  fx.curvature = ScalarField::analytic(dom, std::move(curvature));
  fx.z = emb.z3;
  fx.embedding = std::move(emb);
  return fx;
}

}  // namespace

Fixture make_fixture(const std::string& name) {
  if (name == "plane") {
    Rect dom{-0.5, 0.5, -0.5, 0.5};
    return graph_fixture(
        "plane", dom, [](double, double, int deg) { return Jet(0.0, deg); },
        [](double, double, int deg) { return Jet(0.0, deg); });
  }
  if (name == "sphere") {
    // Graph patch of the radius-2 sphere; K = 1/4.
    Rect dom{-0.3, 0.3, -0.3, 0.3};
    return graph_fixture(
        "sphere", dom,
        [](double x, double y, int deg) {
          Jet X = Jet::variable(x, 0, deg), Y = Jet::variable(y, 1, deg);
          return jsqrt(4.0 - X * X - Y * Y);
        },
        [](double, double, int deg) { return Jet(0.25, deg); });
  }
  if (name == "saddle") {
    Rect dom{-0.5, 0.5, -0.5, 0.5};
    return graph_fixture(
        "saddle", dom,
        [](double x, double y, int deg) {
          return Jet::variable(x, 0, deg) * Jet::variable(y, 1, deg);
        },
        [](double x, double y, int deg) {
          Jet q = 1.0 + Jet::variable(x, 0, deg) * Jet::variable(x, 0, deg) +
                  Jet::variable(y, 1, deg) * Jet::variable(y, 1, deg);
          return -(q * q).recip();
        });
  }
  if (name == "saddle2") {
    Rect dom{-0.25, 0.25, -0.25, 0.25};
    return graph_fixture(
        "saddle2", dom,
        [](double x, double y, int deg) {
          Jet X = Jet::variable(x, 0, deg), Y = Jet::variable(y, 1, deg);
          return X * X - Y * Y;
        },
        [](double x, double y, int deg) {
          Jet X = Jet::variable(x, 0, deg), Y = Jet::variable(y, 1, deg);
          Jet q = 1.0 + 4.0 * X * X + 4.0 * Y * Y;
          return -4.0 * (q * q).recip();
        });
  }
  if (name == "cosmetric") {
    // Intrinsic metric dx^2 + cos^2(x) dy^2; K = 1; no embedding attached.
    Rect dom{-0.5, 0.5, -0.5, 0.5};
    Fixture fx;
    fx.name = "cosmetric";
    fx.domain = dom;
    ScalarField g22 = ScalarField::analytic(dom, [](double x, double, int deg) {
      Jet c = jcos(Jet::variable(x, 0, deg));
      return c * c;
    });
    fx.metric = Metric2(ScalarField::constant(dom, 1.0), ScalarField::constant(dom, 0.0), g22);
    fx.curvature = ScalarField::constant(dom, 1.0);
    return fx;
  }
  if (name == "flat") {
    Rect dom{-0.5, 0.5, -0.5, 0.5};
    Fixture fx;
    fx.name = "flat";
    fx.domain = dom;
    fx.metric = Metric2::euclidean(dom);
    fx.curvature = ScalarField::constant(dom, 0.0);
    return fx;
  }
  throw ConfigError("unknown fixture: " + name);
}

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"plane", "sphere", "saddle", "saddle2",
                                                 "cosmetric", "flat"};
  return names;
}

}  // namespace darboux
