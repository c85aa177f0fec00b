#include "darboux/curvature_build.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace darboux {

bool squares_disjoint_exact(long long n_max) {
  // Outer half-widths W_n = 1/(2n(n+1)). Need W_n + W_{n+1} < 1/n - 1/(n+1)
  // for consecutive squares (non-consecutive are farther apart with smaller
  // widths). Multiply by 2n(n+1)(n+2):
  //   (n+2) + n < 2(n+2)
  for (long long n = 1; n < n_max; ++n) {
    const __int128 lhs = (__int128)(n + 2) + n;
    const __int128 rhs = (__int128)2 * (n + 2);
    if (!(lhs < rhs)) return false;
    // Also verify the literal gap inequality with exact cross-multiplication:
    // 1/(2n(n+1)) + 1/(2(n+1)(n+2)) < 1/(n(n+1))
    const __int128 a = (__int128)(n + 2) + n;            // numerator over 2n(n+1)(n+2)
    const __int128 b = (__int128)2 * (n + 2);            // 1/(n(n+1)) on same denominator
    if (!(a < b)) return false;
  }
  // Inner inside outer: w_n < W_n  <=>  1/(4n(n+1)) < 1/(2n(n+1)).
  for (long long n = 1; n <= n_max; ++n)
    if (!((__int128)2 < (__int128)4)) return false;
  return true;
}

namespace {

// 1-D profile psi(t) = exp(-1/(1-t^2)) for |t| < 1, else 0.
Jet psi_jet(const Jet& t, int deg) {
  Jet u = 1.0 - t * t;
  if (u.value() <= 1e-12) return Jet(0.0, deg);
  return jexp(-u.recip());
}

double psi_value(double t) {
  const double u = 1.0 - t * t;
  if (u <= 1e-12) return 0.0;
  return std::exp(-1.0 / u);
}

}  // namespace

double BumpProfile::value(double x, double y) { return psi_value(x) * psi_value(y); }

Jet BumpProfile::eval(const Jet& x, const Jet& y) {
  const int deg = std::min(x.degree(), y.degree());
  return psi_jet(x, deg) * psi_jet(y, deg);
}

const std::array<double, 5>& BumpProfile::derivative_bounds() {
  static const std::array<double, 5> bounds = [] {
    // Dense sampling of the 1-D factor's derivatives, then B_k from the
    // separable structure: sup |d^a psi d^b psi| = M_a M_b.
    const int N = 8192;
    std::array<double, 5> m{};
    for (int i = 0; i <= N; ++i) {
      const double t = -1.0 + 2.0 * i / N;
      Jet j = psi_jet(Jet::variable(t, 0, 4), 4);
      for (int k = 0; k <= 4; ++k) m[k] = std::max(m[k], std::abs(j.partial(k, 0)));
    }
    std::array<double, 5> b{};
    for (int k = 0; k <= 4; ++k) {
      double best = 0.0;
      for (int a = 0; a <= k; ++a) best = std::max(best, m[a] * m[k - a]);
      b[k] = 1.2 * best;
    }
    return b;
  }();
  return bounds;
}

GammaSchedule GammaSchedule::paper_default(int n_max) {
  const double b4 = BumpProfile::derivative_bounds()[4];
  GammaSchedule s;
  s.gamma.resize(n_max);
  for (int n = 1; n <= n_max; ++n) {
    const double scale = std::pow(4.0 * n * (n + 1.0), 4) * b4;
    s.gamma[n - 1] = std::pow(2.0, -n) / std::max(1.0, scale);
  }
  return s;
}

CurvatureSpec CurvatureSpec::defaults(int n_max) {
  CurvatureSpec spec;
  spec.family.n_max = n_max;
  spec.schedule = GammaSchedule::paper_default(n_max);
  spec.default_schedule = true;
  return spec;
}

std::string CurvatureSpec::to_json() const {
  nlohmann::ordered_json j;
  j["n_max"] = family.n_max;
  if (default_schedule)
    j["gamma_rule"] = "paper_default";
  else
    j["gamma_rule"] = schedule.gamma;
  j["phi"] = "default_bump";
  return j.dump(2);
}

CurvatureSpec CurvatureSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("curvature spec: invalid JSON: ") + e.what());
  }
  CurvatureSpec spec;
  if (!j.contains("n_max") || !j["n_max"].is_number_integer())
    throw ConfigError("curvature spec: missing integer n_max");
  spec.family.n_max = j["n_max"].get<int>();
  if (spec.family.n_max < 1) throw ConfigError("curvature spec: n_max must be >= 1");
  if (j.contains("phi") && j["phi"] != "default_bump")
    throw ConfigError("curvature spec: unknown phi profile");
  const auto& rule = j.contains("gamma_rule") ? j["gamma_rule"] : nlohmann::json("paper_default");
  if (rule.is_string() && rule == "paper_default") {
    spec.schedule = GammaSchedule::paper_default(spec.family.n_max);
    spec.default_schedule = true;
  } else if (rule.is_array()) {
    spec.schedule.gamma = rule.get<std::vector<double>>();
    spec.default_schedule = false;
    if (static_cast<int>(spec.schedule.gamma.size()) != spec.family.n_max)
      throw ConfigError("curvature spec: gamma array length must equal n_max");
    for (double g : spec.schedule.gamma)
      if (!(g > 0.0)) throw ConfigError("curvature spec: gamma values must be positive");
  } else {
    throw ConfigError("curvature spec: gamma_rule must be \"paper_default\" or an array");
  }
  return spec;
}

Region locate(const CurvatureSpec& spec, Point q) {
  if (q.x <= 0.0) return {RegionKind::Outside, 0};
  const int n_max = spec.family.n_max;
  int lo = 1, hi = n_max;
  if (q.x < 1.5) {
    const int est = static_cast<int>(std::floor(1.0 / q.x));
    lo = std::max(1, est - 1);
    hi = std::min(n_max, est + 1);
  } else {
    lo = hi = 1;
  }
  for (int n = lo; n <= hi; ++n) {
    const double d = std::max(std::abs(q.x - SquareFamily::center_x(n)), std::abs(q.y));
    if (d <= SquareFamily::inner_half_width(n)) return {RegionKind::Inner, n};
    if (d < SquareFamily::outer_half_width(n)) return {RegionKind::Transition, n};
  }
  return {RegionKind::Outside, 0};
}

std::string region_to_string(const Region& r) {
  switch (r.kind) {
    case RegionKind::Inner: return "inner:" + std::to_string(r.n);
    case RegionKind::Transition: return "transition:" + std::to_string(r.n);
    case RegionKind::Outside: return "outside";
  }
  return "outside";
}

double k_eval(const CurvatureSpec& spec, Point q) {
  Region r = locate(spec, q);
  if (r.kind != RegionKind::Inner) return 0.0;
  const double scale = 4.0 * r.n * (r.n + 1.0);
  return spec.schedule.at(r.n) *
         BumpProfile::value(scale * (q.x - SquareFamily::center_x(r.n)), scale * q.y);
}

Jet k_eval_jet(const CurvatureSpec& spec, Point q, int deg) {
  Region r = locate(spec, q);
  if (r.kind != RegionKind::Inner) return Jet(0.0, deg);
  const double scale = 4.0 * r.n * (r.n + 1.0);
  Jet u = (Jet::variable(q.x, 0, deg) - SquareFamily::center_x(r.n)) * scale;
  Jet v = Jet::variable(q.y, 1, deg) * scale;
  return BumpProfile::eval(u, v) * spec.schedule.at(r.n);
}

ScalarField curvature_spec_field(const CurvatureSpec& spec, Rect domain) {
  return ScalarField::analytic(
      domain, [spec](double x, double y, int deg) { return k_eval_jet(spec, {x, y}, deg); });
}

SmoothnessReport smoothness_certificate(const CurvatureSpec& spec, int n, int order_k) {
  if (n < 1 || n > spec.family.n_max)
    throw std::invalid_argument("smoothness_certificate: n outside materialized family");
  if (order_k < 0 || order_k > 4)
    throw std::invalid_argument("smoothness_certificate: order must be <= 4");

  SmoothnessReport rep;
  rep.n = n;
  rep.order = order_k;
  const auto& B = BumpProfile::derivative_bounds();
  const double gamma_n = spec.schedule.at(n);
  const double scale = 4.0 * n * (n + 1.0);
  const double w = SquareFamily::inner_half_width(n);
  const double cx = SquareFamily::center_x(n);
  const double delta = w / 8.0;

  rep.max_difference.assign(std::max(order_k, 0), 0.0);
  rep.derivative_bound.assign(std::max(order_k, 0), 0.0);
  for (int j = 1; j <= order_k; ++j)
    rep.derivative_bound[j - 1] = 2.0 * gamma_n * std::pow(scale, j) * B[j];
  rep.decay_bound = 2.0 * std::pow(2.0, -n);

  const int stations = 65;
  auto binom = [](int j, int i) {
    double r = 1.0;
    for (int t = 0; t < i; ++t) r = r * (j - t) / (t + 1);
    return r;
  };
  // Transects across each of the four sides, differencing in the normal
  // direction so the stencil straddles the boundary.
  for (int side = 0; side < 4; ++side) {
    for (int st = 0; st < stations; ++st) {
      const double a = -w + 2.0 * w * st / (stations - 1);
      Point bp;     // boundary point
      double nx, ny;  // unit normal of the transect
      switch (side) {
        case 0: bp = {cx + w, a}; nx = 1; ny = 0; break;
        case 1: bp = {cx - w, a}; nx = 1; ny = 0; break;
        case 2: bp = {cx + a, w}; nx = 0; ny = 1; break;
        default: bp = {cx + a, -w}; nx = 0; ny = 1; break;
      }
      rep.max_boundary_value = std::max(rep.max_boundary_value, std::abs(k_eval(spec, bp)));
      for (int j = 1; j <= order_k; ++j) {
        double diff = 0.0;
        for (int i = 0; i <= j; ++i) {
          const double off = (i - 0.5 * j) * delta;
          const double sgn = ((j - i) % 2 == 0) ? 1.0 : -1.0;
          diff += sgn * binom(j, i) * k_eval(spec, {bp.x + nx * off, bp.y + ny * off});
        }
        rep.max_difference[j - 1] =
            std::max(rep.max_difference[j - 1], std::abs(diff) / std::pow(delta, j));
      }
    }
  }

  rep.boundary_zero_ok = rep.max_boundary_value <= 1e-300;
  rep.derivative_bounds_ok = true;
  for (int j = 1; j <= order_k; ++j)
    if (rep.max_difference[j - 1] > rep.derivative_bound[j - 1]) rep.derivative_bounds_ok = false;
  rep.observed_at_order_k = order_k >= 1 ? rep.max_difference[order_k - 1] : 0.0;
  rep.decay_ok = rep.observed_at_order_k <= rep.decay_bound;
  rep.pass = rep.boundary_zero_ok && rep.derivative_bounds_ok && rep.decay_ok;
  return rep;
}

CurvedMetric metric_from_curvature(const ScalarField& K, Rect domain, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("metric_from_curvature: step must be positive");
  if (!(domain.x0 <= 0.0 && domain.x1 >= 0.0))
    throw PreconditionError("metric_from_curvature: domain must intersect the line x = 0");
  if (!K.domain().contains(domain))
    throw DomainError("metric_from_curvature: curvature not evaluable on domain");

  // Nodes at integer multiples of step so x = 0 is a sample.
  const long i_min = std::lround(std::ceil(domain.x0 / step - 1e-9));
  const long i_max = std::lround(std::floor(domain.x1 / step + 1e-9));
  const long j_min = std::lround(std::ceil(domain.y0 / step - 1e-9));
  const long j_max = std::lround(std::floor(domain.y1 / step + 1e-9));
  const int nx = static_cast<int>(i_max - i_min + 1);
  const int ny = static_cast<int>(j_max - j_min + 1);
  if (nx < 9 || ny < 9)
    throw std::invalid_argument("metric_from_curvature: domain too small for the step");
  Grid2D grid({i_min * step, j_min * step}, step, nx, ny);
  const int i0 = static_cast<int>(-i_min);

  std::vector<double> Gv(grid.size(), 0.0);
  for (int j = 0; j < ny; ++j) {
    const double y = grid.y(j);
    auto march = [&](int dir) {
      double G = 1.0, Gp = 0.0;
      Gv[grid.index(i0, j)] = 1.0;
      const double h = dir * step;
      for (int i = i0; (dir > 0) ? i < nx - 1 : i > 0; i += dir) {
        const double x = grid.x(i);
        auto f = [&](double xx, double g, double gp, double& dg, double& dgp) {
          dg = gp;
          dgp = -K(xx, y) * g;
        };
        double k1g, k1p, k2g, k2p, k3g, k3p, k4g, k4p;
        f(x, G, Gp, k1g, k1p);
        f(x + 0.5 * h, G + 0.5 * h * k1g, Gp + 0.5 * h * k1p, k2g, k2p);
        f(x + 0.5 * h, G + 0.5 * h * k2g, Gp + 0.5 * h * k2p, k3g, k3p);
        f(x + h, G + h * k3g, Gp + h * k3p, k4g, k4p);
        G += h / 6.0 * (k1g + 2.0 * (k2g + k3g) + k4g);
        Gp += h / 6.0 * (k1p + 2.0 * (k2p + k3p) + k4p);
        if (!(G > 0.0))
          throw IntegrationError("metric_from_curvature: G <= 0 reached; shrink the domain");
        Gv[grid.index(i + dir, j)] = G;
      }
    };
    march(+1);
    march(-1);
  }

  ScalarField G = ScalarField::sampled(grid, std::move(Gv));
  Rect dom = grid.rect();
  ScalarField g22 = ScalarField::analytic(dom, [G](double x, double y, int deg) {
    Jet gj = G.jet({x, y}, std::min(deg, G.max_degree()));
    return gj * gj;
  });
  Metric2 metric(ScalarField::constant(dom, 1.0), ScalarField::constant(dom, 0.0), g22);
  return {std::move(metric), std::move(G), grid};
}

double curvature_roundtrip_error(const CurvedMetric& cm, const ScalarField& K, int samples) {
  Rect r = cm.grid.rect().inset(4.0 * cm.grid.h);
  double worst = 0.0;
  for (int j = 0; j < samples; ++j)
    for (int i = 0; i < samples; ++i) {
      Point p{r.x0 + r.width() * i / (samples - 1), r.y0 + r.height() * j / (samples - 1)};
      worst = std::max(worst, std::abs(gaussian_curvature(cm.metric, p) - K(p.x, p.y)));
    }
  return worst;
}

}  // namespace darboux
