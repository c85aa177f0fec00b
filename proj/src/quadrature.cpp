#include "darboux/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace darboux {

namespace {

GaussLegendre build_rule(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("GaussLegendre: order out of range");
  GaussLegendre r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[n - 1 - k] = x;
    r.weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

const GaussLegendre& GaussLegendre::get(int order) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

double integrate_segment(const std::function<double(double)>& f, double a, double b, int order,
                         int cells) {
  if (!(b > a)) throw IntegrationError("integrate_segment: empty interval");
  const GaussLegendre& gl = GaussLegendre::get(order);
  const double hc = (b - a) / cells;
  double total = 0.0;
  for (int c = 0; c < cells; ++c) {
    const double mid = a + (c + 0.5) * hc;
    double acc = 0.0;
    for (size_t q = 0; q < gl.nodes.size(); ++q) acc += gl.weights[q] * f(mid + 0.5 * hc * gl.nodes[q]);
    total += acc * 0.5 * hc;
  }
  return total;
}

double integrate_rect(const std::function<double(double, double)>& f, Rect r, int order,
                      int cells) {
  if (r.empty()) throw IntegrationError("integrate_rect: empty rectangle");
  const GaussLegendre& gl = GaussLegendre::get(order);
  const double hx = r.width() / cells;
  const double hy = r.height() / cells;
  double total = 0.0;
  for (int cy = 0; cy < cells; ++cy) {
    const double my = r.y0 + (cy + 0.5) * hy;
    for (int cx = 0; cx < cells; ++cx) {
      const double mx = r.x0 + (cx + 0.5) * hx;
      double acc = 0.0;
      for (size_t qy = 0; qy < gl.nodes.size(); ++qy) {
        const double y = my + 0.5 * hy * gl.nodes[qy];
        double row = 0.0;
        for (size_t qx = 0; qx < gl.nodes.size(); ++qx)
          row += gl.weights[qx] * f(mx + 0.5 * hx * gl.nodes[qx], y);
        acc += gl.weights[qy] * row;
      }
      total += acc * 0.25 * hx * hy;
    }
  }
  return total;
}

double integrate_rect(const ScalarField& f, Rect r, int order, int cells) {
  if (!f.domain().contains(r)) throw DomainError("integrate_rect: rectangle outside field domain");
  return integrate_rect([&f](double x, double y) { return f(x, y); }, r, order, cells);
}

double integrate_boundary(const std::function<double(Side, Point)>& f, Rect r, int order,
                          int cells) {
  if (r.empty()) throw IntegrationError("integrate_boundary: degenerate rectangle");
  double total = 0.0;
  total += integrate_segment([&](double y) { return f(Side::Right, {r.x1, y}); }, r.y0, r.y1,
                             order, cells);
  total += integrate_segment([&](double y) { return f(Side::Left, {r.x0, y}); }, r.y0, r.y1, order,
                             cells);
  total += integrate_segment([&](double x) { return f(Side::Top, {x, r.y1}); }, r.x0, r.x1, order,
                             cells);
  total += integrate_segment([&](double x) { return f(Side::Bottom, {x, r.y0}); }, r.x0, r.x1,
                             order, cells);
  return total;
}

double integrate_boundary(const std::array<ScalarField, 4>& side_fields, Rect r, int order,
                          int cells) {
  return integrate_boundary(
      [&](Side s, Point p) { return side_fields[static_cast<int>(s)].value(p); }, r, order, cells);
}

std::vector<double> cumulative_integral(const std::vector<double>& f, double h, int anchor_index) {
  const int n = static_cast<int>(f.size());
  if (n < 3) throw IntegrationError("cumulative_integral: need at least 3 samples");
  if (anchor_index < 0 || anchor_index >= n)
    throw std::invalid_argument("cumulative_integral: anchor outside range");
  // Composite-Simpson cumulative rule: each interval integrates the quadratic
  // through the three nearest samples.
  std::vector<double> acc(n, 0.0);
  for (int k = 0; k + 1 < n; ++k) {
    double d;
    if (k == 0)
      d = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    else
      d = h / 12.0 * (-f[k - 1] + 8.0 * f[k] + 5.0 * f[k + 1]);
    acc[k + 1] = acc[k] + d;
  }
  const double base = acc[anchor_index];
  for (double& v : acc) v -= base;
  return acc;
}

}  // namespace darboux
