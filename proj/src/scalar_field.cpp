#include "darboux/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "darboux/fd_weights.hpp"

namespace darboux {

struct ScalarField::Impl {
  Rect domain;
  AnalyticFn fn;  // set iff analytic
  Grid2D grid;    // valid iff sampled
  std::vector<double> values;
  bool is_analytic = false;
};

ScalarField ScalarField::analytic(Rect domain, AnalyticFn fn) {
  auto impl = std::make_shared<Impl>();
  impl->domain = domain;
  impl->fn = std::move(fn);
  impl->is_analytic = true;
  ScalarField f;
  f.impl_ = std::move(impl);
  return f;
}

ScalarField ScalarField::constant(Rect domain, double v) {
  return analytic(domain, [v](double, double, int deg) { return Jet(v, deg); });
}

ScalarField ScalarField::sampled(Grid2D grid, std::vector<double> values) {
  if (static_cast<int>(values.size()) != grid.size())
    throw DomainError("ScalarField::sampled: value count does not match grid");
  auto impl = std::make_shared<Impl>();
  impl->domain = grid.rect();
  impl->grid = grid;
  impl->values = std::move(values);
  ScalarField f;
  f.impl_ = std::move(impl);
  return f;
}

const Rect& ScalarField::domain() const { return impl_->domain; }
bool ScalarField::analytic_backing() const { return impl_->is_analytic; }
int ScalarField::max_degree() const { return impl_->is_analytic ? Jet::kMaxDeg : kMaxDerivOrder; }
const Grid2D* ScalarField::grid() const { return impl_->is_analytic ? nullptr : &impl_->grid; }
const std::vector<double>* ScalarField::samples() const {
  return impl_->is_analytic ? nullptr : &impl_->values;
}

namespace {

void check_in_domain(const Rect& d, Point p) {
  const double tol = 1e-9 * std::max({1.0, d.width(), d.height()});
  if (!d.contains(p, tol)) throw DomainError("field evaluation outside domain");
}

struct AxisStencil {
  int start;  // first node index
  std::vector<std::vector<double>> w;
};

AxisStencil axis_stencil(double q, double origin, double h, int n, int order) {
  // At grid nodes: centered 5-point (orders <= 2) / 7-point (orders 3, 4)
  // stencils, order-4 accurate. Off-node queries take one extra point so the
  // generic (non-symmetric) accuracy stays at order 4. Near the boundary fall
  // back to one-sided order-4 windows.
  const double pos = (q - origin) / h;
  const int center = static_cast<int>(std::lround(pos));
  const bool on_node = std::abs(pos - center) < 1e-9;
  int len = (order <= 2) ? 5 : 7;
  int start;
  if (on_node) {
    start = center - len / 2;
  } else {
    ++len;
    start = static_cast<int>(std::floor(pos)) - (len / 2 - 1);
  }
  if (start < 0 || start + len > n) {
    len = std::min(order + 4, n);
    start = std::clamp(center - len / 2, 0, n - len);
  }
  std::vector<double> nodes(len);
  for (int k = 0; k < len; ++k) nodes[k] = origin + (start + k) * h;
  return {start, fd_weights(q, nodes, order)};
}

}  // namespace

double ScalarField::value(Point p) const { return derivative(p, 0, 0); }

double ScalarField::derivative(Point p, int dx, int dy) const {
  if (dx < 0 || dy < 0 || dx + dy > kMaxDerivOrder)
    throw std::invalid_argument("ScalarField::derivative: order above 4 unsupported");
  check_in_domain(impl_->domain, p);
  if (impl_->is_analytic) {
    return impl_->fn(p.x, p.y, dx + dy).partial(dx, dy);
  }
  const Grid2D& g = impl_->grid;
  AxisStencil sx = axis_stencil(p.x, g.origin.x, g.h, g.nx, dx);
  AxisStencil sy = axis_stencil(p.y, g.origin.y, g.h, g.ny, dy);
  const auto& wx = sx.w[dx];
  const auto& wy = sy.w[dy];
  double sum = 0.0;
  for (size_t l = 0; l < wy.size(); ++l) {
    double row = 0.0;
    const int j = sy.start + static_cast<int>(l);
    for (size_t k = 0; k < wx.size(); ++k)
      row += wx[k] * impl_->values[g.index(sx.start + static_cast<int>(k), j)];
    sum += wy[l] * row;
  }
  return sum;
}

Jet ScalarField::jet(Point p, int deg) const {
  check_in_domain(impl_->domain, p);
  if (impl_->is_analytic) return impl_->fn(p.x, p.y, deg);
  if (deg > kMaxDerivOrder)
    throw std::invalid_argument("ScalarField::jet: sampled backing supports degree <= 4");
  const Grid2D& g = impl_->grid;
  AxisStencil sx = axis_stencil(p.x, g.origin.x, g.h, g.nx, deg);
  AxisStencil sy = axis_stencil(p.y, g.origin.y, g.h, g.ny, deg);
  static const double inv_fact[5] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
  Jet r(0.0, deg);
  for (int i = 0; i <= deg; ++i) {
    for (int j = 0; i + j <= deg; ++j) {
      const auto& wx = sx.w[i];
      const auto& wy = sy.w[j];
      double sum = 0.0;
      for (size_t l = 0; l < wy.size(); ++l) {
        double row = 0.0;
        const int jj = sy.start + static_cast<int>(l);
        for (size_t k = 0; k < wx.size(); ++k)
          row += wx[k] * impl_->values[g.index(sx.start + static_cast<int>(k), jj)];
        sum += wy[l] * row;
      }
      r.at(i, j) = sum * inv_fact[i] * inv_fact[j];
    }
  }
  return r;
}

ScalarField sample_field(const ScalarField& src, Rect r, double h) {
  Grid2D grid = Grid2D::covering(r, h);
  std::vector<double> v(grid.size());
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) v[grid.index(i, j)] = src(grid.x(i), grid.y(j));
  return ScalarField::sampled(grid, std::move(v));
}

ScalarField polynomial_field(Rect domain, const std::vector<std::vector<double>>& coeff) {
  return ScalarField::analytic(domain, [coeff](double x, double y, int deg) {
    Jet jx = Jet::variable(x, 0, deg);
    Jet jy = Jet::variable(y, 1, deg);
    // Horner in x, inner Horner in y.
    Jet acc(0.0, deg);
    for (auto row = coeff.rbegin(); row != coeff.rend(); ++row) {
      Jet racc(0.0, deg);
      for (auto c = row->rbegin(); c != row->rend(); ++c) racc = racc * jy + *c;
      acc = acc * jx + racc;
    }
    return acc;
  });
}

ScalarField random_polynomial_field(Rect domain, unsigned long long seed, int degree) {
  std::mt19937_64 rng(seed);
  auto draw = [&rng]() {
    // top 53 bits -> [0,1) -> [-1,1); identical on every platform
    return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
  };
  std::vector<std::vector<double>> coeff(degree + 1);
  for (int i = 0; i <= degree; ++i) {
    coeff[i].resize(degree + 1 - i);
    for (int j = 0; i + j <= degree; ++j) coeff[i][j] = draw();
  }
  return polynomial_field(domain, coeff);
}

void dump_csv(std::ostream& os, const ScalarField& f, const Grid2D& grid) {
  os << "x,y,value\n";
  char buf[96];
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.x(i), grid.y(j),
                    f(grid.x(i), grid.y(j)));
      os << buf;
    }
  }
}

}  // namespace darboux
