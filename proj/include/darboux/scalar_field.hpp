#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "darboux/grid.hpp"
#include "darboux/jet.hpp"
#include "darboux/types.hpp"

namespace darboux {

// Evaluator for an analytic field: Taylor jet of the requested degree at (x, y).
using AnalyticFn = std::function<Jet(double x, double y, int deg)>;

// Real-valued field on a rectangle with derivative access.
//
// Two backings: analytic (exact jets from closed-form composition) and
// sampled (values on a Grid2D; derivatives by order-4 stencils, centered in
// the interior and one-sided within 4 cells of the boundary). Immutable and
// cheap to copy; evaluation is pure.
class ScalarField {
 public:
  static constexpr int kMaxDerivOrder = 4;

  ScalarField() = default;

  static ScalarField analytic(Rect domain, AnalyticFn fn);
  static ScalarField constant(Rect domain, double v);
  static ScalarField sampled(Grid2D grid, std::vector<double> values);

  bool valid() const { return impl_ != nullptr; }
  const Rect& domain() const;
  bool analytic_backing() const;

  // Largest jet degree the backing supports (6 analytic, 4 sampled).
  int max_degree() const;

  double value(Point p) const;
  double operator()(double x, double y) const { return value({x, y}); }

  // d^{dx+dy} f / dx^dx dy^dy at p; dx + dy <= 4.
  double derivative(Point p, int dx, int dy) const;

  Jet jet(Point p, int deg) const;

  const Grid2D* grid() const;  // null for analytic backing
  const std::vector<double>* samples() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Samples src on a grid of spacing h covering r (r plus the covering
// overshoot must lie inside src's domain).
ScalarField sample_field(const ScalarField& src, Rect r, double h);

// Polynomial sum c[i][j] x^i y^j (exact jets).
ScalarField polynomial_field(Rect domain, const std::vector<std::vector<double>>& coeff);

// Seeded random polynomial of total degree <= degree with coefficients in
// [-1, 1]. Coefficients are derived from raw mt19937_64 output so reports
// are reproducible across platforms.
ScalarField random_polynomial_field(Rect domain, unsigned long long seed, int degree = 4);

// CSV dump: header "x,y,value", row-major over the grid, 17 significant digits.
void dump_csv(std::ostream& os, const ScalarField& f, const Grid2D& grid);

}  // namespace darboux
