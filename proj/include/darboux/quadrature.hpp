#pragma once

#include <array>
#include <functional>
#include <vector>

#include "darboux/scalar_field.hpp"
#include "darboux/types.hpp"

namespace darboux {

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  static const GaussLegendre& get(int order);
};

inline constexpr int kDefaultQuadOrder = 8;
inline constexpr int kDefaultQuadCells = 8;

// Composite tensor-product Gauss-Legendre over r (cells x cells subdivision).
double integrate_rect(const std::function<double(double, double)>& f, Rect r,
                      int order = kDefaultQuadOrder, int cells = kDefaultQuadCells);
double integrate_rect(const ScalarField& f, Rect r, int order = kDefaultQuadOrder,
                      int cells = kDefaultQuadCells);

// Composite 1-D Gauss-Legendre on [a, b].
double integrate_segment(const std::function<double(double)>& f, double a, double b,
                         int order = kDefaultQuadOrder, int cells = kDefaultQuadCells);

// Boundary traversal of a rectangle with the Euclidean outward normal:
// right (+1,0), left (-1,0), top (0,+1), bottom (0,-1).
enum class Side { Right, Left, Top, Bottom };

constexpr std::array<double, 2> outward_normal(Side s) {
  switch (s) {
    case Side::Right: return {1.0, 0.0};
    case Side::Left: return {-1.0, 0.0};
    case Side::Top: return {0.0, 1.0};
    case Side::Bottom: return {0.0, -1.0};
  }
  return {0.0, 0.0};
}

// Sum of the four 1-D side integrals of f (Euclidean length element).
double integrate_boundary(const std::function<double(Side, Point)>& f, Rect r,
                          int order = kDefaultQuadOrder, int cells = kDefaultQuadCells);

// Variant taking one integrand field per side, ordered right/left/top/bottom.
double integrate_boundary(const std::array<ScalarField, 4>& side_fields, Rect r,
                          int order = kDefaultQuadOrder, int cells = kDefaultQuadCells);

// Cumulative integral of uniformly spaced samples, zero at anchor_index.
// Piecewise-cubic (Simpson-grade) interval rule, 4th order.
std::vector<double> cumulative_integral(const std::vector<double>& f, double h, int anchor_index);

}  // namespace darboux
