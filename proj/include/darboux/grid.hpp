#pragma once

#include <cmath>

#include "darboux/types.hpp"

namespace darboux {

// Uniform sample grid, same spacing on both axes. Sized so that order-4
// stencils (up to 9 nodes) always fit.
struct Grid2D {
  Point origin;
  double h = 0.0;
  int nx = 0;
  int ny = 0;

  Grid2D() = default;
  Grid2D(Point origin_, double h_, int nx_, int ny_) : origin(origin_), h(h_), nx(nx_), ny(ny_) {
    if (!(h > 0.0)) throw DomainError("Grid2D: spacing must be positive");
    if (nx < 9 || ny < 9) throw DomainError("Grid2D: need at least 9 samples per axis");
  }

  double x(int i) const { return origin.x + i * h; }
  double y(int j) const { return origin.y + j * h; }
  int index(int i, int j) const { return j * nx + i; }
  int size() const { return nx * ny; }

  Rect rect() const { return {origin.x, x(nx - 1), origin.y, y(ny - 1)}; }

  // Smallest grid with spacing h whose rectangle contains r (node 0 at the
  // lower-left corner of r; the far edge may overshoot by < h).
  static Grid2D covering(Rect r, double h) {
    int nx = static_cast<int>(std::ceil(r.width() / h - 1e-9)) + 1;
    int ny = static_cast<int>(std::ceil(r.height() / h - 1e-9)) + 1;
    nx = std::max(nx, 9);
    ny = std::max(ny, 9);
    return Grid2D({r.x0, r.y0}, h, nx, ny);
  }

  // Largest grid with spacing h whose rectangle stays inside r.
  static Grid2D inside(Rect r, double h) {
    int nx = static_cast<int>(std::floor(r.width() / h + 1e-9)) + 1;
    int ny = static_cast<int>(std::floor(r.height() / h + 1e-9)) + 1;
    return Grid2D({r.x0, r.y0}, h, nx, ny);
  }
};

}  // namespace darboux
