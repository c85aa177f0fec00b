#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace darboux {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  Point center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }

  bool contains(Point p, double tol = 1e-12) const {
    return p.x >= x0 - tol && p.x <= x1 + tol && p.y >= y0 - tol && p.y <= y1 + tol;
  }
  bool contains(const Rect& r, double tol = 1e-12) const {
    return r.x0 >= x0 - tol && r.x1 <= x1 + tol && r.y0 >= y0 - tol && r.y1 <= y1 + tol;
  }
  bool empty(double tol = 0.0) const { return x1 - x0 <= tol || y1 - y0 <= tol; }

  Rect inset(double m) const { return {x0 + m, x1 - m, y0 + m, y1 - m}; }

  static Rect square(Point c, double half_width) {
    return {c.x - half_width, c.x + half_width, c.y - half_width, c.y + half_width};
  }
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ODE / quadrature / root-finding failures.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace darboux
