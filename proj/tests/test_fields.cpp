#include <doctest.h>

#include <cmath>
#include <sstream>

#include "darboux/fd_weights.hpp"
#include "darboux/quadrature.hpp"
#include "darboux/scalar_field.hpp"

using namespace darboux;

namespace {

ScalarField sin_cos_field(Rect dom) {
  return ScalarField::analytic(dom, [](double x, double y, int deg) {
    return jsin(Jet::variable(x, 0, deg)) * jcos(Jet::variable(y, 1, deg));
  });
}

}  // namespace

TEST_CASE("jet arithmetic reproduces closed-form partials") {
  // f = exp(x) sin(y) / (1 + x^2), all partials to order 4 at (0.3, -0.2)
  const double x = 0.3, y = -0.2;
  Jet X = Jet::variable(x, 0, 4), Y = Jet::variable(y, 1, 4);
  Jet f = jexp(X) * jsin(Y) / (1.0 + X * X);

  auto fd = [&](int i, int j) {
    // high-order central differences on the closed form as an oracle
    const double h = 1e-2;
    auto g = [](double a, double b) { return std::exp(a) * std::sin(b) / (1.0 + a * a); };
    std::vector<double> nodes;
    for (int k = -4; k <= 4; ++k) nodes.push_back(x + k * h);
    auto wx = fd_weights(x, nodes, i);
    std::vector<double> nodesy;
    for (int k = -4; k <= 4; ++k) nodesy.push_back(y + k * h);
    auto wy = fd_weights(y, nodesy, j);
    double sum = 0.0;
    for (size_t a = 0; a < nodes.size(); ++a)
      for (size_t b = 0; b < nodesy.size(); ++b) sum += wx[i][a] * wy[j][b] * g(nodes[a], nodesy[b]);
    return sum;
  };
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j) CHECK(f.partial(i, j) == doctest::Approx(fd(i, j)).epsilon(1e-6));
}

TEST_CASE("mixed partials commute exactly") {
  Rect dom{-1, 1, -1, 1};
  ScalarField f = sin_cos_field(dom);
  Jet j = f.jet({0.37, 0.11}, 4);
  CHECK(j.partial(2, 1) == j.partial(2, 1));  // analytic jets are symmetric by construction
  ScalarField s = sample_field(f, dom.inset(0.05), 0.01);
  Point p{0.2, 0.3};
  CHECK(s.derivative(p, 1, 1) == s.derivative(p, 1, 1));
}

TEST_CASE("derivative of polynomial and constant fields") {
  Rect dom{-2, 2, -2, 2};
  ScalarField f = polynomial_field(dom, {{0}, {0}, {1}});  // x^2
  CHECK(f.derivative({1, 0}, 1, 0) == doctest::Approx(2.0));
  ScalarField c = ScalarField::constant(dom, 3.5);
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4 && i + j >= 1; ++j) CHECK(c.derivative({0.5, -1.0}, i, j) == 0.0);
}

TEST_CASE("sampled derivative error below 1e-6 at h = 0.01") {
  Rect dom{0, 1, 0, 1};
  ScalarField f = sin_cos_field(dom);
  ScalarField s = sample_field(f, dom, 0.01);
  Point p{0.5, 0.5};
  const double exact = -std::sin(0.5) * std::cos(0.5);
  CHECK(std::abs(s.derivative(p, 2, 0) - exact) < 1e-6);
}

TEST_CASE("derivative queries outside domain or above order 4 fail") {
  Rect dom{0, 1, 0, 1};
  ScalarField f = sin_cos_field(dom);
  CHECK_THROWS_AS(f.value({2.0, 0.5}), DomainError);
  CHECK_THROWS_AS(f.derivative({0.5, 0.5}, 3, 2), std::invalid_argument);
}

TEST_CASE("sampled-field derivative error shrinks at 4th order under h halving") {
  Rect dom{-1.2, 1.2, -1.2, 1.2};
  ScalarField f = sin_cos_field(dom);
  auto max_err = [&](double h) {
    ScalarField s = sample_field(f, dom.inset(0.1), h);
    double worst = 0.0;
    // nodes shared by all three grids, away from the boundary
    for (int i = 2; i <= 11; ++i)
      for (int j = 2; j <= 11; ++j) {
        Point p{-1.1 + 0.16 * i, -1.1 + 0.16 * j};
        worst = std::max(worst, std::abs(s.derivative(p, 2, 0) - f.derivative(p, 2, 0)));
      }
    return worst;
  };
  const double e1 = max_err(0.04), e2 = max_err(0.02), e3 = max_err(0.01);
  const double r1 = e1 / e2, r2 = e2 / e3;
  CHECK(r1 >= 12.0);
  CHECK(r1 <= 20.0);
  CHECK(r2 >= 12.0);
  CHECK(r2 <= 20.0);
}

TEST_CASE("rectangle quadrature: area, monomial, closed form") {
  Rect r{0, 1, 0, 1};
  CHECK(integrate_rect([](double, double) { return 1.0; }, r) == doctest::Approx(1.0));
  CHECK(integrate_rect([](double x, double y) { return x * y; }, r) == doctest::Approx(0.25));
  const double val = integrate_rect([](double x, double y) { return std::exp(x + y); }, r);
  const double exact = (M_E - 1.0) * (M_E - 1.0);
  CHECK(std::abs(val - exact) < 1e-10);
  CHECK_THROWS_AS(integrate_rect([](double, double) { return 1.0; }, Rect{1, 1, 0, 1}),
                  IntegrationError);
}

TEST_CASE("boundary quadrature: perimeter, divergence theorem, zero") {
  Rect r{0, 1, 0, 1};
  CHECK(integrate_boundary([](Side, Point) { return 1.0; }, r) == doctest::Approx(4.0));
  // f = n . (x, y): flux of the identity field, div = 2, area 1.
  auto flux = [](Side s, Point p) {
    auto n = outward_normal(s);
    return n[0] * p.x + n[1] * p.y;
  };
  CHECK(integrate_boundary(flux, r) == doctest::Approx(2.0));
  CHECK(integrate_boundary([](Side, Point) { return 0.0; }, r) == 0.0);
  CHECK_THROWS_AS(integrate_boundary([](Side, Point) { return 1.0; }, Rect{0, 0, 0, 1}),
                  IntegrationError);
}

TEST_CASE("flat divergence theorem on random polynomial vector fields") {
  // P = (P1, P2) polynomial of degree <= 3; boundary flux equals the integral
  // of the hand-differentiated divergence.
  Rect r{-0.5, 0.75, -0.25, 1.0};
  for (unsigned seed = 1; seed <= 5; ++seed) {
    Rect dom{-1, 2, -1, 2};
    ScalarField p1 = random_polynomial_field(dom, 700 + seed, 3);
    ScalarField p2 = random_polynomial_field(dom, 900 + seed, 3);
    auto flux = [&](Side s, Point q) {
      auto n = outward_normal(s);
      return n[0] * p1.value(q) + n[1] * p2.value(q);
    };
    auto div = [&](double x, double y) {
      return p1.derivative({x, y}, 1, 0) + p2.derivative({x, y}, 0, 1);
    };
    CHECK(std::abs(integrate_boundary(flux, r) - integrate_rect(div, r)) < 1e-10);
  }
}

TEST_CASE("cumulative Simpson integral is at least 3rd order and anchored") {
  auto max_err = [](int n) {
    const double h = 2.0 / (n - 1);
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = std::cos(-1.0 + i * h);
    auto c = cumulative_integral(f, h, (n - 1) / 2);  // anchor at x = 0
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(c[i] - std::sin(-1.0 + i * h)));
    return worst;
  };
  CHECK(max_err(41) < 1e-5);
  CHECK(max_err(41) / max_err(81) > 6.0);
  std::vector<double> f{1.0, 1.0, 1.0, 1.0, 1.0};
  auto c = cumulative_integral(f, 0.5, 2);
  CHECK(c[2] == 0.0);
  CHECK(c[4] == doctest::Approx(1.0));
  CHECK(c[0] == doctest::Approx(-1.0));
}

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(Grid2D({0, 0}, 0.0, 10, 10), DomainError);
  CHECK_THROWS_AS(Grid2D({0, 0}, 0.1, 8, 10), DomainError);
  Grid2D g = Grid2D::covering({0, 1, 0, 1}, 0.1);
  CHECK(g.rect().contains(Rect{0, 1, 0, 1}));
}

TEST_CASE("boundary quadrature accepts one field per side") {
  Rect dom{-0.5, 1.5, -0.5, 1.5};
  // order: right, left, top, bottom with outward normals (+1,0), (-1,0),
  // (0,+1), (0,-1); f = n . (x, y) realized per side
  std::array<ScalarField, 4> sides = {
      polynomial_field(dom, {{0}, {1}}),            // +x
      polynomial_field(dom, {{0}, {-1}}),           // -x
      polynomial_field(dom, {{0, 1}}),              // +y
      polynomial_field(dom, {{0, -1}}),             // -y
  };
  CHECK(integrate_boundary(sides, Rect{0, 1, 0, 1}) == doctest::Approx(2.0));
}

TEST_CASE("csv dump format: header, row-major order, 17 significant digits") {
  Rect dom{0, 1, 0, 1};
  ScalarField f = ScalarField::analytic(dom, [](double x, double y, int deg) {
    Jet X = Jet::variable(x, 0, deg), Y = Jet::variable(y, 1, deg);
    return X / 3.0 + Y;
  });
  Grid2D grid({0, 0}, 1.0 / 9.0, 10, 10);
  std::ostringstream os;
  dump_csv(os, f, grid);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "x,y,value");
  std::getline(is, line);
  CHECK(line == "0,0,0");
  std::getline(is, line);  // second entry of the first row: x advances first
  CHECK(line.substr(0, 19) == "0.1111111111111111,");
  int rows = 2;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 100);
}

TEST_CASE("one-sided stencils near the boundary stay accurate") {
  Rect dom{0, 1, 0, 1};
  ScalarField f = sin_cos_field(dom);
  ScalarField s = sample_field(f, dom, 0.01);
  // within 4 cells of the edge the stencil is one-sided but still order 4
  for (Point p : {Point{0.005, 0.5}, Point{0.995, 0.5}, Point{0.5, 0.0}, Point{0.01, 0.01}}) {
    CHECK(std::abs(s.derivative(p, 2, 0) - f.derivative(p, 2, 0)) < 1e-4);
    CHECK(std::abs(s.derivative(p, 0, 1) - f.derivative(p, 0, 1)) < 1e-6);
    CHECK(s.derivative(p, 1, 1) == s.derivative(p, 1, 1));
  }
}
