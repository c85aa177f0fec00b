#include <doctest.h>

#include <cmath>

#include "darboux/embedding.hpp"

using namespace darboux;

TEST_CASE("induced metric: plane, saddle, sphere at the critical point") {
  Fixture plane = make_fixture("plane");
  SymMat2 m = plane.metric.values({0.2, -0.3});
  CHECK(m.a11 == doctest::Approx(1.0));
  CHECK(m.a12 == doctest::Approx(0.0));
  CHECK(m.a22 == doctest::Approx(1.0));

  Fixture saddle = make_fixture("saddle");
  const double x = 0.3, y = -0.2;
  m = saddle.metric.values({x, y});
  CHECK(m.a11 == doctest::Approx(1.0 + y * y));
  CHECK(m.a12 == doctest::Approx(x * y));
  CHECK(m.a22 == doctest::Approx(1.0 + x * x));

  Fixture sphere = make_fixture("sphere");
  m = sphere.metric.values({0.0, 0.0});
  CHECK(m.a11 == doctest::Approx(1.0));
  CHECK(m.a12 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m.a22 == doctest::Approx(1.0));
}

TEST_CASE("normal component squared: two routes agree") {
  Fixture plane = make_fixture("plane");
  NormalComponentSq nc = normal_component_sq(*plane.embedding, {0.1, 0.2});
  CHECK(nc.via_cross == doctest::Approx(1.0));
  CHECK(nc.via_metric == doctest::Approx(1.0));

  Fixture sphere = make_fixture("sphere");
  nc = normal_component_sq(*sphere.embedding, {0.0, 0.0});
  CHECK(nc.via_cross == doctest::Approx(1.0));

  Fixture saddle = make_fixture("saddle");
  nc = normal_component_sq(*saddle.embedding, {0.5, 0.5});
  CHECK(nc.via_cross == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(nc.difference()) < 1e-12);

  for (const char* name : {"sphere", "saddle", "saddle2", "plane"}) {
    Fixture fx = make_fixture(name);
    Rect r = fx.domain.inset(1e-3);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        Point p{r.x0 + r.width() * i / 4.0, r.y0 + r.height() * j / 4.0};
        CHECK(std::abs(normal_component_sq(*fx.embedding, p).difference()) < 1e-10);
      }
  }
}

TEST_CASE("every embedding satisfies the Darboux equation with its own curvature") {
  CHECK(max_darboux_residual(*make_fixture("plane").embedding) < 1e-12);
  CHECK(max_darboux_residual(*make_fixture("sphere").embedding) < 1e-8);
  CHECK(max_darboux_residual(*make_fixture("saddle").embedding) < 1e-8);
  CHECK(max_darboux_residual(*make_fixture("saddle2").embedding) < 1e-8);
}

TEST_CASE("rigid normalization kills the gradient and preserves the metric") {
  // saddle2 already has a horizontal tangent plane at the origin
  Fixture s2 = make_fixture("saddle2");
  Embedding3 norm = rigid_normalize(*s2.embedding, {0.0, 0.0});
  CHECK(std::abs(norm.z3.derivative({0, 0}, 1, 0)) < 1e-12);
  CHECK(std::abs(norm.z3.derivative({0, 0}, 0, 1)) < 1e-12);
  CHECK(norm.z3.value({0.1, 0.2}) == doctest::Approx(s2.z->value({0.1, 0.2})).epsilon(1e-12));

  // tilted plane (x, y, x): rotation by -pi/4 in the x-z plane
  Rect dom{-0.5, 0.5, -0.5, 0.5};
  auto coord = [dom](int axis) {
    return ScalarField::analytic(dom, [axis](double x, double y, int deg) {
      return Jet::variable(axis == 0 ? x : y, axis, deg);
    });
  };
  Embedding3 tilted{coord(0), coord(1), coord(0)};
  Embedding3 flat = rigid_normalize(tilted, {0.0, 0.0});
  CHECK(std::abs(flat.z3.derivative({0, 0}, 1, 0)) < 1e-12);
  CHECK(std::abs(flat.z3.derivative({0, 0}, 0, 1)) < 1e-12);
  CHECK(std::abs(flat.z3.value({0.3, -0.2})) < 1e-12);

  // induced metric is invariant under the rigid motion
  Fixture saddle = make_fixture("saddle");
  Embedding3 rotated = rigid_normalize(*saddle.embedding, {0.2, 0.1});
  Metric2 ga = induced_metric(*saddle.embedding);
  Metric2 gb = induced_metric(rotated);
  for (double x : {-0.3, 0.0, 0.4})
    for (double yy : {-0.25, 0.15}) {
      SymMat2 a = ga.values({x, yy}), b = gb.values({x, yy});
      CHECK(a.a11 == doctest::Approx(b.a11).epsilon(1e-12));
      CHECK(a.a12 == doctest::Approx(b.a12).epsilon(1e-12));
      CHECK(a.a22 == doctest::Approx(b.a22).epsilon(1e-12));
    }

  // and the Darboux residual of the rotated third component still vanishes
  ScalarField Kb = curvature_field(gb);
  for (double x : {-0.2, 0.3})
    CHECK(std::abs(darboux_residual(gb, rotated.z3, Kb, {x, 0.1})) < 1e-10);
}

TEST_CASE("g - dz^2 is flat for embedded fixtures") {
  for (const char* name : {"sphere", "saddle"}) {
    Fixture fx = make_fixture(name);
    CHECK(flatness_residual(fx.metric, *fx.z, 11) < 1e-6);
  }
  Fixture flat = make_fixture("flat");
  CHECK(flatness_residual(flat.metric, ScalarField::constant(flat.domain, 0.0), 5) == 0.0);
}

TEST_CASE("flatness precondition rejects |grad_g z| >= 1") {
  Fixture flat = make_fixture("flat");
  // z = 2x: |grad z| = 2 > 1 everywhere
  ScalarField z = polynomial_field(flat.domain, {{0}, {2}});
  CHECK_THROWS_AS(flatness_residual(flat.metric, z, 5), PreconditionError);
}

TEST_CASE("develop_flat: identity metric gives translated coordinates") {
  Rect dom{-0.5, 0.5, -0.5, 0.5};
  Metric2 id = Metric2::euclidean(dom);
  FlatChart chart = develop_flat(id, {0.1, -0.2});
  for (double x : {-0.3, 0.0, 0.4})
    for (double y : {-0.4, 0.2}) {
      CHECK(chart.z1.value({x, y}) == doctest::Approx(x - 0.1).epsilon(1e-10));
      CHECK(chart.z2.value({x, y}) == doctest::Approx(y + 0.2).epsilon(1e-10));
    }
  CHECK(chart.path_dependence < 1e-10);
}

TEST_CASE("develop_flat reproduces the conformal e^{2x} chart") {
  Rect dom{-0.4, 0.4, -0.4, 0.4};
  auto conf = [dom](double scale) {
    return ScalarField::analytic(dom, [scale](double x, double, int deg) {
      return jexp(Jet::variable(x, 0, deg) * 2.0) * scale;
    });
  };
  Metric2 h(conf(1.0), ScalarField::constant(dom, 0.0), conf(1.0));
  FlatChart chart = develop_flat(h, {0.0, 0.0});
  // closed form (e^x cos y - 1, e^x sin y) in the canonical gauge
  double worst = 0.0, worst_metric = 0.0;
  for (double x : {-0.3, 0.0, 0.2, 0.35})
    for (double y : {-0.35, -0.1, 0.25}) {
      worst = std::max(worst, std::abs(chart.z1.value({x, y}) - (std::exp(x) * std::cos(y) - 1.0)));
      worst = std::max(worst, std::abs(chart.z2.value({x, y}) - std::exp(x) * std::sin(y)));
      // reconstructed metric dz1^2 + dz2^2 matches h
      Point p{x, y};
      const double a = chart.z1.derivative(p, 1, 0), b = chart.z1.derivative(p, 0, 1);
      const double c = chart.z2.derivative(p, 1, 0), d = chart.z2.derivative(p, 0, 1);
      const double e2x = std::exp(2.0 * x);
      worst_metric = std::max({worst_metric, std::abs(a * a + c * c - e2x), std::abs(a * b + c * d),
                               std::abs(b * b + d * d - e2x)});
    }
  CHECK(worst < 1e-5);
  CHECK(worst_metric < 1e-5);
}

TEST_CASE("develop_flat round trip for sphere and saddle") {
  for (const char* name : {"sphere", "saddle"}) {
    Fixture fx = make_fixture(name);
    Metric2 h = metric_minus_dz2(fx.metric, *fx.z);
    FlatChart chart = develop_flat(h, {0.0, 0.0});
    // F~ = (z1, z2, z) must induce the original metric
    Embedding3 rebuilt{chart.z1, chart.z2, *fx.z};
    Metric2 gr = induced_metric(rebuilt);
    Rect r = fx.domain.inset(0.05);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        Point p{r.x0 + r.width() * i / 4.0, r.y0 + r.height() * j / 4.0};
        SymMat2 a = fx.metric.values(p), b = gr.values(p);
        worst = std::max({worst, std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12),
                          std::abs(a.a22 - b.a22)});
      }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("develop_flat path independence under order swap") {
  Fixture sphere = make_fixture("sphere");
  Metric2 h = metric_minus_dz2(sphere.metric, *sphere.z);
  FlatChart chart = develop_flat(h, {0.0, 0.0});
  CHECK(chart.path_dependence < 1e-6);
}

TEST_CASE("develop_flat refuses curved input") {
  Fixture sphere = make_fixture("sphere");
  CHECK_THROWS_AS(develop_flat(sphere.metric, {0.0, 0.0}), PreconditionError);
}

TEST_CASE("fixture catalog") {
  CHECK(fixture_names().size() == 6);
  CHECK_THROWS_AS(make_fixture("nope"), ConfigError);
  Fixture cosm = make_fixture("cosmetric");
  CHECK_FALSE(cosm.embedding.has_value());
  CHECK_FALSE(cosm.z.has_value());
}
