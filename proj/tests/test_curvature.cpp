#include <doctest.h>

#include <cmath>

#include "darboux/curvature_build.hpp"

using namespace darboux;

TEST_CASE("square family widths and exact disjointness") {
  CHECK(SquareFamily::center_x(1) == 1.0);
  CHECK(SquareFamily::inner_half_width(2) == doctest::Approx(1.0 / 24.0));
  CHECK(SquareFamily::outer_half_width(2) == doctest::Approx(1.0 / 12.0));
  for (int n = 1; n <= 50; ++n)
    CHECK(SquareFamily::inner_half_width(n) < SquareFamily::outer_half_width(n));
  CHECK(squares_disjoint_exact(10000));
}

TEST_CASE("locate: inner, outside, transition") {
  CurvatureSpec spec = CurvatureSpec::defaults(8);
  Region r = locate(spec, {1.0, 0.0});
  CHECK(r.kind == RegionKind::Inner);
  CHECK(r.n == 1);

  CHECK(locate(spec, {0.3, 0.7}).kind == RegionKind::Outside);
  CHECK(locate(spec, {-1.0, 0.0}).kind == RegionKind::Outside);
  CHECK(locate(spec, {0.0, 0.0}).kind == RegionKind::Outside);

  // 1/24 < 1/20 < 1/12: between the inner and outer half-widths of square 2
  r = locate(spec, {0.5 + 1.0 / 20.0, 0.0});
  CHECK(r.kind == RegionKind::Transition);
  CHECK(r.n == 2);

  // boundary of the closed inner square counts as Inner
  r = locate(spec, {0.5 + 1.0 / 24.0, 0.0});
  CHECK(r.kind == RegionKind::Inner);
  CHECK(r.n == 2);
}

TEST_CASE("k_eval: center value, boundary zero, sign pattern") {
  CurvatureSpec spec = CurvatureSpec::defaults(8);
  const double e2 = std::exp(-2.0);
  for (int n = 1; n <= 8; ++n) {
    const double gamma_n = spec.schedule.at(n);
    CHECK(k_eval(spec, {SquareFamily::center_x(n), 0.0}) ==
          doctest::Approx(gamma_n * e2).epsilon(1e-12));
    // boundary of the inner square
    const double w = SquareFamily::inner_half_width(n);
    CHECK(k_eval(spec, {SquareFamily::center_x(n) + w, 0.0}) == 0.0);
    CHECK(k_eval(spec, {SquareFamily::center_x(n), w}) == 0.0);
  }
  CHECK(k_eval(spec, {-1.0, 0.0}) == 0.0);

  // strictly positive inside each inner square, zero outside the union
  for (int n = 1; n <= 8; ++n) {
    const double cx = SquareFamily::center_x(n);
    const double w = SquareFamily::inner_half_width(n);
    for (double fx : {-0.9, -0.3, 0.0, 0.4, 0.9})
      for (double fy : {-0.8, 0.0, 0.7}) {
        CHECK(k_eval(spec, {cx + fx * w, fy * w}) > 0.0);
      }
    const double W = SquareFamily::outer_half_width(n);
    CHECK(k_eval(spec, {cx + 0.5 * (w + W), 0.0}) == 0.0);  // transition annulus
  }
}

TEST_CASE("k_eval jets match finite differences inside a square") {
  CurvatureSpec spec = CurvatureSpec::defaults(4);
  Point p{1.0 + 0.3 * SquareFamily::inner_half_width(1), 0.01};
  Jet j = k_eval_jet(spec, p, 2);
  const double d = 1e-5;
  const double fd = (k_eval(spec, {p.x + d, p.y}) - k_eval(spec, {p.x - d, p.y})) / (2 * d);
  CHECK(j.partial(1, 0) == doctest::Approx(fd).epsilon(1e-5));
  CHECK(j.value() == doctest::Approx(k_eval(spec, p)));
}

TEST_CASE("derivative bounds of the bump profile are ordered and positive") {
  const auto& B = BumpProfile::derivative_bounds();
  CHECK(B[0] == doctest::Approx(1.2 * std::exp(-2.0)).epsilon(1e-6));
  for (int k = 0; k < 4; ++k) {
    CHECK(B[k] > 0.0);
    CHECK(B[k] < B[k + 1]);
  }
}

TEST_CASE("smoothness certificate passes for the default schedule, n <= 8, k <= 4") {
  CurvatureSpec spec = CurvatureSpec::defaults(8);
  for (int n = 1; n <= 8; ++n) {
    SmoothnessReport rep = smoothness_certificate(spec, n, 4);
    CHECK(rep.pass);
    CHECK(rep.max_boundary_value == 0.0);
    CHECK(rep.decay_bound == doctest::Approx(2.0 * std::pow(2.0, -n)));
  }
  // worked value: n = 3, k = 4 with the default schedule sits under 0.25
  SmoothnessReport r3 = smoothness_certificate(spec, 3, 4);
  CHECK(r3.decay_bound == doctest::Approx(0.25));
  CHECK(r3.observed_at_order_k <= 0.25);

  // order 0: boundary values identically zero
  SmoothnessReport r0 = smoothness_certificate(spec, 5, 0);
  CHECK(r0.boundary_zero_ok);
}

TEST_CASE("invalid schedule gamma_n = 1 fails the certificate at n = 10") {
  CurvatureSpec spec;
  spec.family.n_max = 10;
  spec.schedule.gamma.assign(10, 1.0);
  spec.default_schedule = false;
  SmoothnessReport rep = smoothness_certificate(spec, 10, 4);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.decay_ok);
  CHECK(rep.observed_at_order_k > rep.decay_bound);
}

TEST_CASE("curvature spec JSON round trip and validation") {
  CurvatureSpec spec = CurvatureSpec::defaults(5);
  CurvatureSpec back = CurvatureSpec::from_json(spec.to_json());
  CHECK(back.family.n_max == 5);
  CHECK(back.default_schedule);
  CHECK(back.schedule.at(3) == doctest::Approx(spec.schedule.at(3)));

  CurvatureSpec explicit_spec = CurvatureSpec::from_json(
      R"({"n_max": 3, "gamma_rule": [0.5, 0.25, 0.125], "phi": "default_bump"})");
  CHECK_FALSE(explicit_spec.default_schedule);
  CHECK(explicit_spec.schedule.at(2) == 0.25);

  CHECK_THROWS_AS(CurvatureSpec::from_json("not json"), ConfigError);
  CHECK_THROWS_AS(CurvatureSpec::from_json(R"({"gamma_rule": "paper_default"})"), ConfigError);
  CHECK_THROWS_AS(CurvatureSpec::from_json(R"({"n_max": 2, "gamma_rule": [1.0]})"), ConfigError);
  CHECK_THROWS_AS(CurvatureSpec::from_json(R"({"n_max": 2, "phi": "other"})"), ConfigError);
}

TEST_CASE("metric from constant curvature: flat, cos, cosh") {
  Rect dom{-0.4, 0.4, -0.4, 0.4};
  const double step = 1e-3;

  CurvedMetric cm0 = metric_from_curvature(ScalarField::constant(dom, 0.0), dom, step);
  for (double x : {-0.3, 0.0, 0.25}) CHECK(cm0.G(x, 0.1) == doctest::Approx(1.0).epsilon(1e-12));

  CurvedMetric cm1 = metric_from_curvature(ScalarField::constant(dom, 1.0), dom, step);
  double worst = 0.0;
  for (double x : {-0.35, -0.1, 0.0, 0.2, 0.35})
    worst = std::max(worst, std::abs(cm1.G(x, 0.0) - std::cos(x)));
  CHECK(worst < 1e-8);

  CurvedMetric cmn = metric_from_curvature(ScalarField::constant(dom, -1.0), dom, step);
  worst = 0.0;
  for (double x : {-0.35, 0.0, 0.3})
    worst = std::max(worst, std::abs(cmn.G(x, 0.0) - std::cosh(x)));
  CHECK(worst < 1e-8);
}

TEST_CASE("curvature round trip within 1e-6 for constants and a built spec") {
  Rect dom{-0.4, 0.4, -0.4, 0.4};
  for (double k : {0.0, 1.0, -1.0}) {
    ScalarField K = ScalarField::constant(dom, k);
    CurvedMetric cm = metric_from_curvature(K, dom, 2e-3);
    CHECK(curvature_roundtrip_error(cm, K, 21) < 1e-6);
  }
  CurvatureSpec spec = CurvatureSpec::defaults(3);
  ScalarField K = curvature_spec_field(spec, Rect{-0.5, 0.5, -0.5, 0.5});
  CurvedMetric cm = metric_from_curvature(K, dom, 2e-3);
  CHECK(curvature_roundtrip_error(cm, K, 21) < 1e-6);
}

TEST_CASE("G positivity band: succeeds strictly inside, fails beyond") {
  // K = 4: G = cos(2x) > 0 iff |x| < pi/4 ~ 0.785
  Rect ok{-0.75, 0.75, -0.1, 0.1};
  ScalarField K4 = ScalarField::constant(Rect{-1, 1, -1, 1}, 4.0);
  CHECK_NOTHROW(metric_from_curvature(K4, ok, 1e-3));
  Rect toobig{-0.8, 0.8, -0.1, 0.1};
  CHECK_THROWS_AS(metric_from_curvature(K4, toobig, 1e-3), IntegrationError);
}

TEST_CASE("metric_from_curvature rejects bad domains") {
  Rect dom{0.2, 0.6, -0.4, 0.4};  // does not contain x = 0
  ScalarField K = ScalarField::constant(Rect{-1, 1, -1, 1}, 0.0);
  CHECK_THROWS_AS(metric_from_curvature(K, dom, 1e-3), PreconditionError);
}

TEST_CASE("bump derivative bounds envelope an independent sample set") {
  const auto& B = BumpProfile::derivative_bounds();
  // offset grid, denser than the one used to build the bounds
  const int N = 11001;
  for (int i = 0; i < N; ++i) {
    const double x = -1.0 + (2.0 * i + 1.0) / N;
    const double y = -1.0 + 2.0 * ((7919.0 * i) / N - std::floor((7919.0 * i) / N));
    Jet j = BumpProfile::eval(Jet::variable(x, 0, 4), Jet::variable(y, 1, 4));
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b) {
        REQUIRE(std::abs(j.partial(a, b)) <= B[a + b]);
      }
  }
}

TEST_CASE("default schedule decays monotonically and dominates derivatives") {
  GammaSchedule s = GammaSchedule::paper_default(12);
  const double b4 = BumpProfile::derivative_bounds()[4];
  for (int n = 1; n <= 12; ++n) {
    CHECK(s.at(n) > 0.0);
    if (n > 1) CHECK(s.at(n) < s.at(n - 1));
    CHECK(s.at(n) * std::pow(4.0 * n * (n + 1.0), 4) * b4 <= std::pow(2.0, -n) * (1 + 1e-12));
  }
}
