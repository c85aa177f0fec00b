#include <doctest.h>

#include <cmath>

#include "darboux/embedding.hpp"
#include "darboux/identities.hpp"

using namespace darboux;

TEST_CASE("interior integral: zero curvature, constant integrand, quadrature oracle") {
  Fixture flat = make_fixture("flat");
  ScalarField z0 = ScalarField::constant(flat.domain, 0.0);
  CHECK(curvature_interior_integral(flat.metric, z0, flat.curvature, Rect{-0.4, 0.4, -0.4, 0.4}) ==
        0.0);

  // flat metric, z = 0, K = 1 on [0,1]^2 -> integrand constant 2
  Rect unit{0, 1, 0, 1};
  Metric2 id = Metric2::euclidean(Rect{-0.1, 1.1, -0.1, 1.1});
  ScalarField zk = ScalarField::constant(id.domain(), 0.0);
  ScalarField one = ScalarField::constant(id.domain(), 1.0);
  CHECK(curvature_interior_integral(id, zk, one, unit) == doctest::Approx(2.0).epsilon(1e-13));

  // sphere: default order vs a doubled-order/doubled-cell quadrature oracle
  Fixture sph = make_fixture("sphere");
  Rect sq{-0.1, 0.1, -0.1, 0.1};
  const double a = curvature_interior_integral(sph.metric, *sph.z, sph.curvature, sq);
  const double b = curvature_interior_integral(sph.metric, *sph.z, sph.curvature, sq, 16, 16);
  CHECK(std::abs(a - b) < 1e-9);
}

TEST_CASE("boundary flux: constant z, closed form 8, orientation flip") {
  Fixture flat = make_fixture("flat");
  ScalarField zc = ScalarField::constant(flat.domain, 5.0);
  CHECK(hessian_boundary_flux(flat.metric, zc, Rect{-0.3, 0.3, -0.3, 0.3}) == 0.0);

  // flat metric, z = x^2 + y^2 on [0,1]^2: right side gives 4, top gives 4
  Rect big{-0.2, 1.2, -0.2, 1.2};
  Metric2 id = Metric2::euclidean(big);
  ScalarField z = polynomial_field(big, {{0, 0, 1}, {0}, {1}});
  Rect unit{0, 1, 0, 1};
  CHECK(hessian_boundary_flux(id, z, unit) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(hessian_boundary_flux(id, z, unit, 8, 8, true) == doctest::Approx(-8.0).epsilon(1e-12));

  // saddle: flux agrees with the interior side of the parts identity
  Fixture saddle = make_fixture("saddle");
  Rect sq{-0.2, 0.2, -0.2, 0.2};
  CHECK(std::abs(parts_identity_residual(saddle.metric, *saddle.z, sq)) < 1e-8);
}

TEST_CASE("parts identity: closed-form case and arbitrary z") {
  Rect big{-0.2, 1.2, -0.2, 1.2};
  Metric2 id = Metric2::euclidean(big);
  ScalarField z = polynomial_field(big, {{0, 0, 1}, {0}, {1}});  // x^2 + y^2
  // interior 2 det(Hess) integrates to 8; K term 0; boundary 8
  CHECK(std::abs(parts_identity_residual(id, z, Rect{0, 1, 0, 1})) < 1e-10);

  ScalarField zc = ScalarField::constant(big, 3.0);
  CHECK(std::abs(parts_identity_residual(id, zc, Rect{0, 1, 0, 1})) < 1e-14);

  // holds for every smooth z on every fixture: seeded random polynomials
  for (const char* name : {"flat", "sphere", "saddle", "cosmetric"}) {
    Fixture fx = make_fixture(name);
    for (unsigned k = 0; k < 10; ++k) {
      ScalarField zp = random_polynomial_field(fx.domain, 4000 + k);
      Rect sq = Rect::square({0.02 * (int(k) - 5), 0.01}, 0.15);
      CHECK(std::abs(parts_identity_residual(fx.metric, zp, sq)) < 1e-8);
    }
  }
}

TEST_CASE("darboux flux identity on solutions; refusal on non-solutions") {
  Fixture sphere = make_fixture("sphere");
  CHECK(std::abs(darboux_flux_residual(sphere.metric, *sphere.z, sphere.curvature,
                                       Rect{-0.1, 0.1, -0.1, 0.1})) < 1e-8);
  Fixture saddle = make_fixture("saddle");
  CHECK(std::abs(darboux_flux_residual(saddle.metric, *saddle.z, saddle.curvature,
                                       Rect{-0.2, 0.2, -0.2, 0.2})) < 1e-8);

  // flat metric with z = (x^2+y^2)/2 and K = 0 is not a solution: refuse
  Fixture flat = make_fixture("flat");
  ScalarField z = polynomial_field(flat.domain, {{0, 0, 0.5}, {0}, {0.5}});
  CHECK_THROWS_AS(
      darboux_flux_residual(flat.metric, z, flat.curvature, Rect{-0.2, 0.2, -0.2, 0.2}),
      PreconditionError);
}

TEST_CASE("boundary scan: constant hessian, zero field, saddle2 profile") {
  Fixture flat = make_fixture("flat");
  ScalarField z = polynomial_field(flat.domain, {{0, 0, 0.5}, {0}, {0.5}});  // (x^2+y^2)/2
  BoundaryScanResult r = boundary_hessian_scan(flat.metric, z, Rect{-0.1, 0.1, -0.1, 0.1});
  CHECK(r.max_vertical == doctest::Approx(1.0));
  CHECK(r.max_horizontal == doctest::Approx(1.0));

  ScalarField z0 = ScalarField::constant(flat.domain, 0.0);
  r = boundary_hessian_scan(flat.metric, z0, Rect{-0.1, 0.1, -0.1, 0.1});
  CHECK(r.overall == 0.0);

  // saddle2: nabla_22 z = -2/(1+4x^2+4y^2), so the scan max is 2/1.04 at
  // (x, y) = (+-0.1, 0), within 2 + O(1e-1) of the flat value 2.
  Fixture s2 = make_fixture("saddle2");
  r = boundary_hessian_scan(s2.metric, *s2.z, Rect{-0.1, 0.1, -0.1, 0.1});
  CHECK(r.max_vertical == doctest::Approx(2.0 / 1.04).epsilon(1e-9));
  CHECK(std::abs(r.max_vertical - 2.0) < 0.1);
  CHECK((r.side == Side::Left || r.side == Side::Right));
  CHECK(std::abs(r.argmax.y) < 0.05);
}

TEST_CASE("gradient smallness certificate") {
  Fixture flat = make_fixture("flat");
  ScalarField zx = polynomial_field(flat.domain, {{0}, {1}});  // x
  CHECK(gradient_smallness_min(flat.metric, zx, Rect{-0.2, 0.2, -0.2, 0.2}, 33) ==
        doctest::Approx(-1.0));

  // critical point: min -> 2 as the square shrinks
  Fixture sphere = make_fixture("sphere");
  double prev = -10.0;
  for (double w : {0.2, 0.05, 1e-3}) {
    const double m = gradient_smallness_min(sphere.metric, *sphere.z, Rect::square({0, 0}, w), 65);
    CHECK(m >= prev);
    prev = m;
  }
  CHECK(prev > 2.0 - 1e-3);

  // normalized sphere on a small square: strictly above 1
  Embedding3 norm = rigid_normalize(*sphere.embedding, {0.0, 0.0});
  Metric2 g = induced_metric(norm);
  CHECK(gradient_smallness_min(g, norm.z3, Rect::square({0, 0}, 0.05), 129) > 1.99);
}

TEST_CASE("identity residuals under sampled backing converge at order >= 3") {
  Fixture cosm = make_fixture("cosmetric");
  ScalarField poly = random_polynomial_field(cosm.domain, 55);
  ScalarField z = ScalarField::analytic(cosm.domain, [poly](double x, double y, int deg) {
    return poly.jet({x, y}, deg) +
           jsin(Jet::variable(x, 0, deg) * 2.0) * jcos(Jet::variable(y, 1, deg) * 2.0);
  });
  Rect sq{-0.16, 0.16, -0.16, 0.16};
  auto residual_at = [&](double h) {
    Metric2 gs(sample_field(cosm.metric.g11(), cosm.domain, h),
               sample_field(cosm.metric.g12(), cosm.domain, h),
               sample_field(cosm.metric.g22(), cosm.domain, h));
    ScalarField zs = sample_field(z, cosm.domain, h);
    return std::abs(parts_identity_residual(gs, zs, sq));
  };
  const double e1 = residual_at(0.02), e2 = residual_at(0.01);
  CHECK(std::log2(e1 / e2) >= 3.0);
}
