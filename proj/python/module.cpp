#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "darboux/curvature_build.hpp"
#include "darboux/embedding.hpp"
#include "darboux/identities.hpp"
#include "darboux/reduction.hpp"

namespace py = pybind11;
using namespace darboux;

namespace {

Fixture fixture(const std::string& name) { return make_fixture(name); }

const ScalarField& height_or_throw(const Fixture& fx) {
  if (!fx.z) throw ConfigError("fixture '" + fx.name + "' has no height field");
  return *fx.z;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical workbench for the Darboux equation of the local isometric "
            "embedding problem";

  py::register_exception<DomainError>(m, "FieldDomainError");
  py::register_exception<DegenerateMetric>(m, "DegenerateMetricError");
  py::register_exception<PreconditionError>(m, "PreconditionFailure");
  py::register_exception<IntegrationError>(m, "IntegrationFailure");
  py::register_exception<ConfigError>(m, "ConfigurationError");

  m.def("fixtures", [] { return fixture_names(); }, "names of the analytic fixtures");

  m.def(
      "gaussian_curvature",
      [](const std::string& name, double x, double y) {
        return gaussian_curvature(fixture(name).metric, {x, y});
      },
      py::arg("fixture"), py::arg("x"), py::arg("y"));

  m.def(
      "christoffel",
      [](const std::string& name, double x, double y) {
        ChristoffelAt c = christoffel(fixture(name).metric, {x, y});
        std::vector<std::vector<std::vector<double>>> out(
            2, std::vector<std::vector<double>>(2, std::vector<double>(2)));
        for (int l = 0; l < 2; ++l)
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) out[l][i][j] = c.gamma[l][i][j];
        return out;
      },
      py::arg("fixture"), py::arg("x"), py::arg("y"),
      "connection coefficients [l][i][j] of the fixture metric");

  m.def(
      "covariant_hessian",
      [](const std::string& name, double x, double y) {
        Fixture fx = fixture(name);
        SymMat2 h = covariant_hessian(fx.metric, height_or_throw(fx), {x, y});
        return py::make_tuple(h.a11, h.a12, h.a22);
      },
      py::arg("fixture"), py::arg("x"), py::arg("y"));

  m.def(
      "darboux_residual",
      [](const std::string& name, double x, double y) {
        Fixture fx = fixture(name);
        return darboux_residual(fx.metric, height_or_throw(fx), fx.curvature, {x, y});
      },
      py::arg("fixture"), py::arg("x"), py::arg("y"));

  m.def(
      "divergence_identity_residual",
      [](const std::string& name, double x, double y) {
        Fixture fx = fixture(name);
        auto r = divergence_identity_residual(fx.metric, height_or_throw(fx), {x, y});
        return py::make_tuple(r[0], r[1]);
      },
      py::arg("fixture"), py::arg("x"), py::arg("y"));

  m.def(
      "normal_component_sq",
      [](const std::string& name, double x, double y) {
        Fixture fx = fixture(name);
        if (!fx.embedding) throw ConfigError("fixture has no embedding");
        NormalComponentSq nc = normal_component_sq(*fx.embedding, {x, y});
        py::dict d;
        d["via_cross"] = nc.via_cross;
        d["via_metric"] = nc.via_metric;
        d["difference"] = nc.difference();
        return d;
      },
      py::arg("fixture"), py::arg("x"), py::arg("y"));

  m.def(
      "flatness_residual",
      [](const std::string& name) {
        Fixture fx = fixture(name);
        return flatness_residual(fx.metric, height_or_throw(fx), 11);
      },
      py::arg("fixture"), "max curvature of g - dz^2 over a sample grid");

  m.def(
      "locate",
      [](double x, double y, int nmax) {
        return region_to_string(locate(CurvatureSpec::defaults(nmax), {x, y}));
      },
      py::arg("x"), py::arg("y"), py::arg("nmax") = 8);

  m.def(
      "k_eval",
      [](double x, double y, int nmax) { return k_eval(CurvatureSpec::defaults(nmax), {x, y}); },
      py::arg("x"), py::arg("y"), py::arg("nmax") = 8);

  m.def(
      "smoothness_certificate",
      [](int n, int order, int nmax) {
        SmoothnessReport r = smoothness_certificate(CurvatureSpec::defaults(nmax), n, order);
        py::dict d;
        d["pass"] = r.pass;
        d["max_boundary_value"] = r.max_boundary_value;
        d["observed_at_order_k"] = r.observed_at_order_k;
        d["decay_bound"] = r.decay_bound;
        return d;
      },
      py::arg("n"), py::arg("order") = 4, py::arg("nmax") = 8);

  m.def(
      "metric_from_constant_curvature",
      [](double k, double half_width, double step) {
        Rect dom{-half_width, half_width, -half_width, half_width};
        Rect kdom = dom.inset(-0.1);
        ScalarField K = ScalarField::constant(kdom, k);
        CurvedMetric cm = metric_from_curvature(K, dom, step);
        py::dict d;
        d["max_curvature_error"] = curvature_roundtrip_error(cm, K, 15);
        d["G_at_origin"] = cm.G(0.0, 0.0);
        d["G_at_edge"] = cm.G(half_width, 0.0);
        return d;
      },
      py::arg("k"), py::arg("half_width") = 0.4, py::arg("step") = 1e-3);

  m.def(
      "boundary_hessian_scan",
      [](const std::string& name, double cx, double cy, double half) {
        Fixture fx = fixture(name);
        BoundaryScanResult r =
            boundary_hessian_scan(fx.metric, height_or_throw(fx), Rect::square({cx, cy}, half));
        py::dict d;
        d["max_vertical"] = r.max_vertical;
        d["max_horizontal"] = r.max_horizontal;
        d["overall"] = r.overall;
        d["argmax"] = py::make_tuple(r.argmax.x, r.argmax.y);
        return d;
      },
      py::arg("fixture"), py::arg("cx"), py::arg("cy"), py::arg("half"));

  m.def(
      "gradient_smallness_min",
      [](const std::string& name, double cx, double cy, double half) {
        Fixture fx = fixture(name);
        return gradient_smallness_min(fx.metric, height_or_throw(fx),
                                      Rect::square({cx, cy}, half));
      },
      py::arg("fixture"), py::arg("cx"), py::arg("cy"), py::arg("half"));

  m.def(
      "reduce",
      [](const std::string& name, double px, double py_, double h) {
        Fixture fx = fixture(name);
        ChartOptions opt;
        opt.h = h;
        ReductionReport r =
            reduce_to_linear(fx.metric, height_or_throw(fx), fx.curvature, {px, py_}, opt);
        py::dict d;
        d["c"] = r.c;
        d["b11_p"] = r.b11_p;
        d["fbar_ratio"] = r.fbar_ratio;
        d["transport_residual_rel"] = r.transport_residual_rel;
        d["b12_rel"] = r.b12_rel;
        d["b22_rel"] = r.b22_rel;
        d["chart_roundtrip"] = r.chart_roundtrip;
        d["max_eq3_residual"] = r.max_residual;
        d["min_f"] = r.min_f;
        d["f_at_p"] = r.f_at_p;
        return d;
      },
      py::arg("fixture"), py::arg("px") = 0.0, py::arg("py") = 0.0, py::arg("h") = 0.01,
      "characteristic-coordinates reduction pipeline at a point");

  m.attr("__version__") = "0.1.0";
}
