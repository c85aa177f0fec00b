import math

import pytest

import darboux


def test_fixture_catalog():
    names = darboux.fixtures()
    assert "sphere" in names and "saddle" in names and "cosmetric" in names


def test_gaussian_curvature_closed_forms():
    assert darboux.gaussian_curvature("sphere", 0.1, -0.05) == pytest.approx(0.25, abs=1e-10)
    assert darboux.gaussian_curvature("cosmetric", 0.2, 0.1) == pytest.approx(1.0, abs=1e-10)
    q = 1.0 + 0.1**2 + 0.2**2
    assert darboux.gaussian_curvature("saddle", 0.1, 0.2) == pytest.approx(-1.0 / q**2, abs=1e-10)


def test_christoffel_saddle_oracle():
    x, y = 0.2, -0.3
    q = 1.0 + x * x + y * y
    gamma = darboux.christoffel("saddle", x, y)
    assert gamma[0][0][1] == pytest.approx(y / q, abs=1e-12)
    assert gamma[1][0][1] == pytest.approx(x / q, abs=1e-12)
    assert abs(gamma[0][0][0]) < 1e-13


def test_darboux_and_divergence_residuals():
    assert abs(darboux.darboux_residual("saddle", 0.2, -0.1)) < 1e-12
    r1, r2 = darboux.divergence_identity_residual("sphere", 0.1, 0.1)
    assert abs(r1) < 1e-8 and abs(r2) < 1e-8


def test_normal_component_two_routes():
    nc = darboux.normal_component_sq("saddle", 0.5, 0.5)
    assert nc["via_cross"] == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert abs(nc["difference"]) < 1e-12


def test_flatness_of_g_minus_dz2():
    assert darboux.flatness_residual("sphere") < 1e-6


def test_square_family():
    assert darboux.locate(1.0, 0.0) == "inner:1"
    assert darboux.locate(0.5 + 1.0 / 20.0, 0.0) == "transition:2"
    assert darboux.locate(-1.0, 0.0) == "outside"
    assert darboux.k_eval(-1.0, 0.0) == 0.0
    assert darboux.k_eval(1.0, 0.0) > 0.0
    cert = darboux.smoothness_certificate(3, 4)
    assert cert["pass"] and cert["decay_bound"] == pytest.approx(0.25)


def test_metric_from_constant_curvature():
    out = darboux.metric_from_constant_curvature(1.0, half_width=0.3, step=2e-3)
    assert out["max_curvature_error"] < 1e-6
    assert out["G_at_origin"] == pytest.approx(1.0)
    assert out["G_at_edge"] == pytest.approx(math.cos(0.3), abs=1e-8)


def test_scan_and_smallness():
    scan = darboux.boundary_hessian_scan("saddle2", 0.0, 0.0, 0.1)
    assert scan["max_vertical"] == pytest.approx(2.0 / 1.04, abs=1e-6)
    assert darboux.gradient_smallness_min("sphere", 0.0, 0.0, 0.05) > 1.99


def test_reduce_pipeline_coarse():
    rep = darboux.reduce("saddle2", 0.0, 0.0, h=0.02)
    assert rep["b11_p"] == pytest.approx(-2.0, abs=1e-10)
    assert rep["c"] == pytest.approx(-2.0, abs=1e-10)
    assert rep["fbar_ratio"] == pytest.approx(1.0, abs=1e-8)
    assert rep["max_eq3_residual"] < 1e-3


def test_error_surfaces():
    with pytest.raises(darboux.ConfigurationError):
        darboux.gaussian_curvature("nope", 0.0, 0.0)
    with pytest.raises(darboux.ConfigurationError):
        darboux.darboux_residual("cosmetric", 0.0, 0.0)  # no height field
    with pytest.raises(darboux.FieldDomainError):
        darboux.gaussian_curvature("sphere", 5.0, 0.0)
