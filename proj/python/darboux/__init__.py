"""Numerical workbench for the Darboux equation of the local isometric
embedding problem: tensor identities, curvature construction, embedding
equivalence and the reduction to a linear second-order equation."""

from darboux._core import (  # noqa: F401
    ConfigurationError,
    DegenerateMetricError,
    FieldDomainError,
    IntegrationFailure,
    PreconditionFailure,
    boundary_hessian_scan,
    christoffel,
    covariant_hessian,
    darboux_residual,
    divergence_identity_residual,
    fixtures,
    flatness_residual,
    gaussian_curvature,
    gradient_smallness_min,
    k_eval,
    locate,
    metric_from_constant_curvature,
    normal_component_sq,
    reduce,
    smoothness_certificate,
)

__version__ = "0.1.0"
