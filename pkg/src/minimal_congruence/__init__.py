"""Geodesic flow on the normal line congruence of a minimal surface in R^3.

Oriented lines are points ``(xi, eta)`` of the tangent bundle of the sphere.
A minimal surface corresponds to a section ``eta = F(xi)`` determined by a
holomorphic slope ``h(xi)``; the induced neutral metric on that section is
flat, and its geodesics are straight lines in ``u = int sqrt(h) dxi``.
"""
from .errors import (
    BoundaryZeroError,
    BranchAmbiguityError,
    CongruenceError,
    DegeneratePointError,
    ExperimentFailedError,
    ImmersionError,
    InvalidInputError,
    StepFailureError,
    UmbilicPointError,
)
from .flow import (
    GEOMETRIC,
    HARMONIC,
    FirstIntegrals,
    GeodesicState,
    Termination,
    Trajectory,
    first_integrals,
    geodesic_rhs,
    integrate,
    uniformize,
    uniformization_residual,
)
from .harmonics import (
    HarmonicSpec,
    ScatterResult,
    harmonic_section,
    null_level_curve,
    scatter_sweep,
    scattering_angle_analytic,
    scattering_angle_numeric,
)
from .metric import MetricAtPoint, christoffels, induced_metric, null_directions
from .section import (
    SectionCoefficients,
    SectionJet,
    build_section,
    eval_jet,
    minimality_residual,
    slope,
    spin_coefficients,
)
from .umbilics import UmbilicRecord, contour_winding, umbilic_points
from .weierstrass import (
    HolomorphicCurve,
    embed,
    holomorphic_curve,
    matched_section,
    mean_curvature_numeric,
    sample_mesh,
    weierstrass_residual,
)

__version__ = "0.1.0"
