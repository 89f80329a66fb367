"""Geodesic flow of the induced Lorentz metric on a minimal normal congruence.

On a minimal section the geodesic equation reduces to

    xi'' = -(1/2) (h'/h) xi'^2

with ``h`` the holomorphic slope, and the flow is completely integrable.  Two
normalizations of the first integrals are exposed:

``"geometric"``
    ``I1 = 2i/(1+|xi|^2)^2 (sigma0 xi'^2 - c.c.)`` and
    ``I2 = (sigma0^(1/2) xi' + c.c.)/(1+|xi|^2)`` with ``sigma0 = -(1+|xi|^2)^2 h``.
``"harmonic"``
    ``I1 = 2i (h xi'^2 - c.c.)`` and ``I2 = h^(1/2) xi' + c.c.``, the rescaled
    pair used for pure harmonics.

Both square roots carry a sign that is continued along the curve.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import rk
from .errors import BranchAmbiguityError, DegeneratePointError, InvalidInputError, StepFailureError
from .metric import degeneracy_tolerance, induced_metric
from .section import SectionCoefficients, eval_jet, slope, slope_poly

GEOMETRIC = "geometric"
HARMONIC = "harmonic"
CONVENTIONS = (GEOMETRIC, HARMONIC)

UMBILIC_FACTOR = 1e3
DRIFT_FACTOR = 1e2
MAX_REJECTS = 60


@dataclass(frozen=True)
class GeodesicState:
    xi: complex
    xidot: complex
    branch: int = 1

    def __post_init__(self):
        if self.branch not in (1, -1):
            raise InvalidInputError(f"branch must be +1 or -1, got {self.branch}")

    def flipped(self) -> "GeodesicState":
        return replace(self, branch=-self.branch)

    def reversed(self) -> "GeodesicState":
        """Same geodesic traversed backwards."""
        return replace(self, xidot=-self.xidot)


@dataclass(frozen=True)
class FirstIntegrals:
    I1: float
    I2: float


class Termination(str, Enum):
    COMPLETED = "completed"
    UMBILIC_PROXIMITY = "umbilic_proximity"
    STEP_FAILURE = "step_failure"


@dataclass(frozen=True)
class Sample:
    t: float
    state: GeodesicState
    I1: float
    I2: float
    ds2: float


@dataclass
class Trajectory:
    samples: List[Sample]
    termination: Termination = Termination.COMPLETED
    convention: str = GEOMETRIC
    rejected: int = 0

    @property
    def t(self) -> np.ndarray:
        return np.array([p.t for p in self.samples])

    @property
    def xi(self) -> np.ndarray:
        return np.array([p.state.xi for p in self.samples])

    @property
    def xidot(self) -> np.ndarray:
        return np.array([p.state.xidot for p in self.samples])

    @property
    def I1(self) -> np.ndarray:
        return np.array([p.I1 for p in self.samples])

    @property
    def I2(self) -> np.ndarray:
        return np.array([p.I2 for p in self.samples])

    @property
    def ds2(self) -> np.ndarray:
        return np.array([p.ds2 for p in self.samples])

    @property
    def final(self) -> Sample:
        return self.samples[-1]

    def drift(self) -> Tuple[float, float]:
        """Relative drift of ``I1`` and ``|I2|`` against their initial values."""
        i1, i2 = self.I1, np.abs(self.I2)
        d1 = np.max(np.abs(i1 - i1[0])) / max(abs(i1[0]), 1e-300)
        d2 = np.max(np.abs(i2 - i2[0])) / max(abs(i2[0]), 1e-300)
        return float(d1), float(d2)


def _check_convention(convention: str):
    if convention not in CONVENTIONS:
        raise InvalidInputError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


class _Slope:
    """Horner evaluation of ``h`` and ``h'`` on plain complex scalars."""

    def __init__(self, s: SectionCoefficients):
        self.section = s
        self.alpha = [complex(a) for a in s.alpha]
        self.dalpha = [n * a for n, a in enumerate(self.alpha)][1:]
        self.degree = max(s.degree, 0)

    def __call__(self, xi: complex) -> complex:
        acc = 0j
        for a in reversed(self.alpha):
            acc = acc * xi + a
        return acc

    def derivative(self, xi: complex) -> complex:
        acc = 0j
        for a in reversed(self.dalpha):
            acc = acc * xi + a
        return acc

    def tol(self, xi: complex) -> float:
        return 1e-12 * (1 + abs(xi)) ** self.degree


def _quantity(h: complex, xi: complex, convention: str) -> complex:
    """The function whose square root enters I2."""
    if convention == GEOMETRIC:
        return -((1 + abs(xi) ** 2) ** 2) * h
    return h


def _integrals(h: complex, xi: complex, xidot: complex, root: complex, convention: str) -> Tuple[float, float]:
    q = _quantity(h, xi, convention)
    if convention == GEOMETRIC:
        d = 1 + abs(xi) ** 2
        return -4 * (q * xidot * xidot).imag / d**2, 2 * (root * xidot).real / d
    return -4 * (q * xidot * xidot).imag, 2 * (root * xidot).real


def _continue_root(q: complex, previous: complex) -> complex:
    r = cmath.sqrt(q)
    return -r if abs(r + previous) < abs(r - previous) else r


def _branch_of(q: complex, root: complex) -> int:
    r = cmath.sqrt(q)
    return 1 if abs(root - r) <= abs(root + r) else -1


def geodesic_rhs(s: SectionCoefficients, st: GeodesicState) -> Tuple[complex, complex]:
    xi = complex(st.xi)
    h = slope(s, xi)
    if s.is_zero() or abs(h) < degeneracy_tolerance(s, xi):
        raise DegeneratePointError(f"geodesic equation singular at umbilic xi={xi}")
    hp = _Slope(s).derivative(xi)
    return st.xidot, -0.5 * hp / h * st.xidot**2


def first_integrals(s: SectionCoefficients, st: GeodesicState, convention: str = GEOMETRIC) -> FirstIntegrals:
    _check_convention(convention)
    xi = complex(st.xi)
    h = slope(s, xi)
    if s.is_zero() or abs(h) < degeneracy_tolerance(s, xi):
        raise DegeneratePointError(f"first integrals undefined at umbilic xi={xi}")
    root = st.branch * cmath.sqrt(_quantity(h, xi, convention))
    I1, I2 = _integrals(h, xi, complex(st.xidot), root, convention)
    return FirstIntegrals(I1=I1, I2=I2)


def integrate(
    s: SectionCoefficients,
    st0: GeodesicState,
    tmax: float,
    tol: float = 1e-10,
    convention: str = GEOMETRIC,
    t0: float = 0.0,
    metric_samples: bool = True,
    max_steps: int = 1_000_000,
) -> Trajectory:
    """Integrate the geodesic from ``st0`` at time ``t0`` up to ``tmax``.

    Dormand-Prince 5(4) with PI control and ``rtol = atol = tol``.  A step
    the error estimate accepts is still rejected if either first integral
    moves by more than ``1e2 tol`` relative to the size of its terms.
    ``ds2`` is the metric norm from :func:`induced_metric` when
    ``metric_samples`` is set, otherwise it repeats the geometric ``I1``.
    """
    _check_convention(convention)
    if not tol > 0:
        raise InvalidInputError(f"tol must be positive, got {tol}")
    if not tmax > t0:
        raise InvalidInputError(f"tmax must exceed the start time {t0}, got {tmax}")
    if s.is_zero():
        raise DegeneratePointError("the zero section carries a degenerate metric everywhere")
    xi0, v0 = complex(st0.xi), complex(st0.xidot)
    if v0 == 0:
        raise InvalidInputError("initial velocity must be nonzero")
    hfun = _Slope(s)
    h0 = hfun(xi0)
    if abs(h0) < UMBILIC_FACTOR * hfun.tol(xi0):
        raise DegeneratePointError(f"initial point {xi0} is at an umbilic")

    def f(t, y):
        xi, v = y
        h = hfun(xi)
        if abs(h) < hfun.tol(xi):
            raise DegeneratePointError(f"stage point {xi} hit an umbilic")
        return v, -0.5 * hfun.derivative(xi) / h * v * v

    def ds2_at(xi, v, h, I1_geom):
        if metric_samples:
            return induced_metric(eval_jet(s, xi)).quadratic_form(v)
        return I1_geom

    def geometric_I1(xi, v, h):
        return _integrals(h, xi, v, 0j, GEOMETRIC)[0]

    def term_scales(xi, v, q, root):
        d = (1 + abs(xi) ** 2) if convention == GEOMETRIC else 1.0
        return 4 * abs(q) * abs(v) ** 2 / d**2, 2 * abs(root) * abs(v) / d

    root = st0.branch * cmath.sqrt(_quantity(h0, xi0, convention))
    I1, I2 = _integrals(h0, xi0, v0, root, convention)
    samples = [Sample(t0, GeodesicState(xi0, v0, st0.branch), I1, I2, ds2_at(xi0, v0, h0, geometric_I1(xi0, v0, h0)))]

    t, y = t0, (xi0, v0)
    k1 = f(t, y)
    step = rk.initial_step(f, t, y, k1, tol, tol)
    ctrl = rk.PIController()
    rejects_in_row = 0
    rejected = 0
    termination = Termination.COMPLETED

    while t < tmax:
        if len(samples) > max_steps:
            termination = Termination.STEP_FAILURE
            break
        step = min(step, tmax - t)
        if step < 1e-14 * max(1.0, abs(t)) or rejects_in_row > MAX_REJECTS:
            termination = Termination.STEP_FAILURE
            break
        try:
            y_new, err_vec, k7 = rk.dopri_step(f, t, y, step, k1)
            err = rk.error_norm(err_vec, y, y_new, tol, tol)
        except DegeneratePointError:
            step *= 0.25
            rejects_in_row += 1
            rejected += 1
            continue
        if not math.isfinite(err) or err > 1.0:
            step *= rk.PIController.rejected(err) if math.isfinite(err) else 0.25
            rejects_in_row += 1
            rejected += 1
            continue

        xi_n, v_n = y_new
        h_n = hfun(xi_n)
        q_n = _quantity(h_n, xi_n, convention)
        root_n = _continue_root(q_n, root)
        I1_n, I2_n = _integrals(h_n, xi_n, v_n, root_n, convention)
        sc1, sc2 = term_scales(xi_n, v_n, q_n, root_n)
        if abs(I1_n - I1) > DRIFT_FACTOR * tol * sc1 or abs(abs(I2_n) - abs(I2)) > DRIFT_FACTOR * tol * sc2:
            step *= 0.5
            rejects_in_row += 1
            rejected += 1
            continue

        t = tmax if step == tmax - t else t + step
        y, k1, root, I1, I2 = y_new, k7, root_n, I1_n, I2_n
        rejects_in_row = 0
        branch = _branch_of(q_n, root_n)
        samples.append(Sample(t, GeodesicState(xi_n, v_n, branch), I1_n, I2_n,
                              ds2_at(xi_n, v_n, h_n, geometric_I1(xi_n, v_n, h_n))))
        if abs(h_n) < UMBILIC_FACTOR * hfun.tol(xi_n):
            termination = Termination.UMBILIC_PROXIMITY
            break
        step *= ctrl.accepted(err)

    return Trajectory(samples=samples, termination=termination, convention=convention, rejected=rejected)


# --- uniformizing coordinate -------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)


def _segment_distance(roots: np.ndarray, a: complex, b: complex) -> float:
    if len(roots) == 0:
        return math.inf
    d = b - a
    if d == 0:
        return float(np.min(np.abs(roots - a)))
    s = np.clip(((roots - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return float(np.min(np.abs(roots - (a + s * d))))


class _RootIntegrator:
    """Path integrals of ``h^(1/2)`` with the square-root branch continued along the path."""

    def __init__(self, s: SectionCoefficients):
        if s.is_zero():
            raise BranchAmbiguityError("the zero section has no square-root slope")
        self.coeffs = slope_poly(s)
        self.roots = np.roots(self.coeffs[::-1]) if len(self.coeffs) > 1 else np.zeros(0, dtype=complex)
        self.scale = 1e-12

    def root_at(self, xi: complex, previous: complex) -> complex:
        return _continue_root(complex(np.polynomial.polynomial.polyval(xi, self.coeffs)), previous)

    def segment(self, a: complex, b: complex, root: complex) -> Tuple[complex, complex]:
        """Integral from ``a`` to ``b`` and the continued root at ``b``."""
        total = 0j
        stack = [(a, b)]
        while stack:
            p, q = stack.pop()
            dist = _segment_distance(self.roots, p, q)
            if dist < self.scale * (1 + abs(p) + abs(q)):
                raise BranchAmbiguityError(f"path segment {p} -> {q} passes through an umbilic")
            if abs(q - p) > 0.5 * dist:
                mid = 0.5 * (p + q)
                # pop order must follow the path so the branch is continued in sequence
                stack.append((mid, q))
                stack.append((p, mid))
                continue
            nodes = 0.5 * (p + q) + 0.5 * (q - p) * _GL_X
            vals = np.sqrt(np.polynomial.polynomial.polyval(nodes, self.coeffs).astype(complex))
            acc = 0j
            for z, w, v in zip(nodes, _GL_W, vals):
                v = complex(v)
                if abs(v + root) < abs(v - root):
                    v = -v
                root = v
                acc += w * v
            total += 0.5 * (q - p) * acc
            root = self.root_at(q, root)
        return total, root


def uniformize(
    s: SectionCoefficients,
    xi: complex,
    base: complex,
    branch: int = 1,
    path: Optional[Sequence[complex]] = None,
) -> complex:
    """``u(xi) = integral of h^(1/2)`` from ``base`` along straight segments through ``path``.

    The root at ``base`` is ``branch * principal sqrt(h(base))``.
    """
    if branch not in (1, -1):
        raise InvalidInputError(f"branch must be +1 or -1, got {branch}")
    integ = _RootIntegrator(s)
    base = complex(base)
    h_base = slope(s, base)
    if h_base == 0 and len(integ.roots) and np.min(np.abs(integ.roots - base)) < 1e-12:
        raise BranchAmbiguityError(f"base point {base} is an umbilic")
    root = branch * cmath.sqrt(h_base)
    u = 0j
    pts = [base] + [complex(p) for p in (path or [])] + [complex(xi)]
    for a, b in zip(pts[:-1], pts[1:]):
        du, root = integ.segment(a, b, root)
        u += du
    return u


def uniformized_trajectory(s: SectionCoefficients, traj: Trajectory) -> Tuple[np.ndarray, complex]:
    """``u(xi(t_k))`` along the sampled path and the initial rate ``u'(0)``.

    The branch at the first sample is the principal one; consecutive samples are
    joined by chords, which is exact for the holomorphic integrand as long as the
    chord and the arc do not enclose an umbilic.
    """
    integ = _RootIntegrator(s)
    xs = traj.xi
    root = cmath.sqrt(slope(s, xs[0]))
    rate = root * traj.samples[0].state.xidot
    u = np.zeros(len(xs), dtype=complex)
    for k in range(1, len(xs)):
        du, root = integ.segment(complex(xs[k - 1]), complex(xs[k]), root)
        u[k] = u[k - 1] + du
    return u, rate


def uniformization_residual(s: SectionCoefficients, traj: Trajectory) -> float:
    """Largest ``|u(xi(t)) - u(xi(t0)) - u'(t0) (t - t0)|`` over the samples."""
    u, rate = uniformized_trajectory(s, traj)
    t = traj.t - traj.t[0]
    return float(np.max(np.abs(u - rate * t)))
