"""Classical Weierstrass picture: holomorphic curves ``nu -> w(nu)`` and their minimal surfaces.

The surface point, normal line and an independent finite-difference mean
curvature are all computed from the polynomial ``w``.  The normal line at
``nu`` has direction ``xi = -conj(nu)`` on the sphere and intercept ``eta``
given by the incidence relation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import ImmersionError, InvalidInputError, UmbilicPointError
from .section import SectionCoefficients, build_section, eval_jet

P = np.polynomial.polynomial


@dataclass(frozen=True)
class HolomorphicCurve:
    w_coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.w_coeffs) - 1

    def derivative(self, nu: complex, k: int = 0) -> complex:
        c = np.asarray(self.w_coeffs, dtype=complex)
        if k:
            c = P.polyder(c, k) if len(c) > k else np.zeros(1, dtype=complex)
        return complex(P.polyval(nu, c))


def holomorphic_curve(coeffs: Sequence[complex]) -> HolomorphicCurve:
    coeffs = [complex(c) for c in coeffs] or [0j]
    for k, c in enumerate(coeffs):
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise InvalidInputError(f"coefficient c_{k} is not finite: {c!r}")
    return HolomorphicCurve(tuple(coeffs))


@dataclass(frozen=True)
class SurfacePoint:
    z: complex
    t: float

    def xyz(self) -> np.ndarray:
        return np.array([self.z.real, self.z.imag, self.t])


def embed(w: HolomorphicCurve, nu: complex) -> SurfacePoint:
    nu = complex(nu)
    w0, w1, w2 = (w.derivative(nu, k) for k in range(3))
    nub = nu.conjugate()
    z = 0.5 * w2 - 0.5 * nub**2 * w2.conjugate() + nub * w1.conjugate() - w0.conjugate()
    # nu w'' - w' plus its conjugate, halved: the real part by construction
    t = (nu * w2 - w1).real
    return SurfacePoint(z=z, t=t)


def incidence_eta(p: SurfacePoint, xi: complex) -> complex:
    """Intercept of the oriented line through ``p`` with direction ``xi``."""
    return 0.5 * (p.z - 2 * p.t * xi - p.z.conjugate() * xi**2)


def to_line(w: HolomorphicCurve, nu: complex) -> Tuple[complex, complex]:
    nu = complex(nu)
    xi = -nu.conjugate()
    return xi, incidence_eta(embed(w, nu), xi)


def eta_closed_form(w: HolomorphicCurve, xi: complex) -> complex:
    """``eta`` as the second xib-derivative expression, with ``w`` read as ``w(-xib)``.

    Expanding ``d^2/dxib^2 [w(-xib)/(1+xi xib)]`` by hand gives
    ``(1/4)(w'' D^2 + 2 w' xi D + 2 w xi^2) - conj(w)/2`` with ``D = 1+xi xib``.
    Only used to cross-check :func:`to_line`.
    """
    xi = complex(xi)
    nu = -xi.conjugate()
    d = 1 + abs(xi) ** 2
    w0, w1, w2 = (w.derivative(nu, k) for k in range(3))
    return 0.25 * (w2 * d**2 + 2 * w1 * xi * d + 2 * w0 * xi**2) - 0.5 * w0.conjugate()


def unit_normal(xi: complex) -> np.ndarray:
    """Unit vector in R^3 for the point ``xi`` of the sphere."""
    d = 1 + abs(xi) ** 2
    return np.array([2 * xi.real, 2 * xi.imag, 1 - abs(xi) ** 2]) / d


def _tangents(w: HolomorphicCurve, nu: complex, step: float):
    f = lambda v: embed(w, v).xyz()
    xu = (f(nu + step) - f(nu - step)) / (2 * step)
    xv = (f(nu + 1j * step) - f(nu - 1j * step)) / (2 * step)
    return xu, xv


def normal_check(w: HolomorphicCurve, nu: complex, step: float) -> float:
    """Largest ``|<e0(-conj nu), tangent>|`` over the two coordinate tangents."""
    if not step > 0:
        raise InvalidInputError(f"step must be positive, got {step}")
    nu = complex(nu)
    if abs(w.derivative(nu, 3)) < 1e-10:
        raise UmbilicPointError(f"w''' vanishes at nu={nu}: umbilic point")
    e0 = unit_normal(-nu.conjugate())
    xu, xv = _tangents(w, nu, step)
    return float(max(abs(e0 @ xu), abs(e0 @ xv)))


def matched_section(w: HolomorphicCurve) -> SectionCoefficients:
    """Section with the same normal lines as the Weierstrass surface of ``w``.

    Matching the third-derivative relation term by term gives
    ``lambda_n = (-1)^n conj(c_{n+3}) / 4``.  Coefficients ``c_0..c_2`` only
    translate or degenerate the surface and are not representable; they must be 0.
    """
    c = list(w.w_coeffs)
    if any(abs(v) != 0 for v in c[:3]):
        raise InvalidInputError("only curves with c_0 = c_1 = c_2 = 0 have a lambda-series section")
    if len(c) <= 3:
        return build_section([0j])
    return build_section([(-1) ** n * complex(c[n + 3]).conjugate() / 4 for n in range(len(c) - 3)])


def weierstrass_residual(w: HolomorphicCurve, s: SectionCoefficients, xi: complex) -> complex:
    """``dbar F/(1+xi xib)^2 - (1/4) d^3 w/dxib^3`` with ``w`` read as ``w(-xib)``.

    By the chain rule ``d^3/dxib^3 w(-xib) = -w'''(-xib)``.
    """
    xi = complex(xi)
    j = eval_jet(s, xi)
    lhs = j.dbarF / (1 + abs(xi) ** 2) ** 2
    return lhs - 0.25 * (-w.derivative(-xi.conjugate(), 3))


def _fundamental_forms(w: HolomorphicCurve, nu: complex, step: float):
    f = lambda v: embed(w, v).xyz()
    c = f(nu)
    fu_p, fu_m = f(nu + step), f(nu - step)
    fv_p, fv_m = f(nu + 1j * step), f(nu - 1j * step)
    xu = (fu_p - fu_m) / (2 * step)
    xv = (fv_p - fv_m) / (2 * step)
    xuu = (fu_p - 2 * c + fu_m) / step**2
    xvv = (fv_p - 2 * c + fv_m) / step**2
    xuv = (f(nu + step + 1j * step) - f(nu + step - 1j * step)
           - f(nu - step + 1j * step) + f(nu - step - 1j * step)) / (4 * step**2)
    E, Fm, G = xu @ xu, xu @ xv, xv @ xv
    det = E * G - Fm * Fm
    if not det > 1e-12 * max(E * G, 1e-300) or E * G == 0:
        raise ImmersionError(f"degenerate first fundamental form at nu={nu}")
    n = np.cross(xu, xv)
    n /= np.linalg.norm(n)
    return E, Fm, G, n @ xuu, n @ xuv, n @ xvv


def _mean_curvature(w, nu, step):
    E, Fm, G, L, M, N = _fundamental_forms(w, nu, step)
    return (E * N - 2 * Fm * M + G * L) / (2 * (E * G - Fm * Fm))


def mean_curvature_numeric(w: HolomorphicCurve, nu: complex, step: float = 1e-3, tol: float | None = None) -> float:
    """Mean curvature of the embedded surface from difference-quotient fundamental forms.

    If ``tol`` is given and ``|H|`` exceeds it, one Richardson refinement with the
    halved step is applied.
    """
    if not step > 0:
        raise InvalidInputError(f"step must be positive, got {step}")
    nu = complex(nu)
    H = _mean_curvature(w, nu, step)
    if tol is not None and abs(H) > tol:
        H = (4 * _mean_curvature(w, nu, step / 2) - H) / 3
    return float(H)


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray  # (n+1)^2 x 3
    faces: np.ndarray  # n^2 x 4, 0-based, counter-clockwise in the nu-plane
    params: np.ndarray  # nu value of each vertex


def sample_mesh(w: HolomorphicCurve, center: complex, radius: float, n: int) -> Mesh:
    """Square ``(n+1) x (n+1)`` grid of surface points over ``center +- radius`` in nu."""
    if n < 2:
        raise InvalidInputError(f"grid size must be at least 2, got {n}")
    g = np.linspace(-radius, radius, n + 1)
    params = np.array([complex(center) + complex(a, b) for b in g for a in g])
    verts = np.array([embed(w, v).xyz() for v in params])
    faces = []
    for j in range(n):
        for i in range(n):
            k = j * (n + 1) + i
            faces.append((k, k + 1, k + n + 2, k + n + 1))
    return Mesh(vertices=verts, faces=np.array(faces, dtype=int), params=params)


def mesh_max_mean_curvature(w: HolomorphicCurve, mesh: Mesh, n: int, step: float = 1e-3) -> float:
    """Largest ``|H|`` over interior vertices; raises :class:`ImmersionError` if any is degenerate."""
    worst = 0.0
    for j in range(1, n):
        for i in range(1, n):
            nu = mesh.params[j * (n + 1) + i]
            worst = max(worst, abs(mean_curvature_numeric(w, nu, step)))
    return worst
