"""Lorentz metric induced on a lagrangian section, its connection and null cone."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Tuple

from .errors import DegeneratePointError, InvalidInputError
from .section import (
    SectionCoefficients,
    SectionJet,
    eval_jet,
    sigma0_derivatives,
    slope,
    wirtinger,
)


def degeneracy_tolerance(s: SectionCoefficients, xi: complex) -> float:
    """``|h|`` below this counts as an umbilic: ``1e-12 (1+|xi|)^N``."""
    return 1e-12 * (1 + abs(xi)) ** max(s.degree, 0)


def is_degenerate(s: SectionCoefficients, xi: complex, factor: float = 1.0) -> bool:
    if s.is_zero():
        return True
    return abs(slope(s, xi)) < factor * degeneracy_tolerance(s, xi)


@dataclass(frozen=True)
class MetricAtPoint:
    """Coefficients of ``ds^2`` in the complex coframe ``dxi, dxib``.

    ``g_xi_xibar`` is the symmetric mixed coefficient; the lagrangian
    condition makes it vanish, so :func:`induced_metric` always stores 0.
    """

    g_xixi: complex
    g_xibar_xibar: complex
    degenerate: bool
    g_xi_xibar: complex = 0j

    def quadratic_form(self, v: complex) -> float:
        """``ds^2(T, T)`` for the real tangent ``T = v d/dxi + conj(v) d/dxib``."""
        q = self.g_xixi * v * v + self.g_xibar_xibar * (v * v).conjugate() + 2 * self.g_xi_xibar * abs(v) ** 2
        return q.real


def induced_metric(j: SectionJet, tol: float = 1e-12) -> MetricAtPoint:
    if not tol > 0:
        raise InvalidInputError(f"tol must be positive, got {tol}")
    d2 = (1 + abs(j.xi) ** 2) ** 2
    g = 2j * j.sigma0 / d2
    return MetricAtPoint(g_xixi=g, g_xibar_xibar=g.conjugate(), degenerate=abs(j.sigma0) < tol)


def neutral_metric(xi: complex, eta: complex, V, W) -> complex:
    """Neutral Kaehler metric on the space of oriented lines, evaluated on two
    complex tangent vectors given by components ``(dxi, dxib, deta, detab)``.

    The tensor ``deta x dxib - detab x dxi + K dxi x dxib`` is symmetrised, with
    ``K = 2(xi etab - xib eta)/(1+xi xib)``.
    """
    d = 1 + abs(xi) ** 2
    K = 2 * (xi * eta.conjugate() - xi.conjugate() * eta) / d
    vx, vxb, ve, veb = V
    wx, wxb, we, web = W
    sym = lambda a1, b1, a2, b2: 0.5 * (a1 * b2 + b1 * a2)
    val = sym(ve, vxb, we, wxb) - sym(veb, vx, web, wx) + K * sym(vx, vxb, wx, wxb)
    return 2j / d**2 * val


def ambient_pullback(s: SectionCoefficients, xi: complex, step: float) -> MetricAtPoint:
    """Pull the neutral metric back to the graph using difference quotients of ``F``."""
    if not step > 0:
        raise InvalidInputError(f"step must be positive, got {step}")
    xi = complex(xi)
    F = lambda z: eval_jet(s, z).F
    dF, dbarF = wirtinger(F, xi, step)
    eta = F(xi)
    # push forward d/dxi and d/dxib; the Fbar derivatives are conjugates
    X = (1, 0, dF, dbarF.conjugate())
    Xb = (0, 1, dbarF, dF.conjugate())
    gxx = neutral_metric(xi, eta, X, X)
    gbb = neutral_metric(xi, eta, Xb, Xb)
    gxb = neutral_metric(xi, eta, X, Xb)
    return MetricAtPoint(g_xixi=gxx, g_xibar_xibar=gbb, g_xi_xibar=gxb, degenerate=abs(dbarF) < 1e-12)


def _require_nondegenerate(s: SectionCoefficients, xi: complex):
    if is_degenerate(s, xi):
        raise DegeneratePointError(f"metric degenerate at xi={xi} (umbilic)")


def christoffels(s: SectionCoefficients, xi: complex) -> Tuple[complex, complex, complex]:
    """``(Gamma^xi_{xi xi}, Gamma^xib_{xi xi}, Gamma^xi_{xi xib})`` in closed form."""
    xi = complex(xi)
    _require_nondegenerate(s, xi)
    sig, dsig, dbsig = sigma0_derivatives(s, xi)
    d = 1 + abs(xi) ** 2
    g_xxx = (dsig - 2 * sig * xi.conjugate() / d) / (2 * sig)
    g_xxb = (dbsig - 2 * sig * xi / d) / (2 * sig.conjugate())
    g_xbx = (dbsig - 2 * sig * xi / d) / (2 * sig)
    return g_xxx, g_xxb, g_xbx


def christoffels_fd(s: SectionCoefficients, xi: complex, step: float) -> Tuple[complex, complex, complex]:
    """Same triple from the Levi-Civita formula with differenced metric coefficients.

    For ``ds^2 = A dxi^2 + conj(A) dxib^2`` the connection is
    ``Gamma^xi_{xi xi} = dA/2A``, ``Gamma^xi_{xi xib} = dbar A/2A`` and
    ``Gamma^xib_{xi xi} = -dbar A/2 conj(A)``.
    """
    xi = complex(xi)
    _require_nondegenerate(s, xi)
    A = lambda z: induced_metric(eval_jet(s, z)).g_xixi
    dA, dbA = wirtinger(A, xi, step)
    a = A(xi)
    return dA / (2 * a), -dbA / (2 * a.conjugate()), dbA / (2 * a)


def null_directions(j: SectionJet, tol: float = 1e-12) -> Tuple[complex, complex]:
    """Unit ``d1, d2`` with ``sigma0 d1^2 > 0 > sigma0 d2^2``.

    ``arg d1`` solves ``2 arg d = -arg sigma0`` and lies in ``(-pi/2, pi/2]``; ``d2 = i d1``.
    """
    if abs(j.sigma0) < tol:
        raise DegeneratePointError(f"no null cone at umbilic xi={j.xi}")
    phi = -cmath.phase(j.sigma0) / 2
    if phi <= -math.pi / 2:
        phi += math.pi
    d1 = cmath.exp(1j * phi)
    return d1, 1j * d1
