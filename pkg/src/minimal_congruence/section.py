"""Lagrangian sections of the oriented-line bundle built from a finite lambda-series.

A section is the graph ``eta = F(xi, conj(xi))`` over the xi-chart of the
2-sphere.  For coefficients ``lambda_0..lambda_M``

    F = sum_n 2 l_n xi^(n+3)
          - conj(l_n) xib^(n+1) ((n+2)(n+3) + 2(n+1)(n+3) xi xib + (n+1)(n+2) xi^2 xib^2)

    r = -2 sum_n (3 + n + (1+n) xi xib) (l_n xi^(n+2) + conj(l_n) xib^(n+2)) / (1 + xi xib)

and the holomorphic slope ``dF^bar / (1+xi xib)^2`` equals ``sum_n a_n xi^n`` with
``a_n = -(n+1)(n+2)(n+3) l_n``.  The truncated series is the surface; nothing
here approximates an infinite sum.

Every derivative of ``F`` is computed term by term in closed form.  Finite
differences only appear in the residual oracles (``wirtinger`` and friends).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DegeneratePointError, InvalidInputError


@dataclass(frozen=True)
class SectionCoefficients:
    """Coefficients ``lambda_0..lambda_M`` of a minimal normal congruence.

    ``holomorphic_lam`` replaces the coefficients of the ``2 l_n xi^(n+3)`` half
    of ``F`` only.  It exists so tests can build non-lagrangian negative
    controls without going through :func:`build_section`; leave it ``None``.
    """

    lam: tuple
    holomorphic_lam: Optional[tuple] = None

    @property
    def truncation(self) -> int:
        return len(self.lam) - 1

    @property
    def alpha(self) -> np.ndarray:
        n = np.arange(len(self.lam))
        return -(n + 1) * (n + 2) * (n + 3) * np.asarray(self.lam, dtype=complex)

    @property
    def degree(self) -> int:
        """Degree of the slope polynomial (``-1`` for the zero section)."""
        nz = np.nonzero(np.asarray(self.lam, dtype=complex))[0]
        return int(nz[-1]) if len(nz) else -1

    def is_zero(self) -> bool:
        return self.degree < 0


def build_section(lam: Sequence[complex], M: Optional[int] = None) -> SectionCoefficients:
    lam = [complex(v) for v in lam]
    if M is None:
        M = len(lam) - 1
    if M < 0 or len(lam) != M + 1:
        raise InvalidInputError(f"expected {M + 1} coefficients for truncation M={M}, got {len(lam)}")
    for n, v in enumerate(lam):
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise InvalidInputError(f"coefficient lambda_{n} is not finite: {v!r}")
    return SectionCoefficients(tuple(lam))


def slope(s: SectionCoefficients, xi: complex) -> complex:
    """Holomorphic slope ``h(xi) = sum a_n xi^n``."""
    acc = 0j
    for a in s.alpha[::-1]:
        acc = acc * xi + a
    return complex(acc)


def slope_derivative(s: SectionCoefficients, xi: complex) -> complex:
    alpha = s.alpha
    acc = 0j
    for n in range(len(alpha) - 1, 0, -1):
        acc = acc * xi + n * alpha[n]
    return complex(acc)


def slope_poly(s: SectionCoefficients) -> np.ndarray:
    """Slope coefficients in increasing order, trailing zeros trimmed."""
    return np.asarray(s.alpha[: s.degree + 1], dtype=complex)


@dataclass(frozen=True)
class SectionJet:
    xi: complex
    F: complex
    dF: complex
    dbarF: complex
    sigma0: complex
    h: complex
    r: float
    psi: complex


def _terms(s: SectionCoefficients, xi: complex):
    lam = np.asarray(s.lam, dtype=complex)
    hol = lam if s.holomorphic_lam is None else np.asarray(s.holomorphic_lam, dtype=complex)
    n = np.arange(len(lam))
    a = (n + 2) * (n + 3)
    b = 2 * (n + 1) * (n + 3)
    c = (n + 1) * (n + 2)
    return lam, hol, n, a, b, c, complex(xi), complex(xi).conjugate()


def _F_and_first(s: SectionCoefficients, xi: complex):
    lam, hol, n, a, b, c, x, y = _terms(s, xi)
    lb = lam.conj()
    F = np.sum(2 * hol * x ** (n + 3) - lb * (a * y ** (n + 1) + b * x * y ** (n + 2) + c * x**2 * y ** (n + 3)))
    dF = np.sum(2 * hol * (n + 3) * x ** (n + 2) - lb * (b * y ** (n + 2) + 2 * c * x * y ** (n + 3)))
    dbarF = np.sum(-lb * (a * (n + 1) * y**n + b * (n + 2) * x * y ** (n + 1) + c * (n + 3) * x**2 * y ** (n + 2)))
    return complex(F), complex(dF), complex(dbarF)


def potential(s: SectionCoefficients, xi: complex) -> float:
    """The real potential ``r`` with ``dbar r = 2F/(1+xi xib)^2``."""
    lam, _, n, _, _, _, x, y = _terms(s, xi)
    q = x * y
    val = -2 * np.sum((3 + n + (1 + n) * q) * (lam * x ** (n + 2) + lam.conj() * y ** (n + 2))) / (1 + q)
    return float(complex(val).real)


def eval_jet(s: SectionCoefficients, xi: complex) -> SectionJet:
    xi = complex(xi)
    if not (math.isfinite(xi.real) and math.isfinite(xi.imag)):
        raise InvalidInputError(f"xi must be finite, got {xi!r}")
    F, dF, dbarF = _F_and_first(s, xi)
    q = (xi * xi.conjugate()).real
    r = potential(s, xi)
    psi = dF + r - 2 * xi.conjugate() * F / (1 + q)
    return SectionJet(
        xi=xi, F=F, dF=dF, dbarF=dbarF,
        sigma0=-dbarF.conjugate(),
        h=slope(s, xi),
        r=r, psi=psi,
    )


def sigma0_derivatives(s: SectionCoefficients, xi: complex):
    """Return ``(sigma0, d sigma0, dbar sigma0)`` from closed-form second derivatives of F."""
    lam, _, n, a, b, c, x, y = _terms(s, xi)
    lb = lam.conj()
    with np.errstate(invalid="ignore", divide="ignore"):
        ym1 = np.where(n >= 1, y ** np.maximum(n - 1, 0), 0)
    d_yy = np.sum(-lb * (a * (n + 1) * n * ym1 + b * (n + 2) * (n + 1) * x * y**n + c * (n + 3) * (n + 2) * x**2 * y ** (n + 1)))
    d_xy = np.sum(-lb * (b * (n + 2) * y ** (n + 1) + 2 * c * (n + 3) * x * y ** (n + 2)))
    _, _, dbarF = _F_and_first(s, xi)
    return -dbarF.conjugate(), -complex(d_yy).conjugate(), -complex(d_xy).conjugate()


def lagrangian_residual(s: SectionCoefficients, xi: complex) -> float:
    """``|dF - dbar Fbar + 2(xi Fbar - xib F)/(1+xi xib)|``, the mixed metric coefficient."""
    xi = complex(xi)
    F, dF, _ = _F_and_first(s, xi)
    q = (xi * xi.conjugate()).real
    return abs(dF - dF.conjugate() + 2 * (xi * F.conjugate() - xi.conjugate() * F) / (1 + q))


def wirtinger(f: Callable[[complex], complex], xi: complex, step: float):
    """Central-difference Wirtinger derivatives ``(d f, dbar f)`` of ``f`` at ``xi``."""
    if not step > 0:
        raise InvalidInputError(f"step must be positive, got {step}")
    xi = complex(xi)
    fx = (f(xi + step) - f(xi - step)) / (2 * step)
    fy = (f(xi + 1j * step) - f(xi - 1j * step)) / (2 * step)
    return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)


def jet_slope(s: SectionCoefficients, xi: complex) -> complex:
    """``dFbar/(1+xi xib)^2`` built from the jet rather than from the alpha series."""
    j = eval_jet(s, xi)
    return -j.sigma0 / (1 + abs(j.xi) ** 2) ** 2


def minimality_residual(
    s: SectionCoefficients,
    xi: complex,
    step: float,
    slope_override: Optional[Callable[[complex], complex]] = None,
) -> complex:
    """Central-difference estimate of ``dbar(dFbar/(1+xi xib)^2)``.

    ``slope_override`` swaps in an arbitrary function for the slope; it is the
    hook for negative controls.
    """
    if not step > 0:
        raise InvalidInputError(f"step must be positive, got {step}")
    f = slope_override if slope_override is not None else (lambda z: jet_slope(s, z))
    return wirtinger(f, xi, step)[1]


@dataclass(frozen=True)
class SpinCoefficients:
    rho: complex
    sigma: complex


def spin_coefficients(j: SectionJet, rdist: float = 0.0) -> SpinCoefficients:
    """Divergence ``rho`` and shear ``sigma`` on the surface shifted ``rdist`` along the lines."""
    psi = j.psi + rdist
    dFbar = j.dbarF.conjugate()
    den = j.dbarF * dFbar - psi * psi.conjugate()
    # psi carries roundoff of order 1e-16 * (1+|F|+|r|), so |den| below its square is zero
    floor = (1e-12 * (1 + abs(j.F) + abs(j.r))) ** 2
    if abs(den) <= floor:
        raise DegeneratePointError(f"spin coefficients undefined at xi={j.xi}: vanishing denominator")
    return SpinCoefficients(rho=psi / den, sigma=-dFbar / den)
