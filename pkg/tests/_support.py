"""Shared fixtures-as-functions: seeded sections, states and difference-order helpers."""
from __future__ import annotations

import math

import numpy as np
import sympy as sp

from minimal_congruence import GeodesicState, HarmonicSpec, build_section, harmonic_section
from minimal_congruence.section import wirtinger

STEPS = (1e-3, 1e-4)


def observed_order(e_coarse: float, e_fine: float, ratio: float = 10.0) -> float:
    if e_fine == 0:
        return math.inf
    return math.log(e_coarse / e_fine) / math.log(ratio)


def random_section(rng: np.random.Generator, M: int = 3, scale: float = 0.5):
    lam = scale * (rng.normal(size=M + 1) + 1j * rng.normal(size=M + 1))
    return build_section(list(lam))


def random_point(rng: np.random.Generator, radius: float = 1.0) -> complex:
    return complex(radius * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform()))


def smoke_cases():
    """Named (section, initial state) pairs used for long conservation runs.

    Pure harmonics N = 0..4 plus three fixed mixed sections; every initial
    point sits well away from the zeros of the slope.
    """
    cases = []
    for N in range(5):
        cases.append((f"harmonic-{N}", harmonic_section(HarmonicSpec(N)), GeodesicState(1 + 0j, 0.3 + 1j)))
    cases.append(("mixed-a", build_section([1.0, 0.5j]), GeodesicState(0.6 + 0.2j, 0.4 - 0.3j)))
    cases.append(("mixed-b", build_section([0.2, 0.0, -0.1 + 0.1j, 0.05]), GeodesicState(0.8 - 0.5j, 0.2 + 0.5j)))
    cases.append(("mixed-c", build_section([0.0, 1.0, 0.0, 0.3j]), GeodesicState(-0.7 + 0.7j, 0.5 + 0.1j)))
    return cases


def lagrangian_from_potential(r_expr, x, y):
    """Numeric ``sigma0`` and ``psi`` of ``F = (1/2)(1+xi xib)^2 dbar r`` for a real potential."""
    d = lambda f: (sp.diff(f, x) - sp.I * sp.diff(f, y)) / 2
    db = lambda f: (sp.diff(f, x) + sp.I * sp.diff(f, y)) / 2
    D = 1 + x**2 + y**2
    F = D**2 * db(r_expr) / 2
    psi = d(F) + r_expr - 2 * (x - sp.I * y) * F / D
    sigma0 = -d(sp.conjugate(F))
    wrap = lambda e: (lambda z, f=sp.lambdify((x, y), e): complex(f(z.real, z.imag)))
    return wrap(sigma0), wrap(psi)


def shear_identity_residual(sigma0, psi, xi, step):
    D2 = lambda z: (1 + abs(z) ** 2) ** 2
    dbar_term = wirtinger(lambda z: sigma0(z) / D2(z), xi, step)[1]
    return abs(D2(xi) * dbar_term + wirtinger(psi, xi, step)[0])
