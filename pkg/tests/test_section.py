import cmath
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from minimal_congruence import DegeneratePointError, InvalidInputError, build_section, eval_jet, spin_coefficients
from minimal_congruence.section import (
    SectionCoefficients,
    lagrangian_residual,
    minimality_residual,
    potential,
    sigma0_derivatives,
    slope,
    slope_poly,
    wirtinger,
)

from _support import STEPS, lagrangian_from_potential, observed_order, random_point, random_section, shear_identity_residual

finite = st.floats(-2, 2, allow_nan=False)
coeff = st.builds(complex, finite, finite)
sections = st.lists(coeff, min_size=1, max_size=5).map(build_section)
points = st.builds(complex, st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))


def symbolic_F(lam):
    """The series for F summed by sympy, as a function of real (x, y)."""
    x, y = sp.symbols("x y", real=True)
    xi, xib = x + sp.I * y, x - sp.I * y
    F = 0
    for n, l in enumerate(lam):
        l = sp.nsimplify(l.real) + sp.I * sp.nsimplify(l.imag)
        a, b, c = (n + 2) * (n + 3), 2 * (n + 1) * (n + 3), (n + 1) * (n + 2)
        F += 2 * l * xi ** (n + 3) - sp.conjugate(l) * xib ** (n + 1) * (a + b * xi * xib + c * xi**2 * xib**2)
    return x, y, F


def test_zero_section_is_flat():
    s = build_section([0])
    j = eval_jet(s, 0.3 + 0.2j)
    assert s.is_zero() and s.degree == -1
    assert j.F == 0 and j.psi == 0 and j.sigma0 == 0


def test_unit_coefficient_at_one():
    j = eval_jet(build_section([1]), 1.0)
    assert j.F == pytest.approx(-12)
    assert j.r == pytest.approx(-8)
    assert j.dF == pytest.approx(-4)
    assert abs(j.psi) < 1e-14
    assert j.h == pytest.approx(-6)
    assert j.sigma0 == pytest.approx(24)


def test_origin_values():
    lam = 0.7 - 0.2j
    j = eval_jet(build_section([lam]), 0)
    assert j.F == 0 and j.r == 0 and j.psi == 0
    assert j.h == pytest.approx(-6 * lam)
    assert j.sigma0 == pytest.approx(6 * lam)


@pytest.mark.parametrize("bad", [[math.nan], [1, math.inf], []])
def test_rejects_bad_coefficients(bad):
    with pytest.raises(InvalidInputError):
        build_section(bad)


def test_truncation_must_match_length():
    assert build_section([1, 2], M=1).truncation == 1
    for M in (0, 4):
        with pytest.raises(InvalidInputError):
            build_section([1, 2], M=M)


def test_alpha_relation():
    s = build_section([1, 1j, -2])
    assert s.alpha == pytest.approx((-6, -24j, 120))
    assert slope_poly(s) == pytest.approx(np.array([-6, -24j, 120]))


@pytest.mark.parametrize("lam", [[1.0], [0.5 - 0.25j, 0, 0.125j], [0, 0.3, -0.2 + 0.1j]])
def test_series_against_symbolic_sum(lam):
    x, y, F = symbolic_F(lam)
    Fn = sp.lambdify((x, y), F)
    dF = sp.lambdify((x, y), (sp.diff(F, x) - sp.I * sp.diff(F, y)) / 2)
    dbF = sp.lambdify((x, y), (sp.diff(F, x) + sp.I * sp.diff(F, y)) / 2)
    s = build_section(lam)
    for xi in (0.3 + 0.4j, -0.9 + 0.1j, 1.2j):
        j = eval_jet(s, xi)
        assert j.F == pytest.approx(complex(Fn(xi.real, xi.imag)), rel=1e-13, abs=1e-13)
        assert j.dF == pytest.approx(complex(dF(xi.real, xi.imag)), rel=1e-13, abs=1e-13)
        assert j.dbarF == pytest.approx(complex(dbF(xi.real, xi.imag)), rel=1e-13, abs=1e-13)


@settings(max_examples=60, deadline=None)
@given(sections, points)
def test_psi_vanishes(s, xi):
    j = eval_jet(s, xi)
    assert abs(j.psi) <= 1e-12 * (1 + abs(j.F) + abs(j.r))


@settings(max_examples=60, deadline=None)
@given(sections, points)
def test_sections_are_lagrangian(s, xi):
    j = eval_jet(s, xi)
    assert lagrangian_residual(s, xi) <= 1e-12 * (1 + abs(j.F) + abs(j.dF))


@settings(max_examples=60, deadline=None)
@given(sections, points)
def test_sigma0_is_minus_scaled_slope(s, xi):
    j = eval_jet(s, xi)
    d2 = (1 + abs(xi) ** 2) ** 2
    assert j.sigma0 == pytest.approx(-d2 * slope(s, xi), rel=1e-11, abs=1e-11)


def test_lagrangian_negative_control():
    # perturb only the holomorphic half of the series: no longer lagrangian
    bad = SectionCoefficients(lam=(1 + 0.1j,), holomorphic_lam=(1 + 0.3j,))
    assert lagrangian_residual(bad, 1.0) > 1e-3


def test_sigma0_derivatives_match_differences():
    rng = np.random.default_rng(3)
    for _ in range(10):
        s, xi = random_section(rng), random_point(rng)
        sig, d, db = sigma0_derivatives(s, xi)
        fd, fdb = wirtinger(lambda z: eval_jet(s, z).sigma0, xi, 1e-5)
        assert d == pytest.approx(fd, rel=1e-8, abs=1e-8)
        assert db == pytest.approx(fdb, rel=1e-8, abs=1e-8)


class TestMinimality:
    def test_unit_coefficient(self):
        assert abs(minimality_residual(build_section([1]), 0.5, 1e-4)) < 1e-6

    def test_zero_section_exact(self):
        assert minimality_residual(build_section([0]), 0.4 + 0.1j, 1e-3) == 0

    def test_negative_control(self):
        s = build_section([1])
        r = minimality_residual(s, 0.5, 1e-4, slope_override=lambda z: slope(s, z) + z.conjugate())
        assert abs(r - 1) < 1e-6

    def test_rejects_bad_step(self):
        with pytest.raises(InvalidInputError):
            minimality_residual(build_section([1]), 0.5, 0.0)

    def test_second_order(self):
        rng = np.random.default_rng(8)
        s, xi = random_section(rng, M=4), random_point(rng)
        errs = [abs(minimality_residual(s, xi, h)) for h in STEPS]
        assert observed_order(*errs) >= 1.9


def test_potential_derivative():
    # dbar r = 2F/(1+xi xib)^2, second order under central differences
    rng = np.random.default_rng(9)
    s, xi = random_section(rng, M=4), random_point(rng)
    target = 2 * eval_jet(s, xi).F / (1 + abs(xi) ** 2) ** 2
    errs = [abs(wirtinger(lambda z: potential(s, z), xi, h)[1] - target) for h in STEPS]
    assert errs[1] < 1e-6
    assert observed_order(*errs) >= 1.9


def test_potential_is_real_and_odd_in_lambda():
    s = build_section([0.3 + 0.1j, -0.2j])
    neg = build_section([-0.3 - 0.1j, 0.2j])
    assert potential(s, 0.4 - 0.7j) == pytest.approx(-potential(neg, 0.4 - 0.7j))


class TestSpin:
    def test_minimal_section_has_no_divergence(self):
        j = eval_jet(build_section([1, 0.2]), 0.3 + 0.1j)
        sc = spin_coefficients(j)
        assert abs(sc.rho) < 1e-12
        assert sc.sigma == pytest.approx(-1 / j.dbarF)

    def test_shifted_surface(self):
        j = eval_jet(build_section([1]), 0.5)
        sc = spin_coefficients(j, rdist=0.25)
        den = abs(j.dbarF) ** 2 - 0.25**2
        assert sc.rho == pytest.approx(0.25 / den)

    def test_umbilic_raises(self):
        with pytest.raises(DegeneratePointError):
            spin_coefficients(eval_jet(build_section([0, 1]), 0))


def test_wirtinger_on_monomials():
    z0 = 0.3 - 0.8j
    d, db = wirtinger(lambda z: z**2 * z.conjugate(), z0, 1e-5)
    assert d == pytest.approx(2 * z0 * z0.conjugate(), abs=1e-8)
    assert db == pytest.approx(z0**2, abs=1e-8)
    assert cmath.isclose(wirtinger(lambda z: z.conjugate(), z0, 1e-3)[1], 1)


@pytest.mark.parametrize("kind", ["cubic", "constant-psi"])
def test_shear_identity_non_minimal(kind):
    x, y = sp.symbols("x y", real=True)
    r = x**3 * y - 2 * y**2 + x + 5 if kind == "cubic" else sp.Integer(3) + x**2 * y**2
    sigma0, psi = lagrangian_from_potential(r, x, y)
    xi = 0.4 - 0.3j
    assert abs(psi(xi)) > 0.1  # genuinely non-minimal
    errs = [shear_identity_residual(sigma0, psi, xi, h) for h in STEPS]
    assert errs[1] < 1e-6
    assert observed_order(*errs) >= 1.9


def test_shear_identity_on_minimal_sections():
    rng = np.random.default_rng(21)
    for _ in range(5):
        s, xi = random_section(rng, M=4), random_point(rng)
        sigma0 = lambda z: eval_jet(s, z).sigma0
        psi = lambda z: eval_jet(s, z).psi
        errs = [shear_identity_residual(sigma0, psi, xi, h) for h in STEPS]
        assert errs[1] < 1e-6 * (1 + abs(sigma0(xi)))
        assert observed_order(*errs) >= 1.9
