"""Pure harmonics ``h = alpha xi^N``: closed-form geodesics and the scattering experiment.

In the uniformizing coordinate ``u = (2/(N+2)) xi^((N+2)/2)`` the metric is
flat, so every geodesic is a straight line in ``u``.  Null geodesics are the
level sets of ``Re u`` and ``Im u``; a non-null geodesic enters along one
asymptotic direction and leaves along another, the two separated by
``2 pi/(N+2)`` in the xi-plane.

All first integrals here use the rescaled slope ``xi^N`` (``alpha`` divided
out), so the closed forms do not depend on ``alpha``.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ExperimentFailedError, InvalidInputError
from .flow import HARMONIC, GeodesicState, Termination, Trajectory, integrate
from .section import SectionCoefficients, build_section, eval_jet, slope_poly

SIN, COS = "sin", "cos"


@dataclass(frozen=True)
class HarmonicSpec:
    N: int
    alpha: float = 1.0

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 0:
            raise InvalidInputError(f"N must be a nonnegative integer, got {self.N!r}")
        if isinstance(self.alpha, complex) or not self.alpha > 0:
            raise InvalidInputError(f"alpha must be a positive real (rotate it real first), got {self.alpha!r}")

    @property
    def k(self) -> float:
        """Exponent ``(N+2)/2`` of the uniformizing map."""
        return (self.N + 2) / 2


@dataclass(frozen=True)
class ScatterResult:
    theta_in: float
    theta_out: float
    angle: float
    analytic: float
    I1: float = math.nan
    I2: float = math.nan
    tan_in: float = math.nan
    tan_out: float = math.nan

    @property
    def abs_error(self) -> float:
        return abs(self.angle - self.analytic)

    @property
    def tan_limit(self) -> float:
        """Closed-form limit ``-I1/(2 I2^2)`` of ``tan(k theta)``."""
        return -self.I1 / (2 * self.I2**2)


def harmonic_section(spec: HarmonicSpec) -> SectionCoefficients:
    n = spec.N
    lam = [0j] * n + [-spec.alpha / ((n + 1) * (n + 2) * (n + 3))]
    return build_section(lam)


def _arcs(trig: str, c: float, k: float, rmax: float, theta_range: Tuple[float, float]):
    """Theta intervals on which ``R = (c / trig(k theta))^(1/k)`` is positive and ``<= rmax``."""
    q = abs(c) / rmax**k
    if q > 1:
        return []
    lo, hi = theta_range
    # sin(psi) >= q on [asin q, pi - asin q] + 2 pi m; shift psi for cos and for c < 0
    shift = (math.pi / 2 if trig == COS else 0.0) + (math.pi if c < 0 else 0.0)
    a0, a1 = math.asin(q), math.pi - math.asin(q)
    out = []
    m_lo = math.floor((k * lo + shift - a1) / (2 * math.pi)) - 1
    m_hi = math.ceil((k * hi + shift - a0) / (2 * math.pi)) + 1
    for m in range(m_lo, m_hi + 1):
        t0 = (a0 + 2 * math.pi * m - shift) / k
        t1 = (a1 + 2 * math.pi * m - shift) / k
        t0, t1 = max(t0, lo), min(t1, hi)
        if t1 > t0:
            out.append((t0, t1))
    return out


def null_level_curve(
    spec: HarmonicSpec,
    family: str,
    c: float,
    theta_range: Tuple[float, float] = (0.0, 2 * math.pi),
    samples: int = 200,
    rmax: float = 2 * math.sqrt(2),
) -> List[np.ndarray]:
    """Branches of ``R^k sin(k theta) = c`` (``family="sin"``) or ``R^k cos(k theta) = c``.

    Each branch is a complex array of about ``samples`` points with ``R <= rmax``.
    ``c == 0`` yields the rays through the umbilic.  Returns an empty list when
    nothing of the curve falls inside ``theta_range``.
    """
    if family not in (SIN, COS):
        raise InvalidInputError(f"family must be 'sin' or 'cos', got {family!r}")
    if samples < 2:
        raise InvalidInputError(f"need at least 2 samples, got {samples}")
    k = spec.k
    trig = math.sin if family == SIN else math.cos
    lo, hi = theta_range
    if c == 0:
        rays = []
        off = 0.0 if family == SIN else math.pi / 2
        m = math.ceil((k * lo - off) / math.pi)
        while (m * math.pi + off) / k < hi:
            th = (m * math.pi + off) / k
            if th >= lo:
                rays.append(np.linspace(0.0, rmax, samples) * cmath.exp(1j * th))
            m += 1
        return rays
    branches = []
    for t0, t1 in _arcs(family, c, k, rmax, (lo, hi)):
        th = np.linspace(t0, t1, samples)
        tv = np.array([trig(k * x) for x in th])
        with np.errstate(divide="ignore", invalid="ignore"):
            R = (c / tv) ** (1 / k)
        ok = np.isfinite(R) & (R > 0)
        if ok.sum() >= 2:
            branches.append(R[ok] * np.exp(1j * th[ok]))
    # for even N the curve is single-valued, so pieces cut at a full-turn seam join up
    if spec.N % 2 == 0 and len(branches) > 1 and math.isclose(hi - lo, 2 * math.pi):
        first, last = branches[0], branches[-1]
        if abs(last[-1] - first[0]) < 1e-9 * max(1.0, abs(first[0])):
            branches = [np.concatenate([last, first[1:]])] + branches[1:-1]
    return branches


def harmonic_root(N: int, xi: complex, branch: int = 1) -> complex:
    """``branch * sqrt(xi^N)``, the rescaled square-root slope."""
    return branch * cmath.sqrt(complex(xi) ** N)


def harmonic_constants(spec: HarmonicSpec, st: GeodesicState) -> Tuple[float, float, float, float]:
    """``(I1, I2, c1, c2)`` of the integrated forms for the geodesic through ``st``.

    For even ``N`` the integrated forms hold only for the single-valued root
    ``xi^(N/2)``, so the state's branch is ignored; for odd ``N`` either
    determination works because :func:`nonnull_parametric` returns both sheets.
    """
    N = spec.N
    if N % 2 == 0:
        root = complex(st.xi) ** (N // 2)
    else:
        root = harmonic_root(N, st.xi, st.branch)
    rate = root * st.xidot
    I1 = -4 * (rate * rate).imag
    I2 = 2 * rate.real
    P = st.xi * root  # a determination of xi^((N+2)/2)
    c2 = 4 * P.real / (N + 2)
    c1 = -8 * I2 * P.imag / (N + 2)
    return I1, I2, c1, c2


def nonnull_parametric(spec: HarmonicSpec, I1: float, I2: float, c1: float, c2: float, t: float) -> List[complex]:
    """Every xi with ``R^k sin(k theta) = -(N+2)/(8 I2) (I1 t + c1)`` and
    ``R^k cos(k theta) = (N+2)/4 (I2 t + c2)`` for some real ``theta = arg xi mod 2 pi``.

    ``k = (N+2)/2``; there are ``k`` candidates for even ``N`` and ``N+2`` for odd ``N``.
    """
    if I2 == 0:
        raise InvalidInputError("I2 must be nonzero for a non-null geodesic")
    N = spec.N
    k = spec.k
    W = complex((N + 2) / 4 * (I2 * t + c2), -(N + 2) / (8 * I2) * (I1 * t + c1))
    if W == 0:
        return [0j]
    R = abs(W) ** (1 / k)
    phase = cmath.phase(W)
    count = N + 2 if N % 2 else (N + 2) // 2
    return [R * cmath.exp(1j * (phase + 2 * math.pi * m) / k) for m in range(count)]


def parametric_track(spec: HarmonicSpec, st0: GeodesicState, times: Sequence[float], reference: Optional[Sequence[complex]] = None) -> np.ndarray:
    """Follow one branch of :func:`nonnull_parametric` through ``times``.

    The branch is fixed at the first time by the candidate nearest
    ``reference[0]`` (default ``st0.xi``) and then continued by nearest-to-previous.
    """
    I1, I2, c1, c2 = harmonic_constants(spec, st0)
    prev = complex(st0.xi) if reference is None else complex(reference[0])
    out = []
    for t in times:
        cands = nonnull_parametric(spec, I1, I2, c1, c2, t)
        prev = min(cands, key=lambda z: abs(z - prev))
        out.append(prev)
    return np.array(out)


def scattering_angle_analytic(spec: HarmonicSpec) -> float:
    return 2 * math.pi / (spec.N + 2)


def _run_side(s, st: GeodesicState, tspan: float, tol: float) -> Tuple[Trajectory, Trajectory]:
    half = integrate(s, st, tspan / 2, tol, convention=HARMONIC, metric_samples=False)
    if half.termination != Termination.COMPLETED:
        return half, half
    rest = integrate(s, half.final.state, tspan, tol, convention=HARMONIC, t0=tspan / 2, metric_samples=False)
    return half, rest


def _unwrapped_angles(xi0: complex, *pieces: Trajectory) -> np.ndarray:
    xs = np.concatenate([[xi0]] + [p.xi[1:] for p in pieces])
    return np.unwrap(np.angle(xs))


def scattering_angle_numeric(spec: HarmonicSpec, st0: GeodesicState, tspan: float = 1e3, tol: float = 1e-10) -> ScatterResult:
    """Integrate the geodesic through ``st0`` over ``[-tspan, tspan]`` and measure the
    angle between its incoming and outgoing asymptotic directions.

    ``theta(t) = theta_inf + b/t`` is fitted at ``tspan/2`` and ``tspan`` on each side.
    """
    if not tspan > 0:
        raise InvalidInputError(f"tspan must be positive, got {tspan}")
    I1, I2, _, _ = harmonic_constants(spec, st0)
    if I2 == 0:
        raise InvalidInputError("I2 vanishes: the geodesic is null")
    s = harmonic_section(spec)
    k = spec.k

    ends = []
    for st in (st0, st0.reversed()):
        half, rest = _run_side(s, st, tspan, tol)
        if rest.termination != Termination.COMPLETED:
            raise ExperimentFailedError(
                f"trajectory from {st} stopped with {rest.termination.value}",
                partial={"half": half, "rest": rest},
            )
        theta = _unwrapped_angles(complex(st0.xi), half, rest)
        th_half = theta[len(half.samples) - 1]
        th_full = theta[-1]
        th_inf = 2 * th_full - th_half
        tan_half = math.tan(k * th_half)
        tan_full = math.tan(k * th_full)
        ends.append((th_inf, 2 * tan_full - tan_half))

    (theta_out, tan_out), (theta_in, tan_in) = ends
    return ScatterResult(
        theta_in=theta_in,
        theta_out=theta_out,
        angle=abs(theta_out - theta_in),
        analytic=scattering_angle_analytic(spec),
        I1=I1,
        I2=I2,
        tan_in=tan_in,
        tan_out=tan_out,
    )


def random_nonnull_state(spec: HarmonicSpec, rng: np.random.Generator) -> GeodesicState:
    """Draw a non-null initial state whose straight line in the u-plane stays clear of the umbilic."""
    N, k = spec.N, spec.k
    while True:
        xi = rng.uniform(0.5, 1.5) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        v = rng.uniform(0.5, 1.5) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        st = GeodesicState(xi, v)
        rate = harmonic_root(N, xi) * v
        u0 = xi * harmonic_root(N, xi) / k
        # |I1| and |I2| at least 20% of their natural scale
        if abs((rate * rate).imag) < 0.2 * abs(rate) ** 2 or abs(rate.real) < 0.2 * abs(rate):
            continue
        impact = abs((rate.conjugate() * u0).imag) / abs(rate)
        if impact < 0.2 * abs(u0):
            continue
        return st


def initial_states(spec: HarmonicSpec, count: int, seed: int) -> List[GeodesicState]:
    """``count`` reproducible non-null states, one independent stream per member."""
    streams = np.random.SeedSequence(seed).spawn(count)
    return [random_nonnull_state(spec, np.random.default_rng(ss)) for ss in streams]


def _scatter_one(args):
    spec, st, tspan, tol = args
    return scattering_angle_numeric(spec, st, tspan, tol)


def scatter_sweep(
    spec: HarmonicSpec,
    states: Sequence[GeodesicState],
    tspan: float = 1e3,
    tol: float = 1e-10,
    workers: int = 1,
) -> List[ScatterResult]:
    """Scattering angle for each state; results come back in input order."""
    jobs = [(spec, st, tspan, tol) for st in states]
    if workers <= 1 or len(jobs) <= 1:
        return [_scatter_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_scatter_one, jobs))


def null_tangent_defect(spec: HarmonicSpec, curve: np.ndarray) -> float:
    """Largest ``|Im(sigma0 d^2)| / |sigma0|`` over the unit chord directions ``d`` of a polyline,
    with ``sigma0 = -(1+|xi|^2)^2 h`` taken at the chord midpoints."""
    s = harmonic_section(spec)
    curve = np.asarray(curve, dtype=complex)
    d = np.diff(curve)
    mid = 0.5 * (curve[1:] + curve[:-1])
    keep = d != 0
    d, mid = d[keep] / np.abs(d[keep]), mid[keep]
    sig = -(1 + np.abs(mid) ** 2) ** 2 * np.polynomial.polynomial.polyval(mid, slope_poly(s))
    ok = sig != 0
    if not ok.any():
        return 0.0
    return float(np.max(np.abs((sig[ok] * d[ok] ** 2).imag) / np.abs(sig[ok])))
