"""Umbilic points: zeros of the holomorphic slope and their contour windings."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .errors import BoundaryZeroError, InvalidInputError
from .section import SectionCoefficients, slope_poly

CONTOUR_POINTS = 256
DEDUP_RADIUS = 1e-8


@dataclass(frozen=True)
class UmbilicRecord:
    xi: complex
    winding: int
    # the foliation index reported as -winding
    index: int


def contour_winding(coeffs, center: complex, radius: float, points: int = CONTOUR_POINTS) -> int:
    """Winding number of a polynomial (increasing-order ``coeffs``) around a circle.

    Sums the wrapped increments of ``arg p`` along ``points`` equally spaced samples.
    """
    theta = np.linspace(0.0, 2 * np.pi, points + 1)
    z = center + radius * np.exp(1j * theta)
    vals = np.polynomial.polynomial.polyval(z, np.asarray(coeffs, dtype=complex))
    if np.any(vals == 0):
        raise BoundaryZeroError(f"polynomial vanishes on the circle |xi - {center}| = {radius}")
    darg = np.angle(vals[1:] / vals[:-1])
    return int(round(darg.sum() / (2 * np.pi)))


def _newton(coeffs, z0, iters=200):
    p = np.polynomial.polynomial
    dp = p.polyder(coeffs)
    z = z0
    for _ in range(iters):
        f = p.polyval(z, coeffs)
        d = p.polyval(z, dp)
        if f == 0 or d == 0:
            break
        step = f / d
        z = z - step
        if abs(step) < 1e-15 * (1 + abs(z)):
            break
    return z


def _cluster(points, radius):
    clusters: List[List[complex]] = []
    for z in points:
        for c in clusters:
            if abs(z - c[0]) < radius:
                c.append(z)
                break
        else:
            clusters.append([z])
    return [complex(np.mean(c)) for c in clusters]


def polynomial_umbilics(coeffs, center: complex, radius: float, grid: int = 16) -> List[UmbilicRecord]:
    """Zeros of the polynomial ``coeffs`` inside ``|xi - center| < radius``.

    Newton iterations start from a ``grid`` x ``grid`` lattice covering the disc
    and from the companion-matrix roots; the hits are deduplicated and each
    cluster gets its multiplicity from a contour winding on a small circle.
    """
    if not radius > 0:
        raise InvalidInputError(f"radius must be positive, got {radius}")
    if grid < 16:
        raise InvalidInputError(f"grid must be at least 16, got {grid}")
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    if len(coeffs) <= 1:
        if len(coeffs) == 0:
            raise InvalidInputError("the zero polynomial has no isolated zeros")
        return []

    scale = np.max(np.abs(coeffs))
    companion = np.roots(coeffs[::-1])
    g = np.linspace(-radius, radius, grid)
    seeds = [center + complex(a, b) for a in g for b in g if a * a + b * b <= radius * radius]
    found = [_newton(coeffs, z) for z in list(companion) + seeds]
    p = np.polynomial.polynomial
    # multiple roots stall Newton at ~eps^(1/m); accept anything the companion roots agree with
    tol = 1e-6 * (1 + abs(center) + radius)
    found = [z for z in found if abs(p.polyval(z, coeffs)) <= 1e-8 * scale * (1 + abs(z)) ** len(coeffs)]
    roots = _cluster(found + list(companion), DEDUP_RADIUS)

    for z in roots:
        if abs(abs(z - center) - radius) < tol:
            raise BoundaryZeroError(f"zero at {z} lies on the search boundary |xi - {center}| = {radius}")

    total = contour_winding(coeffs, center, radius)
    merge = max(DEDUP_RADIUS, 1e-12 * (1 + abs(center) + radius))
    # a multiple zero splits into a tiny ring of simple-looking roots; widen the
    # dedup radius until the local windings add up to the boundary winding
    while True:
        records = _classify(coeffs, _cluster(roots, merge), center, radius)
        if sum(r.winding for r in records) == total or merge > 1e-3 * (1 + radius):
            return _merge_split_multiples(coeffs, records)
        merge *= 10


def _merge_split_multiples(coeffs, records, gap=1e-4):
    """Fuse near-coincident simple zeros that are really one multiple zero.

    A group is fused only if a circle of ten times its spread around the
    centroid winds exactly as often as the group members together.
    """
    groups: List[List[UmbilicRecord]] = []
    for rec in records:
        for g in groups:
            if any(abs(rec.xi - o.xi) < gap * (1 + abs(o.xi)) for o in g):
                g.append(rec)
                break
        else:
            groups.append([rec])
    out = []
    for g in groups:
        if len(g) == 1:
            out.append(g[0])
            continue
        centre = complex(np.mean([r.xi for r in g]))
        spread = max(abs(r.xi - centre) for r in g)
        w_sum = sum(r.winding for r in g)
        try:
            w = contour_winding(coeffs, centre, 10 * spread)
        except BoundaryZeroError:
            w = -1
        if w == w_sum:
            out.append(UmbilicRecord(xi=_snap(centre), winding=w, index=-w))
        else:
            out.extend(g)
    return sorted(out, key=lambda r: (r.xi.real, r.xi.imag))


def _classify(coeffs, roots, center, radius):
    inside = sorted((z for z in roots if abs(z - center) < radius), key=lambda z: (z.real, z.imag))
    records = []
    for z in inside:
        others = [abs(z - o) for o in roots if o is not z]
        rho = 0.5 * min(others) if others else 0.5 * radius
        rho = min(rho, 0.5 * (radius - abs(z - center)), 1e-2 * (1 + abs(z)))
        try:
            w = contour_winding(coeffs, z, rho)
        except BoundaryZeroError:
            # circle too small to resolve a multiple zero in floating point
            w = 0
        if w > 0:
            records.append(UmbilicRecord(xi=_snap(z), winding=w, index=-w))
    return records


def _snap(z: complex) -> complex:
    re = 0.0 if abs(z.real) < 1e-12 else z.real
    im = 0.0 if abs(z.imag) < 1e-12 else z.imag
    return complex(re, im)


def umbilic_points(s: SectionCoefficients, center: complex, radius: float, grid: int = 16) -> List[UmbilicRecord]:
    """Umbilic points of the minimal surface described by ``s`` inside a disc."""
    if s.is_zero():
        raise InvalidInputError("the zero section is totally umbilic; no isolated umbilics")
    return polynomial_umbilics(slope_poly(s), center, radius, grid)
