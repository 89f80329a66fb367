"""Static SVG 1.1 figures in the xi-plane.

The window ``[-2, 2]^2`` maps onto an 800 x 800 canvas with the y axis pointing
up.  Coordinates are printed with a fixed number of decimals so identical
inputs give byte-identical files.
"""
from __future__ import annotations

import math
from typing import Iterable, List, Sequence

import numpy as np

from .harmonics import COS, SIN, HarmonicSpec, null_level_curve

SIZE = 800
WINDOW = 2.0
SCALE = SIZE / (2 * WINDOW)

STYLE = """\
.fam-sin { fill: none; stroke: #1f5fa8; stroke-width: 1.5; }
.fam-cos { fill: none; stroke: #c0392b; stroke-width: 1.5; }
.traj { fill: none; stroke: #222222; stroke-width: 2; }
.asym { fill: none; stroke: #888888; stroke-width: 1; stroke-dasharray: 6 4; }
.umbilic { fill: #000000; }
.frame { fill: none; stroke: #cccccc; stroke-width: 1; }"""


def to_canvas(z: complex):
    return SIZE / 2 + SCALE * z.real, SIZE / 2 - SCALE * z.imag


def from_canvas(x: float, y: float) -> complex:
    return complex((x - SIZE / 2) / SCALE, (SIZE / 2 - y) / SCALE)


def path_data(branches: Iterable[np.ndarray]) -> str:
    parts = []
    for br in branches:
        pts = [to_canvas(complex(z)) for z in br]
        if len(pts) < 2:
            continue
        head = "M{:.3f},{:.3f}".format(*pts[0])
        tail = " ".join("L{:.3f},{:.3f}".format(*p) for p in pts[1:])
        parts.append(f"{head} {tail}")
    return " ".join(parts)


def parse_path_data(d: str) -> List[List[complex]]:
    """Inverse of :func:`path_data`: subpaths as lists of xi values."""
    out: List[List[complex]] = []
    for tok in d.split():
        x, y = (float(v) for v in tok[1:].split(","))
        if tok[0] == "M":
            out.append([])
        out[-1].append(from_canvas(x, y))
    return out


def _document(body: Sequence[str], title: str) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{title}</title>",
        f"<style>\n{STYLE}\n</style>",
        f'<rect class="frame" x="0" y="0" width="{SIZE}" height="{SIZE}"/>',
        *body,
        "</svg>",
    ]
    return "\n".join(lines) + "\n"


def foliation_levels(spec: HarmonicSpec, levels: int) -> List[float]:
    """``levels`` values of ``R^k sin`` (or ``cos``) spread symmetrically over the window."""
    cmax = 0.9 * WINDOW ** spec.k
    return [cmax * (-1 + (2 * j + 1) / levels) for j in range(levels)]


def foliation_svg(spec: HarmonicSpec, levels: int, samples: int = 400) -> str:
    """Both null families about the umbilic, one ``<path>`` per level and family."""
    body = []
    for family in (SIN, COS):
        for c in foliation_levels(spec, levels):
            branches = null_level_curve(spec, family, c, samples=samples)
            d = path_data(branches)
            if d:
                body.append(f'<path class="fam-{family}" data-level="{c:.6f}" d="{d}"/>')
    if spec.N > 0:
        x, y = to_canvas(0j)
        body.append(f'<circle class="umbilic" cx="{x:.3f}" cy="{y:.3f}" r="4"/>')
    return _document(body, f"Null foliation about the index -{spec.N} umbilic")


def scatter_svg(xi_path: np.ndarray, theta_in: float, theta_out: float, N: int) -> str:
    """A non-null geodesic with its two asymptotic directions drawn from the umbilic."""
    radius = WINDOW * math.sqrt(2)
    body = [f'<path class="traj" d="{path_data([xi_path])}"/>']
    for th in (theta_in, theta_out):
        ray = np.array([0j, radius * complex(math.cos(th), math.sin(th))])
        body.append(f'<path class="asym" d="{path_data([ray])}"/>')
    x, y = to_canvas(0j)
    body.append(f'<circle class="umbilic" cx="{x:.3f}" cy="{y:.3f}" r="4"/>')
    return _document(body, f"Scattering of a non-null geodesic by the index -{N} umbilic")
