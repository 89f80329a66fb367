"""Command-line front end.

Exit codes: 0 success, 1 scatter accuracy gate missed, 2 configuration or
parse error, 3 geometric degeneracy at setup, 4 umbilic-proximity
termination, 5 integrator failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import io as cio
from .errors import CongruenceError, DegeneratePointError, ExperimentFailedError, ImmersionError, InvalidInputError
from .flow import CONVENTIONS, GEOMETRIC, GeodesicState, Termination, integrate
from .harmonics import (
    HarmonicSpec,
    harmonic_section,
    initial_states,
    scatter_sweep,
    scattering_angle_analytic,
)
from .section import SectionCoefficients, build_section
from .svg import foliation_svg, scatter_svg
from .weierstrass import holomorphic_curve, mesh_max_mean_curvature, sample_mesh

EXIT_OK = 0
EXIT_ACCURACY = 1
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_UMBILIC = 4
EXIT_STEP_FAILURE = 5

SCATTER_TOLERANCE = 1e-3


class ConfigError(CongruenceError):
    pass


def parse_complex(text: str) -> complex:
    """``"re,im"`` -> complex."""
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        z = complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError(f"non-finite value {text!r}")
    return z


def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
        return v
    return conv


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text!r}")
    return v


def worker_count() -> int:
    raw = os.environ.get("CONGRUENCE_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"CONGRUENCE_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"CONGRUENCE_THREADS must be a positive integer, got {raw!r}")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="congruence",
        description="Geodesic flow on the normal line congruence of a minimal surface.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("surface", help="export a mesh of the minimal surface")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--weierstrass", type=Path, help="file of w(nu) coefficients c_k")
    src.add_argument("--lambda", dest="lam", type=Path, help="file of section coefficients lambda_n")
    src.add_argument("--harmonic", type=_nonneg_int, help="pure harmonic of order N")
    s.add_argument("--grid", type=_positive(int), default=32)
    s.add_argument("--radius", type=_positive(float), default=1.0)
    s.add_argument("--center", type=parse_complex, default=0j)
    s.add_argument("--step", type=_positive(float), default=1e-3, help="difference step for |H|")
    s.add_argument("--out", type=Path, required=True)

    g = sub.add_parser("geodesic", help="integrate one geodesic and write a CSV")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--lambda", dest="lam", type=Path)
    src.add_argument("--harmonic", type=_nonneg_int)
    g.add_argument("--xi0", type=parse_complex, required=True)
    g.add_argument("--xidot0", type=parse_complex, required=True)
    g.add_argument("--tmax", type=_positive(float), default=10.0)
    g.add_argument("--tol", type=_positive(float), default=1e-10)
    g.add_argument("--branch", type=int, choices=(1, -1), default=1)
    g.add_argument("--convention", choices=CONVENTIONS, default=GEOMETRIC)
    g.add_argument("--out", type=Path, required=True)

    f = sub.add_parser("foliation", help="SVG of the null foliation of a pure harmonic")
    f.add_argument("--harmonic", type=_nonneg_int, required=True)
    f.add_argument("--levels", type=_positive(int), default=5)
    f.add_argument("--samples", type=_positive(int), default=400)
    f.add_argument("--out", type=Path, required=True)

    c = sub.add_parser("scatter", help="scattering-angle sweep over random non-null geodesics")
    c.add_argument("--harmonic", type=_nonneg_int, required=True)
    c.add_argument("--sweep", type=_positive(int), default=20)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--tspan", type=_positive(float), default=1e3)
    c.add_argument("--tol", type=_positive(float), default=1e-10)
    c.add_argument("--out", type=Path, required=True)
    c.add_argument("--svg", type=Path, help="also draw the first geodesic and its asymptotes")
    return p


def _section_from_args(args) -> SectionCoefficients:
    if args.harmonic is not None:
        return harmonic_section(HarmonicSpec(args.harmonic))
    return build_section(cio.read_coefficients(args.lam))


def _write(path: Path, text: str) -> None:
    path.write_text(text)


def run_surface(args) -> int:
    if args.weierstrass is not None:
        w = holomorphic_curve(cio.read_coefficients(args.weierstrass))
    else:
        s = _section_from_args(args)
        # inverse of the coefficient matching lambda_n = (-1)^n conj(c_{n+3}) / 4
        c = [0j, 0j, 0j] + [4 * (-1) ** n * complex(l).conjugate() for n, l in enumerate(s.lam)]
        w = holomorphic_curve(c)
    mesh = sample_mesh(w, args.center, args.radius, args.grid)
    if all(c == 0 for c in w.w_coeffs):
        print("warning: w vanishes identically; every vertex sits at the origin", file=sys.stderr)
        summary = "max|H|=nan (degenerate surface)"
    else:
        try:
            hmax = mesh_max_mean_curvature(w, mesh, args.grid, args.step)
        except ImmersionError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DEGENERATE
        summary = f"max|H|={hmax:.6e}"
    with open(args.out, "w") as fh:
        cio.write_mesh(mesh, fh)
    print(f"vertices={len(mesh.vertices)} faces={len(mesh.faces)} {summary}")
    return EXIT_OK


def run_geodesic(args) -> int:
    if args.xidot0 == 0:
        print("error: --xidot0 must be a nonzero tangent", file=sys.stderr)
        return EXIT_CONFIG
    s = _section_from_args(args)
    try:
        traj = integrate(s, GeodesicState(args.xi0, args.xidot0, args.branch), args.tmax, args.tol, args.convention)
    except DegeneratePointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    with open(args.out, "w") as fh:
        cio.write_trajectory_csv(traj, fh)
    d1, d2 = traj.drift()
    print(f"samples={len(traj.samples)} termination={traj.termination.value} "
          f"t_end={traj.final.t:.6g} drift_I1={d1:.3e} drift_I2={d2:.3e} "
          f"max|ds2|={np.max(np.abs(traj.ds2)):.3e}")
    if traj.termination == Termination.UMBILIC_PROXIMITY:
        return EXIT_UMBILIC
    if traj.termination == Termination.STEP_FAILURE:
        return EXIT_STEP_FAILURE
    return EXIT_OK


def run_foliation(args) -> int:
    spec = HarmonicSpec(args.harmonic)
    _write(args.out, foliation_svg(spec, args.levels, args.samples))
    print(f"wrote {args.out} ({2 * args.levels} level sets, N={spec.N})")
    return EXIT_OK


def run_scatter(args) -> int:
    spec = HarmonicSpec(args.harmonic)
    workers = worker_count()
    states = initial_states(spec, args.sweep, args.seed)
    try:
        results = scatter_sweep(spec, states, args.tspan, args.tol, workers)
    except ExperimentFailedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UMBILIC
    with open(args.out, "w") as fh:
        worst = cio.write_sweep_csv(spec.N, zip(states, results), fh)
    if args.svg is not None:
        s = harmonic_section(spec)
        fwd = integrate(s, states[0], 20.0, args.tol, metric_samples=False)
        bwd = integrate(s, states[0].reversed(), 20.0, args.tol, metric_samples=False)
        path = np.concatenate([bwd.xi[::-1], fwd.xi[1:]])
        path = path[np.abs(path) < 4.0]
        _write(args.svg, scatter_svg(path, results[0].theta_in, results[0].theta_out, spec.N))
    analytic = scattering_angle_analytic(spec)
    print(f"N={spec.N} sweep={len(results)} analytic={analytic:.12f} max_abs_error={worst:.3e}")
    return EXIT_OK if worst < SCATTER_TOLERANCE else EXIT_ACCURACY


COMMANDS = {
    "surface": run_surface,
    "geodesic": run_geodesic,
    "foliation": run_foliation,
    "scatter": run_scatter,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegeneratePointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
