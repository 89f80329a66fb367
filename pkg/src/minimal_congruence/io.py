"""Text formats: coefficient files, trajectory and sweep CSVs, polygon meshes."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, List, Sequence, TextIO, Union

from .errors import InvalidInputError
from .flow import Trajectory
from .weierstrass import Mesh

TRAJECTORY_HEADER = ["t", "re_xi", "im_xi", "re_xidot", "im_xidot", "I1", "I2", "ds2"]
SWEEP_HEADER = [
    "N", "re_xi0", "im_xi0", "re_xidot0", "im_xidot0", "I1", "I2",
    "theta_in", "theta_out", "angle", "analytic", "abs_error",
]

PathLike = Union[str, Path]


class CoefficientFileError(InvalidInputError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


def parse_coefficients(text: str, source: str = "<string>") -> List[complex]:
    """Parse ``n re im`` lines into a dense coefficient list (missing ``n`` are zero).

    ``#`` starts a comment; blank lines are skipped; indices must strictly increase.
    """
    entries = {}
    last = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise CoefficientFileError(source, lineno, f"expected 'n re im', got {raw.strip()!r}")
        try:
            n = int(parts[0])
        except ValueError:
            raise CoefficientFileError(source, lineno, f"index {parts[0]!r} is not an integer") from None
        try:
            re, im = float(parts[1]), float(parts[2])
        except ValueError:
            raise CoefficientFileError(source, lineno, f"non-numeric coefficient in {raw.strip()!r}") from None
        if n < 0:
            raise CoefficientFileError(source, lineno, f"negative index {n}")
        if n <= last:
            raise CoefficientFileError(source, lineno, f"index {n} does not increase (previous {last})")
        if not (math.isfinite(re) and math.isfinite(im)):
            raise CoefficientFileError(source, lineno, "coefficient is not finite")
        entries[n] = complex(re, im)
        last = n
    if not entries:
        raise CoefficientFileError(source, 0, "no coefficients found")
    out = [0j] * (last + 1)
    for n, v in entries.items():
        out[n] = v
    return out


def read_coefficients(path: PathLike) -> List[complex]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CoefficientFileError(path, 0, f"cannot read file: {exc.strerror or exc}") from None
    return parse_coefficients(text, str(path))


def format_coefficients(coeffs: Sequence[complex]) -> str:
    return "".join(f"{n} {fmt(c.real)} {fmt(c.imag)}\n" for n, c in enumerate(coeffs) if c != 0) or "0 0 0\n"


def fmt(x: float) -> str:
    """Full double precision, 17 significant digits."""
    return f"{float(x):.17g}"


def write_trajectory_csv(traj: Trajectory, fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TRAJECTORY_HEADER)
    for p in traj.samples:
        st = p.state
        w.writerow([fmt(v) for v in (p.t, st.xi.real, st.xi.imag, st.xidot.real, st.xidot.imag, p.I1, p.I2, p.ds2)])


def read_csv(fh: TextIO, header: Sequence[str]) -> List[dict]:
    r = csv.reader(fh)
    got = next(r, None)
    if got != list(header):
        raise InvalidInputError(f"unexpected CSV header {got!r}")
    rows = []
    for row in r:
        if len(row) != len(header):
            raise InvalidInputError(f"row has {len(row)} fields, expected {len(header)}")
        rows.append({k: float(v) for k, v in zip(header, row)})
    return rows


def write_sweep_csv(N: int, rows: Iterable, fh: TextIO) -> float:
    """Write one row per (state, ScatterResult) and a closing summary row.

    The summary row repeats ``N``, leaves every other field ``nan`` and puts
    the largest ``abs_error`` in the last column.  Returns that maximum.
    """
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    worst = 0.0
    for st, res in rows:
        worst = max(worst, res.abs_error)
        w.writerow([str(N)] + [fmt(v) for v in (
            st.xi.real, st.xi.imag, st.xidot.real, st.xidot.imag, res.I1, res.I2,
            res.theta_in, res.theta_out, res.angle, res.analytic, res.abs_error)])
    w.writerow([str(N)] + ["nan"] * (len(SWEEP_HEADER) - 2) + [fmt(worst)])
    return worst


def write_mesh(mesh: Mesh, fh: TextIO) -> None:
    fh.write(f"{len(mesh.vertices)} {len(mesh.faces)}\n")
    for x, y, z in mesh.vertices:
        fh.write(f"{fmt(x)} {fmt(y)} {fmt(z)}\n")
    for face in mesh.faces:
        fh.write(" ".join(str(int(i)) for i in face) + "\n")


def read_mesh(fh: TextIO):
    head = fh.readline().split()
    nv, nf = int(head[0]), int(head[1])
    verts = [tuple(float(x) for x in fh.readline().split()) for _ in range(nv)]
    faces = [tuple(int(x) for x in fh.readline().split()) for _ in range(nf)]
    return verts, faces
