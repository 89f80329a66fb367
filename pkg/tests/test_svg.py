import math
import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from minimal_congruence import HarmonicSpec
from minimal_congruence.svg import (
    foliation_levels,
    foliation_svg,
    from_canvas,
    parse_path_data,
    path_data,
    scatter_svg,
    to_canvas,
)

NS = {"svg": "http://www.w3.org/2000/svg"}


def paths(doc, cls):
    root = ET.fromstring(doc)
    return [p for p in root.iterfind("svg:path", NS) if p.get("class") == cls]


def test_canvas_orientation():
    assert to_canvas(0j) == (400, 400)
    assert to_canvas(2 + 2j) == (800, 0)
    assert from_canvas(*to_canvas(0.3 - 1.1j)) == pytest.approx(0.3 - 1.1j)


def test_path_round_trip():
    br = [np.array([0, 1 + 1j, -0.5j]), np.array([0.25, 0.5])]
    back = parse_path_data(path_data(br))
    assert len(back) == 2
    assert np.allclose(back[0], br[0], atol=1e-3)


def test_levels_are_symmetric():
    lv = foliation_levels(HarmonicSpec(1), 4)
    assert np.allclose(lv, -np.array(lv[::-1]))


def test_free_case_is_a_rectangular_grid():
    doc = foliation_svg(HarmonicSpec(0), 5)
    hs, vs = paths(doc, "fam-sin"), paths(doc, "fam-cos")
    assert len(hs) == len(vs) == 5
    # each level is one straight line (the zero level is drawn as two rays)
    for p in hs:
        pts = [z for br in parse_path_data(p.get("d")) for z in br]
        assert np.ptp([z.imag for z in pts]) < 1e-2
    for p in vs:
        pts = [z for br in parse_path_data(p.get("d")) for z in br]
        assert np.ptp([z.real for z in pts]) < 1e-2
    assert not ET.fromstring(doc).findall("svg:circle", NS)


def point_cloud(doc, cls):
    return np.array([z for p in paths(doc, cls) for br in parse_path_data(p.get("d")) for z in br])


def hausdorff(a, b):
    d = np.abs(a[:, None] - b[None, :])
    return max(d.min(axis=1).max(), d.min(axis=0).max())


@pytest.mark.parametrize("N", [1, 2])
def test_rotational_symmetry(N):
    doc = foliation_svg(HarmonicSpec(N), 5, samples=200)
    for cls in ("fam-sin", "fam-cos"):
        pts = point_cloud(doc, cls)
        pts = pts[np.abs(pts) < 1.5]
        rot = pts * np.exp(2j * math.pi / (N + 2))
        assert hausdorff(pts, rot) < 0.05
    assert len(ET.fromstring(doc).findall("svg:circle", NS)) == 1


def test_byte_determinism():
    assert foliation_svg(HarmonicSpec(1), 5) == foliation_svg(HarmonicSpec(1), 5)


def test_scatter_figure():
    path = np.linspace(-1 + 1j, 1 + 0.5j, 20)
    doc = scatter_svg(path, 0.2, 2.3, 1)
    assert len(paths(doc, "traj")) == 1 and len(paths(doc, "asym")) == 2
    assert re.search(r"index -1 umbilic", doc)
