import io
import math

import pytest
from hypothesis import given, settings, strategies as st

from minimal_congruence import GeodesicState, HarmonicSpec, harmonic_section, integrate
from minimal_congruence.io import (
    SWEEP_HEADER,
    TRAJECTORY_HEADER,
    CoefficientFileError,
    format_coefficients,
    parse_coefficients,
    read_coefficients,
    read_csv,
    write_sweep_csv,
    write_trajectory_csv,
)
from minimal_congruence.harmonics import ScatterResult


def test_parse_with_comments_and_gaps():
    text = "# lambda file\n0 1 0\n\n3 0.5 -0.25  # trailing\n"
    assert parse_coefficients(text) == [1, 0, 0, 0.5 - 0.25j]


@pytest.mark.parametrize(
    "text,line",
    [
        ("0 1\n", 1),
        ("0 1 0\n0 2 0\n", 2),
        ("0 1 0\n2 x 0\n", 2),
        ("-1 1 0\n", 1),
        ("0 nan 0\n", 1),
        ("a 1 0\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(CoefficientFileError) as exc:
        parse_coefficients(text, "f.coef")
    assert exc.value.lineno == line
    assert f"f.coef:{line}:" in str(exc.value)


def test_empty_file():
    with pytest.raises(CoefficientFileError):
        parse_coefficients("# nothing\n")


def test_missing_file(tmp_path):
    with pytest.raises(CoefficientFileError):
        read_coefficients(tmp_path / "absent.coef")


coeffs = st.lists(
    st.builds(complex, st.floats(allow_nan=False, allow_infinity=False), st.floats(allow_nan=False, allow_infinity=False)),
    min_size=1,
    max_size=8,
)


@settings(max_examples=50)
@given(coeffs)
def test_coefficient_round_trip(c):
    back = parse_coefficients(format_coefficients(c))
    # trailing zeros are not written
    while len(c) > 1 and c[-1] == 0:
        c = c[:-1]
    assert back == c or (all(v == 0 for v in c) and back == [0])


def test_trajectory_csv_round_trip():
    tr = integrate(harmonic_section(HarmonicSpec(1)), GeodesicState(1, 0.3 + 1j), 2.0)
    buf = io.StringIO()
    write_trajectory_csv(tr, buf)
    buf.seek(0)
    rows = read_csv(buf, TRAJECTORY_HEADER)
    assert len(rows) == len(tr.samples)
    assert [r["t"] for r in rows] == list(tr.t)
    assert [complex(r["re_xi"], r["im_xi"]) for r in rows] == list(tr.xi)


def test_sweep_csv_summary_row():
    st0 = GeodesicState(1 + 1j, 0.5)
    res = [ScatterResult(0.1, 2.2, 2.1, 2.0, 1.0, 2.0), ScatterResult(0.1, 2.0, 1.9, 2.0, 1.0, 2.0)]
    buf = io.StringIO()
    worst = write_sweep_csv(1, zip([st0, st0], res), buf)
    assert worst == pytest.approx(0.1)
    buf.seek(0)
    rows = read_csv(buf, SWEEP_HEADER)
    assert len(rows) == 3
    last = rows[-1]
    assert last["N"] == 1 and last["abs_error"] == worst
    assert all(math.isnan(last[k]) for k in SWEEP_HEADER[1:-1])


def test_wrong_header():
    with pytest.raises(ValueError):
        read_csv(io.StringIO("a,b\n1,2\n"), TRAJECTORY_HEADER)
