"""Dormand-Prince 5(4) embedded pair with PI step-size control.

The state is a tuple of Python complex numbers; the error norm runs over
their real and imaginary parts, so a pair ``(xi, xidot)`` is integrated as
the equivalent 4-dimensional real system.  Plain complex scalars keep the
per-step overhead far below what small numpy arrays would cost.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence, Tuple

C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# fifth-order minus embedded fourth-order weights
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40

ORDER = 5
SAFETY = 0.9
ALPHA = 0.7 / ORDER
BETA = 0.4 / ORDER
MIN_FACTOR, MAX_FACTOR = 0.2, 5.0

State = Tuple[complex, ...]
Rhs = Callable[[float, State], State]


def _axpy(y: State, h: float, pairs) -> State:
    out = list(y)
    for c, k in pairs:
        for i, ki in enumerate(k):
            out[i] += h * c * ki
    return tuple(out)


def dopri_step(f: Rhs, t: float, y: State, h: float, k1: State):
    """One trial step. Returns ``(y_new, err_vec, k7)``; ``k7`` is FSAL for the next step."""
    k2 = f(t + C2 * h, _axpy(y, h, ((A21, k1),)))
    k3 = f(t + C3 * h, _axpy(y, h, ((A31, k1), (A32, k2))))
    k4 = f(t + C4 * h, _axpy(y, h, ((A41, k1), (A42, k2), (A43, k3))))
    k5 = f(t + C5 * h, _axpy(y, h, ((A51, k1), (A52, k2), (A53, k3), (A54, k4))))
    k6 = f(t + h, _axpy(y, h, ((A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5))))
    y_new = _axpy(y, h, ((B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)))
    k7 = f(t + h, y_new)
    err = _axpy(tuple(0j for _ in y), h, ((E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)))
    return y_new, err, k7


def error_norm(err: State, y: State, y_new: State, rtol: float, atol: float) -> float:
    """RMS of the scaled error over the real components."""
    acc = 0.0
    m = 0
    for e, a, b in zip(err, y, y_new):
        for ec, ac, bc in ((e.real, a.real, b.real), (e.imag, a.imag, b.imag)):
            sc = atol + rtol * max(abs(ac), abs(bc))
            acc += (ec / sc) ** 2
            m += 1
    return math.sqrt(acc / m)


def initial_step(f: Rhs, t: float, y: State, f0: State, rtol: float, atol: float) -> float:
    """Hairer-Norsett-Wanner starting step guess."""
    def norm(v: Sequence[complex]):
        s = 0.0
        for vi, yi in zip(v, y):
            for c, yc in ((vi.real, yi.real), (vi.imag, yi.imag)):
                s += (c / (atol + rtol * abs(yc))) ** 2
        return math.sqrt(s / (2 * len(y)))

    d0, d1 = norm(y), norm(f0)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = _axpy(y, h0, ((1.0, f0),))
    f1 = f(t + h0, y1)
    d2 = norm([a - b for a, b in zip(f1, f0)]) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / ORDER)
    return min(100 * h0, h1)


class PIController:
    """Step-size factor from the current and previous accepted error norms."""

    def __init__(self):
        self.prev = 1e-4

    def accepted(self, err: float) -> float:
        err = max(err, 1e-10)
        fac = SAFETY * err ** (-ALPHA) * self.prev ** BETA
        self.prev = err
        return min(MAX_FACTOR, max(MIN_FACTOR, fac))

    @staticmethod
    def rejected(err: float) -> float:
        return max(MIN_FACTOR, SAFETY * err ** (-1 / ORDER))
