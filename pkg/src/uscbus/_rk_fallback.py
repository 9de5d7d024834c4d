"""Pure-Python adaptive Dormand-Prince 5(4) kernel for i dpsi/dt = H(t) psi.

H(t) = H0 + f1(t) V1 + f2(t) V2 with real symmetric parts.  This is the
fallback twin of the compiled kernel in _rk_core.pyx: same tableau, same
step controller, so both backends take identical step sequences up to
floating-point noise.
"""

from __future__ import annotations

import math

import numpy as np

ENV_CONST = 0
ENV_GAUSSIAN = 1

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
       187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))

STATUS_OK = 0
STATUS_NAN = 1
STATUS_STEP_UNDERFLOW = 2


def _envelope(env_kind: int, p1: float, p2: float, t: float) -> tuple[float, float]:
    if env_kind == ENV_CONST:
        return p1, p2
    x1 = (t - p2) / p1
    x2 = (t + p2) / p1
    return math.exp(-x1 * x1), math.exp(-x2 * x2)


def rk45_propagate(h0, v1, v2, psi, t0, t1, env_kind, p1, p2,
                   rtol, atol, max_step):
    """Propagate psi from t0 to t1.  Returns (psi_final, n_accepted, status)."""
    y = np.asarray(psi, dtype=complex).copy()
    duration = t1 - t0
    if duration <= 0:
        return y, 0, STATUS_OK

    def deriv(t, state):
        f1, f2 = _envelope(env_kind, p1, p2, t)
        return -1j * (h0 @ state + f1 * (v1 @ state) + f2 * (v2 @ state))

    t = t0
    h = min(max_step, 1e-2 * duration)
    n_accepted = 0
    k = [None] * 7
    k[0] = deriv(t, y)
    while t < t1 - 1e-12 * duration:
        h = min(h, t1 - t)
        for i in range(1, 7):
            yi = y.copy()
            for j, a in enumerate(_A[i]):
                if a != 0.0:
                    yi += (h * a) * k[j]
            k[i] = deriv(t + _C[i] * h, yi)
        # stage 6 input is already the 5th-order solution (FSAL)
        y5 = y.copy()
        for j, b in enumerate(_B5):
            if b != 0.0:
                y5 += (h * b) * k[j]
        err_vec = np.zeros_like(y)
        for j, e in enumerate(_E):
            if e != 0.0:
                err_vec += (h * e) * k[j]
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
        err = math.sqrt(float(np.mean(np.abs(err_vec / scale) ** 2)))
        if not math.isfinite(err):
            return y, n_accepted, STATUS_NAN
        if err <= 1.0:
            t += h
            y = y5
            k[0] = k[6]
            n_accepted += 1
        factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h = min(h * factor, max_step)
        if h < 1e-14 * duration:
            return y, n_accepted, STATUS_STEP_UNDERFLOW
    return y, n_accepted, STATUS_OK
