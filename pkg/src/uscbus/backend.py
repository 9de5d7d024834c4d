"""Propagation kernel selection: compiled extension if available, else numpy.

Set USCBUS_BACKEND=python or USCBUS_BACKEND=compiled to force a choice;
forcing `compiled` raises if the extension failed to build.
"""

from __future__ import annotations

import os

from . import _rk_fallback

_requested = os.environ.get("USCBUS_BACKEND", "auto").lower()

if _requested not in ("auto", "python", "compiled"):
    raise ValueError(f"USCBUS_BACKEND must be auto|python|compiled, got {_requested!r}")

if _requested == "python":
    _kernel = _rk_fallback
    BACKEND = "python"
else:
    try:
        from . import _rk_core as _kernel  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "USCBUS_BACKEND=compiled but the _rk_core extension is not built; "
                "run `pip install -e . --no-build-isolation`"
            )
        _kernel = _rk_fallback
        BACKEND = "python"

ENV_CONST = _rk_fallback.ENV_CONST
ENV_GAUSSIAN = _rk_fallback.ENV_GAUSSIAN
STATUS_OK = _rk_fallback.STATUS_OK
STATUS_NAN = _rk_fallback.STATUS_NAN
STATUS_STEP_UNDERFLOW = _rk_fallback.STATUS_STEP_UNDERFLOW


def rk45_propagate(h0, v1, v2, psi, t0, t1, env_kind, p1, p2, rtol, atol, max_step):
    return _kernel.rk45_propagate(h0, v1, v2, psi, t0, t1, env_kind, p1, p2,
                                  rtol, atol, max_step)
