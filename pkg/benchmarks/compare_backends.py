"""Benchmark the compiled RK kernel against the pure-Python fallback.

Usage: python benchmarks/compare_backends.py [--d D ...] [--g G]
"""

import argparse
import time

import numpy as np

from uscbus import _rk_fallback
from uscbus.hilbert import HilbertLayout, basis_state
from uscbus.model import PulseSchedule, SystemConfig, hamiltonian_parts

try:
    from uscbus import _rk_core
except ImportError:
    _rk_core = None


def bench(kernel, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        _, n_steps, status = kernel.rk45_propagate(*args)
        best = min(best, time.perf_counter() - start)
        assert status == 0
    return best, n_steps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, nargs="+", default=[2, 4, 8, 16])
    ap.add_argument("--g", type=float, default=0.5)
    ap.add_argument("--repeat", type=int, default=3)
    opts = ap.parse_args()

    print(f"{'d':>4} {'dim':>5} {'steps':>8} {'python':>10} {'compiled':>10} "
          f"{'speedup':>8}")
    for d in opts.d:
        layout = HilbertLayout(d, with_reference=True)
        config = SystemConfig.symmetric(d, opts.g)
        sched = PulseSchedule.ctap(opts.g)
        h0, v1, v2 = hamiltonian_parts(config, layout)
        psi = basis_state(layout, q1=1).amplitudes
        args = (h0, v1, v2, psi, sched.t_start, sched.t_end,
                _rk_fallback.ENV_GAUSSIAN, sched.T, sched.tau,
                1e-12, 1e-14, sched.T / 50.0)
        t_py, n_py = bench(_rk_fallback, args, 1)
        if _rk_core is None:
            print(f"{d:>4} {layout.dim:>5} {n_py:>8} {t_py:>9.3f}s "
                  f"{'n/a':>10} {'n/a':>8}")
            continue
        t_c, n_c = bench(_rk_core, args, opts.repeat)
        assert n_c == n_py
        print(f"{d:>4} {layout.dim:>5} {n_c:>8} {t_py:>9.3f}s {t_c:>9.3f}s "
              f"{t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
