"""Command line interface: capacity, leakage, sweep and verify subcommands.

Exit codes: 0 success, 1 usage error, 2 numeric or verification failure.
Flags may also be supplied through --config FILE holding `key = value` lines
(keys match the long flag names with dashes replaced by underscores);
explicit flags override file values.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import backend
from .channel import choi_matrix, von_neumann_entropy
from .dynamics import (IntegrationError, IntegratorOptions, propagate,
                       propagate_unitary)
from .hilbert import HilbertLayout, basis_state, number_operator, parity_operator
from .model import PulseSchedule, SystemConfig, hamiltonian
from .sweep import (CSV_HEADER, ResultRow, SweepSpec, evaluate_point,
                    run_sweep, write_csv)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_config_file(path: str) -> dict[str, str]:
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _add_point_flags(p: _Parser) -> None:
    p.add_argument("--protocol", choices=["qb", "ctap"], required=True)
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--rwa", action="store_true")
    p.add_argument("--gT", type=float, default=20.0)
    p.add_argument("--tau-over-T", type=float, default=0.7)
    p.add_argument("--eps1-offset", type=float, default=0.0)
    p.add_argument("--eps2-offset", type=float, default=0.0)
    _add_integrator_flags(p)


_DEFAULT_OPTS = IntegratorOptions()


def _add_integrator_flags(p: _Parser) -> None:
    p.add_argument("--rtol", type=float, default=_DEFAULT_OPTS.rtol)
    p.add_argument("--atol", type=float, default=_DEFAULT_OPTS.atol)
    p.add_argument("--max-step", type=float, default=None)


def _opts(args) -> IntegratorOptions:
    return IntegratorOptions(rtol=args.rtol, atol=args.atol, max_step=args.max_step)


def _point_spec(args) -> SweepSpec:
    return SweepSpec(protocols=(args.protocol,), g_grid=(args.g,),
                     d_list=(args.d,), rwa=args.rwa, gT=args.gT,
                     tau_over_T=args.tau_over_T,
                     eps1_offset=args.eps1_offset, eps2_offset=args.eps2_offset,
                     opts=_opts(args))


def _print_row(row: ResultRow, fields: list[str]) -> None:
    for name in fields:
        print(f"{name:14s} {getattr(row, name)}")
    print()
    print(CSV_HEADER)
    print(",".join(row.csv_fields()))


def cmd_capacity(args) -> int:
    spec = _point_spec(args)
    row = evaluate_point(spec, args.protocol, args.d, args.g)
    if row.error is not None:
        print(f"error: {row.error}", file=sys.stderr)
        return EXIT_NUMERIC
    _print_row(row, ["protocol", "d", "g", "q1", "coherent_info", "s_output",
                     "s_exchange", "norm_drift"])
    return EXIT_OK


def cmd_leakage(args) -> int:
    spec = _point_spec(args)
    row = evaluate_point(spec, args.protocol, args.d, args.g)
    if row.error is not None:
        print(f"error: {row.error}", file=sys.stderr)
        return EXIT_NUMERIC
    _print_row(row, ["protocol", "d", "g", "leak_pair", "leak_target",
                     "norm_drift"])
    return EXIT_OK


def cmd_sweep(args) -> int:
    protocols = ("qb", "ctap") if args.protocol == "both" else (args.protocol,)
    spec = SweepSpec(
        protocols=protocols, g_grid=tuple(args.g_grid), d_list=tuple(args.d_list),
        rwa=args.rwa, gT=args.gT, tau_over_T=args.tau_over_T,
        eps1_offset=args.eps1_offset, eps2_offset=args.eps2_offset,
        opts=_opts(args), jobs=args.jobs)
    rows = run_sweep(spec)
    write_csv(rows, args.output)
    failed = [r for r in rows if r.error is not None]
    print(f"{len(rows)} grid points -> {args.output} "
          f"({len(failed)} failed, backend: {backend.BACKEND})")
    for r in failed:
        print(f"  failed: {r.protocol} d={r.d} g={r.g}: {r.error}", file=sys.stderr)
    return EXIT_NUMERIC if failed else EXIT_OK


def _check(name: str, fn) -> bool:
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # verification must report, not crash
        ok, detail = False, f"exception: {exc}"
    elapsed = time.perf_counter() - start
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name} ({elapsed:.2f} s){': ' + detail if detail else ''}")
    return ok


def _suite_symmetry(args) -> list[tuple[str, object]]:
    rng = np.random.default_rng(7)

    def commutators():
        worst_full, worst_rwa = 0.0, 0.0
        for _ in range(8):
            d = int(rng.integers(2, 7))
            g = float(rng.uniform(0.05, 1.0))
            layout = HilbertLayout(d)
            sched = PulseSchedule.ctap(g)
            t = float(rng.uniform(sched.t_start, sched.t_end))
            n_op = number_operator(layout)
            pi_op = parity_operator(layout)
            h_full = hamiltonian(SystemConfig.symmetric(d, g), sched, t, layout)
            h_rwa = hamiltonian(SystemConfig.symmetric(d, g, rwa=True), sched, t, layout)
            worst_full = max(worst_full, np.abs(h_full @ pi_op - pi_op @ h_full).max())
            worst_rwa = max(worst_rwa, np.abs(h_rwa @ n_op - n_op @ h_rwa).max())
        ok = worst_full < 1e-12 and worst_rwa < 1e-12
        return ok, f"max |[H,Pi]|={worst_full:.2e}, max |[H,N]|={worst_rwa:.2e}"

    def parity_conservation():
        d, g = 4, 0.5
        layout = HilbertLayout(d)
        config = SystemConfig.symmetric(d, g)
        sched = PulseSchedule.ctap(g)
        pi_diag = np.diag(parity_operator(layout))
        run = propagate(basis_state(layout, q1=1), config, sched, n_samples=60)
        # initial state has one excitation: odd parity, <Pi> = -1 throughout
        drifts = [abs(float((np.abs(sv.amplitudes) ** 2) @ pi_diag) + 1.0)
                  for _, sv in run.trajectory]
        worst = max(drifts)
        return worst < 1e-7, f"max |<Pi> - 1| = {worst:.2e}"

    return [("hamiltonian commutators (full vs Pi, RWA vs N)", commutators),
            ("parity conservation along full-model CTAP", parity_conservation)]


def _suite_cptp(args) -> list[tuple[str, object]]:
    d = getattr(args, "d", None) or 3
    g = getattr(args, "g", None) or 0.5

    def make(protocol):
        def check():
            config = SystemConfig.symmetric(d, g)
            sched = (PulseSchedule.qb(g) if protocol == "qb"
                     else PulseSchedule.ctap(g))
            choi = choi_matrix(config, sched)
            min_eig = float(np.linalg.eigvalsh(choi).min())
            # partial trace over the output factor must be the identity
            tp = np.array([[np.trace(choi[2 * i:2 * i + 2, 2 * j:2 * j + 2])
                            for j in (0, 1)] for i in (0, 1)])
            tp_defect = float(np.abs(tp - np.eye(2)).max())
            ok = min_eig > -1e-8 and tp_defect < 1e-8
            return ok, f"min Choi eig {min_eig:.2e}, TP defect {tp_defect:.2e}"
        return check

    return [(f"Choi PSD + trace preservation ({p}, d={d}, g={g})", make(p))
            for p in ("qb", "ctap")]


def _suite_entropy(args) -> list[tuple[str, object]]:
    def checks():
        pure = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        mixed = 0.5 * np.eye(2, dtype=complex)
        biased = np.diag([0.25, 0.75]).astype(complex)
        e1 = von_neumann_entropy(pure)
        e2 = von_neumann_entropy(mixed)
        e3 = von_neumann_entropy(biased)
        expect3 = -(0.25 * np.log2(0.25) + 0.75 * np.log2(0.75))
        ok = abs(e1) < 1e-12 and abs(e2 - 1.0) < 1e-12 and abs(e3 - expect3) < 1e-12
        return ok, f"S(pure)={e1:.1e}, S(I/2)={e2}, S(diag)={e3:.7f}"

    return [("von Neumann entropy identities", checks)]


def _suite_numerics(args) -> list[tuple[str, object]]:
    d, g = 3, 0.4
    config = SystemConfig.symmetric(d, g)
    layout = HilbertLayout(d)

    def qb_exact_vs_adaptive():
        sched = PulseSchedule.qb(g)
        psi0 = basis_state(layout, q1=1)
        exact = propagate(psi0, config, sched,
                          IntegratorOptions(method="piecewise-exact"))
        adaptive = propagate(psi0, config, sched,
                             IntegratorOptions(method="adaptive"))
        diff = float(np.abs(exact.final_state.amplitudes
                            - adaptive.final_state.amplitudes).max())
        drift = max(exact.norm_drift, adaptive.norm_drift)
        return diff < 1e-7 and drift < 1e-8, f"max diff {diff:.2e}, drift {drift:.2e}"

    def tolerance_halving():
        sched = PulseSchedule.ctap(g)
        psi0 = basis_state(layout, q1=1)
        loose = propagate(psi0, config, sched,
                          IntegratorOptions(rtol=2e-10, atol=2e-12))
        tight = propagate(psi0, config, sched,
                          IntegratorOptions(rtol=1e-10, atol=1e-12))
        diff = float(np.abs(loose.final_state.amplitudes
                            - tight.final_state.amplitudes).max())
        return diff < 1e-7, f"loose-vs-tight max diff {diff:.2e}"

    def unitarity():
        sched = PulseSchedule.ctap(0.6)
        cfg = SystemConfig.symmetric(6, 0.6)
        u = propagate_unitary(cfg, sched, None, HilbertLayout(6))
        defect = float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())
        return defect < 1e-7, f"|U+U - 1|_max = {defect:.2e}"

    return [("QB piecewise-exact vs adaptive agreement", qb_exact_vs_adaptive),
            ("tolerance-halving convergence (CTAP)", tolerance_halving),
            ("propagated unitary is unitary (full, d=6, g=0.6)", unitarity)]


SUITES = {
    "symmetry": _suite_symmetry,
    "cptp": _suite_cptp,
    "entropy": _suite_entropy,
    "numerics": _suite_numerics,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    all_ok = True
    for name in names:
        for check_name, fn in SUITES[name](args):
            all_ok &= _check(f"{name}: {check_name}", fn)
    return EXIT_OK if all_ok else EXIT_NUMERIC


def build_parser() -> _Parser:
    parser = _Parser(prog="uscbus",
                     description="Quantum state transfer through a d-level "
                                 "interconnect: capacity and leakage diagnostics")
    parser.add_argument("--config", help="key=value file supplying flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="single-point capacity evaluation")
    _add_point_flags(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("leakage", help="single-point leakage evaluation")
    _add_point_flags(p)
    p.set_defaults(func=cmd_leakage)

    p = sub.add_parser("sweep", help="grid sweep emitting CSV")
    p.add_argument("--protocol", choices=["qb", "ctap", "both"], required=True)
    p.add_argument("--g-grid", type=float, nargs="+", required=True)
    p.add_argument("--d-list", type=int, nargs="+", required=True)
    p.add_argument("--rwa", action="store_true")
    p.add_argument("--gT", type=float, default=20.0)
    p.add_argument("--tau-over-T", type=float, default=0.7)
    p.add_argument("--eps1-offset", type=float, default=0.0)
    p.add_argument("--eps2-offset", type=float, default=0.0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", "-o", required=True)
    _add_integrator_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--g", type=float, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    # pre-scan for --config so file values can seed parser defaults
    pre = _Parser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            file_values = _load_config_file(known.config)
        except (OSError, ValueError) as exc:
            print(f"uscbus: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        for action in parser._subparsers._group_actions:  # noqa: SLF001
            for sp in action.choices.values():
                for sub_action in sp._actions:  # noqa: SLF001
                    if sub_action.dest in file_values:
                        sub_action.default = _coerce(sp, sub_action.dest,
                                                     file_values[sub_action.dest])
                        sub_action.required = False
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except IntegrationError as exc:
        print(f"uscbus: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def _coerce(subparser, key: str, value: str):
    for action in subparser._actions:  # noqa: SLF001
        if action.dest == key:
            if isinstance(action, argparse._StoreTrueAction):  # noqa: SLF001
                return value.lower() in ("1", "true", "yes")
            if action.nargs in ("+", "*"):
                return [action.type(v) for v in value.split()]
            if action.type is not None:
                return action.type(value)
            return value
    return value


if __name__ == "__main__":
    sys.exit(main())
