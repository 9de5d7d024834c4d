"""Parameter sweeps over (protocol, d, g) grids with CSV emission.

Grid points are independent; they may run in a process pool, but rows are
always emitted in canonical grid order so serial and parallel runs produce
identical CSV bodies.  wall_time and n_steps are diagnostics and excluded
from determinism guarantees.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .channel import (channel_result_from_state, leakage_from_state,
                      purified_run)
from .dynamics import IntegrationError, IntegratorOptions
from .model import CTAP_WINDOW_HALFWIDTH, PulseSchedule, SystemConfig

CSV_HEADER = ("protocol,d,g,T,tau,q1,coherent_info,s_output,s_exchange,"
              "leak_pair,leak_target,norm_drift,n_steps,wall_time")


@dataclass(frozen=True)
class SweepSpec:
    protocols: tuple[str, ...]  # subset of ("qb", "ctap")
    g_grid: tuple[float, ...]
    d_list: tuple[int, ...]
    rwa: bool = False
    gT: float = 20.0
    tau_over_T: float = 0.7
    window_halfwidth_over_T: float = CTAP_WINDOW_HALFWIDTH
    eps1_offset: float = 0.0
    eps2_offset: float = 0.0
    opts: IntegratorOptions = field(default_factory=IntegratorOptions)
    jobs: int = 1

    def __post_init__(self):
        if not self.protocols or not self.g_grid or not self.d_list:
            raise ValueError("protocols, g_grid and d_list must be non-empty")
        bad = set(self.protocols) - {"qb", "ctap"}
        if bad:
            raise ValueError(f"unknown protocols: {sorted(bad)}")
        if any(g < 0 for g in self.g_grid):
            raise ValueError("all g must be >= 0")
        if any(d < 2 for d in self.d_list):
            raise ValueError("all d must be >= 2")

    def points(self) -> list[tuple[str, int, float]]:
        return [(p, d, g) for p in self.protocols for d in self.d_list
                for g in self.g_grid]


@dataclass
class ResultRow:
    protocol: str
    d: int
    g: float
    T: float = math.nan
    tau: float = math.nan
    q1: float = math.nan
    coherent_info: float = math.nan
    s_output: float = math.nan
    s_exchange: float = math.nan
    leak_pair: float = math.nan
    leak_target: float = math.nan
    norm_drift: float = math.nan
    n_steps: int = 0
    wall_time: float = math.nan
    error: str | None = None  # not serialized; NaN columns mark a failed row

    def csv_fields(self) -> list[str]:
        def f(x: float) -> str:
            return format(x, ".17g")

        return [self.protocol, str(self.d), f(self.g), f(self.T), f(self.tau),
                f(self.q1), f(self.coherent_info), f(self.s_output),
                f(self.s_exchange), f(self.leak_pair), f(self.leak_target),
                f(self.norm_drift), str(self.n_steps), f(self.wall_time)]


def make_schedule(spec: SweepSpec, protocol: str, g: float) -> PulseSchedule:
    if protocol == "qb":
        return PulseSchedule.qb(g)
    return PulseSchedule.ctap(g, gT=spec.gT, tau_over_T=spec.tau_over_T,
                              window_halfwidth_over_T=spec.window_halfwidth_over_T)


def evaluate_point(spec: SweepSpec, protocol: str, d: int, g: float) -> ResultRow:
    """One capacity + leakage evaluation from a single purified propagation."""
    row = ResultRow(protocol=protocol, d=d, g=g)
    start = time.perf_counter()
    try:
        config = SystemConfig.symmetric(d, g, rwa=spec.rwa,
                                        eps1_offset=spec.eps1_offset,
                                        eps2_offset=spec.eps2_offset)
        schedule = make_schedule(spec, protocol, g)
        row.T = schedule.T if protocol == "ctap" else schedule.duration
        row.tau = schedule.tau if protocol == "ctap" else 0.0
        run = purified_run(config, schedule, spec.opts)
        ch = channel_result_from_state(run.final_state, run.norm_drift)
        lk = leakage_from_state(run.final_state)
    except (IntegrationError, ValueError) as exc:
        row.error = str(exc)
        row.wall_time = time.perf_counter() - start
        return row
    row.q1 = ch.q1
    row.coherent_info = ch.coherent_info
    row.s_output = ch.s_output
    row.s_exchange = ch.s_exchange
    row.leak_pair = lk.leak_pair
    row.leak_target = lk.leak_target
    row.norm_drift = run.norm_drift
    row.n_steps = run.n_steps
    row.wall_time = time.perf_counter() - start
    return row


def _evaluate_star(args) -> ResultRow:
    return evaluate_point(*args)


def run_sweep(spec: SweepSpec) -> list[ResultRow]:
    """Evaluate every grid point; rows returned in canonical grid order."""
    tasks = [(spec, p, d, g) for (p, d, g) in spec.points()]
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            rows = list(pool.map(_evaluate_star, tasks))
    else:
        rows = [_evaluate_star(t) for t in tasks]
    return rows


def write_csv(rows: list[ResultRow], path: str) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for row in rows:
            writer.writerow(row.csv_fields())


def read_csv(path: str) -> list[ResultRow]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER.split(","):
            raise ValueError(f"unexpected CSV header in {path}")
        for rec in reader:
            rows.append(ResultRow(
                protocol=rec[0], d=int(rec[1]), g=float(rec[2]), T=float(rec[3]),
                tau=float(rec[4]), q1=float(rec[5]), coherent_info=float(rec[6]),
                s_output=float(rec[7]), s_exchange=float(rec[8]),
                leak_pair=float(rec[9]), leak_target=float(rec[10]),
                norm_drift=float(rec[11]), n_steps=int(rec[12]),
                wall_time=float(rec[13])))
    return rows
