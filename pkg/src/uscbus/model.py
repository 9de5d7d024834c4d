"""System Hamiltonian and pulse protocols.

The Hamiltonian splits as H(t) = H0 + f1(t) V1 + f2(t) V2 where H0 holds the
bare splittings and Vi the qubit-interconnect couplings (full Rabi-type or
rotating-wave approximated).  All three parts are real symmetric matrices,
which the propagation kernels exploit.

Units: omega_c = 1 sets the energy scale; couplings and splittings are in
units of omega_c, time in units of 1/omega_c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import IC, Q1, Q2, HilbertLayout, embed, ladder_operator, sigma_minus

CTAP_WINDOW_HALFWIDTH = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class SystemConfig:
    """Physical parameters of the two-qubit + d-level interconnect network."""

    d: int
    g1: float
    g2: float
    omega_c: float = 1.0
    eps1: float = 1.0
    eps2: float = 1.0
    rwa: bool = False

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")
        if self.omega_c <= 0:
            raise ValueError("omega_c must be positive")
        if self.g1 < 0 or self.g2 < 0:
            raise ValueError("couplings must be non-negative")

    @classmethod
    def symmetric(cls, d: int, g: float, rwa: bool = False,
                  eps1_offset: float = 0.0, eps2_offset: float = 0.0,
                  omega_c: float = 1.0) -> "SystemConfig":
        """Resonant configuration eps_i = omega_c (+ optional detuning offsets)."""
        return cls(d=d, g1=g, g2=g, omega_c=omega_c,
                   eps1=omega_c + eps1_offset, eps2=omega_c + eps2_offset, rwa=rwa)


@dataclass(frozen=True)
class PulseSchedule:
    """Coupling modulation f1(t), f2(t) for either protocol.

    QB: rectangular, f = (1,0) on [0, pi/(2g)) then (0,1) on [pi/(2g), pi/g].
    CTAP: delayed Gaussian pair f1 = exp(-((t-tau)/T)^2), f2 = exp(-((t+tau)/T)^2)
    on [-w*T, +w*T]; tau > 0 gives the counterintuitive ordering (f2 peaks first).
    """

    variant: str  # "qb" | "ctap"
    t_start: float
    t_end: float
    t_switch: float = 0.0  # QB segment boundary
    T: float = 0.0         # CTAP pulse width
    tau: float = 0.0       # CTAP half delay

    @classmethod
    def qb(cls, g: float) -> "PulseSchedule":
        if g <= 0:
            raise ValueError("QB schedule needs g > 0")
        half = math.pi / (2.0 * g)
        return cls(variant="qb", t_start=0.0, t_end=2.0 * half, t_switch=half)

    @classmethod
    def ctap(cls, g: float, gT: float = 20.0, tau_over_T: float = 0.7,
             window_halfwidth_over_T: float = CTAP_WINDOW_HALFWIDTH) -> "PulseSchedule":
        if g <= 0:
            raise ValueError("CTAP schedule needs g > 0")
        if tau_over_T <= 0:
            raise ValueError("CTAP half delay must be positive")
        T = gT / g
        w = window_halfwidth_over_T * T
        return cls(variant="ctap", t_start=-w, t_end=w, T=T, tau=tau_over_T * T)

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    def envelope(self, t: float) -> tuple[float, float]:
        if not (self.t_start <= t <= self.t_end):
            raise ValueError(f"t={t} outside schedule window "
                             f"[{self.t_start}, {self.t_end}]")
        if self.variant == "qb":
            return (1.0, 0.0) if t < self.t_switch else (0.0, 1.0)
        x1 = (t - self.tau) / self.T
        x2 = (t + self.tau) / self.T
        return math.exp(-x1 * x1), math.exp(-x2 * x2)

    def smooth_intervals(self) -> list[tuple[float, float, float, float]]:
        """Intervals (t0, t1, f1, f2) of constant envelope; for CTAP a single
        interval with f1 = f2 = nan marking the Gaussian pair."""
        if self.variant == "qb":
            return [(self.t_start, self.t_switch, 1.0, 0.0),
                    (self.t_switch, self.t_end, 0.0, 1.0)]
        return [(self.t_start, self.t_end, math.nan, math.nan)]


def hamiltonian_parts(config: SystemConfig, layout: HilbertLayout
                      ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(H0, V1, V2) with H(t) = H0 + f1(t) V1 + f2(t) V2; all real symmetric."""
    if layout.d != config.d:
        raise ValueError(f"layout d={layout.d} does not match config d={config.d}")
    a = embed(ladder_operator(config.d), IC, layout)
    sm1 = embed(sigma_minus(), Q1, layout)
    sm2 = embed(sigma_minus(), Q2, layout)
    h0 = (config.omega_c * a.T @ a
          + config.eps1 * sm1.T @ sm1
          + config.eps2 * sm2.T @ sm2)

    def coupling(g, sm):
        if config.rwa:
            return g * (a.T @ sm + a @ sm.T)
        return g * (a.T + a) @ (sm.T + sm)

    return h0, coupling(config.g1, sm1), coupling(config.g2, sm2)


def hamiltonian(config: SystemConfig, schedule: PulseSchedule, t: float,
                layout: HilbertLayout) -> np.ndarray:
    h0, v1, v2 = hamiltonian_parts(config, layout)
    f1, f2 = schedule.envelope(t)
    return h0 + f1 * v1 + f2 * v2
