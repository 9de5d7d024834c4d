"""The qubit-to-qubit map induced by a transfer protocol and its diagnostics.

Qubit 1 carries the input, the interconnect and qubit 2 start in their ground
states; the channel output is the reduced state of qubit 2 after the
protocol.  Capacity runs propagate a purification against an idle reference
qubit: coherent information = S(rho_Q2) - S(rho_{R,Q2}), and the single-letter
capacity is its positive part at the unpolarized input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

import math

from .dynamics import IntegratorOptions, PropagationResult, propagate
from .hilbert import (Q2, R, HilbertLayout, StateVector, partial_trace,
                      projector_n_leq_1, projector_target)
from .model import PulseSchedule, SystemConfig


@dataclass(frozen=True)
class ChannelResult:
    q1: float
    coherent_info: float
    s_output: float
    s_exchange: float
    norm_drift: float


@dataclass(frozen=True)
class LeakageResult:
    leak_pair: float    # probability outside the N <= 1 sector
    leak_target: float  # probability outside {q1 = 0, m = 0}


def von_neumann_entropy(rho: np.ndarray, clamp: float = 1e-12) -> float:
    """-Tr[rho log2 rho] in bits; eigenvalues below `clamp` contribute zero."""
    herm_defect = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_defect > 1e-10:
        raise ValueError(f"matrix is not Hermitian (defect {herm_defect:.3e})")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -1e-8:
        raise ValueError(f"negative eigenvalue {evals.min():.3e}: not a density matrix")
    evals = evals[evals > clamp]
    return float(-np.sum(evals * np.log2(evals)))


def purified_input_state(layout: HilbertLayout) -> StateVector:
    """(|0>_R |0>_Q1 + |1>_R |1>_Q1)/sqrt(2), interconnect and Q2 in vacuum."""
    if not layout.with_reference:
        raise ValueError("purified input needs a layout with the reference qubit")
    amps = np.zeros(layout.dim, dtype=complex)
    amps[layout.basis_index(0, 0, 0, 0)] = 1.0 / math.sqrt(2.0)
    amps[layout.basis_index(1, 1, 0, 0)] = 1.0 / math.sqrt(2.0)
    return StateVector(layout, amps)


def purified_run(config: SystemConfig, schedule: PulseSchedule,
                 opts: IntegratorOptions | None = None) -> PropagationResult:
    """Propagate the purified unpolarized input through the protocol."""
    layout = HilbertLayout(config.d, with_reference=True)
    return propagate(purified_input_state(layout), config, schedule, opts)


def channel_result_from_state(final: StateVector, norm_drift: float) -> ChannelResult:
    rho = final.density_matrix()
    rho_rq2 = partial_trace(rho, {R, Q2}, final.layout)
    rho_q2 = partial_trace(rho, {Q2}, final.layout)
    s_out = von_neumann_entropy(rho_q2)
    s_exc = von_neumann_entropy(rho_rq2)
    ic = s_out - s_exc
    return ChannelResult(q1=max(0.0, ic), coherent_info=ic,
                         s_output=s_out, s_exchange=s_exc, norm_drift=norm_drift)


def leakage_from_state(final: StateVector) -> LeakageResult:
    layout = final.layout
    p_pair = np.diag(projector_n_leq_1(layout))
    p_target = np.diag(projector_target(layout))
    probs = np.abs(final.amplitudes) ** 2
    norm = float(probs.sum())
    return LeakageResult(
        leak_pair=max(0.0, 1.0 - float(probs @ p_pair) / norm),
        leak_target=max(0.0, 1.0 - float(probs @ p_target) / norm),
    )


def coherent_information_unpolarized(config: SystemConfig, schedule: PulseSchedule,
                                     opts: IntegratorOptions | None = None
                                     ) -> ChannelResult:
    run = purified_run(config, schedule, opts)
    return channel_result_from_state(run.final_state, run.norm_drift)


def leakage(config: SystemConfig, schedule: PulseSchedule,
            opts: IntegratorOptions | None = None) -> LeakageResult:
    run = purified_run(config, schedule, opts)
    return leakage_from_state(run.final_state)


def _input_embedded(layout: HilbertLayout, c0: complex, c1: complex) -> StateVector:
    amps = np.zeros(layout.dim, dtype=complex)
    amps[layout.basis_index(0, 0, 0, 0)] = c0
    amps[layout.basis_index(0, 1, 0, 0)] = c1
    return StateVector(layout, amps)


def apply_channel(config: SystemConfig, schedule: PulseSchedule,
                  opts: IntegratorOptions | None,
                  rho_in: np.ndarray) -> np.ndarray:
    """Output qubit-2 density matrix for an arbitrary qubit-1 input."""
    if rho_in.shape != (2, 2):
        raise ValueError("input must be a 2x2 density matrix")
    if abs(np.trace(rho_in) - 1.0) > 1e-10:
        raise ValueError("input density matrix must have unit trace")
    layout = HilbertLayout(config.d, with_reference=False)
    evals, evecs = np.linalg.eigh(rho_in)
    rho_out = np.zeros((2, 2), dtype=complex)
    for p, vec in zip(evals, evecs.T):
        if p < 1e-14:
            continue
        psi0 = _input_embedded(layout, vec[0], vec[1])
        run = propagate(psi0, config, schedule, opts)
        rho_full = run.final_state.density_matrix()
        rho_out += p * partial_trace(rho_full, {Q2}, layout)
    return rho_out


def choi_matrix(config: SystemConfig, schedule: PulseSchedule,
                opts: IntegratorOptions | None = None) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) E(|i><j|), 4x4 in the (input, output) basis."""
    layout = HilbertLayout(config.d, with_reference=False)
    finals = []
    for i in (0, 1):
        psi0 = _input_embedded(layout, 1.0 if i == 0 else 0.0,
                               1.0 if i == 1 else 0.0)
        finals.append(propagate(psi0, config, schedule, opts).final_state.amplitudes)
    d, dim = layout.d, layout.dim
    choi = np.zeros((4, 4), dtype=complex)
    for i in (0, 1):
        psi_i = finals[i].reshape(2, d, 2)
        for j in (0, 1):
            psi_j = finals[j].reshape(2, d, 2)
            block = np.einsum("qma,qmb->ab", psi_i, psi_j.conj())
            choi[2 * i:2 * i + 2, 2 * j:2 * j + 2] = block
    return choi
