"""Composite Hilbert space for two qubits coupled through a d-level interconnect.

Factor ordering is fixed globally as (R, Q1, IC, Q2) with the last index
varying fastest.  R is an optional reference qubit used for purified channel
runs; when absent its dimension is 1 so that the same embedding code serves
both dynamics-only and channel computations.

All Hamiltonian building blocks here are real matrices (the couplings are
real), so operators are stored as float64; states are complex128.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# factor slots
R, Q1, IC, Q2 = 0, 1, 2, 3


@dataclass(frozen=True)
class HilbertLayout:
    """Ordered factor dimensions (dim_R, 2, d, 2) of the composite space."""

    d: int
    with_reference: bool = False

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"interconnect dimension must be >= 2, got {self.d}")

    @property
    def factors(self) -> tuple[int, int, int, int]:
        return (2 if self.with_reference else 1, 2, self.d, 2)

    @property
    def dim(self) -> int:
        return math.prod(self.factors)

    def basis_index(self, r: int, q1: int, m: int, q2: int) -> int:
        """Flat index of the product basis state |r, q1, m, q2>."""
        dr, _, d, _ = self.factors
        if not (0 <= r < dr and 0 <= q1 < 2 and 0 <= m < d and 0 <= q2 < 2):
            raise ValueError(f"basis labels ({r},{q1},{m},{q2}) out of range for {self}")
        return ((r * 2 + q1) * d + m) * 2 + q2

    def unravel(self, n: int) -> tuple[int, int, int, int]:
        n, q2 = divmod(n, 2)
        n, m = divmod(n, self.d)
        r, q1 = divmod(n, 2)
        return r, q1, m, q2


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over a HilbertLayout's product basis."""

    layout: HilbertLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (self.layout.dim,):
            raise ValueError(
                f"amplitude vector has shape {self.amplitudes.shape}, "
                f"layout dimension is {self.layout.dim}"
            )

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def basis_state(layout: HilbertLayout, r: int = 0, q1: int = 0, m: int = 0,
                q2: int = 0) -> StateVector:
    amps = np.zeros(layout.dim, dtype=complex)
    amps[layout.basis_index(r, q1, m, q2)] = 1.0
    return StateVector(layout, amps)


def ladder_operator(d: int) -> np.ndarray:
    """Truncated annihilation operator: A[m, m+1] = sqrt(m+1), d x d."""
    if d < 2:
        raise ValueError(f"ladder operator needs dimension >= 2, got {d}")
    return np.diag(np.sqrt(np.arange(1.0, d)), k=1)


def sigma_minus() -> np.ndarray:
    return np.array([[0.0, 1.0], [0.0, 0.0]])


def embed(op: np.ndarray, slot: int, layout: HilbertLayout) -> np.ndarray:
    """Tensor-embed a local operator at the given factor slot."""
    factors = layout.factors
    if op.shape != (factors[slot], factors[slot]):
        raise ValueError(
            f"operator shape {op.shape} does not match factor {slot} "
            f"of dimension {factors[slot]}"
        )
    out = np.eye(1)
    for i, f in enumerate(factors):
        out = np.kron(out, op if i == slot else np.eye(f))
    return out


def excitation_numbers(layout: HilbertLayout) -> np.ndarray:
    """Diagonal of the excitation-number operator: m + q1 + q2 (R excluded)."""
    n = np.arange(layout.dim)
    diag = np.empty(layout.dim)
    for i in n:
        _, q1, m, q2 = layout.unravel(i)
        diag[i] = m + q1 + q2
    return diag


def number_operator(layout: HilbertLayout) -> np.ndarray:
    return np.diag(excitation_numbers(layout))


def parity_operator(layout: HilbertLayout) -> np.ndarray:
    """exp(i pi N): diagonal with entries +/-1."""
    return np.diag(np.where(excitation_numbers(layout) % 2 == 0, 1.0, -1.0))


def projector_n_leq_1(layout: HilbertLayout) -> np.ndarray:
    """Projector onto the low-energy sector m + q1 + q2 <= 1 (R unconstrained)."""
    return np.diag((excitation_numbers(layout) <= 1).astype(float))


def projector_target(layout: HilbertLayout) -> np.ndarray:
    """Projector onto the transfer target subspace: q1 = 0, m = 0, any q2 and r."""
    diag = np.zeros(layout.dim)
    for i in range(layout.dim):
        _, q1, m, _ = layout.unravel(i)
        if q1 == 0 and m == 0:
            diag[i] = 1.0
    return np.diag(diag)


def partial_trace(rho: np.ndarray, keep: set[int] | frozenset[int],
                  layout: HilbertLayout) -> np.ndarray:
    """Reduced density matrix over the kept factor slots, in slot order."""
    if not keep:
        raise ValueError("keep set must not be empty")
    factors = layout.factors
    if rho.shape != (layout.dim, layout.dim):
        raise ValueError(f"density matrix shape {rho.shape} inconsistent with layout")
    keep_sorted = sorted(keep)
    rho = rho.reshape(factors + factors)
    # trace out factors not kept, highest slot first so axis numbers stay valid
    traced = 0
    for slot in (3, 2, 1, 0):
        if slot not in keep_sorted:
            rho = np.trace(rho, axis1=slot, axis2=slot + 4 - traced)
            traced += 1
    dim_keep = math.prod(factors[s] for s in keep_sorted)
    return rho.reshape(dim_keep, dim_keep)
