import math

import numpy as np
import pytest

from uscbus.dynamics import (IntegrationError, IntegratorOptions,
                             propagate, propagate_unitary)
from uscbus.hilbert import HilbertLayout, StateVector, basis_state, parity_operator
from uscbus.model import PulseSchedule, SystemConfig, hamiltonian_parts


def test_qb_rwa_first_segment_swaps_into_ic():
    g = 0.3
    layout = HilbertLayout(2)
    config = SystemConfig.symmetric(2, g, rwa=True)
    # stop the protocol at the segment boundary: a single half-period swap
    half = math.pi / (2 * g)
    sched = PulseSchedule(variant="qb", t_start=0.0, t_end=half, t_switch=half)
    res = propagate(basis_state(layout, q1=1), config, sched)
    pops = np.abs(res.final_state.amplitudes) ** 2
    assert pops[layout.basis_index(0, 0, 1, 0)] == pytest.approx(1.0, abs=1e-10)


def test_qb_rwa_full_protocol_transfers():
    g = 0.3
    layout = HilbertLayout(2)
    config = SystemConfig.symmetric(2, g, rwa=True)
    res = propagate(basis_state(layout, q1=1), config, PulseSchedule.qb(g))
    pops = np.abs(res.final_state.amplitudes) ** 2
    assert pops[layout.basis_index(0, 0, 0, 1)] == pytest.approx(1.0, abs=1e-10)
    assert res.n_steps == 2  # two exact segments


def test_free_evolution_phases():
    layout = HilbertLayout(3)
    config = SystemConfig(d=3, g1=0.0, g2=0.0, eps1=1.2, eps2=0.8)
    sched = PulseSchedule.qb(0.5)
    psi0 = basis_state(layout, q1=1, m=2)
    res = propagate(psi0, config, sched)
    energy = 1.0 * 2 + 1.2  # omega_c*m + eps1*q1
    expect = psi0.amplitudes * np.exp(-1j * energy * sched.duration)
    np.testing.assert_allclose(res.final_state.amplitudes, expect, atol=1e-12)


def _rk4_fixed_step(config, schedule, psi, n_steps):
    """Independent fixed-step classical RK4 oracle."""
    layout = HilbertLayout(config.d)
    h0, v1, v2 = hamiltonian_parts(config, layout)

    def f(t, y):
        f1, f2 = schedule.envelope(min(max(t, schedule.t_start), schedule.t_end))
        return -1j * ((h0 + f1 * v1 + f2 * v2) @ y)

    h = schedule.duration / n_steps
    t = schedule.t_start
    y = psi.copy()
    for _ in range(n_steps):
        k1 = f(t, y)
        k2 = f(t + h / 2, y + h / 2 * k1)
        k3 = f(t + h / 2, y + h / 2 * k2)
        k4 = f(t + h, y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return y


def test_ctap_rwa_adiabatic_transfer_with_rk4_crosscheck():
    g = 0.5  # gT = 20
    layout = HilbertLayout(2)
    config = SystemConfig.symmetric(2, g, rwa=True)
    sched = PulseSchedule.ctap(g)
    res = propagate(basis_state(layout, q1=1), config, sched, n_samples=80)
    pops = np.abs(res.final_state.amplitudes) ** 2
    assert pops[layout.basis_index(0, 0, 0, 1)] > 0.999
    # dark-state transport: the interconnect excited level stays nearly empty
    i_ic = layout.basis_index(0, 0, 1, 0)
    max_ic = max(abs(sv.amplitudes[i_ic]) ** 2 for _, sv in res.trajectory)
    assert max_ic < 0.02
    oracle = _rk4_fixed_step(config, sched, basis_state(layout, q1=1).amplitudes,
                             40000)
    assert np.abs(res.final_state.amplitudes - oracle).max() < 1e-8


def test_qb_exact_matches_adaptive():
    g = 0.45
    layout = HilbertLayout(3)
    config = SystemConfig.symmetric(3, g)
    sched = PulseSchedule.qb(g)
    psi0 = basis_state(layout, q1=1)
    exact = propagate(psi0, config, sched, IntegratorOptions(method="piecewise-exact"))
    adaptive = propagate(psi0, config, sched, IntegratorOptions(method="adaptive"))
    assert np.abs(exact.final_state.amplitudes
                  - adaptive.final_state.amplitudes).max() < 1e-7


def test_norm_drift_reported_and_small():
    g = 0.4
    config = SystemConfig.symmetric(4, g)
    res = propagate(basis_state(HilbertLayout(4), q1=1), config,
                    PulseSchedule.ctap(g))
    assert res.norm_drift < 1e-8


def test_rwa_conserves_excitation_number_along_run():
    g = 0.35
    layout = HilbertLayout(3)
    config = SystemConfig.symmetric(3, g, rwa=True)
    res = propagate(basis_state(layout, q1=1), config, PulseSchedule.ctap(g),
                    n_samples=40)
    from uscbus.hilbert import excitation_numbers
    n_diag = excitation_numbers(layout)
    for _, sv in res.trajectory:
        n_exp = float((np.abs(sv.amplitudes) ** 2) @ n_diag)
        assert abs(n_exp - 1.0) < 1e-8


def test_full_model_conserves_parity_along_run():
    g = 0.5
    layout = HilbertLayout(4)
    config = SystemConfig.symmetric(4, g)
    res = propagate(basis_state(layout, q1=1), config, PulseSchedule.ctap(g),
                    n_samples=40)
    pi_diag = np.diag(parity_operator(layout))
    for _, sv in res.trajectory:
        pi_exp = float((np.abs(sv.amplitudes) ** 2) @ pi_diag)
        assert abs(pi_exp + 1.0) < 1e-7  # odd initial state


def test_tolerance_halving_convergence():
    g = 0.4
    config = SystemConfig.symmetric(2, g)
    psi0 = basis_state(HilbertLayout(2), q1=1)
    sched = PulseSchedule.ctap(g)
    ref = propagate(psi0, config, sched,
                    IntegratorOptions(rtol=5e-13, atol=5e-15))
    got = propagate(psi0, config, sched)
    assert np.abs(ref.final_state.amplitudes
                  - got.final_state.amplitudes).max() < 1e-8


def test_unnormalized_input_rejected():
    layout = HilbertLayout(2)
    bad = StateVector(layout, np.ones(layout.dim, dtype=complex))
    with pytest.raises(ValueError):
        propagate(bad, SystemConfig.symmetric(2, 0.3), PulseSchedule.qb(0.3))


def test_norm_tolerance_enforced():
    g = 0.3
    config = SystemConfig.symmetric(2, g)
    with pytest.raises(IntegrationError):
        propagate(basis_state(HilbertLayout(2), q1=1), config,
                  PulseSchedule.ctap(g),
                  IntegratorOptions(rtol=1e-6, atol=1e-8, norm_tolerance=1e-13))


def test_unitary_free_evolution_diagonal():
    layout = HilbertLayout(2)
    config = SystemConfig(d=2, g1=0.0, g2=0.0)
    sched = PulseSchedule.qb(0.5)
    u = propagate_unitary(config, sched, None, layout)
    energies = [m + q1 + q2 for (_, q1, m, q2) in map(layout.unravel,
                                                      range(layout.dim))]
    expect = np.diag(np.exp(-1j * np.array(energies) * sched.duration))
    np.testing.assert_allclose(u, expect, atol=1e-12)


def test_unitary_qb_rwa_n1_sector_swap_chain():
    g = 0.25
    layout = HilbertLayout(2)
    config = SystemConfig.symmetric(2, g, rwa=True)
    u = propagate_unitary(config, PulseSchedule.qb(g), None, layout)
    i100 = layout.basis_index(0, 1, 0, 0)
    i001 = layout.basis_index(0, 0, 0, 1)
    assert abs(u[i001, i100]) == pytest.approx(1.0, abs=1e-10)


def test_unitary_is_unitary_full_ctap():
    config = SystemConfig.symmetric(6, 0.6)
    u = propagate_unitary(config, PulseSchedule.ctap(0.6), None, HilbertLayout(6))
    defect = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    assert defect < 1e-7


def test_unitary_dimension_guard():
    layout = HilbertLayout(200)
    with pytest.raises(ValueError):
        propagate_unitary(SystemConfig.symmetric(200, 0.1),
                          PulseSchedule.qb(0.1), None, layout)
