import math

import numpy as np
import pytest

from uscbus.hilbert import HilbertLayout, number_operator, parity_operator
from uscbus.model import PulseSchedule, SystemConfig, hamiltonian, hamiltonian_parts


def test_config_validation():
    with pytest.raises(ValueError):
        SystemConfig(d=1, g1=0.1, g2=0.1)
    with pytest.raises(ValueError):
        SystemConfig(d=2, g1=-0.1, g2=0.1)
    with pytest.raises(ValueError):
        SystemConfig(d=2, g1=0.1, g2=0.1, omega_c=0.0)


def test_ctap_envelope_peak_and_center():
    s = PulseSchedule.ctap(0.5)  # T = 40, tau = 28
    f1, _ = s.envelope(s.tau)
    assert f1 == 1.0
    f1, f2 = s.envelope(0.0)
    assert f1 == f2 == pytest.approx(math.exp(-0.49), abs=1e-12)
    assert f1 == pytest.approx(0.612626, abs=1e-6)


def test_ctap_counterintuitive_ordering():
    s = PulseSchedule.ctap(0.5)
    f1, f2 = s.envelope(s.t_start)
    assert f2 > f1  # receiver-side coupling leads


def test_ctap_mirror_symmetry():
    s = PulseSchedule.ctap(0.3)
    for t in np.linspace(0.0, s.t_end, 17):
        f1, f2 = s.envelope(t)
        f1m, f2m = s.envelope(-t)
        assert f1 == pytest.approx(f2m, abs=1e-15)
        assert f2 == pytest.approx(f1m, abs=1e-15)


def test_ctap_default_window():
    g = 0.25
    s = PulseSchedule.ctap(g)
    assert s.T == pytest.approx(20.0 / g)
    assert s.tau == pytest.approx(0.7 * s.T)
    assert s.t_start == pytest.approx(-2.0 * math.sqrt(2.0) * s.T)
    assert s.t_end == -s.t_start


def test_qb_segments():
    g = 0.4
    s = PulseSchedule.qb(g)
    half = math.pi / (2 * g)
    assert s.duration == pytest.approx(math.pi / g)
    assert s.envelope(half - 1e-9) == (1.0, 0.0)
    assert s.envelope(half + 1e-9) == (0.0, 1.0)


def test_envelope_outside_window_rejected():
    s = PulseSchedule.qb(0.4)
    with pytest.raises(ValueError):
        s.envelope(s.t_end + 1.0)


def test_hamiltonian_diagonal_when_uncoupled():
    layout = HilbertLayout(3)
    config = SystemConfig(d=3, g1=0.0, g2=0.0, eps1=1.1, eps2=0.9)
    h = hamiltonian(config, PulseSchedule.ctap(0.5), 0.0, layout)
    for n in range(layout.dim):
        _, q1, m, q2 = layout.unravel(n)
        assert h[n, n] == pytest.approx(1.0 * m + 1.1 * q1 + 0.9 * q2)
    assert np.abs(h - np.diag(np.diag(h))).max() == 0.0


def test_rwa_n1_sector_is_lambda_system():
    layout = HilbertLayout(2)
    config = SystemConfig.symmetric(2, 0.3, rwa=True)
    s = PulseSchedule.ctap(0.3)
    t = 5.0
    f1, f2 = s.envelope(t)
    h = hamiltonian(config, s, t, layout)
    idx = [layout.basis_index(0, 1, 0, 0), layout.basis_index(0, 0, 1, 0),
           layout.basis_index(0, 0, 0, 1)]
    block = h[np.ix_(idx, idx)]
    expect = np.eye(3) + np.array([[0, 0.3 * f1, 0],
                                   [0.3 * f1, 0, 0.3 * f2],
                                   [0, 0.3 * f2, 0]])
    np.testing.assert_allclose(block, expect, atol=1e-14)


def test_hamiltonian_hermitian_both_variants():
    layout = HilbertLayout(4)
    for rwa in (False, True):
        config = SystemConfig.symmetric(4, 0.7, rwa=rwa)
        s = PulseSchedule.ctap(0.7)
        for t in np.linspace(s.t_start, s.t_end, 7):
            h = hamiltonian(config, s, t, layout)
            assert np.abs(h - h.conj().T).max() < 1e-13


def test_full_breaks_n_but_keeps_parity():
    rng = np.random.default_rng(2)
    layout = HilbertLayout(4)
    config = SystemConfig.symmetric(4, 0.5)
    s = PulseSchedule.ctap(0.5)
    t = float(rng.uniform(s.t_start, s.t_end))
    h = hamiltonian(config, s, t, layout)
    n = number_operator(layout)
    pi = parity_operator(layout)
    assert np.abs(h @ n - n @ h).max() > 1e-3
    assert np.abs(h @ pi - pi @ h).max() < 1e-12


def test_rwa_conserves_n():
    layout = HilbertLayout(3)
    config = SystemConfig.symmetric(3, 0.8, rwa=True)
    h = hamiltonian(config, PulseSchedule.ctap(0.8), 1.3, layout)
    n = number_operator(layout)
    assert np.abs(h @ n - n @ h).max() < 1e-12


def test_reference_factor_idle():
    lay_ref = HilbertLayout(2, with_reference=True)
    lay = HilbertLayout(2)
    config = SystemConfig.symmetric(2, 0.4)
    h0, v1, v2 = hamiltonian_parts(config, lay)
    h0r, v1r, v2r = hamiltonian_parts(config, lay_ref)
    for small, big in ((h0, h0r), (v1, v1r), (v2, v2r)):
        np.testing.assert_allclose(big, np.kron(np.eye(2), small), atol=1e-14)


def test_parts_dimension_mismatch():
    with pytest.raises(ValueError):
        hamiltonian_parts(SystemConfig.symmetric(3, 0.1), HilbertLayout(4))
