import logging

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ringcascade.analytic import amplitudes_single
from ringcascade.model import ArraySpec, a_slot
from ringcascade.raman import (
    Pulse,
    RamanSpec,
    build_raman_cascade,
    effective_coupling,
    ground_state,
    run_raman,
)
from ringcascade.dynamics import evolve


def weak(omega0=0.25, n=2, **kw):
    return RamanSpec(0.25, 0.5, (0.25,) * n, (1.0,) * n, Pulse(omega0, 10.0), **kw)


def test_effective_coupling_shape():
    spec = RamanSpec(0.3 + 0.1j, 0.7, (0.0,), (1.0,), Pulse(2.0, 4.0))
    t0 = spec.pulse.t0
    assert t0 == 12.0
    peak = np.conj(spec.g) * 2.0 / (2 * 0.7)
    assert effective_coupling(spec, t0) == pytest.approx(peak)
    assert effective_coupling(spec, t0 + 4.0) == pytest.approx(peak * np.exp(-0.5))
    assert effective_coupling(spec, t0 - 4.0) == pytest.approx(peak * np.exp(-0.5))
    zero = RamanSpec(0.3, 0.7, (0.0,), (1.0,), Pulse(0.0, 4.0))
    assert np.all(effective_coupling(zero, np.linspace(0, 30, 7)) == 0)


def test_zero_raman_detuning_rejected():
    with pytest.raises(ValueError, match="delta_raman"):
        RamanSpec(0.3, 0.0, (0.0,), (1.0,), Pulse(1.0))


def test_dark_without_laser():
    traj, spec = run_raman(weak(0.0), 1, 40.0, 0.01, gamma=0.25, delta_k_grid=[-1.0, 0.0, 1.0], sample_times=[40.0])
    np.testing.assert_allclose(traj.p_basis[:, 0], 1.0, atol=1e-14)
    assert traj.p_det_a[-1] == 0
    assert np.all(spec.n_s == 0)


def test_weak_populations_sequence():
    traj, _ = run_raman(weak(), 1, 80.0, 0.01)
    p = traj.p_basis
    p_g = p[:, 0]
    assert p_g[-1] < 0.9 and abs(p_g[-1] - p_g[-500]) < 1e-6
    assert traj.times[np.argmax(p[:, a_slot(2)])] > traj.times[np.argmax(p[:, a_slot(1)])]


@given(omega0=st.floats(0.05, 3.0), tau=st.floats(0.5, 5.0), stark=st.booleans())
def test_norm_flux_identity(omega0, tau, stark):
    spec = RamanSpec(1.0, 1.5, (0.25, 0.25), (1.0, 1.0), Pulse(omega0, tau))
    traj, _ = run_raman(spec, 1, 6 * tau + 5, min(tau / 100, 0.005), stark=stark)
    assert np.max(np.abs(traj.conservation_defect())) < 1e-8


def test_detection_below_unity():
    traj, _ = run_raman(weak(), 1, 80.0, 0.01)
    total = traj.p_det_a[-1] + traj.p_det_b[-1]
    assert 0 < total < 1


def test_constant_drive_without_stark_is_two_level():
    g, delta, omega = 0.8, 2.0, 1.2
    spec = RamanSpec(g, delta, (0.3,), (1.0,), Pulse(omega, shape="constant"))
    ops = build_raman_cascade(spec, 0, stark=False)
    traj = evolve(ops, ground_state(ops.dim), 20.0, 0.005)
    g_model = -np.conj(g) * omega / (2 * delta)
    two_level = ArraySpec(1, g_model, 0.3, (1.0,), (0.3,))
    c = amplitudes_single(two_level, traj.times)
    for col in range(3):
        assert np.max(np.abs(c[col] - traj.amplitudes[:, col])) < 1e-4


def test_sign_flip_mirrors_spectrum():
    dks = np.linspace(-6, 6, 121)
    kw = dict(gamma=0.25, delta_k_grid=dks, sample_times=[30.0])
    base = RamanSpec(2.0, 1.5, (0.25, 0.25), (1.0, 1.0), Pulse(3.0, 0.5))
    flip = RamanSpec(2.0, -1.5, (-0.25, -0.25), (1.0, 1.0), Pulse(3.0, 0.5))
    _, a = run_raman(base, 1, 30.0, 0.005, **kw)
    _, b = run_raman(flip, 1, 30.0, 0.005, **kw)
    np.testing.assert_allclose(a.n_s[:, 0], b.n_s[::-1, 0], rtol=1e-9, atol=1e-14)


def test_pulse_resolution_enforced():
    with pytest.raises(ValueError, match="tau_l"):
        run_raman(weak(), 1, 10.0, 0.2)


def test_adiabaticity_warning(caplog):
    spec = RamanSpec(0.1, 1.0, (0.0,), (1.0,), Pulse(1.6, 2.0))
    assert spec.adiabaticity()["omega0_over_2delta"] == pytest.approx(0.8)
    assert any("omega0_over_2delta" in w for w in spec.warnings())
    with caplog.at_level(logging.WARNING):
        run_raman(spec, 0, 15.0, 0.01)
    assert "omega0_over_2delta" in caplog.text


def test_kappa_count_must_match_chain():
    with pytest.raises(ValueError):
        build_raman_cascade(weak(n=2), 3)
