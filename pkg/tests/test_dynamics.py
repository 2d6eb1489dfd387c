import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import simulate
from oracles import expm_propagate, local_minima, lyapunov_click_total
from ringcascade.dynamics import evolve, jump_rates, sample_trajectories
from ringcascade.model import ATOM, MODE_B, ArraySpec, StateVector, a_slot, build_cascade


def test_uncoupled_atom_stays_excited():
    _, _, traj = simulate(2, 0.0, 0.5, t_end=5.0, dt=0.01)
    np.testing.assert_allclose(np.abs(traj.amplitudes[:, ATOM]), 1.0, atol=1e-14)
    assert traj.p_det_a[-1] == 0 and traj.p_det_b[-1] == 0


def test_matches_matrix_exponential():
    spec, ops, traj = simulate(3, 1.3 - 0.4j, 0.5, delta_empty=[1.0, -2.0], t_end=5.0)
    exact = expm_propagate(ops.h_nh, StateVector.excited_atom(3).amplitudes, traj.times)
    assert np.max(np.abs(traj.amplitudes - exact)) < 1e-8


def test_total_click_probability_matches_lyapunov(weak_single):
    _, ops, traj = weak_single
    psi0 = StateVector.excited_atom(1).amplitudes
    assert traj.p_det_a[-1] == pytest.approx(lyapunov_click_total(ops.h_nh, ops.jump_a, psi0), abs=1e-3)
    assert traj.p_det_b[-1] == pytest.approx(lyapunov_click_total(ops.h_nh, ops.jump_b, psi0), abs=1e-3)


def test_weak_coupling_splits_evenly(weak_single):
    _, _, traj = weak_single
    assert traj.p_det_a[-1] == pytest.approx(0.5, abs=1e-3)
    assert traj.p_det_b[-1] == pytest.approx(0.5, abs=1e-3)


def test_strong_coupling_rabi_period(strong_single):
    spec, _, traj = strong_single
    p_e = traj.p_basis[:, ATOM]
    mins = local_minima(p_e)
    period = traj.times[mins[1]] - traj.times[mins[0]]
    expected = 2 * np.pi / (2 * np.sqrt(2) * abs(spec.g))
    assert period == pytest.approx(expected, rel=0.05)


def test_two_ring_delay():
    _, _, traj = simulate(2, 5.0, 0.5, t_end=4.0)
    p = traj.p_basis
    delay = traj.times[np.argmax(p[:, a_slot(2)])] - traj.times[np.argmax(p[:, a_slot(1)])]
    assert delay == pytest.approx(0.24, rel=0.2)


@given(
    n=st.integers(1, 5),
    g=st.floats(0.0, 6.0),
    delta=st.floats(-3.0, 3.0),
)
def test_norm_plus_clicks_is_one(n, g, delta):
    _, _, traj = simulate(n, g, delta, t_end=3.0)
    assert np.max(np.abs(traj.conservation_defect())) < 1e-8
    assert np.all(np.diff(traj.norm2) <= 1e-14)
    assert np.all(np.diff(traj.p_det_a) >= -1e-14)


def test_fourth_order_convergence():
    spec = ArraySpec.chain(2, 2.0, 0.5, delta_empty=1.0)
    ops = build_cascade(spec)
    psi0 = StateVector.excited_atom(2)
    ref = expm_propagate(ops.h_nh, psi0.amplitudes, np.linspace(0, 2.0, 2))[-1]
    errs = []
    for dt in (0.04, 0.02):
        traj = evolve(ops, psi0, 2.0, dt, strict=False)
        errs.append(np.max(np.abs(traj.amplitudes[-1] - ref)))
    assert errs[0] / errs[1] == pytest.approx(16, rel=0.15)


def test_click_quadrature_converges_at_fourth_order():
    spec = ArraySpec.chain(1, 2.0, 0.5)
    ops = build_cascade(spec)
    psi0 = StateVector.excited_atom(1)
    fine = evolve(ops, psi0, 2.0, 0.001).p_det_a[::40]
    errs = [
        np.max(np.abs(evolve(ops, psi0, 2.0, dt, strict=False).p_det_a[:: int(round(0.04 / dt))] - fine))
        for dt in (0.04, 0.02)
    ]
    assert errs[0] / errs[1] == pytest.approx(16, rel=0.2)


def test_step_heuristic_enforced():
    ops = build_cascade(ArraySpec.chain(1, 5.0, 0.0))
    with pytest.raises(ValueError, match="dt"):
        evolve(ops, StateVector.excited_atom(1), 1.0, 0.1)


def test_jump_rate_examples():
    ops1 = build_cascade(ArraySpec.chain(1, 1.0, 0.0, kappa=2.0))
    assert jump_rates(StateVector(np.zeros(3)), ops1) == (0.0, 0.0)
    pa, pb = jump_rates(StateVector([0, 0, 1]), ops1)
    assert pa == 0 and pb == pytest.approx(2)
    ops2 = build_cascade(ArraySpec.chain(2, 1.0, 0.0))
    psi = np.zeros(4, complex)
    psi[a_slot(1)], psi[a_slot(2)] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    assert jump_rates(StateVector(psi), ops2)[0] == pytest.approx(0, abs=1e-15)


@given(st.lists(st.complex_numbers(max_magnitude=1, allow_nan=False), min_size=5, max_size=5))
def test_jump_rates_nonnegative(amps):
    psi = np.array(amps) / max(1.0, np.linalg.norm(amps) * 1.001)
    ops = build_cascade(ArraySpec.chain(3, 1.0, 0.0))
    assert min(jump_rates(StateVector(psi), ops)) >= 0


def test_sampler_no_clicks_without_coupling():
    _, ops, traj = simulate(1, 0.0, 0.0, t_end=5.0, dt=0.01)
    out = sample_trajectories(ops, StateVector.excited_atom(1), 5.0, 0.01, 1000, seed=1, traj=traj)
    assert np.all(out.detector == -1)


def test_sampler_symmetric_fraction(weak_single):
    _, ops, traj = weak_single
    n = 10_000
    out = sample_trajectories(ops, None, 40.0, traj.dt, n, seed=7, traj=traj)
    p = traj.p_det_a[-1]
    assert abs(out.fraction_a - p) <= 3 * np.sqrt(p * (1 - p) / n)


def test_sampler_reproducible(weak_single):
    _, ops, traj = weak_single
    a = sample_trajectories(ops, None, 40.0, traj.dt, 20_000, seed=3, traj=traj)
    b = sample_trajectories(ops, None, 40.0, traj.dt, 20_000, seed=3, traj=traj)
    np.testing.assert_array_equal(a.jump_times, b.jump_times)
    np.testing.assert_array_equal(a.detector, b.detector)


def test_nan_aborts():
    ops = build_cascade(ArraySpec.chain(1, 1.0, 0.0))
    psi = np.array([np.nan, 0, 0], complex)
    with pytest.raises((FloatingPointError, ValueError)):
        evolve(ops, psi, 1.0, 0.01)
