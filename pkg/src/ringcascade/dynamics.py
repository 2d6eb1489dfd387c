"""No-jump evolution, detection probabilities and a Monte-Carlo cross-check.

With one excitation and no drive there is at most one jump, and it always lands
in the dark ground state.  The ensemble state is therefore fixed by the
unnormalised no-jump amplitudes plus the accumulated click probabilities, which
is all :func:`evolve` computes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .model import as_amplitudes

log = logging.getLogger(__name__)

STEP_FRACTION = 0.01
MC_CHUNK = 8192


@dataclass(frozen=True)
class TrajectoryResult:
    """Amplitudes on a uniform grid plus cumulative click probabilities."""

    times: np.ndarray
    amplitudes: np.ndarray
    p_det_a: np.ndarray
    p_det_b: np.ndarray
    flux_a: np.ndarray
    flux_b: np.ndarray

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def p_basis(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norm2(self) -> np.ndarray:
        return self.p_basis.sum(axis=1)

    def conservation_defect(self) -> np.ndarray:
        return self.norm2 + self.p_det_a + self.p_det_b - 1.0

    def at(self, t: float) -> int:
        """Index of the grid point closest to ``t``."""
        return int(np.argmin(np.abs(self.times - t)))


def check_step(ops, dt: float) -> None:
    limit = STEP_FRACTION / ops.max_rate
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if dt > limit * (1 + 1e-9):
        raise ValueError(
            f"dt={dt:g} too large: need dt <= {STEP_FRACTION}/max(kappa, |g|) = {limit:g}"
        )


def time_grid(t_end: float, dt: float) -> np.ndarray:
    n = int(round(t_end / dt))
    if n < 1:
        raise ValueError(f"t_end={t_end} shorter than one step")
    if abs(n * dt - t_end) > 1e-9 * max(1.0, t_end):
        log.debug("t_end %g is not a multiple of dt %g; using %g", t_end, dt, n * dt)
    return np.arange(n + 1) * dt


def _rk4_stage_matrices(h: np.ndarray, dt: float):
    eye = np.eye(h.shape[0], dtype=complex)
    m = -1j * dt * h
    m2 = m @ m
    m3 = m2 @ m
    s2 = eye + m / 2
    s3 = eye + m / 2 + m2 / 4
    s4 = eye + m + m2 / 2 + m3 / 4
    step = eye + m + m2 / 2 + m3 / 6 + m2 @ m2 / 24
    return s2, s3, s4, step


def _fail_if_nonfinite(psi: np.ndarray, t: float) -> None:
    if not np.all(np.isfinite(psi)):
        raise FloatingPointError(f"non-finite amplitudes at t={t:g}; reduce dt")


def _rates(states: np.ndarray, ops) -> tuple[np.ndarray, np.ndarray]:
    return np.abs(states @ ops.jump_a) ** 2, np.abs(states @ ops.jump_b) ** 2


def evolve(ops, initial, t_end: float, dt: float, *, strict: bool = True) -> TrajectoryResult:
    """Integrate ``i dpsi/dt = H_nh psi`` with classical RK4 on a fixed grid.

    Click probabilities are integrated alongside the amplitudes with the same
    RK4 stages (dp/dt = |J psi|^2), so norm plus clicks stays at one to the
    order of the integrator.  Operators with ``time_dependent = True`` are
    evaluated at the start, midpoint and end of every step.
    """
    if strict:
        check_step(ops, dt)
    psi0 = np.array(as_amplitudes(initial), dtype=complex)
    if psi0.size != ops.dim:
        raise ValueError(f"initial state has dimension {psi0.size}, operators {ops.dim}")
    if abs(np.vdot(psi0, psi0).real - 1.0) > 1e-9:
        raise ValueError("initial state must be normalised")

    times = time_grid(t_end, dt)
    if getattr(ops, "time_dependent", False):
        amps, inc_a, inc_b = _evolve_driven(ops, psi0, times, dt)
    else:
        amps, inc_a, inc_b = _evolve_static(ops, psi0, times, dt)

    p_a = np.concatenate([[0.0], np.cumsum(inc_a)])
    p_b = np.concatenate([[0.0], np.cumsum(inc_b)])
    flux_a, flux_b = _rates(amps, ops)
    return TrajectoryResult(times, amps, p_a, p_b, flux_a, flux_b)


def _evolve_static(ops, psi0, times, dt):
    s2, s3, s4, step = _rk4_stage_matrices(ops.h_nh, dt)
    amps = np.empty((times.size, psi0.size), dtype=complex)
    amps[0] = psi0
    psi = psi0
    for n in range(1, times.size):
        psi = step @ psi
        amps[n] = psi
    _fail_if_nonfinite(amps, times[-1])

    prev = amps[:-1]
    inc_a = np.zeros(times.size - 1)
    inc_b = np.zeros(times.size - 1)
    for weight, stage in ((1, None), (2, s2), (2, s3), (1, s4)):
        y = prev if stage is None else prev @ stage.T
        ra, rb = _rates(y, ops)
        inc_a += weight * ra
        inc_b += weight * rb
    return amps, inc_a * dt / 6, inc_b * dt / 6


def _evolve_driven(ops, psi0, times, dt):
    amps = np.empty((times.size, psi0.size), dtype=complex)
    amps[0] = psi0
    inc_a = np.zeros(times.size - 1)
    inc_b = np.zeros(times.size - 1)
    ja, jb = ops.jump_a, ops.jump_b
    psi = psi0
    h_next = ops.hamiltonian(times[0])
    for n in range(times.size - 1):
        t = times[n]
        h0 = h_next
        hm = ops.hamiltonian(t + dt / 2)
        h_next = ops.hamiltonian(t + dt)
        k1 = -1j * (h0 @ psi)
        y2 = psi + dt / 2 * k1
        k2 = -1j * (hm @ y2)
        y3 = psi + dt / 2 * k2
        k3 = -1j * (hm @ y3)
        y4 = psi + dt * k3
        k4 = -1j * (h_next @ y4)
        ra = abs(ja @ psi) ** 2 + 2 * abs(ja @ y2) ** 2 + 2 * abs(ja @ y3) ** 2 + abs(ja @ y4) ** 2
        rb = abs(jb @ psi) ** 2 + 2 * abs(jb @ y2) ** 2 + 2 * abs(jb @ y3) ** 2 + abs(jb @ y4) ** 2
        inc_a[n] = ra * dt / 6
        inc_b[n] = rb * dt / 6
        psi = psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        amps[n + 1] = psi
    _fail_if_nonfinite(amps, times[-1])
    return amps, inc_a, inc_b


def jump_rates(state, ops) -> tuple[float, float]:
    """Click rates ``(|J_a psi|^2, |J_b psi|^2)`` for the current state."""
    amp = as_amplitudes(state)
    if amp.shape[-1] != ops.dim:
        raise ValueError(f"state dimension {amp.shape[-1]} does not match operators ({ops.dim})")
    return float(abs(amp @ ops.jump_a) ** 2), float(abs(amp @ ops.jump_b) ** 2)


@dataclass(frozen=True)
class JumpSample:
    """Outcome of Monte-Carlo unravelling.

    ``detector`` is 0 for D_a, 1 for D_b and -1 when no click happened before
    the end of the simulated window (``jump_times`` is NaN there).
    """

    jump_times: np.ndarray
    detector: np.ndarray
    bin_edges: np.ndarray
    density_a: np.ndarray
    density_b: np.ndarray

    @property
    def n_traj(self) -> int:
        return self.jump_times.size

    @property
    def fraction_a(self) -> float:
        return float(np.mean(self.detector == 0))

    @property
    def fraction_b(self) -> float:
        return float(np.mean(self.detector == 1))

    @property
    def density(self) -> np.ndarray:
        return self.density_a + self.density_b


def sample_trajectories(
    ops,
    initial,
    t_end: float,
    dt: float,
    n_traj: int,
    seed: int,
    *,
    bins: int = 50,
    traj: TrajectoryResult | None = None,
) -> JumpSample:
    """Draw first-click times by inverting the decay of the no-jump norm.

    A trajectory clicks when ``||psi(t)||^2`` falls below a uniform variate;
    the detector is picked in proportion to the two click rates at that
    instant.  Random numbers come from per-chunk child seeds of ``seed`` so the
    draw does not depend on how chunks are scheduled.
    """
    if n_traj < 1:
        raise ValueError("n_traj must be >= 1")
    if traj is None:
        traj = evolve(ops, initial, t_end, dt)
    times = traj.times
    norm2 = traj.norm2
    total = traj.flux_a + traj.flux_b
    share_a = np.divide(traj.flux_a, total, out=np.full_like(total, 0.5), where=total > 0)

    n_chunks = -(-n_traj // MC_CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    jump_times = np.full(n_traj, np.nan)
    detector = np.full(n_traj, -1, dtype=int)
    # norm2 decreases along the grid; reverse it for interpolation
    xp = norm2[::-1]
    tp = times[::-1]
    for c, child in enumerate(children):
        lo = c * MC_CHUNK
        hi = min(n_traj, lo + MC_CHUNK)
        rng = np.random.default_rng(child)
        u = rng.random(hi - lo)
        v = rng.random(hi - lo)
        clicked = u > norm2[-1]
        tj = np.interp(u[clicked], xp, tp)
        pick_a = v[clicked] < np.interp(tj, times, share_a)
        jt = np.full(hi - lo, np.nan)
        jt[clicked] = tj
        det = np.full(hi - lo, -1, dtype=int)
        det[clicked] = np.where(pick_a, 0, 1)
        jump_times[lo:hi] = jt
        detector[lo:hi] = det

    edges = np.linspace(0.0, times[-1], bins + 1)
    width = np.diff(edges)
    hist_a, _ = np.histogram(jump_times[detector == 0], bins=edges)
    hist_b, _ = np.histogram(jump_times[detector == 1], bins=edges)
    return JumpSample(
        jump_times=jump_times,
        detector=detector,
        bin_edges=edges,
        density_a=hist_a / (n_traj * width),
        density_b=hist_b / (n_traj * width),
    )
