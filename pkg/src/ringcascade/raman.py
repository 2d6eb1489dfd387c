"""Raman (Lambda-system) photon source after adiabatic elimination of the intermediate level.

The laser-assisted transition |g> -> |e> emits into the ring with the effective
coupling ``conj(g) Omega(t) / (2 delta)``; the ground state and the
|e, one photon in ring 1> states pick up AC-Stark shifts.  Everything runs in
the frame of the laser, so the ring detunings are ``omega_ci - omega_L``.

Basis: ``[|g,vac>, |e,1_a1>, |e,1_b>, |e,1_a2>, ...]`` which lines up slot by
slot with :mod:`ringcascade.model`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import TrajectoryResult, evolve
from .model import ATOM, MODE_A1, MODE_B, a_slot, assemble, cascade_hermitian, chain_jumps, spec_problems
from .spectra import SpectrumResult, spectrum_grid

log = logging.getLogger(__name__)

ADIABATIC_LIMIT = 0.25


@dataclass(frozen=True)
class Pulse:
    """Laser Rabi frequency ``omega0 * exp(-(t - t0)^2 / (2 tau_l^2))``.

    ``t0`` defaults to ``3 * tau_l`` so the drive is negligible at t = 0.
    ``shape="constant"`` holds the Rabi frequency at ``omega0``.
    """

    omega0: float
    tau_l: float = 10.0
    t0: float | None = None
    shape: str = "gaussian"

    def __post_init__(self) -> None:
        if self.shape not in ("gaussian", "constant"):
            raise ValueError(f"shape: unknown pulse shape {self.shape!r}")
        if self.shape == "gaussian" and not self.tau_l > 0:
            raise ValueError(f"tau_l: pulse width must be positive, got {self.tau_l}")
        if self.t0 is None:
            object.__setattr__(self, "t0", 3.0 * self.tau_l)

    def __call__(self, t):
        if self.shape == "constant":
            return self.omega0 * np.ones_like(np.asarray(t, dtype=float))
        return self.omega0 * np.exp(-((np.asarray(t) - self.t0) ** 2) / (2 * self.tau_l**2))


@dataclass(frozen=True)
class RamanSpec:
    g: complex
    delta_raman: float
    delta_c: tuple[float, ...]
    kappa: tuple[float, ...]
    pulse: Pulse

    def __post_init__(self) -> None:
        object.__setattr__(self, "g", complex(self.g))
        object.__setattr__(self, "delta_c", tuple(float(d) for d in self.delta_c))
        object.__setattr__(self, "kappa", tuple(float(k) for k in self.kappa))
        for name, msg in self.problems():
            raise ValueError(f"{name}: {msg}")

    def problems(self) -> list[tuple[str, str]]:
        n = len(self.kappa)
        found = spec_problems(n, self.kappa, self.delta_c, (0.0,) * max(n - 1, 0))
        if self.delta_raman == 0:
            found.append(("delta_raman", "adiabatic elimination needs a nonzero detuning"))
        return found

    @property
    def n_cavities(self) -> int:
        return len(self.kappa)

    def adiabaticity(self) -> dict[str, float]:
        d = abs(self.delta_raman)
        return {
            "omega0_over_2delta": abs(self.pulse.omega0) / (2 * d),
            "g_over_delta": abs(self.g) / d,
        }

    def warnings(self) -> list[str]:
        out = []
        for key, val in self.adiabaticity().items():
            if val > ADIABATIC_LIMIT:
                out.append(f"{key}={val:.3g} exceeds {ADIABATIC_LIMIT}; adiabatic elimination is marginal")
        return out


def effective_coupling(spec: RamanSpec, t):
    """``conj(g) Omega(t) / (2 delta)``, the laser-assisted emission rate into mode a1."""
    if spec.delta_raman == 0:
        raise ValueError("delta_raman must be nonzero")
    return np.conj(spec.g) * spec.pulse(t) / (2 * spec.delta_raman)


def effective_coupling_b(spec: RamanSpec, t):
    """Partner coupling ``g conj(Omega(t)) / (2 delta)`` for the counter-propagating mode."""
    if spec.delta_raman == 0:
        raise ValueError("delta_raman must be nonzero")
    return spec.g * np.conj(spec.pulse(t)) / (2 * spec.delta_raman)


@dataclass(frozen=True)
class RamanCascade:
    """Time-dependent non-Hermitian Hamiltonian of the Raman source plus chain."""

    spec: RamanSpec
    static: np.ndarray
    jump_a: np.ndarray
    jump_b: np.ndarray
    max_rate: float
    stark: bool = True

    time_dependent = True

    @property
    def dim(self) -> int:
        return self.jump_a.size

    def hamiltonian(self, t: float) -> np.ndarray:
        h = self.static.copy()
        ca = -effective_coupling(self.spec, t)
        cb = -effective_coupling_b(self.spec, t)
        h[ATOM, MODE_A1] = ca
        h[MODE_A1, ATOM] = np.conj(ca)
        h[ATOM, MODE_B] = cb
        h[MODE_B, ATOM] = np.conj(cb)
        if self.stark:
            h[ATOM, ATOM] = -abs(self.spec.pulse(t)) ** 2 / (4 * self.spec.delta_raman)
        return h


def build_raman_cascade(spec: RamanSpec, n_empty: int, *, stark: bool = True) -> RamanCascade:
    """Assemble the effective Hamiltonian for the Raman source feeding ``n_empty`` rings.

    ``stark=False`` drops both AC-Stark shifts, which turns the problem into
    the two-level source with a time-dependent coupling.
    """
    n = n_empty + 1
    if n_empty < 0:
        raise ValueError("n_empty must be >= 0")
    if spec.n_cavities != n:
        raise ValueError(f"kappa/delta_c describe {spec.n_cavities} rings, expected {n}")
    dim = n + 2
    kappa = spec.kappa
    h = np.zeros((dim, dim), dtype=complex)
    shift = -abs(spec.g) ** 2 / spec.delta_raman if stark else 0.0
    h[MODE_A1, MODE_A1] = spec.delta_c[0] + shift
    h[MODE_B, MODE_B] = spec.delta_c[0] + shift
    for k in range(2, n + 1):
        h[a_slot(k), a_slot(k)] = spec.delta_c[k - 1]
    h += cascade_hermitian(kappa, dim)
    jump_a, jump_b = chain_jumps(kappa, dim)
    static = assemble(h, jump_a, jump_b)

    ts = np.linspace(0, spec.pulse.t0 * 2 + 1, 2001) if spec.pulse.shape == "gaussian" else np.zeros(1)
    g_eff = float(np.max(np.abs(effective_coupling(spec, ts))))
    return RamanCascade(
        spec=spec,
        static=static,
        jump_a=jump_a,
        jump_b=jump_b,
        max_rate=max(max(kappa), g_eff),
        stark=stark,
    )


def ground_state(dim: int) -> np.ndarray:
    psi = np.zeros(dim, dtype=complex)
    psi[ATOM] = 1.0
    return psi


def run_raman(
    spec: RamanSpec,
    n_empty: int,
    t_span: float,
    dt: float,
    *,
    stark: bool = True,
    gamma: float | None = None,
    delta_k_grid: Sequence[float] | None = None,
    sample_times: Sequence[float] | None = None,
) -> tuple[TrajectoryResult, SpectrumResult | None]:
    """Evolve from ``|g, vac>`` and optionally sweep the filtered spectrum at D_a."""
    if spec.pulse.shape == "gaussian" and dt > spec.pulse.tau_l / 100 * (1 + 1e-9):
        raise ValueError(f"dt={dt:g} does not resolve the pulse (need dt <= tau_l/100)")
    for msg in spec.warnings():
        log.warning(msg)
    ops = build_raman_cascade(spec, n_empty, stark=stark)
    traj = evolve(ops, ground_state(ops.dim), t_span, dt)
    spectrum = None
    if gamma is not None:
        grid = delta_k_grid if delta_k_grid is not None else np.linspace(-15, 15, 601)
        times = sample_times if sample_times is not None else [traj.times[-1]]
        spectrum = spectrum_grid(traj, ops, gamma, grid, times)
    return traj, spectrum
