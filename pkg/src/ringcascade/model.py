"""Cascaded atom-cavity chain: parameters, basis layout and the non-Hermitian Hamiltonian.

Basis (single-excitation subspace), in this order::

    0        |e, vac>          atom excited, no photons
    1        |g, 1_a1>         photon in cavity-1 ccw mode (drives the chain)
    2        |g, 1_b>          photon in cavity-1 cw mode (leaks towards D_b)
    3..N+1   |g, 1_ak>         photon in empty cavity k = 2..N

All rates are angular frequencies with hbar absorbed.  The frame rotates at the
atomic transition frequency, so the atom slot carries ``delta_cavity[0] - delta_atom``
(zero for the usual parameterisation) and cavity slots carry their detunings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

ATOM = 0
MODE_A1 = 1
MODE_B = 2


def a_slot(k: int) -> int:
    """Basis index of the a-mode of cavity ``k`` (1-based)."""
    if k < 1:
        raise ValueError(f"cavity index must be >= 1, got {k}")
    return MODE_A1 if k == 1 else k + 1


@dataclass(frozen=True)
class ArraySpec:
    """Atom-cavity source followed by ``n_cavities - 1`` empty rings.

    Parameters
    ----------
    n_cavities : int
        Number of rings; ring 1 holds the atom.
    g : complex
        Atom coupling to the ccw mode a1; the cw mode b couples with ``conj(g)``.
    delta_atom : float
        Cavity-1 detuning from the atomic transition, omega_c1 - omega_eg.
    kappa : sequence of float
        Energy decay rate of every ring.
    delta_cavity : sequence of float
        Ring resonances in the rotating frame.
    tau_d : sequence of float
        Propagation delays between neighbouring rings.  Only used to relabel
        output time axes; the dynamics never sees them.
    """

    n_cavities: int
    g: complex
    delta_atom: float
    kappa: tuple[float, ...]
    delta_cavity: tuple[float, ...]
    tau_d: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "kappa", tuple(float(k) for k in self.kappa))
        object.__setattr__(self, "delta_cavity", tuple(float(d) for d in self.delta_cavity))
        if not self.tau_d and self.n_cavities > 1:
            object.__setattr__(self, "tau_d", (0.0,) * (self.n_cavities - 1))
        object.__setattr__(self, "tau_d", tuple(float(t) for t in self.tau_d))
        object.__setattr__(self, "g", complex(self.g))
        for name, msg in self.problems():
            raise ValueError(f"{name}: {msg}")

    def problems(self) -> list[tuple[str, str]]:
        return spec_problems(
            self.n_cavities, self.kappa, self.delta_cavity, self.tau_d
        )

    @classmethod
    def chain(
        cls,
        n_cavities: int,
        g: complex,
        delta: float,
        kappa: float | Sequence[float] = 1.0,
        delta_empty: float | Sequence[float] | None = None,
        tau_d: float | Sequence[float] = 0.0,
    ) -> "ArraySpec":
        """Build the common layout: frame at omega_eg, ring 1 detuned by ``delta``.

        ``delta_empty`` gives the detunings of rings 2..N (scalar broadcasts);
        it defaults to ``delta``.
        """
        n = int(n_cavities)
        kap = _broadcast(kappa, n, "kappa")
        if delta_empty is None:
            delta_empty = delta
        empty = _broadcast(delta_empty, n - 1, "delta_empty")
        delays = _broadcast(tau_d, n - 1, "tau_d")
        return cls(
            n_cavities=n,
            g=g,
            delta_atom=delta,
            kappa=kap,
            delta_cavity=(float(delta),) + empty,
            tau_d=delays,
        )

    @property
    def dim(self) -> int:
        return self.n_cavities + 2

    @property
    def atom_energy(self) -> float:
        return self.delta_cavity[0] - self.delta_atom


def _broadcast(value, n: int, name: str) -> tuple[float, ...]:
    if np.ndim(value) == 0:
        return (float(value),) * n
    vals = tuple(float(v) for v in value)
    if len(vals) != n:
        raise ValueError(f"{name}: expected {n} values, got {len(vals)}")
    return vals


def spec_problems(n_cavities, kappa, delta_cavity, tau_d) -> list[tuple[str, str]]:
    """Field-level invariant violations for a chain parameterisation."""
    found = []
    if int(n_cavities) < 1:
        found.append(("n_cavities", f"must be >= 1, got {n_cavities}"))
        return found
    n = int(n_cavities)
    if len(kappa) != n:
        found.append(("kappa", f"expected {n} values, got {len(kappa)}"))
    if len(delta_cavity) != n:
        found.append(("delta_cavity", f"expected {n} values, got {len(delta_cavity)}"))
    if len(tau_d) != n - 1:
        found.append(("tau_d", f"expected {n - 1} values, got {len(tau_d)}"))
    for i, k in enumerate(kappa):
        if not np.isfinite(k) or k <= 0:
            found.append((f"kappa[{i}]", f"decay rate must be positive, got {k}"))
    for i, d in enumerate(tau_d):
        if d < 0:
            found.append((f"tau_d[{i}]", f"delay must be non-negative, got {d}"))
    return found


@dataclass(frozen=True)
class StateVector:
    """Amplitudes ``[c_e, c_1, c_2, c_3, ...]`` of the unnormalised no-jump state."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amp = np.array(self.amplitudes, dtype=complex)
        if amp.ndim != 1 or amp.size < 3:
            raise ValueError("state must be a 1-D vector with at least 3 entries")
        if not np.all(np.isfinite(amp)) or np.vdot(amp, amp).real > 1 + 1e-9:
            raise ValueError("squared norm must lie in [0, 1]")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def excited_atom(cls, n_cavities: int) -> "StateVector":
        amp = np.zeros(n_cavities + 2, dtype=complex)
        amp[ATOM] = 1.0
        return cls(amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def as_amplitudes(state) -> np.ndarray:
    if isinstance(state, StateVector):
        return state.amplitudes
    return np.asarray(state, dtype=complex)


@dataclass(frozen=True)
class CascadeOperators:
    """Non-Hermitian Hamiltonian and the two detector jump functionals.

    ``max_rate`` is the largest of the decay rates and |g|; it sets the step
    size heuristic used by the integrator.
    """

    h_nh: np.ndarray
    jump_a: np.ndarray
    jump_b: np.ndarray
    max_rate: float = field(default=1.0)

    def __post_init__(self) -> None:
        for name in ("h_nh", "jump_a", "jump_b"):
            arr = np.array(getattr(self, name), dtype=complex)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        d = self.jump_a.size
        if self.h_nh.shape != (d, d) or self.jump_b.size != d:
            raise ValueError("operator dimensions disagree")

    @property
    def dim(self) -> int:
        return self.jump_a.size

    time_dependent = False

    def hamiltonian(self, t: float) -> np.ndarray:
        return self.h_nh

    def dissipator(self) -> np.ndarray:
        """``sum_j J_j^dagger J_j`` as a matrix on the single-excitation subspace."""
        return jump_dissipator(self.jump_a, self.jump_b)

    def hermitian_part(self) -> np.ndarray:
        return 0.5 * (self.h_nh + self.h_nh.conj().T)


def jump_dissipator(jump_a: np.ndarray, jump_b: np.ndarray) -> np.ndarray:
    return np.outer(jump_a.conj(), jump_a) + np.outer(jump_b.conj(), jump_b)


def chain_jumps(kappa: Sequence[float], dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Jump functionals: D_a sees every a-mode of the chain, D_b only mode b."""
    jump_a = np.zeros(dim, dtype=complex)
    jump_b = np.zeros(dim, dtype=complex)
    for k, kap in enumerate(kappa, start=1):
        jump_a[a_slot(k)] = np.sqrt(kap)
    jump_b[MODE_B] = np.sqrt(kappa[0])
    return jump_a, jump_b


def cascade_hermitian(kappa: Sequence[float], dim: int) -> np.ndarray:
    """Hermitian part of the fibre-mediated drive, -(i/2) sqrt(k_i k_j)(a_j^+ a_i - h.c.)."""
    h = np.zeros((dim, dim), dtype=complex)
    n = len(kappa)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            # same rounding as the jump-vector product so the upstream element cancels exactly
            c = 0.5j * (np.sqrt(kappa[i - 1]) * np.sqrt(kappa[j - 1]))
            h[a_slot(j), a_slot(i)] -= c
            h[a_slot(i), a_slot(j)] += c
    return h


def assemble(h_herm: np.ndarray, jump_a: np.ndarray, jump_b: np.ndarray) -> np.ndarray:
    """``H_herm - (i/2) sum_j J_j^+ J_j`` with a consistency check on the result."""
    if not np.allclose(h_herm, h_herm.conj().T, rtol=0, atol=1e-12):
        raise ValueError("Hermitian part is not Hermitian")
    h_nh = h_herm - 0.5j * jump_dissipator(jump_a, jump_b)
    # unidirectional chain: nothing flows back upstream
    anti = (h_nh - h_nh.conj().T) * 1j
    if not np.allclose(anti, jump_dissipator(jump_a, jump_b), rtol=0, atol=1e-12):
        raise AssertionError("anti-Hermitian part does not match the jump operators")
    return h_nh


def build_cascade(spec: ArraySpec) -> CascadeOperators:
    """Assemble the non-Hermitian Hamiltonian of the atom-cavity source plus chain.

    The atom couples to a1 through ``g`` and to b through ``conj(g)``; the
    resulting amplitude equations are ``dc_1/dt = ... - i g* c_e`` and
    ``dc_2/dt = ... - i g c_e``.  Empty rings are fed by every upstream a-mode
    with ``-i sqrt(k_i k_j)``; the reverse elements cancel exactly.
    """
    dim = spec.dim
    g = spec.g
    kappa = spec.kappa

    h = np.zeros((dim, dim), dtype=complex)
    h[ATOM, ATOM] = spec.atom_energy
    h[ATOM, MODE_A1] = g
    h[MODE_A1, ATOM] = np.conj(g)
    h[ATOM, MODE_B] = np.conj(g)
    h[MODE_B, ATOM] = g
    h[MODE_B, MODE_B] = spec.delta_cavity[0]
    for k in range(1, spec.n_cavities + 1):
        h[a_slot(k), a_slot(k)] = spec.delta_cavity[k - 1]
    h += cascade_hermitian(kappa, dim)

    jump_a, jump_b = chain_jumps(kappa, dim)
    h_nh = assemble(h, jump_a, jump_b)
    return CascadeOperators(
        h_nh=h_nh,
        jump_a=jump_a,
        jump_b=jump_b,
        max_rate=max(max(kappa), abs(g)),
    )


def _check_dim(amp: np.ndarray, ops) -> None:
    if amp.shape[-1] != ops.dim:
        raise ValueError(f"state dimension {amp.shape[-1]} does not match operators ({ops.dim})")


def output_amplitude_a(state, ops) -> complex | np.ndarray:
    """Field amplitude reaching D_a, ``sum_j sqrt(k_j) c_j`` over the a-chain.

    Accepts a single state or a (time, basis) array of states.
    """
    amp = as_amplitudes(state)
    _check_dim(amp, ops)
    return amp @ ops.jump_a


def output_amplitude_b(state, ops) -> complex | np.ndarray:
    amp = as_amplitudes(state)
    _check_dim(amp, ops)
    return amp @ ops.jump_b
