"""Single lossless ring on a fibre: beam-splitter transfer function versus input-output theory.

The two agree when the coupler reflection ``r`` is small, with the
identifications ``kappa * tau = r**2`` and ``phi = (omega - omega_c) * tau``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ClassicalRingSpec:
    """Coupler reflection ``r``, roundtrip time ``tau``, resonance ``omega_c``.

    ``ring_radius`` is carried as metadata only: the phase map uses
    ``phi = (omega - omega_c) * tau``.
    """

    r: float
    tau: float = 1.0
    omega_c: float = 0.0
    ring_radius: float = 1.0

    def __post_init__(self) -> None:
        if not 0 < self.r <= 1:
            raise ValueError(f"r must lie in (0, 1], got {self.r}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if not self.ring_radius > 0:
            raise ValueError(f"ring_radius must be positive, got {self.ring_radius}")

    @property
    def t(self) -> float:
        return float(np.sqrt(1.0 - self.r**2))

    @property
    def kappa(self) -> float:
        return self.r**2 / self.tau

    def phase(self, omega):
        return (np.asarray(omega, dtype=float) - self.omega_c) * self.tau


def classical_transfer(spec: ClassicalRingSpec, phi):
    """``(-t + e^{i phi}) / (1 - t e^{i phi})`` for roundtrip phase ``phi``."""
    # written around 1 - t and e^{i phi} - 1 to avoid cancellation near resonance
    em1 = np.expm1(1j * np.asarray(phi, dtype=float))
    one_minus_t = spec.r**2 / (1 + spec.t)
    return (one_minus_t + em1) / (one_minus_t - spec.t * em1)


def inout_transfer(omega, omega_c: float, kappa: float):
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    d = np.asarray(omega, dtype=float) - omega_c
    return (kappa / 2 + 1j * d) / (kappa / 2 - 1j * d)


def correspondence_error(spec: ClassicalRingSpec, detuning_grid) -> float:
    """Largest ``|classical - input/output|`` over detunings with ``|phi| <= r^2``.

    Both transfer functions are divided by their value at zero detuning, which
    removes any overall sign convention.
    """
    det = np.asarray(detuning_grid, dtype=float)
    phi = det * spec.tau
    keep = np.abs(phi) <= spec.r**2 * (1 + 1e-12)
    if not np.any(keep):
        return 0.0
    det, phi = det[keep], phi[keep]
    c = classical_transfer(spec, phi) / classical_transfer(spec, 0.0)
    q = inout_transfer(det + spec.omega_c, spec.omega_c, spec.kappa) / inout_transfer(
        spec.omega_c, spec.omega_c, spec.kappa
    )
    return float(np.max(np.abs(c - q)))
