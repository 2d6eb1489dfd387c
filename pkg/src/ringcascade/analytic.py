"""Closed-form amplitudes for one and two rings, and stationary spectra.

With ``b = kappa/4 + i*Delta/2`` the single-ring amplitudes are

    c_e(t) = exp(-b t) [cosh(alpha t) + b sinh(alpha t)/alpha]
    c_1(t) = -i conj(g) exp(-b t) sinh(alpha t)/alpha
    c_2(t) = -i g       exp(-b t) sinh(alpha t)/alpha

where ``alpha**2 = b**2 - 2|g|**2``.  Only even functions of ``alpha`` appear,
so the square-root branch is irrelevant and ``alpha = 0`` is a removable point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .model import ArraySpec


@dataclass(frozen=True)
class LaplaceSolution:
    alpha: complex
    poles: tuple[complex, complex]
    b: complex


def laplace_solution(spec: ArraySpec) -> LaplaceSolution:
    kappa = spec.kappa[0]
    delta = spec.delta_cavity[0] - spec.atom_energy
    b = kappa / 4 + 0.5j * delta
    alpha = np.sqrt(complex(b * b - 2 * abs(spec.g) ** 2))
    return LaplaceSolution(alpha=alpha, poles=(-b + alpha, -b - alpha), b=b)


def printed_alpha(kappa: float, delta: float, g: complex) -> complex:
    return np.sqrt(complex(kappa**2 + 4j * kappa * delta - 4 * delta**2 - 32 * abs(g) ** 2)) / 4


def _sinh_over(alpha: complex, t: np.ndarray) -> np.ndarray:
    """sinh(alpha t)/alpha, continuous through alpha = 0."""
    z = alpha * t
    small = np.abs(z) < 1e-4
    out = np.empty_like(z, dtype=complex)
    zs = z[small]
    out[small] = t[small] * (1 + zs**2 / 6 + zs**4 / 120)
    out[~small] = np.sinh(z[~small]) / alpha if alpha != 0 else t[~small]
    return out


def _frame_phase(spec: ArraySpec, t: np.ndarray) -> np.ndarray:
    return np.exp(-1j * spec.atom_energy * t)


def amplitudes_single(spec: ArraySpec, t, *, alpha_sign: int = 1):
    """Exact ``(c_e, c_1, c_2)`` of the source ring with the atom initially excited.

    Downstream rings never act back on the source, so any chain length is
    accepted.  ``alpha_sign`` selects the branch of alpha; results do not
    depend on it.
    """
    return _source_amplitudes(spec, t, alpha_sign)


def _source_amplitudes(spec: ArraySpec, t, alpha_sign: int = 1):
    t = np.asarray(t, dtype=float)
    sol = laplace_solution(spec)
    alpha = alpha_sign * sol.alpha
    b = sol.b
    env = np.exp(-b * t)
    sh = _sinh_over(alpha, np.atleast_1d(t)).reshape(t.shape)
    ch = np.cosh(alpha * t)
    phase = _frame_phase(spec, t)
    c_e = phase * env * (ch + b * sh)
    c_1 = phase * (-1j) * np.conj(spec.g) * env * sh
    c_2 = phase * (-1j) * spec.g * env * sh
    return c_e, c_1, c_2


def amplitude_cavity2(spec: ArraySpec, t, *, alpha_sign: int = 1):
    """Exact amplitude of the empty second ring for identical rings.

    Solves ``dc_3/dt = -(i Delta + kappa/2) c_3 - kappa c_1``:

        c_3 = i kappa conj(g) / (2|g|^2) *
              [exp(-2bt) + exp(-bt) (b sinh(alpha t)/alpha - cosh(alpha t))]
    """
    if spec.n_cavities != 2:
        raise ValueError("closed form needs n_cavities == 2")
    k1, k2 = spec.kappa
    d1, d2 = spec.delta_cavity
    if not np.isclose(k1, k2, rtol=1e-12, atol=0) or not np.isclose(d1, d2, rtol=1e-12, atol=1e-14):
        raise ValueError("closed form requires equal decay rates and resonances")
    t = np.asarray(t, dtype=float)
    if spec.g == 0:
        return np.zeros(t.shape, dtype=complex)
    sol = laplace_solution(spec)
    alpha = alpha_sign * sol.alpha
    b = sol.b
    sh = _sinh_over(alpha, np.atleast_1d(t)).reshape(t.shape)
    ch = np.cosh(alpha * t)
    pref = 1j * k1 * np.conj(spec.g) / (2 * abs(spec.g) ** 2)
    bracket = np.exp(-2 * b * t) + np.exp(-b * t) * (b * sh - ch)
    return _frame_phase(spec, t) * pref * bracket


def stationary_spectrum(delta_k, spec: ArraySpec, gamma: float):
    """Wiener-Khinchine spectrum at D_a for a single ring, in the published form

        4|g|^2 kappa Gamma / ([4|g|^2 - 2 dk (dk + Delta)]^2 + kappa^2 dk^2)
    """
    dk = np.asarray(delta_k, dtype=float)
    g2 = abs(spec.g) ** 2
    if g2 == 0:
        return np.zeros_like(dk)
    kappa = spec.kappa[0]
    delta = spec.delta_atom
    return 4 * g2 * kappa * gamma / ((4 * g2 - 2 * dk * (dk + delta)) ** 2 + kappa**2 * dk**2)


def emission_density(omega, spec: ArraySpec):
    """``|A(omega)|^2`` of the single-ring output, A(omega) = int A(t) e^{i omega t} dt.

    Frequencies are measured in the simulation frame, where a component
    ``exp(-i omega t)`` sits at ``+omega``; this is the mirror image
    (omega -> -omega) of the published stationary formula, without the
    filter-width factor.
    """
    w = np.asarray(omega, dtype=float)
    g2 = abs(spec.g) ** 2
    kappa = spec.kappa[0]
    delta = spec.delta_cavity[0] - spec.atom_energy
    w = w - spec.atom_energy
    return 4 * kappa * g2 / ((4 * g2 - 2 * w * (w - delta)) ** 2 + kappa**2 * w**2)


def filtered_stationary_spectrum(delta_k, spec: ArraySpec, gamma: float):
    """Long-time synthesized spectrum of a single ring behind a filter of width ``gamma``.

    Parseval applied to the filtered field gives

        N_S(inf) = (Gamma / 2 pi) int |A(w)|^2 / (Gamma^2 + (w - dk)^2) dw,

    evaluated here by adaptive quadrature.
    """
    dk = np.atleast_1d(np.asarray(delta_k, dtype=float))
    sol = laplace_solution(spec)
    # quadrature breakpoints at the emission peaks and the filter centre
    peaks = [float(-p.imag) + spec.atom_energy for p in sol.poles]
    out = np.empty(dk.shape)
    for i, d in enumerate(dk):

        def integrand(w, d=d):
            return emission_density(w, spec) / (gamma**2 + (w - d) ** 2)

        pts = sorted({d, *peaks})
        lo, hi = pts[0] - 50.0, pts[-1] + 50.0
        val, _ = integrate.quad(integrand, lo, hi, points=pts, limit=400, epsabs=0, epsrel=1e-11)
        tail_l, _ = integrate.quad(integrand, -np.inf, lo, epsabs=0, epsrel=1e-10)
        tail_r, _ = integrate.quad(integrand, hi, np.inf, epsabs=0, epsrel=1e-10)
        out[i] = gamma / (2 * np.pi) * (val + tail_l + tail_r)
    return out if np.ndim(delta_k) else out[0]
