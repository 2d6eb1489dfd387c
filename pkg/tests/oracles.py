"""Reference computations that share no code path with the package under test."""

from __future__ import annotations

import numpy as np
from scipy import linalg


def simpson_weights(n_points: int, h: float) -> np.ndarray:
    if (n_points - 1) % 2:
        raise ValueError("Simpson's rule needs an even number of intervals")
    w = np.ones(n_points)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return w * h / 3


def double_integral_spectrum(times, a_out, gamma, delta_k):
    """Counting rate at the last time point by brute-force 2-D quadrature.

    Builds the full (t1, t2) integrand
        gamma * exp(-(gamma - i dk)(t - t1)) exp(-(gamma + i dk)(t - t2)) conj(A(t1)) A(t2)
    and sums it with tensor-product Simpson weights.
    """
    t = times[-1]
    h = times[1] - times[0]
    w = simpson_weights(times.size, h)
    k1 = np.exp(-(gamma - 1j * delta_k) * (t - times))
    k2 = np.exp(-(gamma + 1j * delta_k) * (t - times))
    corr = np.outer(np.conj(a_out), a_out)
    integrand = gamma * k1[:, None] * k2[None, :] * corr
    return float(np.real(w @ integrand @ w))


def expm_propagate(h_nh: np.ndarray, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Exact propagation with the matrix exponential (uniform grid)."""
    step = linalg.expm(-1j * h_nh * (times[1] - times[0]))
    out = np.empty((times.size, psi0.size), dtype=complex)
    out[0] = psi0
    for i in range(1, times.size):
        out[i] = step @ out[i - 1]
    return out


def lyapunov_click_total(h_nh: np.ndarray, jump: np.ndarray, psi0: np.ndarray) -> float:
    """Total click probability int_0^inf |J psi(t)|^2 dt from a Lyapunov equation."""
    m = -1j * h_nh
    x = linalg.solve_continuous_lyapunov(m, -np.outer(psi0, psi0.conj()))
    return float(np.real(jump @ x @ jump.conj()))


def filtered_total(h_nh, jump, psi0, gamma, delta_k) -> float:
    """Long-time synthesized spectrum via the system augmented with a filter mode."""
    d = psi0.size
    m = np.zeros((d + 1, d + 1), dtype=complex)
    m[:d, :d] = -1j * h_nh
    m[d, :d] = np.sqrt(gamma) * jump
    m[d, d] = -(gamma + 1j * delta_k)
    x0 = np.concatenate([psi0, [0.0]])
    x = linalg.solve_continuous_lyapunov(m, -np.outer(x0, x0.conj()))
    return float(np.real(x[d, d]))


def local_minima(y: np.ndarray) -> np.ndarray:
    """Indices of strict interior local minima, by direct comparison."""
    return np.array([i for i in range(1, y.size - 1) if y[i] < y[i - 1] and y[i] <= y[i + 1]])
