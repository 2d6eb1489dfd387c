"""Time-dependent and synthesized spectra seen by a filtered detector at D_a.

The filter is one more cascaded mode with linewidth ``gamma`` centred at
``delta_k``:

    df/dt = -(gamma + i delta_k) f + sqrt(gamma) A(t)

The counting rate is ``N(t) = |f(t)|^2``.  This equals the double time integral
over the two-time output correlation because, for a single excitation with a
dark post-jump state, that correlation factorises into ``conj(A(t1)) A(t2)``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate, signal

from .dynamics import TrajectoryResult
from .model import output_amplitude_a

DEFAULT_GAMMA = 0.25
DEFAULT_DELTA_K = np.linspace(-15.0, 15.0, 601)


@dataclass(frozen=True)
class FilterSpec:
    gamma: float
    delta_k: float = 0.0

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError(f"gamma: filter width must be positive, got {self.gamma}")


@dataclass(frozen=True)
class SpectrumResult:
    """``n_t[k, j]`` and ``n_s[k, j]`` at ``delta_k_grid[k]`` and ``times[j]``."""

    delta_k_grid: np.ndarray
    times: np.ndarray
    n_t: np.ndarray
    n_s: np.ndarray
    gamma: float

    def at_time(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        j = int(np.argmin(np.abs(self.times - t)))
        return self.n_t[:, j], self.n_s[:, j]


def uniform_step(times: np.ndarray) -> float:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise ValueError("need at least two time points")
    steps = np.diff(times)
    dt = steps.mean()
    if np.max(np.abs(steps - dt)) > 1e-9 * max(dt, 1.0):
        raise ValueError("time grid must be uniform")
    return float(dt)


def midpoints(series: np.ndarray) -> np.ndarray:
    """Cubic-interpolated values halfway between consecutive samples."""
    a = np.asarray(series)
    n = a.size
    if n < 4:
        return 0.5 * (a[:-1] + a[1:])
    mid = np.empty(n - 1, dtype=a.dtype)
    mid[1:-1] = (-a[:-3] + 9 * a[1:-2] + 9 * a[2:-1] - a[3:]) / 16
    mid[0] = (5 * a[0] + 15 * a[1] - 5 * a[2] + a[3]) / 16
    mid[-1] = (5 * a[-1] + 15 * a[-2] - 5 * a[-3] + a[-4]) / 16
    return mid


def _rk4_filter_coefficients(rate: complex, drive: float, dt: float):
    """One RK4 step of f' = -rate f + drive b(t), written as P f + c0 b0 + cm bm + c1 b1."""

    def step(f, b0, bm, b1):
        k1 = -rate * f + drive * b0
        k2 = -rate * (f + dt / 2 * k1) + drive * bm
        k3 = -rate * (f + dt / 2 * k2) + drive * bm
        k4 = -rate * (f + dt * k3) + drive * b1
        return f + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    return step(1, 0, 0, 0), step(0, 1, 0, 0), step(0, 0, 1, 0), step(0, 0, 0, 1)


def filtered_amplitude(a_out, filt: FilterSpec, times) -> np.ndarray:
    """Filter-mode amplitude driven by the output field series ``a_out``.

    Integrates the filter equation with RK4 on the grid of ``a_out``; the
    drive at half steps is taken from a cubic interpolant so the scheme stays
    fourth order.  ``f(0) = 0``.
    """
    a = np.asarray(a_out, dtype=complex)
    dt = uniform_step(times)
    if a.shape != np.shape(times):
        raise ValueError("series and time grid lengths differ")
    return _filter(a, midpoints(a), filt.gamma, filt.delta_k, dt)


def _filter(a, a_mid, gamma, delta_k, dt):
    p, c0, cm, c1 = _rk4_filter_coefficients(gamma + 1j * delta_k, np.sqrt(gamma), dt)
    u = c0 * a[:-1] + cm * a_mid + c1 * a[1:]
    f = np.empty_like(a)
    f[0] = 0.0
    f[1:] = signal.lfilter([1.0], [1.0, -p], u)
    return f


def _output_series(traj: TrajectoryResult, ops) -> np.ndarray:
    if traj.amplitudes.shape[1] != ops.dim:
        raise ValueError("trajectory and operators have different dimensions")
    return output_amplitude_a(traj.amplitudes, ops)


def time_dependent_spectrum(traj: TrajectoryResult, ops, filt: FilterSpec) -> np.ndarray:
    """Counting rate ``N(t; delta_k, gamma)`` behind the filter, on the trajectory grid."""
    a = _output_series(traj, ops)
    f = filtered_amplitude(a, filt, traj.times)
    return np.abs(f) ** 2


def synthesized_spectrum(traj: TrajectoryResult, ops, filt: FilterSpec) -> np.ndarray:
    """Running time integral of the counting rate (trapezoid rule)."""
    n_t = time_dependent_spectrum(traj, ops, filt)
    return integrate.cumulative_trapezoid(n_t, traj.times, initial=0.0)


def spectrum_grid(
    traj: TrajectoryResult,
    ops,
    gamma: float,
    delta_k_grid,
    sample_times,
    *,
    workers: int | None = None,
) -> SpectrumResult:
    """Sweep the filter detuning and sample both spectra at ``sample_times``.

    Sample times snap to the nearest grid point.  With ``workers`` the sweep
    runs on a thread pool; each detuning writes its own row, so the result is
    identical to the sequential one.
    """
    FilterSpec(gamma)
    dks = np.atleast_1d(np.asarray(delta_k_grid, dtype=float))
    ts = np.atleast_1d(np.asarray(sample_times, dtype=float))
    if dks.size == 0 or ts.size == 0:
        raise ValueError("detuning and sample-time grids must be nonempty")
    if ts.size > 1 and np.any(np.diff(ts) <= 0):
        raise ValueError("sample_times must be strictly increasing")
    if ts[0] < traj.times[0] - 1e-12 or ts[-1] > traj.times[-1] + 1e-9:
        raise ValueError("sample_times outside the trajectory window")

    idx = np.array([traj.at(t) for t in ts])
    a = _output_series(traj, ops)
    a_mid = midpoints(a)
    dt = uniform_step(traj.times)
    n_t = np.empty((dks.size, ts.size))
    n_s = np.empty((dks.size, ts.size))

    def row(k: int) -> None:
        f = _filter(a, a_mid, gamma, dks[k], dt)
        rate = np.abs(f) ** 2
        cum = integrate.cumulative_trapezoid(rate, dx=dt, initial=0.0)
        n_t[k] = rate[idx]
        n_s[k] = cum[idx]

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(row, range(dks.size)))
    else:
        for k in range(dks.size):
            row(k)
    return SpectrumResult(dks, traj.times[idx], n_t, n_s, float(gamma))


def find_peaks_1d(x: np.ndarray, y: np.ndarray, *, rel_height: float = 0.05) -> list[tuple[float, float]]:
    """Local maxima of ``y(x)`` above ``rel_height * max(y)``, refined by a parabola."""
    y = np.asarray(y, dtype=float)
    found, _ = signal.find_peaks(y, height=rel_height * y.max())
    out = []
    for i in found:
        if 0 < i < y.size - 1:
            y0, y1, y2 = y[i - 1], y[i], y[i + 1]
            denom = y0 - 2 * y1 + y2
            shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
            h = x[1] - x[0]
            out.append((float(x[i] + shift * h), float(y1 - 0.25 * (y0 - y2) * shift)))
        else:
            out.append((float(x[i]), float(y[i])))
    return out
