"""Single photons from an atom-cavity source through cascaded ring resonators."""

__version__ = "0.1.0"

from .analytic import (
    amplitude_cavity2,
    amplitudes_single,
    filtered_stationary_spectrum,
    laplace_solution,
    stationary_spectrum,
)
from .classical import ClassicalRingSpec, classical_transfer, correspondence_error, inout_transfer
from .dynamics import JumpSample, TrajectoryResult, evolve, jump_rates, sample_trajectories
from .model import ArraySpec, CascadeOperators, StateVector, build_cascade, output_amplitude_a
from .raman import Pulse, RamanSpec, build_raman_cascade, effective_coupling, run_raman
from .spectra import (
    FilterSpec,
    SpectrumResult,
    filtered_amplitude,
    spectrum_grid,
    synthesized_spectrum,
    time_dependent_spectrum,
)

__all__ = [
    "ArraySpec",
    "CascadeOperators",
    "ClassicalRingSpec",
    "FilterSpec",
    "JumpSample",
    "Pulse",
    "RamanSpec",
    "SpectrumResult",
    "StateVector",
    "TrajectoryResult",
    "amplitude_cavity2",
    "amplitudes_single",
    "build_cascade",
    "build_raman_cascade",
    "classical_transfer",
    "correspondence_error",
    "effective_coupling",
    "evolve",
    "filtered_amplitude",
    "filtered_stationary_spectrum",
    "inout_transfer",
    "jump_rates",
    "laplace_solution",
    "output_amplitude_a",
    "run_raman",
    "sample_trajectories",
    "spectrum_grid",
    "stationary_spectrum",
    "synthesized_spectrum",
    "time_dependent_spectrum",
]
