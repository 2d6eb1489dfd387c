"""Five-ring versus two-ring suppression of the right spectral peak at a fixed time.

Prints the ratio under several readings of "right-peak N_S": value at the
trap detuning, refined peak height, area of the right half, whole-spectrum
area and total click probability at D_a.
"""

import argparse

import numpy as np

from ringcascade.dynamics import STEP_FRACTION, evolve
from ringcascade.model import ArraySpec, StateVector, build_cascade
from ringcascade.spectra import find_peaks_1d, spectrum_grid


def measures(n, args):
    spec = ArraySpec.chain(n, args.g, args.delta, delta_empty=args.trap)
    ops = build_cascade(spec)
    traj = evolve(ops, StateVector.excited_atom(n), args.t, STEP_FRACTION / ops.max_rate)
    dk = np.linspace(-15, 15, 601)
    n_s = spectrum_grid(traj, ops, args.gamma, dk, [args.t]).n_s[:, 0]
    at_trap = spectrum_grid(traj, ops, args.gamma, [args.trap], [args.t]).n_s[0, 0]
    right = dk > 0
    return {
        "at_trap": at_trap,
        "right_peak": max(h for x, h in find_peaks_1d(dk, n_s, rel_height=0.01) if x > 0),
        "right_area": np.trapezoid(n_s[right], dk[right]),
        "total_area": np.trapezoid(n_s, dk),
        "p_det_a": traj.p_det_a[-1],
    }


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--g", type=float, default=5.0)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--trap", type=float, default=7.32)
    p.add_argument("--gamma", type=float, default=0.25)
    p.add_argument("--t", type=float, default=6.0)
    p.add_argument("--rings", type=int, nargs="+", default=[2, 3, 4, 5])
    args = p.parse_args()
    rows = {n: measures(n, args) for n in args.rings}
    base = rows[args.rings[0]]
    keys = list(base)
    print("rings " + " ".join(f"{k:>11}" for k in keys))
    for n, row in rows.items():
        print(f"{n:<5} " + " ".join(f"{row[k] / base[k]:11.4f}" for k in keys))


if __name__ == "__main__":
    main()
