"""Total detection probability of the Raman source versus pulse amplitude."""

import argparse

from ringcascade.raman import Pulse, RamanSpec, run_raman


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--omega0", type=float, nargs="+", default=[0.05, 0.1, 0.25, 0.5, 1.0])
    p.add_argument("--g", type=float, default=0.25)
    p.add_argument("--delta-raman", type=float, default=0.5)
    p.add_argument("--delta-c", type=float, default=0.25)
    p.add_argument("--tau-l", type=float, default=10.0)
    p.add_argument("--n-empty", type=int, default=1)
    p.add_argument("--no-stark", action="store_true")
    args = p.parse_args()
    n = args.n_empty + 1
    dt = min(0.01, args.tau_l / 100)
    print("omega0  detected  P_g(end)  omega0/2delta")
    for om in args.omega0:
        spec = RamanSpec(args.g, args.delta_raman, (args.delta_c,) * n, (1.0,) * n, Pulse(om, args.tau_l))
        traj, _ = run_raman(spec, args.n_empty, 8 * args.tau_l, dt, stark=not args.no_stark)
        detected = traj.p_det_a[-1] + traj.p_det_b[-1]
        print(f"{om:<7g} {detected:.4f}    {traj.p_basis[-1, 0]:.4f}    {spec.adiabaticity()['omega0_over_2delta']:.3g}")


if __name__ == "__main__":
    main()
