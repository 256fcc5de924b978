"""Closed-form asymptotic measure across x and temperature, with the integrated check."""

import argparse

import numpy as np

from gaussnm.coeffs import ChannelParams, build_table
from gaussnm.nonmark import Channel, np_asymptotic, np_integrated


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--thetas", type=float, nargs="+", default=[10.0, 100.0, 1000.0])
    ap.add_argument("--check-x", type=float, default=0.1)
    ap.add_argument("--check-tau", type=float, default=200.0)
    args = ap.parse_args()

    xs = np.geomspace(0.1, 100.0, 13)
    print("x       " + "".join(f"theta={th:<10g}" for th in args.thetas))
    for x in xs:
        print(f"{x:<8.3g}" + "".join(f"{np_asymptotic(float(x), th):<16.6g}" for th in args.thetas))

    table = build_table(ChannelParams(x=args.check_x, tau_max=args.check_tau))
    val = np_integrated(table, Channel.QBM_EXACT)
    ref = np_asymptotic(args.check_x, 100.0)
    print(f"integrated over [0, {args.check_tau:g}] at x={args.check_x}: {val:.6f} vs asymptote {ref:.6f}")


if __name__ == "__main__":
    main()
