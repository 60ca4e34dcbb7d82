#!/usr/bin/env python3
"""Trace the rescaled passage time z_n = (T_n - 4n) / n^{1/3} along a single
coupled weight field and report its iterated-logarithm rescalings.

For each seed the script prints the running extremes of z_n / (loglog n)^{1/3}
(lower scaling) and z_n / (loglog n)^{2/3} (upper scaling), next to the
constants -192^{1/3}, -96^{1/3}, and 3^{2/3} the limits are compared against.
"""

import argparse

from betalpp.experiments import REFERENCE_LINES, run_lil


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=str, default="0,1,2,3",
                        help="comma-separated list of field seeds")
    parser.add_argument("--nmax", type=int, default=4096)
    parser.add_argument("--start-n", type=int, default=16)
    args = parser.parse_args()

    print("reference lines: "
          + ", ".join(f"{k}={v:.4f}" for k, v in REFERENCE_LINES.items()))
    for seed_str in args.seeds.split(","):
        seed = int(seed_str)
        trace = run_lil(seed=seed, nmax=args.nmax, start_n=args.start_n)
        last = trace.records[-1]
        print(f"seed={seed:4d}  n_max={last.n}  z_n={last.z_n:8.3f}  "
              f"min z/(ll n)^(1/3) = {trace.scaled_min[-1]:8.3f}  "
              f"max z/(ll n)^(2/3) = {trace.scaled_max[-1]:8.3f}")


if __name__ == "__main__":
    main()
