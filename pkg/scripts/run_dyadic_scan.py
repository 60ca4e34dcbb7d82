#!/usr/bin/env python3
"""Run the multi-scale decomposition on independent weight fields and report
how often a passing scale is found.

Each scan walks scales n_j = ceil((1+eta)^j) for j = k down to ceil(k/2),
tests the line-to-point event A_j against the threshold
4 n_{j-1} - C n_{j-1}^{1/3} (loglog n_{j-1})^{1/3}, and verifies the
splitting inequality T_n <= (line-to-point) + (point-to-line) at the
selected scale.
"""

import argparse

from betalpp.experiments import dyadic_scan


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scans", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--k", type=int, default=10)
    parser.add_argument("--eta", type=float, default=1.0)
    parser.add_argument("--threshold-const", type=float, default=1.0)
    args = parser.parse_args()

    hits = 0
    violations = 0
    for s in range(args.scans):
        scan = dyadic_scan(seed=args.seed + s, k=args.k, eta=args.eta,
                           threshold_const=args.threshold_const)
        if scan.tau is not None:
            hits += 1
        if not scan.sandwich_ok:
            violations += 1
    print(f"k={args.k} eta={args.eta} C={args.threshold_const}  "
          f"scans={args.scans}  tau found: {hits} "
          f"({hits / args.scans:.2%})  sandwich violations: {violations}")
    raise SystemExit(0 if violations == 0 else 2)


if __name__ == "__main__":
    main()
