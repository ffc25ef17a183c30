"""Collocation error versus eigenvalue index for the undamped string.

Prints |lam_n - i pi n| for the collocation oracle at several grid sizes,
showing where polynomial resolution runs out.
"""

import argparse
import math

from dampwave import Problem
from dampwave.qep import discretize, solve_qep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", default="0")
    ap.add_argument("--N", type=int, nargs="+", default=[64, 96, 128])
    ap.add_argument("--n", type=int, nargs="+", default=[10, 20, 30, 40, 45, 50, 55])
    args = ap.parse_args()
    p = Problem.from_text(args.a)
    if args.a != "0":
        raise SystemExit("exact reference only available for a = 0")
    print("N    " + "".join(f"{'n=' + str(k):>11}" for k in args.n))
    for N in args.N:
        up = solve_qep(discretize(p, N)).upper
        row = []
        for k in args.n:
            row.append(f"{abs(up[k - 1] - 1j * math.pi * k):11.2e}" if k <= len(up) else f"{'-':>11}")
        print(f"{N:<5}" + "".join(row))


if __name__ == "__main__":
    main()
