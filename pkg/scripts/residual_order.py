"""Scaled residual n^m |lam_n - guess_m(n)| of the asymptotic expansion."""

import argparse

from dampwave import Problem, asymptotic_coeffs, compute_spectrum, guess


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", default="x")
    ap.add_argument("--b", default="0")
    ap.add_argument("--m", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--n-max", type=int, default=64)
    args = ap.parse_args()
    p = Problem.from_text(args.a, args.b)
    spec = compute_spectrum(p, args.n_max)
    ns = [n for n in (4, 8, 16, 32, 48, 64) if n <= args.n_max]
    print("m  " + "".join(f"{'n=' + str(n):>12}" for n in ns))
    for m in args.m:
        c = asymptotic_coeffs(p, m)
        vals = [abs(spec[n] - guess(c, n)) * float(n) ** m for n in ns]
        print(f"{m:<3}" + "".join(f"{v:12.4e}" for v in vals))


if __name__ == "__main__":
    main()
