"""Accuracy of coefficients fitted to a computed spectrum versus fit order."""

import argparse

from dampwave import Problem, closed_form_c012, compute_spectrum, fit_coefficients


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", default="x")
    ap.add_argument("--b", default="0")
    ap.add_argument("--lo", type=int, default=10)
    ap.add_argument("--hi", type=int, default=60)
    ap.add_argument("--m", type=int, nargs="+", default=[3, 4, 5, 6, 7, 8])
    args = ap.parse_args()
    p = Problem.from_text(args.a, args.b)
    spec = compute_spectrum(p, args.hi)
    ref = closed_form_c012(p.a, p.b, p.grid)
    print(f"{'m':>2} {'|dc0|':>10} {'|dc1|':>10} {'|dc2|':>10} {'cond':>10}")
    for m in args.m:
        fit = fit_coefficients(spec, m, range(args.lo, args.hi + 1))
        err = [abs(fit.coeffs.c[j] - ref[j]) for j in range(3)]
        print(f"{m:2d} " + " ".join(f"{e:10.2e}" for e in err) + f" {fit.condition:10.2e}")


if __name__ == "__main__":
    main()
