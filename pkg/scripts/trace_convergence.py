"""Convergence of the regularised trace with the partial-sum cutoff N."""

import argparse

from dampwave import Problem, compute_spectrum, trace_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", default="x^2")
    ap.add_argument("--b", default="0")
    ap.add_argument("--N", type=int, nargs="+", default=[25, 50, 100, 200])
    args = ap.parse_args()
    p = Problem.from_text(args.a, args.b)
    spec = compute_spectrum(p, max(args.N))
    print(f"a = {args.a}, b = {args.b}")
    print(f"{'N':>5} {'partial':>20} {'tail':>12} {'rhs':>20} {'gap':>10}")
    for N in args.N:
        r = trace_report(p, spec, N)
        print(f"{N:5d} {r.partial_sum:20.15f} {r.tail_correction:12.3e} {r.rhs:20.15f} {r.gap:10.2e}")


if __name__ == "__main__":
    main()
