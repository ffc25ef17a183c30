"""``dws`` command line front end.

Usage::

    dws spectrum --config problem.json --out spectrum.csv
    dws trace --a "x^2"
    dws count --a 0 --n 3

Configuration comes from a JSON object (``--config``) overridden by flags.
Exit status: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass, fields
from typing import Any, Sequence

import numpy as np

from .analysis import (INVERSE_CONST_TOL, FORWARD_CONST_TOL, compute_spectrum,
                       constant_damping_gap, damping_verdict, fit_coefficients, pair_distance,
                       trace_report)
from .asymptotics import asymptotic_coeffs, closed_form_c012
from .errors import ContourTooClose, NumericalFailure
from .expr import DomainError, ExprSyntaxError, parse
from .problem import Problem
from .qep import discretize, solve_qep
from .shooting import contour_integral

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


@dataclass
class Config:
    a: str = ""
    b: str = "0"
    m: int = 4
    grid_M: int = 64
    colloc_N: int = 96
    n_max: int = 60
    ode_tol: float = 1e-12
    newton_tol: float = 1e-11
    resid_tol: float = 1e-6
    out: str | None = None
    trace_N: int = 200
    n: float = 3
    n_compare: int = 20
    fit_m: int = 6
    inverse: bool = False

    def validate(self) -> None:
        if not self.a:
            raise ValueError("no damping profile given (set 'a' in the config or pass --a)")
        for name in ("ode_tol", "newton_tol", "resid_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.trace_N < 1 or self.n <= 0 or self.n_compare < 1 or self.fit_m < 1:
            raise ValueError("trace_N, n, n_compare and fit_m must be positive")

    def problem(self) -> Problem:
        return Problem(parse(self.a), parse(self.b), m=self.m, grid_M=self.grid_M,
                       colloc_N=self.colloc_N, ode_tol=self.ode_tol,
                       newton_tol=self.newton_tol, resid_tol=self.resid_tol)


_ALIASES = {"output": "out"}


def load_config(path: str | None, overrides: dict[str, Any]) -> Config:
    values: dict[str, Any] = {}
    if path:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a single JSON object")
        known = {f.name: f for f in fields(Config)}
        for key, val in raw.items():
            key = _ALIASES.get(key, key)
            if key not in known:
                raise ValueError(f"unknown config key {key!r}")
            values[key] = val
    values.update({k: v for k, v in overrides.items() if v is not None})
    cfg = Config()
    for f in fields(Config):
        if f.name not in values:
            continue
        val = values[f.name]
        typ = type(getattr(cfg, f.name))
        try:
            if f.name == "out":
                val = None if val is None else str(val)
            elif typ is bool:
                if not isinstance(val, bool):
                    raise TypeError
            elif typ is int:
                if isinstance(val, bool) or float(val) != int(val):
                    raise TypeError
                val = int(val)
            elif typ is float:
                if isinstance(val, bool):
                    raise TypeError
                val = float(val)
            elif typ is str and not isinstance(val, str):
                raise TypeError
        except (TypeError, ValueError):
            raise ValueError(f"bad value for {f.name!r}: {val!r}") from None
        setattr(cfg, f.name, val)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# deterministic output


def fmt(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def to_json(obj: Any) -> str:
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt(x) if math.isfinite(x) else "null"
    if obj is None:
        return "null"
    return json.dumps(obj)


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _emit(cfg: Config, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_spectrum(cfg: Config) -> str:
    problem = cfg.problem()
    spec = compute_spectrum(problem, cfg.n_max)
    lines = ["n,re,im,residual,guess_re,guess_im,method"]
    for n in range(1, cfg.n_max + 1):
        lam = spec.upper[n - 1]
        g = spec.guesses[n - 1]
        lines.append(",".join([str(n), fmt(lam.real), fmt(lam.imag),
                               fmt(spec.residuals[n - 1]), fmt(g.real), fmt(g.imag),
                               spec.provenance]))
    return "\n".join(lines) + "\n"


def cmd_asymptotics(cfg: Config) -> str:
    problem = cfg.problem()
    coeffs = asymptotic_coeffs(problem, max(cfg.m, 3))
    closed = closed_form_c012(problem.a, problem.b, problem.grid)
    gap = max(abs(coeffs.c[j] - closed[j]) for j in range(3))
    c = coeffs.c[: cfg.m]
    return to_json({"c": [_pair(z) for z in c],
                    "closed_form_c012": [_pair(z) for z in closed],
                    "consistency_gap": gap}) + "\n"


def cmd_trace(cfg: Config) -> str:
    problem = cfg.problem()
    spec = compute_spectrum(problem, cfg.trace_N)
    rep = trace_report(problem, spec, cfg.trace_N)
    return to_json(dataclasses.asdict(rep)) + "\n"


def cmd_check_constant(cfg: Config) -> str:
    problem = cfg.problem()
    mean_b = problem.mean_b()
    if cfg.inverse:
        spec = compute_spectrum(problem, cfg.n_max)
        lo = min(10, max(1, cfg.n_max - cfg.fit_m - 1))
        fit = fit_coefficients(spec, cfg.fit_m, range(lo, cfg.n_max + 1))
        c = fit.coeffs.c
        tol = INVERSE_CONST_TOL
    else:
        c = asymptotic_coeffs(problem, max(cfg.m, 2)).c
        tol = FORWARD_CONST_TOL
    gap = constant_damping_gap(c[0], c[1], mean_b)
    return to_json({"gap": gap, "verdict": damping_verdict(gap, tol)}) + "\n"


def cmd_count(cfg: Config) -> str:
    problem = cfg.problem()
    value, _ = contour_integral(problem, math.pi * (cfg.n + 0.5))
    n = int(cfg.n) if float(cfg.n).is_integer() else cfg.n
    return to_json({"n": n, "count": int(round(value.real)),
                    "expected": 2 * int(math.floor(cfg.n))}) + "\n"


def cmd_compare_oracle(cfg: Config) -> str:
    problem = cfg.problem()
    k = min(cfg.n_compare, cfg.n_max)
    spec = compute_spectrum(problem, k)
    orc = solve_qep(discretize(problem)).upper
    if len(orc) < k:
        raise NumericalFailure(f"oracle resolved only {len(orc)} of {k} eigenvalues")
    return to_json({"max_pairwise_distance": pair_distance(spec.upper, orc[:k])}) + "\n"


COMMANDS = {
    "spectrum": cmd_spectrum,
    "asymptotics": cmd_asymptotics,
    "trace": cmd_trace,
    "check-constant": cmd_check_constant,
    "count": cmd_count,
    "compare-oracle": cmd_compare_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dws", description="Dirichlet spectrum of the 1-D damped wave operator")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="JSON file with problem settings")
    parser.add_argument("--a", help="damping profile a(x)")
    parser.add_argument("--b", help="potential b(x)")
    parser.add_argument("--m", type=int, help="asymptotic order")
    parser.add_argument("--grid-m", dest="grid_M", type=int, help="Chebyshev grid size")
    parser.add_argument("--colloc-n", dest="colloc_N", type=int, help="collocation size")
    parser.add_argument("--n-max", dest="n_max", type=int)
    parser.add_argument("--ode-tol", dest="ode_tol", type=float)
    parser.add_argument("--newton-tol", dest="newton_tol", type=float)
    parser.add_argument("--resid-tol", dest="resid_tol", type=float)
    parser.add_argument("--trace-n", dest="trace_N", type=int, help="trace partial-sum cutoff")
    parser.add_argument("--n", type=float, help="box index for 'count'")
    parser.add_argument("--n-compare", dest="n_compare", type=int)
    parser.add_argument("--fit-m", dest="fit_m", type=int)
    parser.add_argument("--inverse", action="store_true", default=None,
                        help="check-constant from coefficients fitted to the spectrum")
    parser.add_argument("--out", help="output path (default stdout)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = load_config(args.config, overrides)
        cfg.problem()
    except (ExprSyntaxError, DomainError, ValueError, OSError) as err:
        print(f"dws: input error: {err}", file=sys.stderr)
        return EXIT_INPUT
    try:
        text = COMMANDS[args.command](cfg)
    except ContourTooClose as err:
        print(f"dws: {err}\nadvice: retry with --n shifted by a fractional offset "
              f"(e.g. --n {cfg.n + 0.1:g})", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as err:
        print(f"dws: input error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalFailure as err:
        print(f"dws: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        _emit(cfg, text)
    except OSError as err:
        print(f"dws: cannot write output: {err}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
