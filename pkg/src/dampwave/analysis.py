"""Spectra and the quantities computed from them.

Eigenvalues come in conjugate pairs; a :class:`Spectrum` stores the upper
half ``lam_1, lam_2, ...`` ordered by increasing imaginary part.  Zero
eigenvalues, if any, head the list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np
from scipy.optimize import linear_sum_assignment

from .asymptotics import AsymptoticCoeffs, asymptotic_coeffs, guess
from .errors import (CompletenessFailure, ContourTooClose, IllConditioned,
                     InsufficientSpectrum, NoConvergence)
from .expr import Expr, evaluate
from .funcspace import ChebGrid, GridFn, mean, sample
from .problem import Problem
from .qep import discretize, order_spectrum, solve_qep
from .shooting import contour_integral, gamma0, refine

__all__ = [
    "Spectrum",
    "TraceReport",
    "FitResult",
    "compute_spectrum",
    "count_zero_eigenvalues",
    "trace_report",
    "constant_damping_gap",
    "damping_verdict",
    "odd_even_invariants",
    "fit_coefficients",
    "reflection_check",
    "pair_distance",
]

Method = Literal["shooting", "oracle", "both"]

ZERO_TOL = 1e-10
FORWARD_CONST_TOL = 1e-6
INVERSE_CONST_TOL = 1e-3


@dataclass(frozen=True, eq=False)
class Spectrum:
    p: int
    upper: np.ndarray
    residuals: np.ndarray
    provenance: str
    guesses: np.ndarray | None = None
    certified: tuple[int, int] | None = None  # (box n, eigenvalue count inside)
    oracle_gap: float | None = None

    def __len__(self) -> int:
        return len(self.upper)

    def __getitem__(self, n: int) -> complex:
        """``lam_n`` for nonzero ``n``; negative indices give conjugates."""
        if n == 0:
            raise IndexError("eigenvalue indices start at 1")
        if n < 0:
            return complex(np.conj(self.upper[-n - 1]))
        return complex(self.upper[n - 1])

    def full(self) -> np.ndarray:
        """Upper half, its conjugates, and zeros, sorted by imaginary part."""
        nonzero = self.upper[self.p:]
        z = np.concatenate([np.conj(nonzero), np.zeros(2 * self.p), nonzero])
        return order_spectrum(z)


def count_zero_eigenvalues(problem: Problem) -> int:
    """1 when gamma0(0) vanishes, else 0; multiplicity is not resolved."""
    return int(gamma0(problem, 0.0).abs_gamma0 <= ZERO_TOL)


def _certify(problem: Problem, upper: np.ndarray, p: int, box_n: int):
    half = math.pi * (box_n + 0.5)
    try:
        value, _ = contour_integral(problem, half)
    except ContourTooClose:
        half *= 1.03
        value, _ = contour_integral(problem, half)
    count = int(round(value.real))
    inside = np.sum((np.abs(upper.real) < half) & (np.abs(upper.imag) < half))
    found = 2 * int(inside)
    if count != found:
        raise CompletenessFailure(
            f"box of half side {half:.6g} holds {count} eigenvalues but {found} were found",
            box=box_n, deficit=count - found)
    return box_n, count


def _shooting_spectrum(problem: Problem, n_max: int, coeffs: AsymptoticCoeffs | None,
                       certify_n: int | None) -> Spectrum:
    coeffs = coeffs or asymptotic_coeffs(problem)
    p = count_zero_eigenvalues(problem)
    roots = [0j] * p
    residuals = [gamma0(problem, 0.0).abs_gamma0] * p
    guesses = [0j] * p
    for n in range(p + 1, n_max + 1):
        g = guess(coeffs, n)
        r = refine(problem, g)
        if r.residual > problem.resid_tol:
            raise NoConvergence(f"eigenvalue {n}: residual {r.residual:.3g} above tolerance",
                                best=r.lam, residual=r.residual)
        roots.append(r.lam)
        residuals.append(r.residual)
        guesses.append(g)
    roots = np.asarray(roots, dtype=complex)
    if len(roots) > p + 1:
        nz = roots[p:]
        gaps = np.abs(nz[:, None] - nz[None, :]) + np.eye(len(nz))
        if gaps.min() < 1e-6:
            i, j = np.unravel_index(np.argmin(gaps), gaps.shape)
            raise CompletenessFailure(
                f"guesses {i + p + 1} and {j + p + 1} converged to the same eigenvalue "
                f"{nz[i]}", deficit=1)
    order = np.lexsort((-roots.real, roots.imag))
    roots = roots[order]
    residuals = np.asarray(residuals)[order]
    guesses = np.asarray(guesses)[order]
    certified = None
    box_n = min(n_max, 5) if certify_n is None else certify_n
    if box_n > 0:
        certified = _certify(problem, roots, p, box_n)
    return Spectrum(p, roots, residuals, "shooting", guesses, certified)


def _oracle_spectrum(problem: Problem, n_max: int, N: int | None) -> Spectrum:
    spec = solve_qep(discretize(problem, N))
    z = spec.eigenvalues
    # a double root at 0 is only resolved to ~sqrt(machine eps)
    zero = np.abs(z) < 1e-5
    p = int(round(np.sum(zero) / 2))
    idx = np.flatnonzero((~zero) & (z.imag >= 0))
    idx = idx[np.lexsort((-z[idx].real, z[idx].imag))]
    upper = np.concatenate([np.zeros(p, complex), z[idx]])
    res = np.concatenate([np.full(p, np.nan), spec.residuals[idx]])
    if len(upper) < n_max:
        raise InsufficientSpectrum(
            f"collocation with N={N or problem.colloc_N} resolves only {len(upper)} "
            f"eigenvalues, {n_max} requested")
    return Spectrum(p, upper[:n_max], res[:n_max], "oracle")


def compute_spectrum(problem: Problem, n_max: int, method: Method = "shooting", *,
                     coeffs: AsymptoticCoeffs | None = None, certify_n: int | None = None,
                     oracle_N: int | None = None) -> Spectrum:
    """Upper-half eigenvalues ``lam_1..lam_{n_max}``.

    ``shooting`` refines asymptotic guesses by Newton's method and checks
    completeness with an argument-principle count on the box of index
    ``certify_n`` (default ``min(n_max, 5)``; 0 disables the check).
    ``oracle`` takes the collocation eigenvalues.  ``both`` returns the
    shooting spectrum with ``oracle_gap`` set to the largest distance
    between paired eigenvalues of the two methods.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if method == "oracle":
        return _oracle_spectrum(problem, n_max, oracle_N)
    if method not in ("shooting", "both"):
        raise ValueError(f"unknown method {method!r}")
    spec = _shooting_spectrum(problem, n_max, coeffs, certify_n)
    if method == "shooting":
        return spec
    orc = solve_qep(discretize(problem, oracle_N)).upper
    k = min(len(orc), len(spec.upper))
    gap = float(np.max(np.abs(orc[:k] - spec.upper[:k]))) if k else math.nan
    return Spectrum(spec.p, spec.upper, spec.residuals, "shooting", spec.guesses,
                    spec.certified, gap)


@dataclass(frozen=True)
class TraceReport:
    N: int
    partial_sum: float
    tail_correction: float
    total: float
    rhs: float
    gap: float


def trace_report(problem: Problem, spectrum: Spectrum, N: int = 200,
                 coeffs: AsymptoticCoeffs | None = None) -> TraceReport:
    """Compare the regularised eigenvalue sum with its closed form.

    The partial sum over ``n <= N`` is completed with the tail
    ``2 c_2 sum_{n>N} n^-2 ~ 2 c_2 (1/N - 1/(2N^2))``.
    """
    if len(spectrum.upper) < N:
        raise InsufficientSpectrum(f"need {N} eigenvalues, spectrum has {len(spectrum.upper)}")
    if coeffs is None or coeffs.m < 3:
        coeffs = asymptotic_coeffs(problem, max(3, problem.m))
    c0 = coeffs.c[0].real
    c2 = coeffs.c[2].real
    lam = spectrum.upper[:N]
    partial = float(2.0 * np.sum(lam.real - c0))
    tail = float(2.0 * c2 * (1.0 / N - 0.5 / N**2))
    a0, a1 = evaluate(problem.a, 0.0), evaluate(problem.a, 1.0)
    rhs = float(0.5 * (a0 + a1) - mean(sample(problem.a, problem.grid)))
    total = partial + tail
    return TraceReport(N, partial, tail, total, rhs, abs(total - rhs))


def constant_damping_gap(c0: complex, c1: complex, mean_b: float) -> float:
    """``Re(2 pi i c_1 - <b> - c_0^2)``, the variance of ``a``; zero iff ``a`` is constant."""
    return float((2j * math.pi * c1 - mean_b - c0 * c0).real)


def damping_verdict(gap: float, tol: float = FORWARD_CONST_TOL) -> str:
    return "constant" if gap <= tol else "non-constant"


def odd_even_invariants(a: Expr, grid: ChebGrid | None = None) -> tuple[float, float]:
    """``(<odd^2>, <even * odd^2>)`` for the split of ``a`` about ``x = 1/2``."""
    grid = grid or ChebGrid()
    x = grid.nodes
    fwd = evaluate(a, x)
    back = evaluate(a, 1.0 - x)
    even = GridFn(grid, 0.5 * (fwd + back))
    odd = GridFn(grid, 0.5 * (fwd - back))
    return float(mean(odd * odd)), float(mean(even * odd * odd))


@dataclass(frozen=True, eq=False)
class FitResult:
    coeffs: AsymptoticCoeffs
    residual_norm: float
    condition: float


def fit_coefficients(spectrum: Spectrum, m: int, n_range: Iterable[int]) -> FitResult:
    """Least-squares fit of ``lam_n - pi n i`` on ``1, 1/n, ..., n^-(m-1)``."""
    n = np.asarray(list(n_range), dtype=int)
    if n.size < m + 2:
        raise ValueError(f"need at least {m + 2} indices to fit {m} coefficients")
    if n.min() < 1 or n.max() > len(spectrum.upper):
        raise InsufficientSpectrum(f"indices {n.min()}..{n.max()} outside the spectrum")
    y = spectrum.upper[n - 1] - np.pi * n * 1j
    A = np.power.outer(n.astype(float), -np.arange(m, dtype=float))
    scale = np.linalg.norm(A, axis=0)
    As = A / scale
    G = As.T @ As
    cond = float(np.linalg.cond(G))
    if cond > 1e12:
        raise IllConditioned(f"scaled normal equations have condition {cond:.3g}")
    c = np.linalg.solve(G, As.T @ y) / scale
    resid = float(np.linalg.norm(A @ c - y))
    return FitResult(AsymptoticCoeffs(m, c.astype(complex)), resid, cond)


def pair_distance(z1, z2) -> float:
    """Largest distance under the optimal one-to-one pairing."""
    z1, z2 = np.asarray(z1), np.asarray(z2)
    cost = np.abs(z1[:, None] - z2[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def reflection_check(problem: Problem, n_max: int, **kwargs) -> float:
    """Spectral distance between ``(a(x), b(x))`` and ``(a(1-x), b(1-x))``."""
    s1 = compute_spectrum(problem, n_max, **kwargs)
    s2 = compute_spectrum(problem.reflected(), n_max, **kwargs)
    return pair_distance(s1.upper, s2.upper)
