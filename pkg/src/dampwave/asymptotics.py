"""Large-n expansion of the eigenvalues.

The fundamental solutions behave like ``exp(+-lam x +- int_0^x phi_+-)``
with ``phi_+- = sum_i phi_i^(+-) lam^-i``.  Substituting into the ODE gives
a triangular recurrence for the ``phi_i``.  The eigenvalue condition
``2 lam + <phi_+ + phi_->  = 2 pi n i`` is then solved as a formal series
in ``1/n``, which yields

    lam_n = pi n i + c_0 + c_1/n + c_2/n^2 + ...

The first three coefficients also have closed forms in terms of integrals
of ``a`` and ``b``; :func:`closed_form_c012` evaluates those directly and
serves as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import Sequence, Union

import numpy as np

from .expr import Expr, differentiate
from .funcspace import ChebGrid, GridFn, derivative, endpoint_values, mean, sample

__all__ = [
    "PhiTable",
    "TruncatedSeries",
    "AsymptoticCoeffs",
    "phi_recurrence",
    "series_mul",
    "series_recip",
    "invert_eigenvalue_relation",
    "closed_form_c012",
    "guess",
    "asymptotic_coeffs",
]

Profile = Union[Expr, GridFn]


@dataclass(frozen=True, eq=False)
class PhiTable:
    m: int
    phi_plus: tuple[GridFn, ...]
    phi_minus: tuple[GridFn, ...]
    d: np.ndarray  # d_i = <phi_i^+ + phi_i^->


def _jets_from_expr(e: Expr, order: int, grid: ChebGrid) -> list[np.ndarray]:
    out = [sample(e, grid).values]
    de = e
    for _ in range(order):
        de = differentiate(de, 1)
        out.append(sample(de, grid).values)
    return out


def _jets_from_samples(f: GridFn, order: int) -> list[np.ndarray]:
    out = [f.values]
    g = f
    for _ in range(order):
        g = derivative(g)
        out.append(g.values)
    return out


def phi_recurrence(a: Profile, b: Profile, m: int, grid: ChebGrid | None = None) -> PhiTable:
    """Tables of ``phi_i^(+-)`` for ``i = 0..m`` on ``grid``.

    For expression input every derivative the recurrence needs is obtained
    by differentiating the recurrence itself (Leibniz rule) on top of exact
    symbolic derivatives of ``a`` and ``b``, so nothing is differentiated on
    the grid.  Sampled input falls back to spectral differentiation.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if isinstance(a, GridFn):
        grid = a.grid
        A = _jets_from_samples(a, m + 1)
        B = _jets_from_samples(b if isinstance(b, GridFn) else sample(b, grid), m)
    else:
        grid = grid or ChebGrid()
        A = _jets_from_expr(a, m + 1, grid)
        B = (_jets_from_samples(b, m) if isinstance(b, GridFn)
             else _jets_from_expr(b, m, grid))

    tables = {}
    for sign in (1.0, -1.0):
        # jet[i][k] = k-th derivative of phi_i; phi_i needs derivatives up to m - i + 1
        jet: list[list[np.ndarray]] = [A[: m + 2]]
        for i in range(1, m + 1):
            depth = m - i + 1
            row = []
            for k in range(depth + 1):
                conv = np.zeros(grid.M)
                for j in range(i):
                    for l in range(k + 1):
                        conv = conv + comb(k, l) * jet[j][l] * jet[i - 1 - j][k - l]
                val = sign * jet[i - 1][k + 1] + conv
                if i == 1:
                    val = val + B[k]
                row.append(-0.5 * val)
            jet.append(row)
        tables[sign] = tuple(GridFn(grid, jet[i][0]) for i in range(m + 1))

    plus, minus = tables[1.0], tables[-1.0]
    d = np.array([mean(p + q) for p, q in zip(plus, minus)], dtype=complex)
    return PhiTable(m, plus, minus, d)


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """``sum_j coeffs[j] nu^j`` known up to and including ``nu^order``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def of(cls, values: Sequence[complex], order: int | None = None) -> "TruncatedSeries":
        c = np.asarray(values, dtype=complex)
        if order is not None:
            c = np.concatenate([c, np.zeros(max(0, order + 1 - c.size), complex)])[: order + 1]
        return cls(c)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.coeffs.size, other.coeffs.size)
        return TruncatedSeries(self.coeffs[:n] + other.coeffs[:n])

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return TruncatedSeries(self.coeffs * other)

    __rmul__ = __mul__

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``nu^k``, keeping the order."""
        c = np.zeros_like(self.coeffs)
        if k < c.size:
            c[k:] = self.coeffs[: c.size - k]
        return TruncatedSeries(c)


def series_mul(p: TruncatedSeries, q: TruncatedSeries) -> TruncatedSeries:
    n = min(p.coeffs.size, q.coeffs.size)
    return TruncatedSeries(np.convolve(p.coeffs[:n], q.coeffs[:n])[:n])


def series_recip(p: TruncatedSeries) -> TruncatedSeries:
    """``1/p`` by Newton iteration ``r <- r (2 - p r)``, doubling the precision."""
    c0 = p.coeffs[0]
    if c0 == 0:
        raise ZeroDivisionError("reciprocal of a series with zero constant term")
    n = p.coeffs.size
    r = np.array([1.0 / c0], dtype=complex)
    k = 1
    while k < n:
        k = min(2 * k, n)
        pk = p.coeffs[:k]
        rk = np.concatenate([r, np.zeros(k - r.size, complex)])
        e = np.convolve(pk, rk)[:k]
        e = -e
        e[0] += 2.0
        r = np.convolve(rk, e)[:k]
    return TruncatedSeries(r)


@dataclass(frozen=True, eq=False)
class AsymptoticCoeffs:
    m: int
    c: np.ndarray

    def guess(self, n: int) -> complex:
        return guess(self, n)


def invert_eigenvalue_relation(phi: PhiTable, m: int | None = None) -> AsymptoticCoeffs:
    """Coefficients ``c_0..c_{m-1}`` of the large-n eigenvalue expansion.

    With ``nu = 1/n`` and ``L = pi i`` write ``lam = L/nu + C(nu)``.  The
    eigenvalue condition becomes the fixed point

        C = -d_0/2 - 1/2 sum_{i>=1} d_i (nu/L)^i (1 + nu C / L)^{-i}

    which is iterated in truncated-series arithmetic.  Each sweep fixes one
    more coefficient.
    """
    m = phi.m if m is None else m
    if m < 1 or m > phi.m:
        raise ValueError(f"need 1 <= m <= {phi.m}, got {m}")
    L = math.pi * 1j
    order = m - 1
    d = phi.d
    C = TruncatedSeries.of([0], order)
    for _ in range(m + 2):
        mu = TruncatedSeries.of([1], order) + (C * (1 / L)).shift(1)
        inv_mu = series_recip(mu)
        acc = TruncatedSeries.of([-0.5 * d[0]], order)
        term = TruncatedSeries.of([1], order)
        for i in range(1, m):
            term = (term * inv_mu * (1 / L)).shift(1)
            acc = acc + term * (-0.5 * d[i])
        if np.array_equal(acc.coeffs, C.coeffs):
            break
        C = acc
    else:
        raise RuntimeError("series inversion did not become stationary")
    return AsymptoticCoeffs(m, C.coeffs.copy())


def closed_form_c012(a: Expr, b: Expr, grid: ChebGrid | None = None):
    """``(c_0, c_1, c_2)`` from their explicit integral formulas."""
    grid = grid or ChebGrid()
    av = sample(a, grid)
    w = av * av + sample(b, grid)
    ma = mean(av)
    mw = mean(w)
    da0, da1 = endpoint_values(sample(differentiate(a, 1), grid))
    c0 = complex(-ma)
    c1 = complex(mw / (2j * math.pi))
    c2 = complex((mean(av * w) - ma * mw + 0.5 * (da1 - da0)) / (2 * math.pi**2))
    return c0, c1, c2


def guess(coeffs: AsymptoticCoeffs, n: int) -> complex:
    """``pi n i + sum_j c_j n^-j``; negative ``n`` gives the conjugate."""
    n = int(n)
    if n == 0:
        raise ValueError("eigenvalue index n must be nonzero")
    if n < 0:
        return guess(coeffs, -n).conjugate()
    z = complex(math.pi * n * 1j)
    for j, cj in enumerate(coeffs.c):
        z += cj * float(n) ** (-j)
    return z


def asymptotic_coeffs(problem, m: int | None = None) -> AsymptoticCoeffs:
    m = problem.m if m is None else m
    phi = phi_recurrence(problem.a, problem.b, m, problem.grid)
    return invert_eigenvalue_relation(phi, m)
