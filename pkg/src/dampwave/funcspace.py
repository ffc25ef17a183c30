"""Functions on [0, 1] sampled at Chebyshev-Lobatto points.

Nodes are ``x_k = (1 - cos(k*pi/(M-1)))/2`` in ascending order, so both
endpoints are grid points.  Quadrature is Clenshaw-Curtis and
differentiation uses the collocation matrix of the interpolant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .expr import DomainError, Expr, evaluate

__all__ = [
    "ChebGrid",
    "GridFn",
    "sample",
    "mean",
    "derivative",
    "endpoint_values",
    "cheb_diff_matrix",
    "clenshaw_curtis_weights",
]


@lru_cache(maxsize=32)
def _lobatto(M: int) -> np.ndarray:
    k = np.arange(M)
    x = 0.5 * (1.0 - np.cos(np.pi * k / (M - 1)))
    x[0], x[-1] = 0.0, 1.0
    # sin form is symmetric about 1/2 to the last bit
    x[1:-1] = np.sin(0.5 * np.pi * k[1:-1] / (M - 1)) ** 2
    x.setflags(write=False)
    return x


@lru_cache(maxsize=32)
def cheb_diff_matrix(M: int) -> np.ndarray:
    """First-derivative collocation matrix on the ascending [0, 1] nodes."""
    N = M - 1
    k = np.arange(M)
    t = np.cos(np.pi * k / N)  # descending nodes on [-1, 1]
    c = np.ones(M)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** k
    dt = t[:, None] - t[None, :]
    D = np.outer(c, 1.0 / c) / (dt + np.eye(M))
    D -= np.diag(D.sum(axis=1))
    # x = (1 - t)/2, d/dx = -2 d/dt
    D = -2.0 * D
    D.setflags(write=False)
    return D


@lru_cache(maxsize=32)
def clenshaw_curtis_weights(M: int) -> np.ndarray:
    """Weights for the integral over [0, 1] on ``M`` Lobatto nodes."""
    N = M - 1
    theta = np.pi * np.arange(M) / N
    w = np.zeros(M)
    v = np.ones(N - 1)
    inner = slice(1, N)
    if N % 2 == 0:
        w[0] = w[N] = 1.0 / (N**2 - 1)
        for j in range(1, N // 2):
            v -= 2.0 * np.cos(2 * j * theta[inner]) / (4 * j * j - 1)
        v -= np.cos(N * theta[inner]) / (N**2 - 1)
    else:
        w[0] = w[N] = 1.0 / N**2
        for j in range(1, (N - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * j * theta[inner]) / (4 * j * j - 1)
    w[inner] = 2.0 * v / N
    w *= 0.5  # [-1, 1] -> [0, 1]
    w.setflags(write=False)
    return w


@dataclass(frozen=True)
class ChebGrid:
    M: int = 64

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 8:
            raise ValueError(f"grid needs M >= 8 nodes, got {self.M}")

    @property
    def nodes(self) -> np.ndarray:
        return _lobatto(self.M)

    @property
    def weights(self) -> np.ndarray:
        return clenshaw_curtis_weights(self.M)

    @property
    def D(self) -> np.ndarray:
        return cheb_diff_matrix(self.M)


@dataclass(frozen=True, eq=False)
class GridFn:
    """Samples of a real or complex function at the nodes of ``grid``."""

    grid: ChebGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.dtype.kind not in "fc":
            vals = vals.astype(float)
        if vals.shape != (self.grid.M,):
            raise ValueError(f"expected {self.grid.M} samples, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid function has non-finite samples")
        object.__setattr__(self, "values", vals)

    def _other(self, other):
        if isinstance(other, GridFn):
            if other.grid != self.grid:
                raise ValueError("grid functions live on different grids")
            return other.values
        return other

    def __add__(self, other):
        return GridFn(self.grid, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GridFn(self.grid, self.values - self._other(other))

    def __rsub__(self, other):
        return GridFn(self.grid, self._other(other) - self.values)

    def __mul__(self, other):
        return GridFn(self.grid, self.values * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return GridFn(self.grid, -self.values)

    def __call__(self, x):
        """Barycentric interpolation at arbitrary points of [0, 1]."""
        from scipy.interpolate import BarycentricInterpolator

        return BarycentricInterpolator(self.grid.nodes, self.values)(x)


def sample(e: Expr, grid: ChebGrid) -> GridFn:
    """Evaluate ``e`` at every node; a DomainError names the node index."""
    x = grid.nodes
    try:
        return GridFn(grid, evaluate(e, x))
    except DomainError as err:
        k = int(np.flatnonzero(x == err.x)[0]) if err.x is not None and np.any(x == err.x) else None
        err.node = k
        err.args = (f"{err.args[0]} (node k={k})",)
        raise


def mean(f: GridFn):
    """Clenshaw-Curtis approximation of the integral of ``f`` over [0, 1]."""
    return f.grid.weights @ f.values


def derivative(f: GridFn) -> GridFn:
    return GridFn(f.grid, f.grid.D @ f.values)


def endpoint_values(f: GridFn):
    return f.values[0], f.values[-1]
