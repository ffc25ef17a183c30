"""Collocation oracle for the quadratic eigenvalue problem.

Interior Chebyshev collocation of ``u'' + b u - 2 lam a u = lam^2 u`` with
``u(0) = u(1) = 0``, linearised on ``(u, lam u)`` to a real ``2N x 2N``
matrix and handed to LAPACK.  Discretisation modes that are not eigenvalues
of the continuous problem are removed by checking gamma0 from the shooting
module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import EigensolverFailure
from .funcspace import ChebGrid, cheb_diff_matrix
from .expr import evaluate
from .problem import Problem
from .shooting import gamma0

__all__ = ["CollocationSystem", "OracleSpectrum", "discretize", "solve_qep", "order_spectrum"]

MAX_N = 256


@dataclass(frozen=True, eq=False)
class CollocationSystem:
    N: int
    nodes: np.ndarray  # interior nodes
    D2: np.ndarray
    A_diag: np.ndarray
    B_diag: np.ndarray
    problem: Problem

    def companion(self) -> np.ndarray:
        N = self.N
        top = np.hstack([np.zeros((N, N)), np.eye(N)])
        bottom = np.hstack([self.D2 + np.diag(self.B_diag), -2.0 * np.diag(self.A_diag)])
        return np.vstack([top, bottom])


@dataclass(frozen=True, eq=False)
class OracleSpectrum:
    eigenvalues: np.ndarray  # kept, sorted by imaginary part
    residuals: np.ndarray
    raw: np.ndarray  # all 2N eigenvalues of the companion matrix

    @property
    def upper(self) -> np.ndarray:
        """Kept eigenvalues with Im >= 0 in ascending Im order."""
        return order_spectrum(self.eigenvalues[self.eigenvalues.imag >= 0])


def order_spectrum(z) -> np.ndarray:
    """Sort by increasing Im; ties (real eigenvalues) by decreasing Re."""
    z = np.asarray(z, dtype=complex)
    idx = np.lexsort((-z.real, z.imag))
    return z[idx]


def discretize(problem: Problem, N: int | None = None) -> CollocationSystem:
    N = problem.colloc_N if N is None else int(N)
    if N < 16:
        raise ValueError("collocation needs N >= 16 interior nodes")
    if N > MAX_N:
        raise ValueError(f"collocation size capped at N = {MAX_N}")
    M = N + 2
    D = cheb_diff_matrix(M)
    D2 = (D @ D)[1:-1, 1:-1]
    x = ChebGrid(M).nodes[1:-1].copy()
    return CollocationSystem(N, x, D2, evaluate(problem.a, x), evaluate(problem.b, x), problem)


def solve_qep(system: CollocationSystem, resid_tol: float | None = None) -> OracleSpectrum:
    problem = system.problem
    resid_tol = problem.resid_tol if resid_tol is None else resid_tol
    try:
        raw = scipy.linalg.eigvals(system.companion(), check_finite=True)
    except (scipy.linalg.LinAlgError, ValueError) as err:
        raise EigensolverFailure(str(err)) from err
    # beyond roughly 2N/pi modes the grid cannot resolve the eigenfunction
    reach = (2.0 * system.N + 2.0 * np.max(np.abs(system.A_diag))
             + np.sqrt(np.max(np.abs(system.B_diag))))
    kept, res = [], []
    for lam in raw:
        if abs(lam) > reach:
            continue
        r = gamma0(problem, lam).abs_gamma0
        if r <= resid_tol:
            kept.append(lam)
            res.append(r)
    kept = np.asarray(kept, dtype=complex)
    res = np.asarray(res, dtype=float)
    order = np.lexsort((-kept.real, kept.imag))
    return OracleSpectrum(kept[order], res[order], raw)
