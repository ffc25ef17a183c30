"""The characteristic function gamma0(lam) = u(1, lam) and its zeros.

``u`` solves ``u'' = (lam^2 + 2 lam a - b) u`` with ``u(0) = 0, u'(0) = 1``;
zeros of gamma0 are exactly the Dirichlet eigenvalues.  The derivative in
``lam`` comes from the variational equation integrated alongside.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .errors import ContourTooClose, DerivativeBreakdown, NoConvergence, StepSizeUnderflow
from .expr import evaluate
from .problem import Problem

__all__ = [
    "ShootingResult",
    "Root",
    "CountingBox",
    "gamma0",
    "refine",
    "count_in_box",
    "contour_integral",
]

MAX_STEPS = 5_000_000


@dataclass(frozen=True)
class ShootingResult:
    """gamma0 and its derivative at ``lam``.

    Both are stored as mantissas sharing the factor ``exp(log_scale)`` so
    that ratios stay finite when |Re lam| is large.
    """

    lam: complex
    u1: complex
    v1: complex
    log_scale: float
    ode_steps: int
    tolerance_used: float

    def _scaled(self, z: complex) -> complex:
        if z == 0:
            return 0j
        log_mag = math.log(abs(z)) + self.log_scale
        if log_mag > 709.0:
            return complex(math.inf, math.inf)
        return z * math.exp(self.log_scale)

    @property
    def gamma0(self) -> complex:
        return self._scaled(self.u1)

    @property
    def dgamma0(self) -> complex:
        return self._scaled(self.v1)

    @property
    def abs_gamma0(self) -> float:
        if self.u1 == 0:
            return 0.0
        return math.exp(min(math.log(abs(self.u1)) + self.log_scale, 709.0))

    @property
    def log_abs_dgamma0(self) -> float:
        return -math.inf if self.v1 == 0 else math.log(abs(self.v1)) + self.log_scale

    @property
    def newton_step(self) -> complex:
        """gamma0 / gamma0'."""
        return self.u1 / self.v1

    @property
    def log_derivative(self) -> complex:
        """gamma0' / gamma0."""
        return self.v1 / self.u1


@dataclass(frozen=True)
class Root:
    lam: complex
    residual: float
    iterations: int


@dataclass(frozen=True)
class CountingBox:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("box index n must be positive")

    @property
    def half_side(self) -> float:
        return math.pi * (self.n + 0.5)


def gamma0(problem: Problem, lam: complex, ode_tol: float | None = None) -> ShootingResult:
    tol = problem.ode_tol if ode_tol is None else ode_tol
    atol = problem.ode_atol * tol / problem.ode_tol
    (a_ops, a_c, a_depth), (b_ops, b_c, b_depth) = problem.programs
    lam = complex(lam)
    if not cmath.isfinite(lam):
        raise ValueError(f"lambda must be finite, got {lam}")
    u1, v1, log_scale, steps, status, x = _kernel.shoot(
        lam, a_ops, a_c, b_ops, b_c, max(a_depth, b_depth), tol, atol, MAX_STEPS)
    if status == _kernel.NON_FINITE:
        # surfaces a DomainError if the profile is at fault
        evaluate(problem.a, x)
        evaluate(problem.b, x)
        raise StepSizeUnderflow(f"non-finite state at x={x} for lambda={lam}")
    if status != _kernel.OK:
        raise StepSizeUnderflow(
            f"integrator could not meet tolerance {tol:g} at x={x:.6g} for lambda={lam}")
    return ShootingResult(lam, complex(u1), complex(v1), float(log_scale), int(steps), tol)


def refine(problem: Problem, guess: complex, *, ode_tol: float | None = None,
           newton_tol: float | None = None, max_iter: int | None = None) -> Root:
    """Newton iteration on gamma0 starting from ``guess``."""
    tol = problem.newton_tol if newton_tol is None else newton_tol
    max_iter = problem.max_iter if max_iter is None else max_iter
    lam = complex(guess)
    reach = 10.0 * (1.0 + abs(lam))
    best, best_res = lam, math.inf
    for it in range(1, max_iter + 1):
        r = gamma0(problem, lam, ode_tol)
        if r.abs_gamma0 < best_res:
            best, best_res = lam, r.abs_gamma0
        if r.log_abs_dgamma0 < math.log(1e-300):
            raise DerivativeBreakdown(
                f"|gamma0'| underflow at lambda={lam} (suspected multiple root)")
        step = r.newton_step
        lam = lam - step
        if not cmath.isfinite(lam) or abs(lam - guess) > reach:
            raise NoConvergence(f"Newton iterates diverged from guess {guess}",
                                best=best, residual=best_res)
        if abs(step) <= tol * (1.0 + abs(lam)):
            final = gamma0(problem, lam, ode_tol)
            return Root(lam, final.abs_gamma0, it)
    raise NoConvergence(f"Newton did not converge in {max_iter} iterations from {guess}",
                        best=best, residual=best_res)


def _square(half_side: float, N: int) -> np.ndarray:
    """``N`` nodes (``N % 4 == 0``) counterclockwise on the square boundary."""
    s = half_side
    corners = [complex(s, -s), complex(s, s), complex(-s, s), complex(-s, -s)]
    per = N // 4
    t = np.arange(per) / per
    pieces = [c0 + (c1 - c0) * t for c0, c1 in zip(corners, corners[1:] + corners[:1])]
    return np.concatenate(pieces)


def contour_integral(problem: Problem, half_side: float, *, start_nodes: int = 64,
                     max_nodes: int = 2**16, tol: float = 1e-3):
    """Winding number of gamma0 around the square of the given half side.

    Composite trapezoid rule for ``(1/2 pi i) \\oint gamma0'/gamma0``, doubling
    the node count until two successive values agree and sit within ``tol``
    of an integer.  Returns ``(value, nodes_used)``.
    """

    def logderiv(z):
        r = gamma0(problem, z)
        if r.u1 == 0:
            raise ContourTooClose(f"gamma0 vanishes on the contour at {z}")
        return r.log_derivative

    N = start_nodes
    z = _square(half_side, N)
    f = np.array([logderiv(zk) for zk in z])
    previous = None
    while True:
        dz = (np.roll(z, -1) - np.roll(z, 1)) / 2
        value = complex(np.sum(f * dz) / (2j * math.pi))
        near = abs(value - round(value.real))
        if near <= tol and previous is not None and abs(value - previous) <= tol:
            return value, N
        if 2 * N > max_nodes:
            raise ContourTooClose(
                f"contour count did not settle (last value {value:.6g} with {N} nodes); "
                "an eigenvalue may lie on or near the contour")
        previous = value
        mid = 0.5 * (z + np.roll(z, -1))
        fm = np.array([logderiv(zk) for zk in mid])
        z = np.stack([z, mid], axis=1).ravel()
        f = np.stack([f, fm], axis=1).ravel()
        N *= 2


def count_in_box(problem: Problem, box: CountingBox | int) -> int:
    """Number of eigenvalues (with multiplicity) inside the square of half side pi(n + 1/2)."""
    if not isinstance(box, CountingBox):
        box = CountingBox(int(box))
    value, _ = contour_integral(problem, box.half_side)
    return int(round(value.real))
