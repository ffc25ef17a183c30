from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .expr import Expr, differentiate, parse, reflect, to_program
from .funcspace import ChebGrid, GridFn, sample

__all__ = ["Problem"]


@dataclass(frozen=True)
class Problem:
    """Coefficient profiles of ``u'' = (lam^2 + 2 lam a(x) - b(x)) u`` plus
    the numerical settings every solver reads.
    """

    a: Expr
    b: Expr = field(default_factory=lambda: parse("0"))
    m: int = 4
    grid_M: int = 64
    colloc_N: int = 96
    ode_tol: float = 1e-12
    ode_atol: float = 1e-14
    newton_tol: float = 1e-11
    max_iter: int = 25
    resid_tol: float = 1e-6

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("asymptotic order m must be >= 1")
        for name in ("ode_tol", "ode_atol", "newton_tol", "resid_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_text(cls, a: str, b: str = "0", **settings) -> "Problem":
        return cls(parse(a), parse(b), **settings)

    def with_settings(self, **settings) -> "Problem":
        return replace(self, **settings)

    def reflected(self) -> "Problem":
        """Same settings, profiles composed with ``x -> 1 - x``."""
        return replace(self, a=reflect(self.a), b=reflect(self.b))

    @cached_property
    def grid(self) -> ChebGrid:
        return ChebGrid(self.grid_M)

    @cached_property
    def programs(self):
        return to_program(self.a), to_program(self.b)

    def a_on_grid(self, grid: ChebGrid | None = None) -> GridFn:
        return sample(self.a, grid or self.grid)

    def b_on_grid(self, grid: ChebGrid | None = None) -> GridFn:
        return sample(self.b, grid or self.grid)

    def derivative_of(self, which: str, order: int) -> Expr:
        e = getattr(self, which)
        return e if order == 0 else differentiate(e, order)

    def mean_b(self) -> float:
        g = self.grid
        return float(g.weights @ np.asarray(sample(self.b, g).values))
