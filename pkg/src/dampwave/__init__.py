"""Dirichlet spectrum of the damped wave operator u'' = (lam^2 + 2 lam a - b) u on (0, 1)."""

from .analysis import (Spectrum, TraceReport, compute_spectrum, constant_damping_gap,
                       fit_coefficients, odd_even_invariants, reflection_check, trace_report)
from .asymptotics import (AsymptoticCoeffs, asymptotic_coeffs, closed_form_c012, guess,
                          invert_eigenvalue_relation, phi_recurrence)
from .expr import DomainError, ExprSyntaxError, differentiate, evaluate, parse
from .funcspace import ChebGrid, GridFn, derivative, mean, sample
from .problem import Problem
from .qep import discretize, solve_qep
from .shooting import CountingBox, count_in_box, gamma0, refine

__version__ = "0.1.0"

__all__ = [
    "AsymptoticCoeffs", "ChebGrid", "CountingBox", "DomainError", "ExprSyntaxError", "GridFn",
    "Problem", "Spectrum", "TraceReport", "asymptotic_coeffs", "closed_form_c012",
    "compute_spectrum", "constant_damping_gap", "count_in_box", "derivative", "differentiate",
    "discretize", "evaluate", "fit_coefficients", "gamma0", "guess", "invert_eigenvalue_relation",
    "mean", "odd_even_invariants", "parse", "phi_recurrence", "reflection_check", "refine",
    "sample", "solve_qep", "trace_report",
]
