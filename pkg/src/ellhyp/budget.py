"""Truncation policy for infinite products and series."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgument


@dataclass(frozen=True)
class SeriesBudget:
    """Absolute tail tolerance plus a hard cap on the number of terms.

    Every infinite product/series in the package stops once its geometric
    tail bound drops below ``tail_tol``; if that has not happened within
    ``max_terms`` terms the evaluation raises ``BudgetExhausted`` instead
    of silently truncating.
    """

    tail_tol: float = 1e-16
    max_terms: int = 10_000

    def __post_init__(self) -> None:
        if not (self.tail_tol > 0.0):
            raise InvalidArgument("tail_tol must be positive")
        if self.max_terms < 1:
            raise InvalidArgument("max_terms must be at least 1")


DEFAULT_BUDGET = SeriesBudget()

# Relative guard distance to the nearest pole of a gamma-function lattice.
DEFAULT_POLE_GUARD = 1e-8
