"""Exception types and the infeasibility marker shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class CavityHeraldError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CavityHeraldError, ValueError):
    """A parameter lies outside its mathematical domain (non-finite, negative rate, ...)."""


class ConfigurationError(CavityHeraldError, ValueError):
    """A structurally invalid configuration (bad grid, wrong cavity type for a mode, ...)."""


class DegenerateOutcomeError(CavityHeraldError, ArithmeticError):
    """Both heralding probabilities vanish, so fidelities are undefined."""


class NumericError(CavityHeraldError, RuntimeError):
    """A numerical procedure failed to converge or produced non-finite values."""


@dataclass(frozen=True)
class Infeasible:
    """Returned in place of a value when a closed-form condition has no solution.

    Evaluates as false, so ``if not result:`` reads naturally at call sites.
    """

    reason: str

    def __bool__(self) -> bool:
        return False


class InfeasibleError(CavityHeraldError):
    """An operation needs a feasible entangling condition that does not exist."""
