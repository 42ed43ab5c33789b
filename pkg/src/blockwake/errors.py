"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class BlockwakeError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(BlockwakeError):
    """Invalid configuration value (bounds, weights, landscape constants)."""


class DomainError(BlockwakeError):
    """A point or index lies outside its parameter space."""


class EvaluationError(BlockwakeError):
    """The objective returned a non-finite value for a point."""

    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point


class CacheCapacityError(BlockwakeError):
    """Memo cache is full; insertions are rejected, never evicted."""


class StructureParseError(BlockwakeError):
    """Malformed search-structure name."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} (position {position} in {text!r})")
        self.text = text
        self.position = position


class StructureValidationError(BlockwakeError):
    """Structure name parsed but describes an impossible block layout."""


class PlanError(BlockwakeError):
    """A sweep plan cannot be built or executed as requested."""


class NonTerminatingStructureError(PlanError):
    """Block expansion stopped advancing before covering the arrangement."""


class DegenerateStructureError(BlockwakeError):
    """Net search size is zero, so commonality ratios are undefined."""


class BudgetError(BlockwakeError):
    """Full enumeration would exceed the configured evaluation budget."""

    def __init__(self, message: str, required: int, budget: int):
        super().__init__(message)
        self.required = required
        self.budget = budget
