"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, ClassVar


class WorkbenchError(RuntimeError):
    exit_code: ClassVar[int] = 1


class InputError(WorkbenchError, ValueError):
    """Malformed documents, out-of-range parameters and shape mismatches."""


class PolynomialSyntaxError(InputError):
    def __init__(self, message: str, *, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.reason = message
        self.line = line
        self.column = column


class PositiveDimensionalError(InputError):
    ...


class ResourceLimitError(WorkbenchError):
    exit_code: ClassVar[int] = 4


@dataclass(slots=True)
class GroebnerStats:
    pairs_processed: int = 0
    pairs_pending: int = 0
    basis_size: int = 0
    max_degree: int = 0
    zero_reductions: int = 0
    step: int | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "pairs_processed": self.pairs_processed,
            "pairs_pending": self.pairs_pending,
            "basis_size": self.basis_size,
            "max_degree": self.max_degree,
            "zero_reductions": self.zero_reductions,
            "step": self.step,
        }


class GroebnerLimitError(ResourceLimitError):
    def __init__(self, message: str, stats: GroebnerStats) -> None:
        super().__init__(f"{message}; partial stats: {stats.as_dict()}")
        self.stats = stats


class ConjugateRangeError(WorkbenchError):
    ...


class ResolutionError(WorkbenchError):
    ...


@dataclass(slots=True)
class Notices:
    """Collects human-readable notices that end up in reports."""

    items: list[str] = field(default_factory=list)

    def add(self, message: str) -> None:
        if message not in self.items:
            self.items.append(message)
