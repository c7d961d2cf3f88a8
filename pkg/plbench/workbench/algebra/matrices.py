from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from plbench.workbench.algebra.grammar import default_variables, render
from plbench.workbench.algebra.poly import ModuleElement, Polynomial
from plbench.workbench.core.exceptions import InputError


OPERATOR = "operator"
TRANSPOSE = "transpose"


@dataclass(frozen=True, slots=True)
class OperatorMatrix:
    """Rectangular grid of polynomials, tagged as A_j or its transpose."""

    entries: tuple[tuple[Polynomial, ...], ...]
    nvars: int
    orientation: str = OPERATOR

    def __post_init__(self) -> None:
        if self.orientation not in {OPERATOR, TRANSPOSE}:
            raise InputError(f"Unknown orientation '{self.orientation}'.")
        widths = {len(row) for row in self.entries}
        if len(widths) > 1:
            raise InputError("Ragged matrix: rows have different lengths.")
        for row in self.entries:
            for entry in row:
                if entry.nvars != self.nvars:
                    raise InputError("Matrix entries must share the variable count.")

    @classmethod
    def from_rows(cls, rows: Sequence[ModuleElement], nvars: int, orientation: str = OPERATOR) -> "OperatorMatrix":
        return cls(tuple(tuple(row.components) for row in rows), nvars, orientation)

    @classmethod
    def zeros(cls, rows: int, cols: int, nvars: int, orientation: str = OPERATOR) -> "OperatorMatrix":
        zero = Polynomial.zero(nvars)
        return cls(tuple(tuple(zero for _ in range(cols)) for _ in range(rows)), nvars, orientation)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), (len(self.entries[0]) if self.entries else 0)

    def rows(self) -> list[ModuleElement]:
        return [ModuleElement(row) for row in self.entries]

    def columns(self) -> list[ModuleElement]:
        count, width = self.shape
        return [ModuleElement(tuple(self.entries[i][j] for i in range(count))) for j in range(width)]

    def transpose(self) -> "OperatorMatrix":
        count, width = self.shape
        flipped = TRANSPOSE if self.orientation == OPERATOR else OPERATOR
        return OperatorMatrix(
            tuple(tuple(self.entries[i][j] for i in range(count)) for j in range(width)),
            self.nvars,
            flipped,
        )

    def multiply(self, other: "OperatorMatrix") -> "OperatorMatrix":
        count, inner = self.shape
        other_inner, width = other.shape
        if inner != other_inner:
            raise InputError(f"Cannot multiply {self.shape} by {other.shape}.")
        zero = Polynomial.zero(self.nvars)
        product: list[tuple[Polynomial, ...]] = []
        for i in range(count):
            row = []
            for j in range(width):
                total = zero
                for k in range(inner):
                    left, right = self.entries[i][k], other.entries[k][j]
                    if not left.is_zero() and not right.is_zero():
                        total = total + left * right
                row.append(total)
            product.append(tuple(row))
        return OperatorMatrix(tuple(product), self.nvars, self.orientation)

    def is_zero(self) -> bool:
        return all(entry.is_zero() for row in self.entries for entry in row)

    def render(self, variables: Sequence[str] | None = None) -> list[list[str]]:
        names = list(variables) if variables is not None else default_variables(self.nvars)
        return [[render(entry, names) for entry in row] for row in self.entries]

    def operator_rows(self) -> list[str]:
        """Each row as a condition sum_i a_i(D) f_i = 0 in D_j notation."""
        names = [f"D{i}" for i in range(1, self.nvars + 1)]
        return [_render_condition(row, names) for row in self.entries]


def _render_condition(row: Sequence[Polynomial], names: list[str]) -> str:
    pieces: list[str] = []
    for index, entry in enumerate(row, start=1):
        if entry.is_zero():
            continue
        text = render(entry, names)
        negative = text.startswith("-")
        body = text[1:] if negative else text
        if " " in text:
            negative, body = False, f"({text})"
        elif body == "1":
            body = ""
        factor = f"{body} f{index}" if body else f"f{index}"
        if not pieces:
            pieces.append(f"-{factor}" if negative else factor)
        else:
            pieces.append(f"- {factor}" if negative else f"+ {factor}")
    return (" ".join(pieces) if pieces else "0") + " = 0"
