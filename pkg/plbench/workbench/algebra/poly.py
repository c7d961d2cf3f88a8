"""
Exact multivariate polynomials over the rationals and free-module elements.

`Polynomial` wraps a sympy `PolyElement` from a cached ring `QQ[z1..zN]` and
adds canonical equality, degree guards, sign flipping and complex evaluation.
`TermOrder` extends the monomial orders to free modules (POT or TOP).
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence, Tuple

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.monomials import monomial_div
from sympy.polys.orderings import grevlex, grlex, lex
from sympy.polys.rings import PolyElement, PolyRing

from plbench.workbench.config import MAX_VARIABLES
from plbench.workbench.core.exceptions import InputError, ResourceLimitError

Monomial = Tuple[int, ...]

MAX_TOTAL_DEGREE = 64

_MONOMIAL_ORDERS: dict[str, Callable[[Monomial], tuple]] = {
    "lex": lex,
    "grlex": grlex,
    "grevlex": grevlex,
}

_ORDER_ALIASES = {
    "lex": "lex",
    "grlex": "grlex",
    "graded-lex": "grlex",
    "grevlex": "grevlex",
    "graded-reverse-lex": "grevlex",
}


@lru_cache(maxsize=None)
def polynomial_ring(nvars: int) -> PolyRing:
    """Return the shared ring QQ[z1..zN] for `nvars` variables."""
    if nvars < 1:
        raise InputError("A polynomial ring needs at least one variable.")
    if nvars > MAX_VARIABLES:
        raise ResourceLimitError(f"{nvars} variables requested; at most {MAX_VARIABLES} are supported.")
    names = ",".join(f"z{i}" for i in range(1, nvars + 1))
    return PolyRing(names, QQ, lex)


def to_qq(value: Fraction | int) -> object:
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def to_fraction(coefficient: object) -> Fraction:
    return Fraction(int(coefficient.numerator), int(coefficient.denominator))  # type: ignore[attr-defined]


def coefficient_to_float(coefficient: object) -> float:
    # int / int division rounds to the nearest double
    return int(coefficient.numerator) / int(coefficient.denominator)  # type: ignore[attr-defined]


def total_degree(monomial: Monomial) -> int:
    return sum(monomial)


@dataclass(frozen=True, slots=True)
class TermOrder:
    kind: str = "grlex"
    extension: str = "pot"
    priority: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in _MONOMIAL_ORDERS:
            raise InputError(f"Unknown monomial order '{self.kind}'.")
        if self.extension not in {"pot", "top"}:
            raise InputError(f"Unknown module extension '{self.extension}'; use 'pot' or 'top'.")
        if self.priority is not None and sorted(self.priority) != list(range(len(self.priority))):
            raise InputError("Position priority must be a permutation of component indices.")

    @classmethod
    def parse(cls, text: str, extension: str = "pot") -> "TermOrder":
        kind = _ORDER_ALIASES.get(text.strip().lower())
        if kind is None:
            raise InputError(f"Unknown monomial order '{text}'.")
        return cls(kind=kind, extension=extension)

    def monomial_key(self, monomial: Monomial) -> tuple:
        return _MONOMIAL_ORDERS[self.kind](monomial)

    def position_rank(self, position: int) -> int:
        # larger rank means larger position
        if self.priority is None:
            return -position
        return -self.priority.index(position)

    def term_key(self, position: int, monomial: Monomial) -> tuple:
        if self.extension == "pot":
            return (self.position_rank(position), self.monomial_key(monomial))
        return (self.monomial_key(monomial), self.position_rank(position))

    def describe(self) -> str:
        return f"{self.kind}/{self.extension}"


@dataclass(frozen=True, slots=True, eq=False)
class Polynomial:
    """Immutable exact polynomial; zero coefficients are never stored.

    Leading terms are memoized per TermOrder, so repeated queries under one
    order cost a dict lookup.
    """

    element: PolyElement
    _leads: dict[TermOrder, tuple[Monomial, Fraction]] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.element and max(sum(m) for m in self.element.keys()) > MAX_TOTAL_DEGREE:
            raise ResourceLimitError(f"Total degree exceeds the cap of {MAX_TOTAL_DEGREE}.")

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(polynomial_ring(nvars).zero)

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls(polynomial_ring(nvars).one)

    @classmethod
    def constant(cls, nvars: int, value: Fraction | int) -> "Polynomial":
        ring = polynomial_ring(nvars)
        return cls(ring.ground_new(to_qq(value)))

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        ring = polynomial_ring(nvars)
        if not 0 <= index < nvars:
            raise InputError(f"Variable index {index} outside 0..{nvars - 1}.")
        return cls(ring.gens[index])

    @classmethod
    def from_terms(cls, nvars: int, terms: Mapping[Monomial, Fraction | int]) -> "Polynomial":
        ring = polynomial_ring(nvars)
        data = {}
        for monomial, value in terms.items():
            if len(monomial) != nvars:
                raise InputError(f"Monomial {monomial} does not have {nvars} exponents.")
            if any(e < 0 for e in monomial):
                raise InputError(f"Monomial {monomial} has a negative exponent.")
            if value:
                data[tuple(monomial)] = to_qq(value)
        return cls(ring.from_dict(data) if data else ring.zero)

    # inspection -------------------------------------------------------
    @property
    def nvars(self) -> int:
        return self.element.ring.ngens

    @property
    def ring(self) -> PolyRing:
        return self.element.ring

    def is_zero(self) -> bool:
        return not self.element

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.element.keys())

    def total_degree(self) -> int:
        if not self.element:
            return 0
        return max(sum(m) for m in self.element.keys())

    def degree_in(self, index: int) -> int:
        if not self.element:
            return 0
        return max(m[index] for m in self.element.keys())

    def coefficients(self) -> dict[Monomial, Fraction]:
        return {m: to_fraction(c) for m, c in self.element.items()}

    def terms(self, order: TermOrder | None = None) -> list[tuple[Monomial, Fraction]]:
        """Terms sorted from largest to smallest monomial."""
        order = order or TermOrder("grlex")
        ranked = sorted(self.element.items(), key=lambda item: order.monomial_key(item[0]), reverse=True)
        return [(m, to_fraction(c)) for m, c in ranked]

    def leading_term(self, order: TermOrder) -> tuple[Monomial, Fraction]:
        if not self.element:
            raise InputError("The zero polynomial has no leading term.")
        lead = self._leads.get(order)
        if lead is None:
            monomial = max(self.element.keys(), key=order.monomial_key)
            lead = self._leads[order] = (monomial, to_fraction(self.element[monomial]))
        return lead

    # arithmetic -------------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial):
            raise InputError(f"Cannot combine a polynomial with {type(other).__name__}.")
        if other.nvars != self.nvars:
            raise InputError(f"Variable-count mismatch: {self.nvars} vs {other.nvars}.")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        return Polynomial(self.element + other.element)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        return Polynomial(self.element - other.element)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        if self.total_degree() + other.total_degree() > MAX_TOTAL_DEGREE and self.element and other.element:
            raise ResourceLimitError(f"Product degree exceeds the cap of {MAX_TOTAL_DEGREE}.")
        return Polynomial(self.element * other.element)

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self.element)

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise InputError("Negative exponents are not polynomial.")
        if self.element and not self.is_constant() and self.total_degree() * exponent > MAX_TOTAL_DEGREE:
            raise ResourceLimitError(f"Power degree exceeds the cap of {MAX_TOTAL_DEGREE}.")
        return Polynomial(self.element**exponent)

    def scale(self, value: Fraction | int) -> "Polynomial":
        return Polynomial(self.element * to_qq(value))

    def monic(self, order: TermOrder) -> "Polynomial":
        if not self.element:
            return self
        _, lead = self.leading_term(order)
        return self.scale(1 / lead)

    def primitive(self, order: TermOrder | None = None) -> "Polynomial":
        """Scale to integer coprime coefficients with a positive leading coefficient."""
        if not self.element:
            return self
        _, content = self.element.clear_denoms()
        content_poly = Polynomial(content)
        divisor = math.gcd(*(int(c.numerator) for c in content.values()))
        scaled = content_poly.scale(Fraction(1, divisor or 1))
        _, lead = scaled.leading_term(order or TermOrder("grlex"))
        return -scaled if lead < 0 else scaled

    def sign_flip(self) -> "Polynomial":
        """Return q with q(z) = p(-z)."""
        ring = self.ring
        data = {m: (-c if sum(m) % 2 else c) for m, c in self.element.items()}
        return Polynomial(ring.from_dict(data) if data else ring.zero)

    def compose(self, index: int, replacement: "Polynomial") -> "Polynomial":
        self._check(replacement)
        return Polynomial(self.element.compose(self.ring.gens[index], replacement.element))

    def substitute_linear(self, index: int, coefficients: Sequence[Fraction | int]) -> "Polynomial":
        """Replace z_index by sum_j coefficients[j] * z_j."""
        if len(coefficients) != self.nvars:
            raise InputError(f"Expected {self.nvars} coefficients, got {len(coefficients)}.")
        ring = self.ring
        replacement = ring.zero
        for gen, value in zip(ring.gens, coefficients):
            if value:
                replacement += gen * to_qq(value)
        return Polynomial(self.element.compose(ring.gens[index], replacement))

    def derivative(self, index: int) -> "Polynomial":
        return Polynomial(self.element.diff(self.ring.gens[index]))

    # evaluation -------------------------------------------------------
    def evaluate(self, point: Sequence[complex]) -> complex:
        """Horner evaluation with coefficients rounded to the nearest double."""
        if len(point) != self.nvars:
            raise InputError(f"Point has {len(point)} coordinates; expected {self.nvars}.")
        if not self.element:
            return 0j
        terms = {m: coefficient_to_float(c) for m, c in self.element.items()}
        return complex(_horner(terms, 0, [complex(z) for z in point]))

    def evaluate_exact(self, point: Sequence[tuple[Fraction, Fraction]]) -> tuple[Fraction, Fraction]:
        """Exact value at a point with rational real and imaginary parts."""
        if len(point) != self.nvars:
            raise InputError(f"Point has {len(point)} coordinates; expected {self.nvars}.")
        values = [QQ_I(to_qq(re), to_qq(im)) for re, im in point]
        total = QQ_I.zero
        for monomial, coefficient in self.element.items():
            term = QQ_I(coefficient, QQ.zero)
            for value, exponent in zip(values, monomial):
                for _ in range(exponent):
                    term = term * value
            total = total + term
        return to_fraction(total.x), to_fraction(total.y)

    # identity ---------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and dict(self.element) == dict(other.element)

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.element.items())))

    def __repr__(self) -> str:
        from plbench.workbench.algebra.grammar import render

        return f"Polynomial({render(self)!r})"

    def __str__(self) -> str:
        from plbench.workbench.algebra.grammar import render

        return render(self)


def _horner(terms: Mapping[Monomial, complex | float], index: int, point: Sequence[complex]) -> complex:
    if index == len(point):
        return complex(sum(terms.values()))
    groups: dict[int, dict[Monomial, complex | float]] = {}
    for monomial, value in terms.items():
        groups.setdefault(monomial[index], {})[monomial] = value
    acc = 0j
    for exponent in range(max(groups), -1, -1):
        acc = acc * point[index]
        if exponent in groups:
            acc += _horner(groups[exponent], index + 1, point)
    return acc


def poly_arith(lhs: Polynomial, rhs: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise InputError(f"Unknown polynomial operation '{op}'.")


def eval_complex(p: Polynomial, point: Sequence[complex]) -> complex:
    return p.evaluate(point)


def sign_flip(p: Polynomial) -> Polynomial:
    return p.sign_flip()


@dataclass(frozen=True, slots=True)
class ModuleElement:
    """Element of the free module P^a; components share one ring."""

    components: tuple[Polynomial, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.components:
            raise InputError("A module element needs rank >= 1.")
        nvars = self.components[0].nvars
        if any(c.nvars != nvars for c in self.components):
            raise InputError("Module components must share the variable count.")

    @classmethod
    def from_polys(cls, polys: Iterable[Polynomial]) -> "ModuleElement":
        return cls(tuple(polys))

    @classmethod
    def zero(cls, rank: int, nvars: int) -> "ModuleElement":
        return cls(tuple(Polynomial.zero(nvars) for _ in range(rank)))

    @classmethod
    def unit(cls, rank: int, index: int, nvars: int) -> "ModuleElement":
        return cls(tuple(Polynomial.one(nvars) if k == index else Polynomial.zero(nvars) for k in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.components)

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def total_degree(self) -> int:
        return max((c.total_degree() for c in self.components if not c.is_zero()), default=0)

    def _check(self, other: "ModuleElement") -> None:
        if other.rank != self.rank:
            raise InputError(f"Rank mismatch: {self.rank} vs {other.rank}.")

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        self._check(other)
        return ModuleElement(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        self._check(other)
        return ModuleElement(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "ModuleElement":
        return ModuleElement(tuple(-c for c in self.components))

    def scale(self, factor: Polynomial) -> "ModuleElement":
        return ModuleElement(tuple(factor * c for c in self.components))

    def dot(self, others: Sequence["ModuleElement"]) -> "ModuleElement":
        """Return sum_i self_i * others_i."""
        if len(others) != self.rank:
            raise InputError(f"Expected {self.rank} module elements, got {len(others)}.")
        if not others:
            raise InputError("Cannot combine an empty generator list.")
        total = ModuleElement.zero(others[0].rank, self.nvars)
        for coefficient, element in zip(self.components, others):
            if not coefficient.is_zero():
                total = total + element.scale(coefficient)
        return total

    def leading_term(self, order: TermOrder) -> tuple[int, Monomial, Fraction] | None:
        best: tuple[int, Monomial] | None = None
        for position, component in enumerate(self.components):
            if component.is_zero():
                continue
            monomial, _ = component.leading_term(order)
            if best is None or order.term_key(position, monomial) > order.term_key(*best):
                best = (position, monomial)
        if best is None:
            return None
        position, monomial = best
        return position, monomial, to_fraction(self.components[position].element[monomial])

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"


def divides(a: Monomial, b: Monomial) -> bool:
    return monomial_div(b, a) is not None
