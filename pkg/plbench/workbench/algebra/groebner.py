"""
Buchberger's algorithm for submodules of P^a with representation tracking.

Every basis element remembers how it is built from the input generators, so
the syzygy module falls out of the same run (Schreyer's construction) and is
expressed on the original generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Sequence
import logging
import math

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.monomials import monomial_div, monomial_lcm, monomial_mul
from sympy.polys.rings import PolyElement

from plbench.workbench.algebra.poly import (
    ModuleElement,
    Monomial,
    Polynomial,
    TermOrder,
    polynomial_ring,
)
from plbench.workbench.config import LimitsConfig
from plbench.workbench.core.exceptions import GroebnerLimitError, GroebnerStats, InputError

logger = logging.getLogger(__name__)

Vector = tuple[PolyElement, ...]


@dataclass(slots=True)
class _Entry:
    vec: Vector
    rep: Vector
    position: int
    monomial: Monomial
    coefficient: Any


@dataclass(frozen=True, slots=True)
class GroebnerBasis:
    generators: tuple[ModuleElement, ...]
    order: TermOrder
    reduced: bool
    transform: tuple[ModuleElement, ...]
    source: tuple[ModuleElement, ...]
    stats: GroebnerStats = field(default_factory=GroebnerStats, compare=False)

    @property
    def rank(self) -> int:
        return self.source[0].rank

    def leading_terms(self) -> list[tuple[int, Monomial]]:
        terms = []
        for generator in self.generators:
            lead = generator.leading_term(self.order)
            assert lead is not None
            terms.append((lead[0], lead[1]))
        return terms

    def is_unit_ideal(self) -> bool:
        return self.rank == 1 and any(sum(m) == 0 for _, m in self.leading_terms())


@dataclass(frozen=True, slots=True)
class SyzygyBasis:
    rows: tuple[ModuleElement, ...]
    source: tuple[ModuleElement, ...]

    def is_empty(self) -> bool:
        return not self.rows


# vector helpers -----------------------------------------------------------


def _vector(element: ModuleElement) -> Vector:
    return tuple(component.element for component in element.components)


def _element(vec: Vector) -> ModuleElement:
    return ModuleElement(tuple(Polynomial(component) for component in vec))


def _unit_vector(ring: Any, rank: int, index: int) -> Vector:
    return tuple(ring.one if k == index else ring.zero for k in range(rank))


def _lead(vec: Vector, order: TermOrder) -> tuple[int, Monomial, Any] | None:
    best: tuple[int, Monomial] | None = None
    best_key: tuple | None = None
    for position, component in enumerate(vec):
        if not component:
            continue
        monomial = max(component.keys(), key=order.monomial_key)
        key = order.term_key(position, monomial)
        if best_key is None or key > best_key:
            best, best_key = (position, monomial), key
    if best is None:
        return None
    return best[0], best[1], vec[best[0]][best[1]]


def _sub_multiple(vec: Vector, other: Vector, term: tuple[Monomial, Any]) -> Vector:
    return tuple(a - b.mul_term(term) if b else a for a, b in zip(vec, other))


def _mul_term(vec: Vector, term: tuple[Monomial, Any]) -> Vector:
    return tuple(component.mul_term(term) for component in vec)


def _scale(vec: Vector, factor: PolyElement) -> Vector:
    return tuple(component * factor for component in vec)


def _add(lhs: Vector, rhs: Vector) -> Vector:
    return tuple(a + b for a, b in zip(lhs, rhs))


def _degree(vec: Vector) -> int:
    return max((sum(m) for component in vec for m in component.keys()), default=0)


def _make_entry(vec: Vector, rep: Vector, order: TermOrder) -> _Entry:
    lead = _lead(vec, order)
    assert lead is not None
    return _Entry(vec=vec, rep=rep, position=lead[0], monomial=lead[1], coefficient=lead[2])


def _divide(vec: Vector, entries: Sequence[_Entry], order: TermOrder) -> tuple[Vector, list[PolyElement]]:
    """Module division: returns the remainder and one quotient per entry."""
    ring = vec[0].ring
    remainder = [ring.zero for _ in vec]
    quotients = [ring.zero for _ in entries]
    current = vec
    while True:
        lead = _lead(current, order)
        if lead is None:
            break
        position, monomial, coefficient = lead
        for index, entry in enumerate(entries):
            if entry.position != position:
                continue
            shift = monomial_div(monomial, entry.monomial)
            if shift is None:
                continue
            term = (shift, coefficient / entry.coefficient)
            current = _sub_multiple(current, entry.vec, term)
            quotients[index] = quotients[index] + ring.one.mul_term(term)
            break
        else:
            leading = ring.one.mul_term((monomial, coefficient))
            remainder[position] = remainder[position] + leading
            current = tuple(c - leading if k == position else c for k, c in enumerate(current))
    return tuple(remainder), quotients


def _s_vector(first: _Entry, second: _Entry) -> tuple[Vector, Vector]:
    lcm = monomial_lcm(first.monomial, second.monomial)
    term_first = (monomial_div(lcm, first.monomial), QQ.one / first.coefficient)
    term_second = (monomial_div(lcm, second.monomial), QQ.one / second.coefficient)
    vec = _add(_mul_term(first.vec, term_first), tuple(-c for c in _mul_term(second.vec, term_second)))
    rep = _add(_mul_term(first.rep, term_first), tuple(-c for c in _mul_term(second.rep, term_second)))
    return vec, rep


def _rep_after_division(rep: Vector, quotients: Sequence[PolyElement], entries: Sequence[_Entry]) -> Vector:
    for quotient, entry in zip(quotients, entries):
        if quotient:
            rep = _add(rep, tuple(-c for c in _scale(entry.rep, quotient)))
    return rep


# validation ---------------------------------------------------------------


def _validate(gens: Sequence[ModuleElement]) -> None:
    if not gens:
        raise InputError("At least one generator is required.")
    rank = gens[0].rank
    nvars = gens[0].nvars
    for generator in gens:
        if generator.rank != rank:
            raise InputError(f"Rank mismatch among generators: {generator.rank} vs {rank}.")
        if generator.nvars != nvars:
            raise InputError("Generators live in rings with different variable counts.")


# core run -----------------------------------------------------------------


def _run(
    gens: Sequence[ModuleElement],
    order: TermOrder,
    limits: LimitsConfig,
    step: int | None,
) -> tuple[list[_Entry], GroebnerStats]:
    _validate(gens)
    ring = polynomial_ring(gens[0].nvars)
    rank = gens[0].rank
    count = len(gens)
    stats = GroebnerStats(step=step)

    entries: list[_Entry] = []
    for index, generator in enumerate(gens):
        vec = _vector(generator)
        if any(vec):
            entries.append(_make_entry(vec, _unit_vector(ring, count, index), order))

    pending: set[tuple[int, int]] = set()

    def add_pairs(new: int) -> None:
        for old in range(new):
            if entries[old].position == entries[new].position:
                pending.add((old, new))

    for index in range(len(entries)):
        add_pairs(index)

    def lcm_degree(pair: tuple[int, int]) -> int:
        return sum(monomial_lcm(entries[pair[0]].monomial, entries[pair[1]].monomial))

    def chain_criterion(i: int, j: int, lcm: Monomial) -> bool:
        for k, entry in enumerate(entries):
            if k in (i, j) or entry.position != entries[i].position:
                continue
            if monomial_div(lcm, entry.monomial) is None:
                continue
            if tuple(sorted((i, k))) not in pending and tuple(sorted((j, k))) not in pending:
                return True
        return False

    while pending:
        if stats.pairs_processed >= limits.max_pairs:
            stats.pairs_pending = len(pending)
            stats.basis_size = len(entries)
            raise GroebnerLimitError(f"S-pair cap of {limits.max_pairs} reached", stats)
        pair = min(pending, key=lambda p: (lcm_degree(p), p))
        pending.remove(pair)
        stats.pairs_processed += 1
        i, j = pair
        first, second = entries[i], entries[j]
        lcm = monomial_lcm(first.monomial, second.monomial)
        if rank == 1 and monomial_mul(first.monomial, second.monomial) == lcm:
            continue
        if chain_criterion(i, j, lcm):
            continue
        vec, rep = _s_vector(first, second)
        remainder, quotients = _divide(vec, entries, order)
        if not any(remainder):
            stats.zero_reductions += 1
            continue
        degree = _degree(remainder)
        stats.max_degree = max(stats.max_degree, degree)
        if degree > limits.max_degree:
            stats.pairs_pending = len(pending)
            stats.basis_size = len(entries)
            raise GroebnerLimitError(f"Intermediate degree {degree} exceeds cap {limits.max_degree}", stats)
        entries.append(_make_entry(remainder, _rep_after_division(rep, quotients, entries), order))
        add_pairs(len(entries) - 1)

    final = _finalize(entries, order)
    stats.basis_size = len(final)
    logger.debug(
        "buchberger finished: %d pairs, %d zero reductions, %d elements",
        stats.pairs_processed,
        stats.zero_reductions,
        stats.basis_size,
    )
    return final, stats


def _finalize(entries: list[_Entry], order: TermOrder) -> list[_Entry]:
    """Minimalize, inter-reduce, make monic and sort canonically."""
    kept: list[_Entry] = []
    for index, entry in enumerate(entries):
        redundant = False
        for other_index, other in enumerate(entries):
            if other_index == index or other.position != entry.position:
                continue
            if monomial_div(entry.monomial, other.monomial) is None:
                continue
            if other.monomial != entry.monomial or other_index < index:
                redundant = True
                break
        if not redundant:
            kept.append(entry)

    reduced: list[_Entry] = list(kept)
    for index in range(len(reduced)):
        others = reduced[:index] + reduced[index + 1 :]
        remainder, quotients = _divide(reduced[index].vec, others, order)
        rep = _rep_after_division(reduced[index].rep, quotients, others)
        reduced[index] = _make_entry(remainder, rep, order)

    monic: list[_Entry] = []
    for entry in reduced:
        inverse = QQ.one / entry.coefficient
        term = (tuple(0 for _ in entry.monomial), inverse)
        monic.append(_make_entry(_mul_term(entry.vec, term), _mul_term(entry.rep, term), order))
    monic.sort(key=lambda e: order.term_key(e.position, e.monomial))
    return monic


# public operations --------------------------------------------------------


def buchberger(
    gens: Sequence[ModuleElement],
    order: TermOrder,
    limits: LimitsConfig | None = None,
    *,
    step: int | None = None,
) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule generated by `gens`."""
    limits = limits or LimitsConfig()
    entries, stats = _run(gens, order, limits, step)
    return GroebnerBasis(
        generators=tuple(_element(e.vec) for e in entries),
        order=order,
        reduced=True,
        transform=tuple(_element(e.rep) for e in entries),
        source=tuple(gens),
        stats=stats,
    )


def reduce(
    f: ModuleElement,
    basis: Sequence[ModuleElement],
    order: TermOrder,
) -> tuple[ModuleElement, list[Polynomial]]:
    """Divide `f` by `basis`; returns the normal form and one quotient per basis element."""
    for element in basis:
        if element.rank != f.rank:
            raise InputError(f"Rank mismatch: {element.rank} vs {f.rank}.")
        if element.nvars != f.nvars:
            raise InputError("Basis and dividend live in different rings.")
    ring = polynomial_ring(f.nvars)
    usable = [(i, _make_entry(_vector(g), (), order)) for i, g in enumerate(basis) if not g.is_zero()]
    remainder, partial = _divide(_vector(f), [entry for _, entry in usable], order)
    quotients = [ring.zero for _ in basis]
    for (index, _), quotient in zip(usable, partial):
        quotients[index] = quotient
    return _element(remainder), [Polynomial(q) for q in quotients]


def normal_form(f: ModuleElement, basis: GroebnerBasis) -> ModuleElement:
    remainder, _ = reduce(f, basis.generators, basis.order)
    return remainder


def membership(f: ModuleElement, basis: GroebnerBasis) -> bool:
    if not basis.generators:
        return f.is_zero()
    return normal_form(f, basis).is_zero()


def s_vectors_reduce_to_zero(basis: GroebnerBasis) -> bool:
    entries = [_make_entry(_vector(g), (), basis.order) for g in basis.generators]
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            if entries[i].position != entries[j].position:
                continue
            vec, _ = _s_vector(entries[i], entries[j])
            remainder, _ = _divide(vec, entries, basis.order)
            if any(remainder):
                return False
    return True


def syzygies(
    gens: Sequence[ModuleElement],
    order: TermOrder,
    limits: LimitsConfig | None = None,
    *,
    step: int | None = None,
) -> SyzygyBasis:
    """Generators of {q : sum_i q_i gens_i = 0}, pruned of redundant rows."""
    _validate(gens)
    limits = limits or LimitsConfig()
    ring = polynomial_ring(gens[0].nvars)
    count = len(gens)
    entries, _ = _run(gens, order, limits, step)

    candidates: list[Vector] = []
    for index, generator in enumerate(gens):
        if generator.is_zero():
            candidates.append(_unit_vector(ring, count, index))

    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            if entries[i].position != entries[j].position:
                continue
            vec, rep = _s_vector(entries[i], entries[j])
            remainder, quotients = _divide(vec, entries, order)
            assert not any(remainder), "S-vector of a Gröbner basis must reduce to zero"
            candidates.append(_rep_after_division(rep, quotients, entries))

    for index, generator in enumerate(gens):
        if generator.is_zero():
            continue
        remainder, quotients = _divide(_vector(generator), entries, order)
        assert not any(remainder), "input generator must lie in its own submodule"
        candidates.append(_rep_after_division(_unit_vector(ring, count, index), quotients, entries))

    rows = _prune(_normalize_rows(candidates, order), order, limits)
    return SyzygyBasis(rows=tuple(_element(row) for row in rows), source=tuple(gens))


def _normalize_rows(rows: Sequence[Vector], order: TermOrder) -> list[Vector]:
    seen: set[tuple] = set()
    normalized: list[Vector] = []
    for row in rows:
        if not any(row):
            continue
        element = _element(row)
        primitive = _primitive_row(element, order)
        key = tuple(sorted(_term_list(primitive)))
        if key in seen:
            continue
        seen.add(key)
        normalized.append(_vector(primitive))
    return normalized


def _primitive_row(element: ModuleElement, order: TermOrder) -> ModuleElement:
    coefficients = [c for component in element.components for c in component.coefficients().values()]
    denominator = math.lcm(*(c.denominator for c in coefficients))
    numerator = math.gcd(*(abs(c.numerator * (denominator // c.denominator)) for c in coefficients))
    factor = Polynomial.constant(element.nvars, Fraction(denominator, numerator))
    scaled = element.scale(factor)
    lead = scaled.leading_term(order)
    assert lead is not None
    return -scaled if lead[2] < 0 else scaled


def _term_list(element: ModuleElement) -> list[tuple[int, Monomial, str]]:
    return [
        (position, monomial, str(coefficient))
        for position, component in enumerate(element.components)
        for monomial, coefficient in component.coefficients().items()
    ]


def _row_sort_key(row: Vector) -> tuple:
    return (_degree(row), len([1 for c in row for _ in c.keys()]), sorted(_term_list(_element(row))))


def _prune(rows: list[Vector], order: TermOrder, limits: LimitsConfig) -> list[Vector]:
    """Drop rows generated by the others; the survivors still span the same module."""
    if not rows:
        return []
    ordered = sorted(rows, key=_row_sort_key)
    kept: list[Vector] = []
    for row in ordered:
        if kept and _in_span(row, kept, order, limits):
            continue
        kept.append(row)
    for row in list(reversed(kept)):
        others = [other for other in kept if other is not row]
        if others and _in_span(row, others, order, limits):
            kept = others
    return kept


def _in_span(row: Vector, rows: Sequence[Vector], order: TermOrder, limits: LimitsConfig) -> bool:
    basis = buchberger([_element(r) for r in rows], TermOrder(order.kind, "pot"), limits)
    return membership(_element(row), basis)


def syzygy_oracle(gens: Sequence[ModuleElement], degree: int) -> list[ModuleElement]:
    """Basis of all syzygies with component degree <= `degree`, by exact linear algebra."""
    _validate(gens)
    nvars = gens[0].nvars
    ring = polynomial_ring(nvars)
    monomials = [m for m in product(range(degree + 1), repeat=nvars) if sum(m) <= degree]
    unknowns = [(i, m) for i in range(len(gens)) for m in monomials]

    equations: dict[tuple[int, Monomial], dict[int, Any]] = {}
    for column, (i, shift) in enumerate(unknowns):
        for position, component in enumerate(gens[i].components):
            for monomial, coefficient in component.element.items():
                key = (position, monomial_mul(monomial, shift))
                row = equations.setdefault(key, {})
                row[column] = row.get(column, QQ.zero) + coefficient
    if not equations:
        return [
            _element(tuple(ring.one.mul_term((m, QQ.one)) if k == i else ring.zero for k in range(len(gens))))
            for i, m in unknowns
        ]
    rows = [[row.get(column, QQ.zero) for column in range(len(unknowns))] for _, row in sorted(equations.items())]
    matrix = DomainMatrix(rows, (len(rows), len(unknowns)), QQ)
    solutions: list[ModuleElement] = []
    for vector in matrix.nullspace().to_list():
        components = [ring.zero for _ in gens]
        for column, value in enumerate(vector):
            if value:
                i, shift = unknowns[column]
                components[i] = components[i] + ring.one.mul_term((shift, value))
        solutions.append(_element(tuple(components)))
    return solutions


def oracle_agrees(gens: Sequence[ModuleElement], basis: SyzygyBasis, degree: int, order: TermOrder) -> bool:
    """Every degree-bounded syzygy must lie in the module spanned by `basis`."""
    solutions = syzygy_oracle(gens, degree)
    if not basis.rows:
        return not solutions
    module = buchberger(list(basis.rows), TermOrder(order.kind, "pot"))
    return all(membership(solution, module) for solution in solutions)
