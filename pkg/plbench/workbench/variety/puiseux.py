"""
Puiseux expansions of plane curves F(z1, z2) = 0 over |z1| -> infinity.

Each branch is a series z2 = sum_k c_k z1^(e_k) with strictly decreasing
rational exponents. Exponents are found on the upper Newton polygon of the
support {(deg_z2, deg_z1)}; each edge contributes the nonzero roots of its
edge polynomial, after which z2 is shifted by c z1^e and the procedure
repeats below the last exponent. This is the Newton-polygon method at the
point t = 1/z1 = 0 written directly in z1.

Coefficients stay exact rationals while every edge root is rational; an
irrational root switches the branch to double precision and records the
degree of its minimal polynomial as the conjugacy count.
"""

from __future__ import annotations

import cmath
import itertools
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from plbench.workbench.algebra.grammar import render
from plbench.workbench.algebra.poly import Polynomial, coefficient_to_float, to_fraction
from plbench.workbench.core.exceptions import InputError, Notices, ResourceLimitError
from plbench.workbench.utils.parsing import format_rational
from plbench.workbench.variety.factor import square_free_part
from plbench.workbench.variety.roots import cluster_roots, durand_kerner

logger = logging.getLogger(__name__)

Coefficient = Union[Fraction, complex]
Support = dict[tuple[int, Fraction], Coefficient]

MAX_CURVE_DEGREE = 8
MAX_TERMS = 64
_NUMERIC_DROP = 1e-10
_CYCLE_TOLERANCE = 1e-7


@dataclass(frozen=True, slots=True)
class _Root:
    value: complex
    exact: Fraction | None
    multiplicity: int
    conjugates: int


@dataclass(slots=True)
class _Raw:
    terms: tuple[tuple[Fraction, _Root], ...]
    truncation: Fraction | None
    conjugates: int


@dataclass(frozen=True, slots=True)
class PuiseuxBranch:
    """
    One determination z2 = sum c_k z1^(e_k) of a branch at infinity.

    `truncation_exponent` is None when the series is exact and finite;
    otherwise substituting the truncated series into the curve leaves only
    exponents strictly below it. An empty `terms` tuple is the branch z2 = 0.
    """

    ramification: int
    terms: tuple[tuple[Fraction, complex], ...]
    exact: tuple[Fraction | None, ...]
    truncation_order: int
    truncation_exponent: Fraction | None
    conjugates: int = 1
    cycle: int = 0

    @property
    def leading_exponent(self) -> Fraction | None:
        return self.terms[0][0] if self.terms else None

    @property
    def leading_coefficient(self) -> complex:
        return self.terms[0][1] if self.terms else 0j

    @property
    def is_exact(self) -> bool:
        return all(value is not None for value in self.exact)

    def coefficient_real_flags(self, tolerance: float = 1e-12) -> tuple[bool, ...]:
        return tuple(abs(c.imag) <= tolerance * max(1.0, abs(c)) for _, c in self.terms)

    def as_dict(self) -> dict[str, object]:
        return {
            "ramification": self.ramification,
            "cycle": self.cycle,
            "conjugates": self.conjugates,
            "exponents": [format_rational(e) for e, _ in self.terms],
            "coefficients": [[c.real, c.imag] for _, c in self.terms],
            "exact_coefficients": [format_rational(v) if v is not None else None for v in self.exact],
            "truncation_order": self.truncation_order,
            "truncation_exponent": (
                format_rational(self.truncation_exponent) if self.truncation_exponent is not None else None
            ),
        }


@dataclass(frozen=True, slots=True)
class CurveExpansion:
    source: Polynomial
    curve: Polynomial
    branches: tuple[PuiseuxBranch, ...]
    order: int
    degree_z2: int
    normalization: int = 0
    notices: tuple[str, ...] = field(default=(), compare=False)

    def ramification_total(self) -> int:
        """Sum of ramification indices over distinct cycles."""
        seen: dict[int, int] = {}
        for branch in self.branches:
            seen.setdefault(branch.cycle, branch.ramification)
        return sum(seen.values())

    def as_dict(self) -> dict[str, object]:
        return {
            "source": render(self.source),
            "curve": render(self.curve),
            "order": self.order,
            "degree_z2": self.degree_z2,
            "normalization": self.normalization,
            "ramification_total": self.ramification_total(),
            "branches": [b.as_dict() for b in self.branches],
            "notices": list(self.notices),
        }


# Newton polygon -----------------------------------------------------------


def _support(curve: Polynomial) -> Support:
    return {(m[1], Fraction(m[0])): to_fraction(c) for m, c in curve.element.items()}


def _edges(support: Support, below: Fraction | None) -> list[tuple[Fraction, Fraction, dict[int, Coefficient]]]:
    """Upper-hull edges with slope below `below`, as (slope, face value, face)."""
    top: dict[int, Fraction] = {}
    for j, i in support:
        if j not in top or i > top[j]:
            top[j] = i
    levels = sorted(top)
    edges = []
    seen: set[Fraction] = set()
    for j1, j2 in itertools.combinations(levels, 2):
        slope = (top[j1] - top[j2]) / (j2 - j1)
        if slope in seen or (below is not None and slope >= below):
            continue
        values = {j: top[j] + slope * j for j in levels}
        face_value = max(values.values())
        on_face = [j for j in levels if values[j] == face_value]
        if len(on_face) < 2:
            continue
        seen.add(slope)
        edges.append((slope, face_value, {j: support[(j, top[j])] for j in on_face}))
    edges.sort(key=lambda edge: edge[0], reverse=True)
    return edges


def _edge_roots(face: dict[int, Coefficient], exact: bool) -> list[_Root]:
    low = min(face)
    if exact:
        edge = Polynomial.from_terms(1, {(j - low,): value for j, value in face.items()})
        _, pieces = edge.element.factor_list()
        roots = []
        for piece, multiplicity in pieces:
            factor = Polynomial(piece)
            coefficients = factor.coefficients()
            degree = factor.total_degree()
            if degree == 1:
                value = -coefficients.get((0,), Fraction(0)) / coefficients[(1,)]
                roots.append(_Root(complex(value), value, multiplicity, 1))
                continue
            dense = [float(coefficients.get((k,), 0)) for k in range(degree, -1, -1)]
            for value in durand_kerner(dense):
                roots.append(_Root(complex(value), None, multiplicity, degree))
        return _sorted_roots(roots)
    high = max(face)
    dense = [complex(face.get(j, 0)) for j in range(high, low - 1, -1)]
    return _sorted_roots([_Root(value, None, count, 1) for value, count in cluster_roots(durand_kerner(dense))])


def _sorted_roots(roots: list[_Root]) -> list[_Root]:
    return sorted(roots, key=lambda r: (round(r.value.real, 9), round(r.value.imag, 9)))


def _shift(
    support: Support,
    slope: Fraction,
    face_value: Fraction,
    root: _Root,
    exact: bool,
) -> Support:
    """Substitute z2 -> c z1^slope + z2 and drop the cancelled face terms."""
    value: Coefficient = root.exact if exact and root.exact is not None else root.value
    shifted: dict[tuple[int, Fraction], Coefficient] = defaultdict(lambda: Fraction(0) if exact else 0j)
    for (j, i), coefficient in support.items():
        if not exact:
            coefficient = complex(coefficient)
        for k in range(j + 1):
            shifted[(k, i + slope * (j - k))] += coefficient * math.comb(j, k) * value ** (j - k)
    result: Support = {}
    for (k, i), coefficient in shifted.items():
        if k < root.multiplicity and i + slope * k == face_value:
            continue
        if exact and coefficient == 0:
            continue
        result[(k, i)] = coefficient
    if not exact and result:
        scale = max(abs(c) for c in result.values())
        result = {key: c for key, c in result.items() if abs(c) > _NUMERIC_DROP * scale}
    return result


def _expand(
    support: Support,
    terms: tuple[tuple[Fraction, _Root], ...],
    below: Fraction | None,
    exact: bool,
    conjugates: int,
    order: int,
    notices: Notices,
) -> list[_Raw]:
    found: list[_Raw] = []
    lowest = min(j for j, _ in support)
    # z2 = 0 solves the shifted equation: the series so far is exact
    found.extend(_Raw(terms, None, conjugates) for _ in range(lowest))
    for slope, face_value, face in _edges(support, below):
        for root in _edge_roots(face, exact):
            keeps_exact = exact and root.exact is not None
            shifted = _shift(support, slope, face_value, root, keeps_exact)
            extended = terms + ((slope, root),)
            classes = max(conjugates, root.conjugates)
            finished = not shifted or all(j > 0 for j, _ in shifted)
            if not finished and root.multiplicity == 1 and len(extended) >= order:
                bound = max(i + slope * j for j, i in shifted)
                found.append(_Raw(extended, bound, classes))
            elif not finished and len(extended) >= MAX_TERMS:
                notices.add(f"expansion stopped at {MAX_TERMS} terms before the branches separated")
                bound = max(i + slope * j for j, i in shifted)
                found.extend(_Raw(extended, bound, classes) for _ in range(root.multiplicity))
            elif not shifted:
                found.extend(_Raw(extended, None, classes) for _ in range(root.multiplicity))
            else:
                found.extend(_expand(shifted, extended, slope, keeps_exact, classes, order, notices))
    return found


# branch assembly ----------------------------------------------------------


def _ramification(terms: tuple[tuple[Fraction, complex], ...]) -> int:
    return math.lcm(*(e.denominator for e, _ in terms)) if terms else 1


def _branch_key(branch: PuiseuxBranch) -> tuple:
    if not branch.terms:
        return (1,)
    pieces: list[object] = [0]
    for exponent, coefficient in branch.terms:
        pieces.extend((-exponent, round(coefficient.real, 9), round(coefficient.imag, 9)))
    return tuple(pieces)


def _same_coefficients(lhs: tuple[complex, ...], rhs: tuple[complex, ...]) -> bool:
    return all(abs(a - b) <= _CYCLE_TOLERANCE * max(1.0, abs(a)) for a, b in zip(lhs, rhs))


def _assign_cycles(branches: list[PuiseuxBranch]) -> list[PuiseuxBranch]:
    """Group determinations related by z1^(1/q) -> exp(2 pi i m / q) z1^(1/q)."""
    cycle_of: dict[int, int] = {}
    next_cycle = 0
    for index, branch in enumerate(branches):
        if index in cycle_of:
            continue
        cycle_of[index] = next_cycle
        exponents = tuple(e for e, _ in branch.terms)
        for m in range(1, branch.ramification):
            rotated = tuple(c * cmath.exp(2j * math.pi * m * e) for e, c in branch.terms)
            for other in range(len(branches)):
                if other in cycle_of:
                    continue
                candidate = branches[other]
                if tuple(e for e, _ in candidate.terms) != exponents:
                    continue
                if _same_coefficients(rotated, tuple(c for _, c in candidate.terms)):
                    cycle_of[other] = next_cycle
                    break
        next_cycle += 1
    return [
        PuiseuxBranch(
            b.ramification, b.terms, b.exact, b.truncation_order, b.truncation_exponent, b.conjugates, cycle_of[i]
        )
        for i, b in enumerate(branches)
    ]


def _normalize(curve: Polynomial) -> tuple[Polynomial, int]:
    """Smallest c >= 0 such that z1 -> z1 + c z2 makes the curve monic in z2 up to a constant."""
    degree = curve.total_degree()
    for shift in range(degree + 2):
        candidate = curve.substitute_linear(0, [1, shift])
        if candidate.degree_in(1) == degree:
            return candidate, shift
    raise InputError(f"No linear normalization found for {render(curve)}.")


def _leading_z2_coefficient(curve: Polynomial, degree_z2: int) -> Polynomial:
    return Polynomial.from_terms(2, {(m[0], 0): c for m, c in curve.coefficients().items() if m[1] == degree_z2})


def curve_expansion(curve: Polynomial, order: int = 4, *, normalize: bool = False) -> CurveExpansion:
    """Complete set of branches at |z1| -> infinity, with notices and the applied normalization."""
    if curve.nvars != 2:
        raise InputError(f"Puiseux expansion needs a curve in 2 variables, got {curve.nvars}.")
    if curve.is_zero():
        raise InputError("The zero polynomial does not define a curve.")
    if curve.total_degree() > MAX_CURVE_DEGREE:
        raise ResourceLimitError(f"Curve degree {curve.total_degree()} exceeds the cap of {MAX_CURVE_DEGREE}.")
    if order < 1:
        raise InputError("The expansion order must be at least 1.")

    notices = Notices()
    working = curve if curve.is_constant() else square_free_part(curve)
    if working.total_degree() < curve.total_degree():
        message = "non-square-free curve; expanding its square-free part"
        logger.warning(message)
        notices.add(message)
    shift = 0
    if normalize and not working.is_constant():
        working, shift = _normalize(working)
        if shift:
            message = f"linear normalization z1 -> z1 + {shift}*z2 applied"
            logger.info(message)
            notices.add(message)

    degree_z2 = working.degree_in(1)
    if degree_z2 == 0:
        notices.add("the curve does not involve z2; no branches over |z1| -> infinity")
        return CurveExpansion(curve, working, (), order, 0, shift, tuple(notices.items))
    leading = _leading_z2_coefficient(working, degree_z2)
    if not leading.is_constant():
        notices.add(
            f"leading z2-coefficient {render(leading)} is not constant; the degree in z2 drops where it vanishes "
            "and branches escaping over finite z1 are not expanded (normalize to include them)"
        )

    raws = _expand(_support(working), (), None, True, 1, order, notices)
    branches = [
        PuiseuxBranch(
            ramification=_ramification(tuple((e, r.value) for e, r in raw.terms)),
            terms=tuple((e, r.value) for e, r in raw.terms),
            exact=tuple(r.exact if all(t.exact is not None for _, t in raw.terms[: k + 1]) else None
                        for k, (_, r) in enumerate(raw.terms)),
            truncation_order=order,
            truncation_exponent=raw.truncation,
            conjugates=raw.conjugates,
        )
        for raw in raws
    ]
    branches.sort(key=_branch_key)
    branches = _assign_cycles(branches)
    expansion = CurveExpansion(curve, working, tuple(branches), order, degree_z2, shift, tuple(notices.items))
    if expansion.ramification_total() != degree_z2:
        message = (
            f"ramification total {expansion.ramification_total()} differs from deg_z2 = {degree_z2}; "
            "raise the order to separate the branches"
        )
        logger.info(message)
        notices.add(message)
        expansion = CurveExpansion(curve, working, tuple(branches), order, degree_z2, shift, tuple(notices.items))
    logger.info("Expanded %s into %d branches", render(working), len(branches))
    return expansion


def puiseux_at_infinity(curve: Polynomial, order: int = 4) -> list[PuiseuxBranch]:
    return list(curve_expansion(curve, order).branches)


def _series_product(lhs: dict[Fraction, Coefficient], rhs: dict[Fraction, Coefficient]) -> dict[Fraction, Coefficient]:
    product: dict[Fraction, Coefficient] = defaultdict(int)
    for (e1, c1), (e2, c2) in itertools.product(lhs.items(), rhs.items()):
        product[e1 + e2] += c1 * c2
    return dict(product)


def residual_exponent(curve: Polynomial, branch: PuiseuxBranch) -> Fraction | None:
    """
    Leading exponent of F(z1, truncated branch), or None if it vanishes.

    Exact branches are evaluated with rational arithmetic; numeric branches
    treat contributions below 1e-9 of the largest one as cancelled.
    """
    exact = branch.is_exact
    series: dict[Fraction, Coefficient] = {
        e: (v if exact and v is not None else c) for (e, c), v in zip(branch.terms, branch.exact)
    }
    powers: list[dict[Fraction, Coefficient]] = [{Fraction(0): Fraction(1) if exact else 1 + 0j}]
    for _ in range(curve.degree_in(1)):
        powers.append(_series_product(powers[-1], series))
    totals: dict[Fraction, Coefficient] = defaultdict(int)
    sizes: dict[Fraction, float] = defaultdict(float)
    for monomial, coefficient in curve.element.items():
        value: Coefficient = to_fraction(coefficient) if exact else complex(coefficient_to_float(coefficient))
        for exponent, contribution in powers[monomial[1]].items():
            key = exponent + monomial[0]
            totals[key] += value * contribution
            sizes[key] += abs(value * contribution)
    if exact:
        surviving = [e for e, total in totals.items() if total != 0]
    else:
        largest = max(sizes.values(), default=0.0)
        surviving = [e for e, total in totals.items() if abs(total) > 1e-9 * largest]
    return max(surviving) if surviving else None
