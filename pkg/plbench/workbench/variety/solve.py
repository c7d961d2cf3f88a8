"""
Numerical solution of zero-dimensional polynomial systems.

The lex Gröbner basis is triangular for a zero-dimensional ideal; roots are
found variable by variable from the last one upward and then refined with a
damped Gauss-Newton step on the full basis.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from plbench.workbench.algebra.groebner import buchberger
from plbench.workbench.algebra.poly import ModuleElement, Polynomial, TermOrder, coefficient_to_float
from plbench.workbench.config import LimitsConfig
from plbench.workbench.core.exceptions import InputError, PositiveDimensionalError
from plbench.workbench.variety.roots import cluster_roots, durand_kerner

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-8
_REFINE_STEPS = 4


@dataclass(frozen=True, slots=True)
class SolutionPoint:
    point: tuple[complex, ...]
    multiplicity: int
    residual: float

    def as_dict(self) -> dict[str, object]:
        return {
            "point": [[z.real, z.imag] for z in self.point],
            "multiplicity": self.multiplicity,
            "residual": self.residual,
        }


def _variables_of(poly: Polynomial) -> set[int]:
    return {i for i in range(poly.nvars) if poly.degree_in(i) > 0}


def _check_zero_dimensional(basis: Sequence[Polynomial], order: TermOrder, nvars: int) -> None:
    pure = set()
    for poly in basis:
        monomial, _ = poly.leading_term(order)
        support = [i for i, e in enumerate(monomial) if e > 0]
        if len(support) == 1:
            pure.add(support[0])
    missing = [i for i in range(nvars) if i not in pure]
    if missing:
        names = ", ".join(f"z{i + 1}" for i in missing)
        raise PositiveDimensionalError(
            f"The ideal is positive-dimensional (no pure power of {names} among the leading terms); "
            "use the Puiseux path for curves."
        )


def _univariate(poly: Polynomial, index: int, known: dict[int, complex]) -> np.ndarray:
    """Coefficients (highest first) of poly in z_index after substituting known values."""
    degree = poly.degree_in(index)
    coefficients = np.zeros(degree + 1, dtype=complex)
    for monomial, value in poly.element.items():
        term = complex(coefficient_to_float(value))
        for var, exponent in enumerate(monomial):
            if var != index and exponent:
                term *= known[var] ** exponent
        coefficients[degree - monomial[index]] += term
    return coefficients


def _scaled_residual(polys: Sequence[Polynomial], point: Sequence[complex]) -> float:
    worst = 0.0
    for poly in polys:
        value = abs(poly.evaluate(point))
        scale = sum(
            abs(coefficient_to_float(c)) * float(np.prod([abs(z) ** e for z, e in zip(point, m)]))
            for m, c in poly.element.items()
        )
        worst = max(worst, value / max(scale, 1.0))
    return worst


def _extend(
    partial: dict[int, complex],
    index: int,
    layer: Sequence[Polynomial],
    nvars: int,
) -> list[tuple[complex, int]]:
    """Roots in z_index compatible with the already fixed coordinates."""
    candidates = sorted(layer, key=lambda p: p.degree_in(index))
    for poly in candidates:
        coefficients = _univariate(poly, index, partial)
        scale = float(np.max(np.abs(coefficients))) or 1.0
        if abs(coefficients[0]) <= 1e-10 * scale:
            continue
        roots = cluster_roots(durand_kerner(coefficients))
        accepted = []
        for root, multiplicity in roots:
            trial = dict(partial)
            trial[index] = root
            others = [p for p in layer if p is not poly]
            if all(abs(_partial_value(p, trial, nvars)) <= 1e-6 * max(1.0, _partial_scale(p, trial)) for p in others):
                accepted.append((root, multiplicity))
        return accepted
    return []


def _partial_value(poly: Polynomial, values: dict[int, complex], nvars: int) -> complex:
    point = [values.get(i, 0j) for i in range(nvars)]
    return poly.evaluate(point)


def _partial_scale(poly: Polynomial, values: dict[int, complex]) -> float:
    total = 0.0
    for monomial, value in poly.element.items():
        size = abs(coefficient_to_float(value))
        for var, exponent in enumerate(monomial):
            if exponent:
                size *= abs(values.get(var, 0j)) ** exponent
        total += size
    return total


def _sort_key(point: Sequence[complex]) -> tuple[float, ...]:
    return tuple(itertools.chain.from_iterable((round(z.real, 9), round(z.imag, 9)) for z in point))


def _refine(polys: Sequence[Polynomial], point: np.ndarray) -> np.ndarray:
    nvars = point.size
    jacobian_polys = [[p.derivative(i) for i in range(nvars)] for p in polys]
    current = point.copy()
    residual = np.array([p.evaluate(current) for p in polys])
    for _ in range(_REFINE_STEPS):
        jacobian = np.array([[d.evaluate(current) for d in row] for row in jacobian_polys])
        step, *_ = np.linalg.lstsq(jacobian, -residual, rcond=None)
        damping = 1.0
        while damping > 1e-3:
            trial = current + damping * step
            trial_residual = np.array([p.evaluate(trial) for p in polys])
            if np.linalg.norm(trial_residual) < np.linalg.norm(residual):
                current, residual = trial, trial_residual
                break
            damping /= 2.0
        else:
            break
    return current


def solve_zero_dim(
    generators: Sequence[Polynomial],
    limits: LimitsConfig | None = None,
) -> list[SolutionPoint]:
    """
    All complex solutions of a zero-dimensional system with multiplicities.

    The multiplicity of a point is the product of the root multiplicities met
    during back-substitution. An inconsistent system has no solutions.
    """
    polys = [g for g in generators if not g.is_zero()]
    if not polys:
        raise PositiveDimensionalError("The zero ideal is positive-dimensional; use the Puiseux path for curves.")
    nvars = polys[0].nvars
    if any(p.nvars != nvars for p in polys):
        raise InputError("Generators must share the variable count.")

    order = TermOrder("lex")
    basis = buchberger([ModuleElement((p,)) for p in polys], order, limits)
    if basis.is_unit_ideal():
        logger.info("The system is inconsistent: the ideal is the unit ideal")
        return []
    triangular = [g.components[0] for g in basis.generators]
    _check_zero_dimensional(triangular, order, nvars)

    # z1 > z2 > ... under lex, so the last variable is eliminated first
    partials: list[tuple[dict[int, complex], int]] = [({}, 1)]
    for index in range(nvars - 1, -1, -1):
        layer = [p for p in triangular if index in _variables_of(p) and min(_variables_of(p)) == index]
        extended = []
        for values, multiplicity in partials:
            for root, count in _extend(values, index, layer, nvars):
                extended.append(({**values, index: root}, multiplicity * count))
        partials = extended

    solutions = []
    for values, multiplicity in partials:
        raw = np.array([values[i] for i in range(nvars)], dtype=complex)
        refined = _refine(triangular, raw) if multiplicity == 1 else raw
        point = tuple(complex(z) for z in refined)
        residual = _scaled_residual(polys, point)
        if residual > RESIDUAL_TOLERANCE:
            logger.info("Dropping candidate %s with residual %.3g", point, residual)
            continue
        solutions.append(SolutionPoint(point, multiplicity, residual))
    solutions.sort(key=lambda s: _sort_key(s.point))
    return solutions
