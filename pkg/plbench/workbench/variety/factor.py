"""Exact factorization over the rationals, with degree caps."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from plbench.workbench.algebra.grammar import render
from plbench.workbench.algebra.poly import Polynomial, to_fraction
from plbench.workbench.core.exceptions import InputError, ResourceLimitError

logger = logging.getLogger(__name__)

MAX_UNIVARIATE_DEGREE = 40
MAX_BIVARIATE_DEGREE = 8


@dataclass(frozen=True, slots=True)
class FactorList:
    """p = unit * prod(f ** k); `complete` is False when only square-free splitting ran."""

    factors: tuple[tuple[Polynomial, int], ...]
    unit: Fraction
    complete: bool = True

    def reconstruct(self, nvars: int) -> Polynomial:
        product = Polynomial.constant(nvars, self.unit)
        for factor, multiplicity in self.factors:
            product = product * factor**multiplicity
        return product

    def as_dict(self) -> dict[str, object]:
        return {
            "unit": str(self.unit),
            "complete": self.complete,
            "factors": [{"factor": render(f), "multiplicity": k} for f, k in self.factors],
        }


def active_variables(p: Polynomial) -> tuple[int, ...]:
    return tuple(i for i in range(p.nvars) if p.degree_in(i) > 0)


def _check_caps(p: Polynomial, active: tuple[int, ...]) -> None:
    if len(active) == 1 and p.total_degree() > MAX_UNIVARIATE_DEGREE:
        raise ResourceLimitError(
            f"Univariate degree {p.total_degree()} exceeds the factorization cap of {MAX_UNIVARIATE_DEGREE}."
        )
    if len(active) == 2 and p.total_degree() > MAX_BIVARIATE_DEGREE:
        raise ResourceLimitError(
            f"Bivariate total degree {p.total_degree()} exceeds the factorization cap of {MAX_BIVARIATE_DEGREE}."
        )


def _canonical(factors: list[tuple[Polynomial, int]]) -> tuple[tuple[Polynomial, int], ...]:
    return tuple(sorted(factors, key=lambda item: (item[0].total_degree(), render(item[0]), item[1])))


def factor(p: Polynomial) -> FactorList:
    """
    Factor `p` over Q.

    Polynomials in at most two effective variables are split into
    irreducibles; with more variables only the square-free decomposition is
    computed and `complete` is False.
    """
    if p.is_zero():
        raise InputError("Cannot factor the zero polynomial.")
    if p.is_constant():
        return FactorList((), p.coefficients().get((0,) * p.nvars, Fraction(0)))
    active = active_variables(p)
    _check_caps(p, active)

    if len(active) <= 2:
        unit, pieces = p.element.factor_list()
        complete = True
    else:
        logger.info("Factoring in %d variables: square-free decomposition only", len(active))
        unit, pieces = p.element.sqf_list()
        complete = False

    factors: list[tuple[Polynomial, int]] = []
    scale = to_fraction(unit)
    for piece, multiplicity in pieces:
        poly = Polynomial(piece)
        primitive = poly.primitive()
        # piece = ratio * primitive
        ratio = _ratio(poly, primitive)
        scale *= ratio**multiplicity
        factors.append((primitive, multiplicity))
    result = FactorList(_canonical(factors), scale, complete)
    if result.reconstruct(p.nvars) != p:
        raise InputError(f"Factorization of {render(p)} did not reconstruct the input.")
    return result


def _ratio(poly: Polynomial, primitive: Polynomial) -> Fraction:
    monomial, value = next(iter(primitive.coefficients().items()))
    return poly.coefficients()[monomial] / value


def square_free_part(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors, made primitive."""
    if p.is_zero():
        raise InputError("The zero polynomial has no square-free part.")
    if p.is_constant():
        return Polynomial.one(p.nvars)
    return Polynomial(p.element.sqf_part()).primitive()


def minimal_primes_if_principal(generators: tuple[Polynomial, ...]) -> tuple[Polynomial, ...]:
    """
    Distinct irreducible factors of a principal annihilator.

    These generate the minimal primes of the module, the part of Ass(M) that
    is available without primary decomposition. A non-principal or zero
    annihilator yields an empty tuple.
    """
    if len(generators) != 1 or generators[0].is_zero():
        return ()
    generator = generators[0]
    if generator.is_constant():
        return ()
    return tuple(f for f, _ in factor(generator).factors)
