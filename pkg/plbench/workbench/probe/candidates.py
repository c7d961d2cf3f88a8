"""Plurisubharmonic candidate functions evaluated on sampled points."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from plbench.workbench.algebra.grammar import render
from plbench.workbench.algebra.poly import Polynomial, coefficient_to_float
from plbench.workbench.core.exceptions import InputError
from plbench.workbench.system.models import CandidateSpec
from plbench.workbench.utils.parsing import format_rational

LOG_ABS = "log-abs-polynomial"
LINEAR_IMAGINARY = "linear-imaginary"
PSH_COMBINATION = "psh-combination"


@dataclass(frozen=True)
class CandidateFunction:
    label: str
    kind: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    holomorphic: bool = False

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.evaluator(np.atleast_2d(np.asarray(points, dtype=complex)))


def polynomial_values(poly: Polynomial, points: np.ndarray) -> np.ndarray:
    values = np.zeros(points.shape[0], dtype=complex)
    for monomial, coefficient in poly.element.items():
        term = np.full(points.shape[0], coefficient_to_float(coefficient), dtype=complex)
        for j, exponent in enumerate(monomial):
            if exponent:
                term *= points[:, j] ** exponent
        values += term
    return values


def _log_abs(poly: Polynomial) -> Callable[[np.ndarray], np.ndarray]:
    def evaluate(points: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(np.abs(polynomial_values(poly, points)))

    return evaluate


def _linear(direction: tuple[Fraction, ...]) -> Callable[[np.ndarray], np.ndarray]:
    weights = np.array([float(c) for c in direction], dtype=float)

    def evaluate(points: np.ndarray) -> np.ndarray:
        return points.imag @ weights

    return evaluate


def candidate_from_spec(spec: CandidateSpec, nvars: int) -> CandidateFunction:
    if spec.kind == LOG_ABS:
        if spec.polynomial is None or spec.polynomial.is_zero():
            raise InputError("log-abs-polynomial candidates need a nonzero polynomial.")
        if spec.polynomial.nvars != nvars:
            raise InputError(f"Candidate polynomial has {spec.polynomial.nvars} variables; expected {nvars}.")
        return CandidateFunction(f"log|{render(spec.polynomial)}|", LOG_ABS, _log_abs(spec.polynomial), True)
    if spec.kind == LINEAR_IMAGINARY:
        if len(spec.direction) != nvars:
            raise InputError(f"Linear candidate has {len(spec.direction)} coefficients; expected {nvars}.")
        label = "Im<" + ",".join(format_rational(c) for c in spec.direction) + ">"
        return CandidateFunction(label, LINEAR_IMAGINARY, _linear(spec.direction))
    if spec.kind == PSH_COMBINATION:
        if not spec.parts:
            raise InputError("psh-combination candidates need at least one part.")
        parts = [candidate_from_spec(part, nvars) for part in spec.parts]

        def evaluate(points: np.ndarray) -> np.ndarray:
            return np.max(np.vstack([part(points) for part in parts]), axis=0)

        return CandidateFunction("max(" + ", ".join(p.label for p in parts) + ")", PSH_COMBINATION, evaluate)
    raise InputError(f"Unknown candidate kind '{spec.kind}'.")


def default_candidates(nvars: int) -> tuple[CandidateFunction, ...]:
    """log|g| for a few monomials, Im<c, zeta> for c in {-1, 0, 1}^N and one max-combination."""
    specs: list[CandidateSpec] = [CandidateSpec(LOG_ABS, polynomial=Polynomial.one(nvars))]
    for j in range(nvars):
        z = Polynomial.variable(nvars, j)
        specs.extend(CandidateSpec(LOG_ABS, polynomial=z**k) for k in (1, 2, 3))
    if nvars >= 2:
        specs.append(CandidateSpec(LOG_ABS, polynomial=Polynomial.variable(nvars, 0) * Polynomial.variable(nvars, 1)))
    linear = [
        CandidateSpec(LINEAR_IMAGINARY, direction=tuple(Fraction(c) for c in signs))
        for signs in itertools.product((-1, 0, 1), repeat=nvars)
        if any(signs)
    ]
    specs.extend(linear)
    unit = [spec for spec in linear if sum(abs(c) for c in spec.direction) == 1]
    specs.append(CandidateSpec(PSH_COMBINATION, parts=tuple(unit)))
    return tuple(candidate_from_spec(spec, nvars) for spec in specs)
