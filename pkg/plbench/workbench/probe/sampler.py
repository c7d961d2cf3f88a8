"""
Sample points of a plane curve at large radius.

For each radius r and angle theta the slice z1 = r e^(i theta) is solved for
z2. Fibres whose roots nearly collide are moved off the singular locus by a
small angle perturbation; points that fail the residual check are dropped.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from plbench.workbench.algebra.grammar import render
from plbench.workbench.algebra.poly import Polynomial, coefficient_to_float
from plbench.workbench.core.exceptions import InputError, Notices
from plbench.workbench.variety.roots import durand_kerner

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-8
COLLISION_TOLERANCE = 1e-6
_PERTURBATION = 1e-3
_MAX_PERTURBATIONS = 5


@dataclass(frozen=True)
class CurveSampler:
    curve: Polynomial
    radii: tuple[float, ...]
    angles: int
    points: np.ndarray
    radius_index: np.ndarray
    notices: tuple[str, ...] = field(default=())

    def within(self, index: int) -> np.ndarray:
        """Mask of samples taken at radius index <= `index`."""
        return self.radius_index <= index

    def as_dict(self) -> dict[str, object]:
        return {
            "curve": render(self.curve),
            "radii": list(self.radii),
            "angles": self.angles,
            "samples": int(self.points.shape[0]),
            "notices": list(self.notices),
        }


def _slice_coefficients(curve: Polynomial, z1: complex) -> np.ndarray:
    degree = curve.degree_in(1)
    coefficients = np.zeros(degree + 1, dtype=complex)
    for (a, b), value in curve.element.items():
        coefficients[degree - b] += coefficient_to_float(value) * z1**a
    return coefficients


def _residual(curve: Polynomial, point: tuple[complex, complex]) -> float:
    value = abs(curve.evaluate(point))
    scale = sum(
        abs(coefficient_to_float(c)) * abs(point[0]) ** a * abs(point[1]) ** b for (a, b), c in curve.element.items()
    )
    return value / max(scale, 1e-300)


def _newton(coefficients: np.ndarray, root: complex) -> complex:
    derivative = np.polyder(coefficients)
    for _ in range(3):
        slope = np.polyval(derivative, root)
        if slope == 0:
            break
        step = np.polyval(coefficients, root) / slope
        root -= step
        if abs(step) <= 1e-16 * max(1.0, abs(root)):
            break
    return complex(root)


def _collides(roots: np.ndarray) -> bool:
    for i in range(roots.size):
        for j in range(i + 1, roots.size):
            if abs(roots[i] - roots[j]) < COLLISION_TOLERANCE * max(1.0, abs(roots[i])):
                return True
    return False


def _strip_z1_power(curve: Polynomial, notices: Notices) -> Polynomial:
    power = min(m[0] for m in curve.element.keys())
    if power == 0:
        return curve
    notices.add(f"factored z1^{power} out of the curve before slicing")
    return Polynomial.from_terms(2, {(a - power, b): value for (a, b), value in curve.coefficients().items()})


def sample_curve(curve: Polynomial, r_max: float = 1e6, radii: int = 13, angles: int = 16) -> CurveSampler:
    if curve.nvars != 2:
        raise InputError(f"Curve sampling needs 2 variables, got {curve.nvars}.")
    if curve.is_zero():
        raise InputError("Cannot sample the zero polynomial.")
    if r_max < 1 or radii < 1 or angles < 1:
        raise InputError("Sampling needs r_max >= 1 and positive radius and angle counts.")
    notices = Notices()
    working = _strip_z1_power(curve, notices)
    if working.degree_in(1) == 0:
        raise InputError(f"The curve {render(curve)} does not involve z2; there are no fibres to sample.")

    radius_values = tuple(float(r) for r in np.logspace(0, math.log10(r_max), radii))
    points: list[tuple[complex, complex]] = []
    index: list[int] = []
    for k, radius in enumerate(radius_values):
        for j in range(angles):
            theta = 2.0 * math.pi * j / angles
            for attempt in range(_MAX_PERTURBATIONS + 1):
                z1 = radius * complex(math.cos(theta), math.sin(theta))
                coefficients = _slice_coefficients(working, z1)
                scale = float(np.max(np.abs(coefficients)))
                if scale == 0 or np.all(np.abs(coefficients) <= 1e-14 * scale):
                    roots = None
                else:
                    roots = np.array([_newton(coefficients, r) for r in durand_kerner(coefficients)])
                    if not _collides(roots):
                        break
                theta += _PERTURBATION * (attempt + 1)
                notices.add("perturbed sampling angles away from singular fibres")
            if roots is None:
                continue
            for root in roots:
                point = (z1, complex(root))
                if _residual(working, point) < RESIDUAL_TOLERANCE:
                    points.append(point)
                    index.append(k)
                else:
                    notices.add("dropped sample points that failed the residual check")
    for message in notices.items:
        logger.info(message)
    return CurveSampler(
        curve=working,
        radii=radius_values,
        angles=angles,
        points=np.array(points, dtype=complex).reshape(-1, 2),
        radius_index=np.array(index, dtype=int),
        notices=tuple(notices.items),
    )
