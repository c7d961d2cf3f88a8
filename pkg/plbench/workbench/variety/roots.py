"""
Simultaneous-iteration root finder for univariate complex polynomials.

Starting points sit on a circle of the Cauchy radius at fixed, irrational
angle offsets, so repeated runs return the same roots in the same order.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

_ANGLE_OFFSET = 0.4
_MAX_ITERATIONS = 2000
_NEWTON_POLISH = 3


def _trim(coefficients: Sequence[complex]) -> np.ndarray:
    values = np.asarray(coefficients, dtype=complex)
    nonzero = np.flatnonzero(values)
    if nonzero.size == 0:
        return values[:0]
    return values[nonzero[0]:]


def durand_kerner(
    coefficients: Sequence[complex],
    *,
    tolerance: float = 1e-14,
    max_iterations: int = _MAX_ITERATIONS,
) -> np.ndarray:
    """
    Return all complex roots of sum_k coefficients[k] * x^(n-k).

    Coefficients are listed from the highest power down. Leading zeros are
    ignored; a constant polynomial has no roots.
    """
    values = _trim(coefficients)
    degree = values.size - 1
    if degree < 1:
        return np.zeros(0, dtype=complex)
    monic = values / values[0]
    if degree == 1:
        return np.array([-monic[1]])

    radius = 1.0 + float(np.max(np.abs(monic[1:])))
    angles = 2.0 * np.pi * np.arange(degree) / degree + _ANGLE_OFFSET
    roots = radius * np.exp(1j * angles)
    for iteration in range(max_iterations):
        differences = roots[:, None] - roots[None, :]
        np.fill_diagonal(differences, 1.0)
        denominators = np.prod(differences, axis=1)
        denominators[denominators == 0] = tolerance
        steps = np.polyval(monic, roots) / denominators
        roots = roots - steps
        if np.max(np.abs(steps)) <= tolerance * max(1.0, float(np.max(np.abs(roots)))):
            logger.debug("durand-kerner converged after %d iterations (degree %d)", iteration + 1, degree)
            break
    else:
        logger.debug("durand-kerner stopped at the iteration cap (degree %d)", degree)
    return _polish(monic, roots)


def _polish(monic: np.ndarray, roots: np.ndarray) -> np.ndarray:
    derivative = np.polyder(monic)
    polished = roots.copy()
    for _ in range(_NEWTON_POLISH):
        values = np.polyval(monic, polished)
        slopes = np.polyval(derivative, polished)
        safe = np.abs(slopes) > 1e-300
        candidate = polished.copy()
        candidate[safe] = polished[safe] - values[safe] / slopes[safe]
        # keep a Newton step only where it lowers the residual
        better = np.abs(np.polyval(monic, candidate)) < np.abs(values)
        polished = np.where(better, candidate, polished)
    return polished


def cluster_roots(roots: Sequence[complex], tolerance: float = 1e-6) -> list[tuple[complex, int]]:
    """Group roots closer than `tolerance` (relative to their size) and count them."""
    clusters: list[list[complex]] = []
    for root in roots:
        for members in clusters:
            centre = complex(np.mean(members))
            if abs(root - centre) <= tolerance * max(1.0, abs(centre)):
                members.append(complex(root))
                break
        else:
            clusters.append([complex(root)])
    grouped = [(complex(np.mean(members)), len(members)) for members in clusters]
    return sorted(grouped, key=lambda item: (round(item[0].real, 9), round(item[0].imag, 9)))
