from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike

from plbench.workbench.bounds.convex import ConvexBody, Exhaustion, support_many
from plbench.workbench.config import DEFAULT_SEED
from plbench.workbench.core.exceptions import InputError
from plbench.workbench.weights.families import WeightFunction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PsiBound:
    """psi_alpha(zeta) = H_{K_alpha}(Im zeta) + alpha * omega(|zeta|_1)."""

    exhaustion: Exhaustion
    weight: WeightFunction
    alpha: int

    @property
    def body(self) -> ConvexBody:
        return self.exhaustion.member(self.alpha)

    def with_alpha(self, alpha: int) -> "PsiBound":
        return PsiBound(self.exhaustion, self.weight, alpha)


def psi_many(bound: PsiBound, zetas: ArrayLike) -> np.ndarray:
    points = np.atleast_2d(np.asarray(zetas, dtype=complex))
    modulus = np.sum(np.abs(points), axis=1)
    return support_many(bound.body, points.imag) + bound.alpha * bound.weight(modulus)


def psi_eval(bound: PsiBound, zeta: Sequence[complex]) -> float:
    if len(zeta) != bound.body.dimension:
        raise InputError(f"Point has {len(zeta)} coordinates; expected {bound.body.dimension}.")
    return float(psi_many(bound, [list(zeta)])[0])


@dataclass(frozen=True, slots=True)
class ShiftStability:
    k1: float
    decade_maxima: tuple[tuple[float, float], ...]
    slope: float
    bounded: bool

    def as_dict(self) -> dict[str, object]:
        return {
            "k1": self.k1,
            "decade_maxima": [list(item) for item in self.decade_maxima],
            "slope": self.slope,
            "bounded": self.bounded,
        }


def shift_stability_check(
    bound: PsiBound,
    k0: float,
    trials: int = 32,
    *,
    r_max: float = 1e6,
    seed: int = DEFAULT_SEED,
) -> ShiftStability:
    """
    Largest |psi(zeta + z) - psi(zeta)| seen for |z|_1 <= k0.

    The same unit directions are reused at every radius so the per-decade
    maxima are comparable. Radii are the powers of ten below r_max and r_max
    itself; boundedness means the maxima do not climb with log10 |zeta|
    (regression slope below 0.01).
    """
    if k0 < 0:
        raise InputError(f"Shift radius must be nonnegative; got {k0}.")
    if r_max <= 0:
        raise InputError(f"r_max must be positive; got {r_max}.")
    n = bound.body.dimension
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((trials, n)) + 1j * rng.standard_normal((trials, n))
    directions /= np.sum(np.abs(directions), axis=1, keepdims=True)
    # extreme shifts ±k0 e_j and ±i k0 e_j plus random ones inside the ball
    extremes = np.vstack([np.eye(n), -np.eye(n), 1j * np.eye(n), -1j * np.eye(n)]).astype(complex)
    interior = rng.standard_normal((trials, n)) + 1j * rng.standard_normal((trials, n))
    interior *= rng.uniform(0, 1, (trials, 1)) / np.sum(np.abs(interior), axis=1, keepdims=True)
    shifts = k0 * np.vstack([extremes, interior])

    decades = max(int(math.ceil(math.log10(r_max))), 0)
    radii = [10.0**decade for decade in range(decades) if 10.0**decade < r_max] + [r_max]
    maxima = []
    for radius in radii:
        base = radius * directions
        reference = psi_many(bound, base)
        worst = 0.0
        for shift in shifts:
            worst = max(worst, float(np.max(np.abs(psi_many(bound, base + shift) - reference))))
        maxima.append((radius, worst))
    values = np.array([m for _, m in maxima])
    log_radii = np.log10(np.array(radii))
    slope = float(np.polyfit(log_radii, values, 1)[0]) if values.size > 1 else 0.0
    k1 = float(values.max())
    logger.debug("shift stability k0=%g: k1=%.6g slope=%.3g", k0, k1, slope)
    return ShiftStability(k1, tuple(maxima), slope, slope < 0.01)
