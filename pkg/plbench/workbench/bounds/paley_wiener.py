"""
Decay envelope of the Fourier transform of an M-fold convolution of
normalized indicator functions.

With widths a_k = c k^(-s) the transform is a product of cardinal sines, so
log|f^(t)| <= E(t) = sum_k log min(1, 1 / (a_k t)). The envelope is compared
with -k omega(t) for a grid of k and fitted to -E(t) ~ C t^p.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from plbench.workbench.core.exceptions import InputError, Notices
from plbench.workbench.system.models import GEVREY, WeightSpec
from plbench.workbench.weights.families import WeightFunction, weight_function

logger = logging.getLogger(__name__)

MAX_FACTORS = 10_000
FIT_RANGE = (1e2, 1e6)
K_GRID = tuple(np.round(np.arange(1, 33) * 0.25, 10))
_GRID_POINTS = 400
_TABLE_POINTS = 41


@dataclass(frozen=True, slots=True)
class DecayFit:
    k: float
    bounded: bool
    constant: float


@dataclass(frozen=True, slots=True)
class PaleyWienerRecord:
    weight: str
    s: float
    epsilon: float
    factors: int
    scale: float
    width_sum: float
    exponent: float
    coefficient: float
    k_fits: tuple[DecayFit, ...]
    envelope: tuple[tuple[float, float], ...]
    notices: tuple[str, ...] = field(default=())

    @property
    def k_achieved(self) -> float:
        bounded = [fit.k for fit in self.k_fits if fit.bounded]
        return max(bounded, default=0.0)

    def as_dict(self) -> dict[str, object]:
        return {
            "weight": self.weight,
            "s": self.s,
            "epsilon": self.epsilon,
            "factors": self.factors,
            "scale": self.scale,
            "width_sum": self.width_sum,
            "decay_exponent": self.exponent,
            "decay_coefficient": self.coefficient,
            "k_achieved": self.k_achieved,
            "k_fits": [{"k": f.k, "bounded": f.bounded, "constant": f.constant} for f in self.k_fits],
            "envelope": [list(row) for row in self.envelope],
            "notices": list(self.notices),
        }


def widths(s: float, factors: int, epsilon: float, scale: float | None = None) -> tuple[np.ndarray, float, list[str]]:
    """a_k = c k^(-s) with sum a_k <= epsilon; c defaults to the largest admissible value."""
    powers = np.arange(1, factors + 1, dtype=float) ** (-s)
    notes = []
    limit = epsilon / float(powers.sum())
    if scale is None:
        scale = limit
    elif scale > limit:
        notes.append(f"widths summed to {scale * powers.sum():.6g} > epsilon = {epsilon:g}; rescaled c to {limit:.6g}")
        scale = limit
    return scale * powers, scale, notes


def envelope(a: np.ndarray, t: ArrayLike) -> np.ndarray:
    """E(t) = sum_k log min(1, 1/(a_k t)); zero for t <= 1/max(a)."""
    points = np.atleast_1d(np.asarray(t, dtype=float))
    products = np.outer(points, a)
    return -np.sum(np.log(np.maximum(products, 1.0)), axis=1)


def _bounded(values: np.ndarray, grid: np.ndarray) -> bool:
    tail = grid >= grid[-1] / 10.0
    return float(values[tail].max()) <= float(values[~tail].max()) + 1e-9


def paley_wiener_experiment(
    spec: WeightSpec,
    epsilon: float,
    factors: int,
    *,
    scale: float | None = None,
) -> PaleyWienerRecord:
    if spec.family != GEVREY:
        raise InputError("The decay experiment needs a gevrey weight.")
    if not 1 <= factors <= MAX_FACTORS:
        raise InputError(f"Factor count must lie in 1..{MAX_FACTORS}; got {factors}.")
    if epsilon <= 0:
        raise InputError(f"Support half-width must be positive; got {epsilon}.")
    notices = Notices()
    weight: WeightFunction = weight_function(spec)
    s = 1.0 / float(spec.parameter)
    a, c, notes = widths(s, factors, epsilon, scale)
    for note in notes:
        logger.info(note)
        notices.add(note)

    grid = np.logspace(math.log10(FIT_RANGE[0]), math.log10(FIT_RANGE[1]), _GRID_POINTS)
    values = envelope(a, grid)
    decay = -values
    usable = decay > 0
    if np.count_nonzero(usable) >= 2:
        p, log_c = np.polyfit(np.log(grid[usable]), np.log(decay[usable]), 1)
    else:
        p, log_c = 0.0, -math.inf
        notices.add("envelope vanishes on the fit range")

    omega = weight(grid)
    fits = []
    for k in K_GRID:
        excess = values + k * omega
        fits.append(DecayFit(float(k), _bounded(excess, grid), float(math.exp(min(700.0, excess.max())))))
    table_t = np.logspace(math.log10(FIT_RANGE[0]), math.log10(FIT_RANGE[1]), _TABLE_POINTS)
    table = tuple((float(t), float(e)) for t, e in zip(table_t, envelope(a, table_t)))
    record = PaleyWienerRecord(
        weight=spec.describe(),
        s=s,
        epsilon=epsilon,
        factors=factors,
        scale=c,
        width_sum=float(a.sum()),
        exponent=float(p),
        coefficient=float(math.exp(log_c)) if math.isfinite(log_c) else 0.0,
        k_fits=tuple(fits),
        envelope=table,
        notices=tuple(notices.items),
    )
    logger.info("decay fit p=%.4f, k achieved %.2f", record.exponent, record.k_achieved)
    return record
