from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from plbench.workbench.weights.axioms import axiom_grid
from plbench.workbench.weights.families import WeightFunction

logger = logging.getLogger(__name__)

EQUIVALENT = "equivalent"
FIRST_DOMINATED = "w1=O(w2) only"
SECOND_DOMINATED = "w2=O(w1) only"
INCOMPARABLE = "incomparable-on-grid"


@dataclass(frozen=True, slots=True)
class SubadditivityResult:
    holds: bool
    worst_ratio: float
    worst_pair: tuple[float, float]

    def as_dict(self) -> dict[str, object]:
        return {"holds": self.holds, "worst_ratio": self.worst_ratio, "worst_pair": list(self.worst_pair)}


@dataclass(frozen=True, slots=True)
class EquivalenceResult:
    verdict: str
    max_ratio: float
    max_ratio_at: float
    min_ratio: float
    min_ratio_at: float

    def as_dict(self) -> dict[str, object]:
        return {
            "verdict": self.verdict,
            "max_ratio": self.max_ratio,
            "max_ratio_at": self.max_ratio_at,
            "min_ratio": self.min_ratio,
            "min_ratio_at": self.min_ratio_at,
        }


def subadditivity_check(w: WeightFunction, K: float, horizon: float = 1e6) -> SubadditivityResult:
    """omega(x + y) <= K (1 + omega(x) + omega(y)) over 10^4 grid pairs."""
    points = axiom_grid(horizon)[::20]
    x, y = np.meshgrid(points, points, indexing="ij")
    ratios = w(x + y) / (K * (1.0 + w(x) + w(y)))
    i, j = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
    worst = float(ratios[i, j])
    return SubadditivityResult(worst <= 1.0 + 1e-12, worst, (float(points[i]), float(points[j])))


def _bounded(ratios: np.ndarray, grid: np.ndarray) -> bool:
    # a ratio that keeps growing over the last two decades is not O(1)
    tail = grid >= grid[-1] / 100.0
    return float(ratios[tail].max()) <= 1.5 * float(ratios[~tail].max())


def equivalence_check(w1: WeightFunction, w2: WeightFunction, horizon: float = 1e6) -> EquivalenceResult:
    grid = np.logspace(0, math.log10(horizon), 400)
    ratios = (1.0 + w1(grid)) / (1.0 + w2(grid))
    first_small = _bounded(ratios, grid)
    second_small = _bounded(1.0 / ratios, grid)
    if first_small and second_small:
        verdict = EQUIVALENT
    elif first_small:
        verdict = FIRST_DOMINATED
    elif second_small:
        verdict = SECOND_DOMINATED
    else:
        verdict = INCOMPARABLE
    high, low = int(np.argmax(ratios)), int(np.argmin(ratios))
    logger.debug("%s vs %s: %s", w1.describe(), w2.describe(), verdict)
    return EquivalenceResult(verdict, float(ratios[high]), float(grid[high]), float(ratios[low]), float(grid[low]))
