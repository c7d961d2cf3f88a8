"""
Weight functions omega: [0, inf) -> [0, inf) evaluated on numpy arrays.

With normalization on (the default) the evaluator is max(0, omega(t) - omega(1)),
so omega vanishes on [0, 1]; the subtracted value is kept as `shift`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike

from plbench.workbench.core.exceptions import InputError
from plbench.workbench.system.models import GEVREY, LOGPOW, SUBLINEAR_LOG, TABLE, WeightSpec

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], np.ndarray]


def _gevrey(alpha: float) -> Evaluator:
    return lambda t: np.power(t, alpha)


def _logpow(beta: float) -> Evaluator:
    return lambda t: np.power(np.log1p(t), beta)


def _sublinear_log(beta: float) -> Evaluator:
    return lambda t: t * np.power(np.log(np.e + t), -beta)


def _table(points: tuple[tuple[float, float], ...]) -> Evaluator:
    """Piecewise linear in log t; constant below the first positive abscissa, linear in log t past the last."""
    positive = [(t, w) for t, w in points if t > 0]
    if len(positive) < 2:
        raise InputError("A table weight needs at least two points with t > 0.")
    values = np.array([w for _, w in points])
    if np.any(np.diff(values) < 0):
        raise InputError("Table weight values must be nondecreasing in t.")
    logs = np.log(np.array([t for t, _ in positive]))
    omegas = np.array([w for _, w in positive])
    tail_slope = (omegas[-1] - omegas[-2]) / (logs[-1] - logs[-2])

    def evaluate(t: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            x = np.log(np.maximum(t, np.exp(logs[0])))
        inside = np.interp(x, logs, omegas)
        beyond = omegas[-1] + tail_slope * (x - logs[-1])
        return np.where(x > logs[-1], beyond, inside)

    return evaluate


@dataclass(frozen=True)
class WeightFunction:
    spec: WeightSpec
    raw: Evaluator
    shift: float = 0.0

    @property
    def normalized(self) -> bool:
        return self.spec.normalize

    def omega(self, t: ArrayLike) -> np.ndarray:
        values = np.asarray(t, dtype=float)
        if np.any(values < 0):
            raise InputError("Weights are defined for t >= 0 only.")
        result = self.raw(values)
        if self.normalized:
            result = np.maximum(0.0, result - self.shift)
        return result

    def __call__(self, t: ArrayLike) -> np.ndarray:
        return self.omega(t)

    def phi(self, x: ArrayLike) -> np.ndarray:
        """phi(x) = omega(e^x)."""
        with np.errstate(over="ignore"):
            return self.omega(np.exp(np.asarray(x, dtype=float)))

    def describe(self) -> str:
        return self.spec.describe()


def weight_function(spec: WeightSpec) -> WeightFunction:
    if spec.family == GEVREY:
        raw = _gevrey(float(spec.parameter))
    elif spec.family == LOGPOW:
        raw = _logpow(float(spec.parameter))
    elif spec.family == SUBLINEAR_LOG:
        raw = _sublinear_log(float(spec.parameter))
    elif spec.family == TABLE:
        raw = _table(spec.points)
    else:
        raise InputError(f"Unknown weight family '{spec.family}'.")
    shift = float(raw(np.array([1.0]))[0])
    if spec.normalize:
        logger.debug("Normalizing %s by omega(1) = %.6g", spec.describe(), shift)
    return WeightFunction(spec, raw, shift)
