"""
Young conjugate phi*(y) = sup_{x >= 0} (x y - phi(x)) with phi(x) = omega(e^x).

Gevrey weights use the stationary point of x y - e^(alpha x); all other
families bracket the maximizer by doubling and finish with bounded Brent
search on the concave objective.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from plbench.workbench.core.exceptions import ConjugateRangeError, InputError
from plbench.workbench.system.models import GEVREY, LOGPOW
from plbench.workbench.weights.axioms import check_delta
from plbench.workbench.weights.families import WeightFunction

logger = logging.getLogger(__name__)

MAX_SLOPE = 1e6
RELATIVE_TOLERANCE = 1e-8
CLOSED_FORM = "closed-form"
NUMERIC = "numeric-concave-search"
# exp overflows past ~709
_MAX_ABSCISSA = 700.0


def _maximize_concave(objective: Callable[[float], float], start: float, limit: float) -> tuple[float, float]:
    """Maximize a concave function on [0, limit]; returns (argmax, max)."""
    upper = max(start, 1e-3)
    while upper < limit and objective(min(2.0 * upper, limit)) > objective(upper):
        upper = min(2.0 * upper, limit)
    upper = min(2.0 * upper, limit)
    result = minimize_scalar(
        lambda x: -objective(x),
        bounds=(0.0, upper),
        method="bounded",
        options={"xatol": 1e-12 * max(1.0, upper)},
    )
    best_x, best_value = float(result.x), -float(result.fun)
    at_zero = objective(0.0)
    if at_zero >= best_value:
        return 0.0, at_zero
    return best_x, best_value


@dataclass(frozen=True)
class YoungConjugate:
    weight: WeightFunction
    method: str
    tolerance: float = RELATIVE_TOLERANCE

    @property
    def slope_limit(self) -> float:
        """
        Largest y with a finite conjugate. Tables grow linearly in log t past
        their last point and phi(x) = log(1 + e^x) has slopes below 1.
        """
        spec = self.weight.spec
        if spec.family == LOGPOW and spec.parameter == 1:
            return 1.0
        points = [(t, w) for t, w in spec.points if t > 0]
        if len(points) < 2:
            return MAX_SLOPE
        (t0, w0), (t1, w1) = points[-2], points[-1]
        return min(MAX_SLOPE, (w1 - w0) / (math.log(t1) - math.log(t0)))

    def _check(self, y: float) -> None:
        if y < 0:
            raise InputError(f"The conjugate is evaluated for y >= 0; got {y}.")
        if y > self.slope_limit:
            raise ConjugateRangeError(
                f"Conjugate requested at y = {y:.6g}, beyond the supported range y <= {self.slope_limit:.6g}."
            )

    def maximizer(self, y: float) -> float:
        self._check(y)
        if self.method == CLOSED_FORM:
            alpha = float(self.weight.spec.parameter)
            return max(0.0, math.log(y / alpha) / alpha) if y > 0 else 0.0
        def objective(x: float) -> float:
            return x * y - float(self.weight.phi(x))

        x, _ = _maximize_concave(objective, 1.0, _MAX_ABSCISSA)
        if x >= _MAX_ABSCISSA * (1 - 1e-9):
            edge, inner = objective(_MAX_ABSCISSA), objective(_MAX_ABSCISSA / 2)
            if edge > inner + 1e-12 * max(1.0, abs(inner)):
                raise ConjugateRangeError(f"The conjugate at y = {y:.6g} overflows the weight evaluator.")
        return x

    def __call__(self, y: float) -> float:
        x = self.maximizer(y)
        if self.method == CLOSED_FORM:
            alpha = float(self.weight.spec.parameter)
            constant = 1.0 if self.weight.normalized else 0.0
            if x == 0.0:
                return 0.0 if self.weight.normalized else -1.0
            return x * y - math.exp(alpha * x) + constant
        return x * y - float(self.weight.phi(x))

    def evaluate(self, ys: np.ndarray) -> np.ndarray:
        return np.array([self(float(y)) for y in np.asarray(ys, dtype=float)])


def young_conjugate(w: WeightFunction, *, numeric: bool = False, horizon: float = 1e6) -> YoungConjugate:
    """Conjugate of a weight whose phi is convex; `numeric` forces the search path for Gevrey weights."""
    delta = check_delta(w, horizon)
    if not delta.holds:
        raise InputError(f"{w.describe()} violates convexity of phi near t = {delta.violation_t:.6g}.")
    method = CLOSED_FORM if w.spec.family == GEVREY and not numeric else NUMERIC
    return YoungConjugate(w, method)


def biconjugate_check(conjugate: YoungConjugate, samples: int = 20, x_max: float = 10.0) -> float:
    """Largest relative gap between (phi*)* and phi at `samples` log-spaced x in [0.1, x_max]."""
    if samples < 1:
        raise InputError("At least one sample is needed.")
    xs = np.logspace(-1, math.log10(x_max), samples)
    worst = 0.0
    for x in xs:
        _, value = _maximize_concave(lambda y: x * y - conjugate(y), 1.0, conjugate.slope_limit)
        target = float(conjugate.weight.phi(x))
        worst = max(worst, abs(value - target) / max(abs(target), 1e-12))
    logger.debug("biconjugate gap %.3g over %d samples", worst, samples)
    return worst


def find_shift_constant(
    conjugate: YoungConjugate,
    *,
    y_max: float = 1e4,
    l_max: float = 1e6,
) -> float | None:
    """Smallest power of two L with phi*(y) - y >= L phi*(y / L) - L on a grid, or None up to `l_max`."""
    top = min(y_max, conjugate.slope_limit)
    if top > 1e-2:
        ys = np.concatenate([[0.0], np.logspace(-2, math.log10(top), 200)])
    else:
        ys = np.linspace(0.0, max(top, 0.0), 201)
    ys = np.minimum(ys, top)
    values = conjugate.evaluate(ys)
    candidate = 2.0
    while candidate <= l_max:
        scaled = conjugate.evaluate(ys / candidate)
        if np.all(values - ys >= candidate * scaled - candidate - 1e-9 * np.maximum(1.0, np.abs(values))):
            return candidate
        candidate *= 2.0
    logger.info("No shift constant found up to L = %.0e", l_max)
    return None
