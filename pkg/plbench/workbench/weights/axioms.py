"""
Grid-based checks of the weight axioms.

(alpha)  omega(2t) <= K (1 + omega(t))
(beta)   integral_1^inf omega(t) / t^2 dt < inf
(gamma)' omega(t) >= a + b log(1 + t)
(gamma)  log(1 + t) / omega(t) -> 0
(delta)  phi(x) = omega(e^x) is convex

Every verdict keeps the numbers it was decided from. The (beta) tail
classification and the (gamma) limit are heuristics and may answer
"inconclusive" or err near the borderline.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from plbench.workbench.core.exceptions import InputError
from plbench.workbench.system.parser import GAMMA_PRIME_ONLY
from plbench.workbench.weights.families import WeightFunction

logger = logging.getLogger(__name__)

GRID_POINTS = 2000
GAMMA_LATTICE = np.round(np.arange(1, 81) * 0.05, 10)
CONVEXITY_TOLERANCE = 1e-9

CONVERGES = "converges"
DIVERGES = "diverges"
INCONCLUSIVE = "inconclusive"


def axiom_grid(horizon: float) -> np.ndarray:
    """0 followed by 1999 log-spaced points from 1e-3 to the horizon."""
    return np.concatenate([[0.0], np.logspace(-3, math.log10(horizon), GRID_POINTS - 1)])


@dataclass(frozen=True, slots=True)
class AlphaVerdict:
    holds: bool
    K: float
    fails_at: float | None = None


@dataclass(frozen=True, slots=True)
class BetaVerdict:
    verdict: str
    integral: float
    trace: tuple[tuple[float, float], ...]
    tail_exponent: float | None
    tail_log_exponent: float | None


@dataclass(frozen=True, slots=True)
class GammaPrimeVerdict:
    holds: bool
    a: float | None
    b: float | None


@dataclass(frozen=True, slots=True)
class GammaVerdict:
    holds: bool
    ratio_at_horizon: float


@dataclass(frozen=True, slots=True)
class DeltaVerdict:
    holds: bool
    violation_t: float | None = None


@dataclass(frozen=True, slots=True)
class AxiomReport:
    weight: str
    horizon: float
    shift: float
    alpha: AlphaVerdict
    beta: BetaVerdict
    gamma_prime: GammaPrimeVerdict
    gamma: GammaVerdict
    delta: DeltaVerdict
    flags: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict[str, object]:
        return {
            "weight": self.weight,
            "horizon": self.horizon,
            "normalization_shift": self.shift,
            "alpha": {"holds": self.alpha.holds, "K": self.alpha.K, "fails_at": self.alpha.fails_at},
            "beta": {
                "verdict": self.beta.verdict,
                "integral": self.beta.integral,
                "trace": [list(item) for item in self.beta.trace],
                "tail_exponent": self.beta.tail_exponent,
                "tail_log_exponent": self.beta.tail_log_exponent,
            },
            "gamma_prime": {"holds": self.gamma_prime.holds, "a": self.gamma_prime.a, "b": self.gamma_prime.b},
            "gamma": {"holds": self.gamma.holds, "ratio_at_horizon": self.gamma.ratio_at_horizon},
            "delta": {"holds": self.delta.holds, "violation_t": self.delta.violation_t},
            "flags": list(self.flags),
        }


def _check_monotone(w: WeightFunction, grid: np.ndarray, values: np.ndarray) -> None:
    drops = np.flatnonzero(np.diff(values) < -1e-12 * np.maximum(1.0, np.abs(values[1:])))
    if drops.size:
        raise InputError(f"{w.describe()} is not nondecreasing near t = {grid[drops[0] + 1]:.6g}.")


def check_alpha(w: WeightFunction, grid: np.ndarray) -> AlphaVerdict:
    ratios = w(2.0 * grid) / (1.0 + w(grid))
    worst = int(np.argmax(ratios))
    decade = grid >= grid[-1] / 10.0
    start = float(ratios[decade][0])
    # a ratio still climbing at the end of the grid signals an unbounded K
    if worst == ratios.size - 1 and ratios[-1] > 2.0 * max(start, 1.0):
        return AlphaVerdict(False, float(ratios[worst]), float(grid[worst]))
    return AlphaVerdict(True, float(ratios[worst]))


def _tail_fit(w: WeightFunction, horizon: float) -> tuple[float, float] | None:
    t = np.logspace(math.log10(horizon / 10.0), math.log10(horizon), 200)
    values = w(t)
    keep = (values > 0) & (t > math.e)
    if np.count_nonzero(keep) < 10:
        return None
    logs = np.log(t[keep])
    design = np.column_stack([np.ones_like(logs), logs, np.log(logs)])
    (_, p, r), *_ = np.linalg.lstsq(design, np.log(values[keep]), rcond=None)
    return float(p), float(r)


def classify_tail(p: float, r: float) -> str:
    """omega ~ c t^p (log t)^r: the integral of omega/t^2 converges iff p < 1 or p = 1 and r < -1."""
    if p < 0.95:
        return CONVERGES
    if p > 1.05:
        return DIVERGES
    if r <= -1.2:
        return CONVERGES
    if r >= -1.05:
        return DIVERGES
    return INCONCLUSIVE


def check_beta(w: WeightFunction, horizon: float) -> BetaVerdict:
    # substitute t = e^s: integral_0^{ln T} omega(e^s) e^{-s} ds
    def integrand(s: float) -> float:
        return float(w.phi(s)) * math.exp(-s)

    trace = []
    total = 0.0
    lower = 0.0
    decade = 10.0
    while lower < math.log(horizon):
        upper = min(math.log(decade), math.log(horizon))
        piece, _ = integrate.quad(integrand, lower, upper, limit=200)
        total += piece
        trace.append((math.exp(upper), total))
        lower = upper
        decade *= 10.0
    fit = _tail_fit(w, horizon)
    if fit is None:
        return BetaVerdict(INCONCLUSIVE, total, tuple(trace), None, None)
    p, r = fit
    return BetaVerdict(classify_tail(p, r), total, tuple(trace), p, r)


def _bounded_below(values: np.ndarray, grid: np.ndarray) -> bool:
    decade = grid >= grid[-1] / 10.0
    tail = values[decade]
    return float(tail.min()) >= float(values.min()) - 1e-12 and float(tail[-1] - tail[0]) >= -1e-9


def check_gamma_prime(w: WeightFunction, grid: np.ndarray, values: np.ndarray) -> GammaPrimeVerdict:
    """Largest lattice b for which omega - b log(1+t) stays bounded below; a is its grid minimum."""
    logs = np.log1p(grid)
    best: tuple[float, float] | None = None
    for b in GAMMA_LATTICE:
        shifted = values - b * logs
        if _bounded_below(shifted, grid):
            best = (float(shifted.min()), float(b))
    if best is None:
        return GammaPrimeVerdict(False, None, None)
    return GammaPrimeVerdict(True, best[0], best[1])


def check_gamma(w: WeightFunction, horizon: float) -> GammaVerdict:
    probe = np.array([horizon / 100.0, horizon])
    values = w(probe)
    if values[-1] <= 0:
        return GammaVerdict(False, math.inf)
    ratios = np.log1p(probe) / np.maximum(values, 1e-300)
    return GammaVerdict(bool(ratios[1] <= 0.5 and ratios[1] <= 0.9 * ratios[0]), float(ratios[1]))


def check_delta(w: WeightFunction, horizon: float) -> DeltaVerdict:
    x = np.linspace(math.log(1e-3), math.log(horizon), GRID_POINTS)
    phi = w.phi(x)
    second = phi[2:] - 2.0 * phi[1:-1] + phi[:-2]
    bad = np.flatnonzero(second < -CONVEXITY_TOLERANCE * np.maximum(1.0, np.abs(phi[1:-1])))
    if bad.size:
        return DeltaVerdict(False, float(math.exp(x[bad[0] + 1])))
    return DeltaVerdict(True)


def check_axioms(w: WeightFunction, horizon: float = 1e6) -> AxiomReport:
    if not horizon >= 10:
        raise InputError(f"Axiom horizon must be at least 10; got {horizon}.")
    grid = axiom_grid(horizon)
    values = w(grid)
    _check_monotone(w, grid, values)
    alpha = check_alpha(w, grid)
    beta = check_beta(w, horizon)
    gamma_prime = check_gamma_prime(w, grid, values)
    gamma = check_gamma(w, horizon)
    delta = check_delta(w, horizon)
    flags = list(w.spec.flags)
    if gamma_prime.holds and not gamma.holds and GAMMA_PRIME_ONLY not in flags:
        flags.append(GAMMA_PRIME_ONLY)
    logger.info(
        "%s: alpha=%s beta=%s gamma'=%s delta=%s",
        w.describe(),
        alpha.holds,
        beta.verdict,
        gamma_prime.holds,
        delta.holds,
    )
    shift = w.shift if w.normalized else 0.0
    return AxiomReport(w.describe(), horizon, shift, alpha, beta, gamma_prime, gamma, delta, tuple(flags))


def estimate_dilation_constant(w: WeightFunction, n: float, horizon: float = 1e6) -> float:
    """Smallest L on the grid with omega(n r) <= L omega(r) + L."""
    if n < 1:
        raise InputError(f"Dilation factor must be at least 1; got {n}.")
    grid = axiom_grid(horizon)
    return float(np.max(w(n * grid) / (1.0 + w(grid))))
