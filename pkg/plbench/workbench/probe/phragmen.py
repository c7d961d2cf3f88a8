"""
Finite-radius probe of the Phragmén–Lindelöf implication on a sampled curve.

Every candidate u that satisfies the hypotheses contributes, per sampling
radius r, the least integer beta in [alpha, beta_max] with

    u <= H_{K1_beta}(Im zeta) + beta * omega(|zeta|) + C

on all samples with |zeta_1| <= r, together with the least such C >= 0. The
uniqueness variant measures the constant relative to sup(u - psi2_alpha)
and reports it multiplicatively.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from plbench.workbench.bounds.convex import Exhaustion
from plbench.workbench.bounds.psi import PsiBound, psi_many
from plbench.workbench.core.exceptions import InputError
from plbench.workbench.probe.candidates import CandidateFunction
from plbench.workbench.probe.sampler import CurveSampler
from plbench.workbench.system.models import RegionSpec
from plbench.workbench.weights.families import WeightFunction

logger = logging.getLogger(__name__)

STABLE = "stable"
GROWING = "growing"
VACUOUS = "vacuous at this scale"

PROBE = "probe"
UNIQUENESS = "uniqueness"

CAVEAT = (
    "Finite-sample falsifier and explorer: a 'growing' trend is evidence against the "
    "Phragmén–Lindelöf implication at the sampled scale, never a proof; a 'stable' trend "
    "is never a certificate."
)

HYPOTHESIS_TOLERANCE = 1e-9
REPLAY_TOLERANCE = 1e-9


@dataclass(frozen=True, slots=True)
class CandidateOutcome:
    label: str
    hypothesis_bound: bool
    hypothesis_growth: bool | None
    alpha_u: int | None
    c_u: float | None
    reference: float | None
    betas: tuple[int, ...] = ()
    constants: tuple[float, ...] = ()
    failure: str | None = None

    @property
    def admissible(self) -> bool:
        return self.hypothesis_bound and self.hypothesis_growth is not False

    def as_dict(self) -> dict[str, object]:
        payload: dict[str, object] = {
            "label": self.label,
            "admissible": self.admissible,
            "hypothesis_bound": self.hypothesis_bound,
            "hypothesis_growth": self.hypothesis_growth,
            "alpha_u": self.alpha_u,
            "c_u": self.c_u,
            "beta": list(self.betas),
            "C": list(self.constants),
        }
        if self.failure:
            payload["failure"] = self.failure
        return payload


@dataclass(frozen=True)
class _ProbeContext:
    bound: PsiBound
    candidates: tuple[CandidateFunction, ...]


@dataclass(frozen=True)
class PLVerdict:
    mode: str
    alpha: int
    c_max: float
    beta_max: int
    radii: tuple[float, ...]
    candidates: tuple[CandidateOutcome, ...]
    beta_empirical: tuple[int | None, ...]
    c_empirical: tuple[float | None, ...]
    trend: str
    caveat: str = CAVEAT
    replay_passed: bool | None = None
    notices: tuple[str, ...] = ()
    context: _ProbeContext | None = field(default=None, repr=False, compare=False)

    @property
    def pass_rate(self) -> float:
        if not self.candidates:
            return 0.0
        return sum(1 for c in self.candidates if c.admissible) / len(self.candidates)

    @property
    def exit_code(self) -> int:
        if self.trend == VACUOUS:
            return 3
        return 2 if self.trend == GROWING else 0

    def as_dict(self) -> dict[str, object]:
        return {
            "mode": self.mode,
            "alpha": self.alpha,
            "c_max": self.c_max,
            "beta_max": self.beta_max,
            "hypothesis_pass_rate": self.pass_rate,
            "trend": self.trend,
            "replay_passed": self.replay_passed,
            "caveat": self.caveat,
            "per_radius": [
                {"radius": r, "beta_empirical": b, "C_empirical": c}
                for r, b, c in zip(self.radii, self.beta_empirical, self.c_empirical)
            ],
            "candidates": [c.as_dict() for c in self.candidates],
            "notices": list(self.notices),
        }


class _PsiCache:
    """psi1_beta on every sample, computed once per beta."""

    def __init__(self, bound: PsiBound, points: np.ndarray) -> None:
        self._bound = bound
        self._points = points
        self._values: dict[int, np.ndarray] = {}

    def __call__(self, beta: int) -> np.ndarray:
        if beta not in self._values:
            self._values[beta] = psi_many(self._bound.with_alpha(beta), self._points)
        return self._values[beta]


def _sup(values: np.ndarray) -> float:
    return float(np.max(values)) if values.size else -math.inf


def _minimal_betas(
    u: np.ndarray,
    sampler: CurveSampler,
    psi1: _PsiCache,
    alpha: int,
    beta_max: int,
    limit: float,
    reference: float = 0.0,
) -> tuple[list[int], list[float]]:
    betas: list[int] = []
    excesses: list[float] = []
    beta = alpha
    for index in range(len(sampler.radii)):
        mask = sampler.within(index)
        while beta <= beta_max:
            excess = _sup(u[mask] - psi1(beta)[mask]) - reference
            if excess <= limit:
                break
            beta += 1
        if beta > beta_max:
            betas.append(beta_max + 1)
            excesses.append(math.inf)
        else:
            betas.append(beta)
            excesses.append(max(0.0, excess))
    return betas, excesses


def _trend(radii: Sequence[float], betas: Sequence[int | None]) -> str:
    """Growing when beta at the outer radius exceeds beta one decade further in."""
    top = radii[-1]
    inner = [i for i, r in enumerate(radii) if r <= top / 10.0 * (1 + 1e-12)]
    if not inner or betas[-1] is None:
        return STABLE
    previous = betas[inner[-1]]
    return GROWING if previous is not None and betas[-1] > previous else STABLE


def _check(
    sampler: CurveSampler,
    alpha: int,
    c_max: float,
    beta_max: int,
    candidates: Sequence[CandidateFunction],
) -> None:
    if sampler.points.shape[0] == 0:
        raise InputError("The sampler produced no points.")
    if alpha < 1 or beta_max < alpha:
        raise InputError(f"Need 1 <= alpha <= beta_max; got alpha={alpha}, beta_max={beta_max}.")
    if c_max < 0:
        raise InputError(f"c_max must be nonnegative; got {c_max}.")
    if not candidates:
        raise InputError("At least one candidate function is required.")


def _aggregate(
    mode: str,
    sampler: CurveSampler,
    alpha: int,
    c_max: float,
    beta_max: int,
    outcomes: list[CandidateOutcome],
    context: _ProbeContext,
) -> PLVerdict:
    admissible = [o for o in outcomes if o.admissible]
    count = len(sampler.radii)
    if not admissible:
        betas: list[int | None] = [None] * count
        constants: list[float | None] = [None] * count
        trend = VACUOUS
    else:
        betas = [max(o.betas[i] for o in admissible) for i in range(count)]
        constants = [max(o.constants[i] for o in admissible) for i in range(count)]
        trend = _trend(sampler.radii, betas)
    verdict = PLVerdict(
        mode=mode,
        alpha=alpha,
        c_max=c_max,
        beta_max=beta_max,
        radii=sampler.radii,
        candidates=tuple(outcomes),
        beta_empirical=tuple(betas),
        c_empirical=tuple(constants),
        trend=trend,
        notices=sampler.notices,
        context=context,
    )
    passed = replay(verdict, sampler)
    logger.info("%s: trend %s, pass rate %.2f, replay %s", mode, trend, verdict.pass_rate, passed)
    return replace(verdict, replay_passed=passed)


def probe(
    sampler: CurveSampler,
    K1: RegionSpec,
    K2: RegionSpec,
    weight: WeightFunction,
    alpha: int,
    candidates: Sequence[CandidateFunction],
    *,
    c_max: float = 64.0,
    beta_max: int = 64,
    alpha_u_max: int = 8,
) -> PLVerdict:
    _check(sampler, alpha, c_max, beta_max, candidates)
    points = sampler.points
    bound = PsiBound(Exhaustion(K1), weight, alpha)
    psi1 = _PsiCache(bound, points)
    psi2 = psi_many(PsiBound(Exhaustion(K2), weight, alpha), points)

    outcomes = []
    for candidate in candidates:
        u = candidate(points)
        gap = u - psi2
        over = np.flatnonzero(gap > HYPOTHESIS_TOLERANCE * np.maximum(1.0, np.abs(psi2)))
        if over.size:
            outcomes.append(
                CandidateOutcome(
                    candidate.label, False, None, None, None, None,
                    failure=f"exceeds psi2_alpha at {over.size} of {u.size} samples",
                )
            )
            continue
        alpha_u = next((a for a in range(1, alpha_u_max + 1) if _sup(u - psi1(a)) <= c_max), None)
        if alpha_u is None:
            outcomes.append(
                CandidateOutcome(
                    candidate.label, True, False, None, None, None,
                    failure=f"no alpha_u <= {alpha_u_max} bounds it by psi1 within c_max",
                )
            )
            continue
        c_u = max(0.0, _sup(u - psi1(alpha_u)))
        betas, constants = _minimal_betas(u, sampler, psi1, alpha, beta_max, c_max)
        outcomes.append(
            CandidateOutcome(candidate.label, True, True, alpha_u, c_u, None, tuple(betas), tuple(constants))
        )

    context = _ProbeContext(bound, tuple(candidates))
    return _aggregate(PROBE, sampler, alpha, c_max, beta_max, outcomes, context)


def uniqueness_probe(
    sampler: CurveSampler,
    K1: RegionSpec,
    K2: RegionSpec,
    weight: WeightFunction,
    alpha: int,
    candidates: Sequence[CandidateFunction],
    *,
    c_max: float = 64.0,
    beta_max: int = 64,
) -> PLVerdict:
    """
    Holomorphic candidates only; the only hypothesis is the K2 bound. The
    reported C is exp(max(0, sup(u - psi1_beta) - sup(u - psi2_alpha))).
    """
    _check(sampler, alpha, c_max, beta_max, candidates)
    if not all(c.holomorphic for c in candidates):
        raise InputError("The uniqueness probe takes log|g| candidates only.")
    points = sampler.points
    bound = PsiBound(Exhaustion(K1), weight, alpha)
    psi1 = _PsiCache(bound, points)
    psi2 = psi_many(PsiBound(Exhaustion(K2), weight, alpha), points)
    if c_max < 1:
        raise InputError(f"The uniqueness probe reports C >= 1; c_max={c_max} leaves no room.")
    limit = math.log(c_max)

    outcomes = []
    for candidate in candidates:
        u = candidate(points)
        reference = _sup(u - psi2)
        if not math.isfinite(reference):
            outcomes.append(
                CandidateOutcome(candidate.label, False, None, None, None, None, failure="vanishes on every sample")
            )
            continue
        betas, excesses = _minimal_betas(u, sampler, psi1, alpha, beta_max, limit, reference)
        constants = tuple(math.exp(e) if math.isfinite(e) else math.inf for e in excesses)
        outcomes.append(CandidateOutcome(candidate.label, True, None, None, None, reference, tuple(betas), constants))

    context = _ProbeContext(bound, tuple(candidates))
    return _aggregate(UNIQUENESS, sampler, alpha, c_max, beta_max, outcomes, context)


def replay(verdict: PLVerdict, sampler: CurveSampler) -> bool:
    """Re-check every reported (beta, C) against the stored samples."""
    if verdict.context is None:
        raise InputError("This verdict carries no probe context to replay against.")
    bound = verdict.context.bound
    by_label = {c.label: c for c in verdict.context.candidates}
    points = sampler.points
    for outcome in verdict.candidates:
        if not outcome.admissible:
            continue
        u = by_label[outcome.label](points)
        for index, (beta, constant) in enumerate(zip(outcome.betas, outcome.constants)):
            if beta > verdict.beta_max:
                continue
            mask = sampler.within(index)
            excess = _sup(u[mask] - psi_many(bound.with_alpha(beta), points[mask]))
            if verdict.mode == UNIQUENESS:
                excess -= outcome.reference
                allowed = math.log(constant) if constant > 0 else -math.inf
            else:
                allowed = constant
            if excess > allowed + REPLAY_TOLERANCE * max(1.0, abs(allowed)):
                logger.warning("replay failed for %s at radius %g", outcome.label, sampler.radii[index])
                return False
    return True
