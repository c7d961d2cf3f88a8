"""Explicit constants from the decay estimates, computed from fitted (gamma)' data."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from plbench.workbench.core.exceptions import InputError

FITTED_NOTE = "computed from the grid-fitted (a, b) of omega(t) >= a + b log(1 + t)"


@dataclass(frozen=True, slots=True)
class LemmaConstants:
    exponent: float
    D: float
    note: str = FITTED_NOTE

    def as_dict(self) -> dict[str, object]:
        return {"exponent": self.exponent, "D": self.D, "note": self.note}


@dataclass(frozen=True, slots=True)
class ReverseDirectionCheck:
    a: float
    b: float
    k: float
    threshold: float
    satisfied: bool
    integral: float | None

    def as_dict(self) -> dict[str, object]:
        return {
            "a": self.a,
            "b": self.b,
            "k": self.k,
            "threshold": self.threshold,
            "satisfied": self.satisfied,
            "integral": self.integral,
        }


def lemma_constants(a: float, b: float, L: float, B: float) -> LemmaConstants:
    """Exponent 1/b - B/L and D = e^(1 - a/b)."""
    if b <= 0 or L <= 0:
        raise InputError("Both b and L must be positive.")
    return LemmaConstants(1.0 / b - B / L, math.exp(1.0 - a / b))


def reverse_direction_check(a: float, b: float, k: float, lam: float, n: int) -> ReverseDirectionCheck:
    """
    Flags k > (N + 1)/b + lambda and recomputes the radial integral
    int_0^inf (1 + r)^(b (lambda - k)) r^(N - 1) dr when it is finite.
    """
    if b <= 0:
        raise InputError("The (γ)′ slope b must be positive.")
    if n < 1:
        raise InputError("Dimension must be at least 1.")
    threshold = (n + 1) / b + lam
    satisfied = k > threshold
    integral = None
    if b * (k - lam) > n:
        value, _ = integrate.quad(lambda r: (1.0 + r) ** (b * (lam - k)) * r ** (n - 1), 0.0, math.inf, limit=200)
        integral = float(value)
    return ReverseDirectionCheck(a, b, k, threshold, satisfied, integral)
