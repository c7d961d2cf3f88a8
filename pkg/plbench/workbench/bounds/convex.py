"""
Polytopes with rational vertices, their supporting functions and exhaustions.

H_K(y) = max_{x in K} <x, y> is evaluated exactly over the vertices; y is
converted to an exact rational first and the maximum converted back to a float.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike

from plbench.workbench.core.exceptions import InputError
from plbench.workbench.system.models import BOX, CONSTANT, SCALED, UNIT_DILATION, RegionSpec


@dataclass(frozen=True, slots=True)
class ConvexBody:
    vertices: tuple[tuple[Fraction, ...], ...]
    _matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.vertices:
            raise InputError("A convex body needs at least one vertex.")
        widths = {len(v) for v in self.vertices}
        if len(widths) != 1:
            raise InputError("All vertices must have the same dimension.")
        matrix = np.array([[float(x) for x in v] for v in self.vertices], dtype=float)
        object.__setattr__(self, "_matrix", matrix)

    @classmethod
    def box(cls, bounds: Sequence[tuple[Fraction, Fraction]]) -> "ConvexBody":
        corners = itertools.product(*[sorted({lo, hi}) for lo, hi in bounds])
        return cls(tuple(tuple(Fraction(x) for x in corner) for corner in corners))

    @classmethod
    def from_region(cls, region: RegionSpec) -> "ConvexBody":
        if region.kind == BOX:
            return cls.box(region.bounds)
        return cls(region.vertices)

    @property
    def dimension(self) -> int:
        return len(self.vertices[0])

    def scaled(self, factor: Fraction) -> "ConvexBody":
        return ConvexBody(tuple(tuple(factor * x for x in v) for v in self.vertices))

    def contains_body(self, other: "ConvexBody", samples: int = 64) -> bool:
        """Support-function test H_other <= H_self on fixed directions."""
        directions = _directions(self.dimension, samples)
        return bool(np.all(support_many(other, directions) <= support_many(self, directions) + 1e-12))


def _directions(dimension: int, samples: int) -> np.ndarray:
    axes = np.vstack([np.eye(dimension), -np.eye(dimension)])
    rng = np.random.default_rng(dimension)
    return np.vstack([axes, rng.standard_normal((samples, dimension))])


def supporting_function(body: ConvexBody, y: Sequence[float | Fraction]) -> float:
    if len(y) != body.dimension:
        raise InputError(f"Direction has {len(y)} coordinates; the body lives in dimension {body.dimension}.")
    exact = [Fraction(value) for value in y]
    best = max(sum((x * v for x, v in zip(vertex, exact)), Fraction(0)) for vertex in body.vertices)
    return float(best)


def support_many(body: ConvexBody, ys: ArrayLike) -> np.ndarray:
    """Vectorized H_K over the rows of `ys` in double precision."""
    directions = np.atleast_2d(np.asarray(ys, dtype=float))
    if directions.shape[1] != body.dimension:
        raise InputError(f"Directions have {directions.shape[1]} coordinates; expected {body.dimension}.")
    return np.max(directions @ body._matrix.T, axis=1)


@dataclass(frozen=True)
class Exhaustion:
    """The family K_1 ⊂ K_2 ⊂ ... built from a region by its exhaustion rule."""

    region: RegionSpec

    def member(self, alpha: int) -> ConvexBody:
        if alpha < 1:
            raise InputError(f"Exhaustion index must be a positive integer; got {alpha}.")
        return _member(self.region, alpha)


@lru_cache(maxsize=256)
def _member(region: RegionSpec, alpha: int) -> ConvexBody:
    rule = region.exhaustion
    if rule == CONSTANT:
        return ConvexBody.from_region(region)
    if rule == SCALED:
        factors = region.factors
        return ConvexBody.from_region(region).scaled(factors[min(alpha, len(factors)) - 1])
    if rule == UNIT_DILATION:
        if region.kind != BOX:
            raise InputError("The unit-dilation rule applies to boxes only.")
        # alpha-fold dilation of the unit box about the centre, intersected with K
        clipped = []
        for lo, hi in region.bounds:
            centre = (lo + hi) / 2
            clipped.append((max(lo, centre - alpha), min(hi, centre + alpha)))
        return ConvexBody.box(clipped)
    raise InputError(f"Unknown exhaustion rule '{rule}'.")
