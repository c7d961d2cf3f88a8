"""
Input document schema (pydantic) and the validated domain objects built from it.

Documents are strict by default: unknown fields are rejected. Validating with
`context={"lenient": True}` drops unknown fields instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, model_validator

from plbench.workbench.algebra.matrices import OperatorMatrix
from plbench.workbench.algebra.poly import Polynomial


Number = Union[int, float, str]

GEVREY = "gevrey"
LOGPOW = "logpow"
SUBLINEAR_LOG = "sublinear-log"
TABLE = "table"
WEIGHT_FAMILIES = (GEVREY, LOGPOW, SUBLINEAR_LOG, TABLE)

BOX = "box"
POLYTOPE = "polytope"

UNIT_DILATION = "unit-dilation"
CONSTANT = "constant"
SCALED = "scaled"
EXHAUSTION_RULES = (UNIT_DILATION, CONSTANT, SCALED)

CANDIDATE_KINDS = ("log-abs-polynomial", "linear-imaginary", "psh-combination")


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    @model_validator(mode="before")
    @classmethod
    def _drop_unknown_when_lenient(cls, data: Any, info: ValidationInfo) -> Any:
        context = info.context or {}
        if not context.get("lenient") or not isinstance(data, dict):
            return data
        known = set(cls.model_fields)
        known.update(f.alias for f in cls.model_fields.values() if f.alias)
        return {key: value for key, value in data.items() if key in known}


class WeightDocument(_Document):
    family: str = Field(..., description="gevrey, logpow, sublinear-log or table")
    alpha: Number | None = Field(default=None, description="Gevrey exponent, 0 < alpha < 1")
    beta: Number | None = Field(default=None, description="Logarithmic exponent")
    points: list[tuple[Number, Number]] | None = Field(default=None, description="Sampled (t, omega) pairs")
    normalize: bool = Field(default=True, description="Shift so that omega vanishes on [0, 1]")
    label: str | None = None

    @model_validator(mode="before")
    @classmethod
    def _compact_form(cls, data: Any) -> Any:
        # "gevrey 1/2" or "logpow 2"
        if isinstance(data, str):
            parts = data.split()
            if len(parts) != 2:
                raise ValueError(f"Compact weight must read '<family> <parameter>', got {data!r}")
            family, parameter = parts
            key = "alpha" if family.lower() == GEVREY else "beta"
            return {"family": family, key: parameter}
        return data


class RegionDocument(_Document):
    kind: str = Field(..., description="box or polytope")
    bounds: list[tuple[Number, Number]] | None = Field(default=None, description="Per-axis [lo, hi] for boxes")
    vertices: list[list[Number]] | None = Field(default=None, description="Vertex list for polytopes")
    exhaustion: str | None = Field(default=None, description="unit-dilation, constant or scaled")
    factors: list[Number] | None = Field(default=None, description="Scale factors for the scaled rule")


class RegionsDocument(_Document):
    K1: RegionDocument
    K2: RegionDocument


class CandidateDocument(_Document):
    kind: str
    polynomial: str | None = None
    c: list[Number] | None = None
    parts: list["CandidateDocument"] | None = None


class ProbeDocument(_Document):
    alpha: int = Field(default=1, ge=1)
    c_max: float = Field(default=64.0, gt=0)
    beta_max: int = Field(default=64, ge=1)
    alpha_u_max: int = Field(default=8, ge=1)
    candidates: list[CandidateDocument] | None = None
    uniqueness: bool = False


class SystemDocument(_Document):
    label: str = ""
    variables: list[str] = Field(..., min_length=1)
    matrix: list[list[str]] | None = None
    curve: str | None = None
    primes: list[str] | None = None
    weights: list[WeightDocument] = Field(default_factory=list)
    regions: RegionsDocument | None = None
    probe: ProbeDocument | None = None


@dataclass(frozen=True, slots=True)
class SystemSpec:
    """A_0(D) as an a1 x a0 matrix of polynomials in the declared variables."""

    variables: tuple[str, ...]
    matrix: OperatorMatrix
    label: str = ""
    sources: tuple[tuple[str, ...], ...] = field(default=(), compare=False)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def a0(self) -> int:
        return self.matrix.shape[1]

    @property
    def a1(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, slots=True)
class WeightSpec:
    family: str
    parameter: Fraction | None = None
    points: tuple[tuple[float, float], ...] = ()
    normalize: bool = True
    label: str = ""
    flags: tuple[str, ...] = field(default=(), compare=False)

    def describe(self) -> str:
        if self.family == TABLE:
            return self.label or f"table[{len(self.points)}]"
        return f"{self.family} {self.parameter}"


@dataclass(frozen=True, slots=True)
class RegionSpec:
    kind: str
    dimension: int
    bounds: tuple[tuple[Fraction, Fraction], ...] = ()
    vertices: tuple[tuple[Fraction, ...], ...] = ()
    exhaustion: str = CONSTANT
    factors: tuple[Fraction, ...] = ()
    lower_dimensional: bool = False


@dataclass(frozen=True, slots=True)
class CandidateSpec:
    kind: str
    polynomial: Polynomial | None = None
    direction: tuple[Fraction, ...] = ()
    parts: tuple["CandidateSpec", ...] = ()


@dataclass(frozen=True, slots=True)
class ProbeSettings:
    alpha: int = 1
    c_max: float = 64.0
    beta_max: int = 64
    alpha_u_max: int = 8
    candidates: tuple[CandidateSpec, ...] = ()
    uniqueness: bool = False


@dataclass(frozen=True, slots=True)
class WorkbenchDocument:
    label: str
    variables: tuple[str, ...]
    system: SystemSpec | None
    curve: Polynomial | None
    primes: tuple[Polynomial, ...]
    weights: tuple[WeightSpec, ...]
    regions: tuple[RegionSpec, RegionSpec] | None
    probe: ProbeSettings


CandidateDocument.model_rebuild()
