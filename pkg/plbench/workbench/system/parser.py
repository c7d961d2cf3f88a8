"""Single entry point for user input: JSON documents to validated domain objects."""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Any

from pydantic import ValidationError
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from plbench.workbench.algebra.grammar import parse_polynomial, render
from plbench.workbench.algebra.matrices import OperatorMatrix
from plbench.workbench.algebra.poly import Polynomial, to_qq
from plbench.workbench.config import LimitsConfig
from plbench.workbench.core.exceptions import InputError, PolynomialSyntaxError, ResourceLimitError
from plbench.workbench.system.models import (
    BOX,
    CANDIDATE_KINDS,
    CONSTANT,
    EXHAUSTION_RULES,
    GEVREY,
    LOGPOW,
    POLYTOPE,
    SCALED,
    SUBLINEAR_LOG,
    TABLE,
    UNIT_DILATION,
    WEIGHT_FAMILIES,
    CandidateDocument,
    CandidateSpec,
    ProbeSettings,
    RegionDocument,
    RegionSpec,
    SystemDocument,
    SystemSpec,
    WeightDocument,
    WeightSpec,
    WorkbenchDocument,
)
from plbench.workbench.utils import json
from plbench.workbench.utils.parsing import format_rational, parse_rational

logger = logging.getLogger(__name__)

GAMMA_PRIME_ONLY = "satisfies (γ)′ but not (γ)"


def _decode(text: str | bytes) -> Any:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"Input is not valid UTF-8: {exc}") from exc
    try:
        return json.loads(text)
    except ValueError as exc:
        raise InputError(f"Input is not valid JSON: {exc}") from exc


def _validation_message(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = ".".join(str(item) for item in error.get("loc", ())) or "<document>"
        parts.append(f"{location}: {error.get('msg', 'invalid value')}")
    return "; ".join(parts)


def load_document(text: str | bytes, *, lenient: bool = False) -> SystemDocument:
    data = _decode(text)
    if not isinstance(data, dict):
        raise InputError("The input document must be a JSON object.")
    try:
        return SystemDocument.model_validate(data, context={"lenient": lenient})
    except ValidationError as exc:
        raise InputError(f"Invalid document: {_validation_message(exc)}") from exc
    except ValueError as exc:
        raise InputError(f"Invalid document: {exc}") from exc


def _check_variables(names: list[str], limits: LimitsConfig | None = None) -> tuple[str, ...]:
    limit = (limits or LimitsConfig()).max_variables
    if len(names) > limit:
        raise ResourceLimitError(f"{len(names)} variables declared; limits.max_variables allows {limit}.")
    if len(set(names)) != len(names):
        raise InputError("Variable names must be unique.")
    for name in names:
        if not name.isidentifier():
            raise InputError(f"Variable name {name!r} is not an identifier.")
    return tuple(names)


def _parse_entry(source: str, variables: tuple[str, ...], where: str) -> Polynomial:
    try:
        return parse_polynomial(source, variables)
    except PolynomialSyntaxError as exc:
        raise PolynomialSyntaxError(f"{where}: {exc.reason}", line=exc.line, column=exc.column) from exc


def build_system(document: SystemDocument, limits: LimitsConfig | None = None) -> SystemSpec:
    variables = _check_variables(document.variables, limits)
    if not document.matrix:
        raise InputError("The document has no 'matrix'; an a1 x a0 operator matrix is required.")
    widths = {len(row) for row in document.matrix}
    if len(widths) != 1:
        raise InputError(f"Ragged matrix: row lengths {sorted(widths)}.")
    if widths == {0}:
        raise InputError("Matrix rows must have at least one entry.")
    rows = []
    for i, row in enumerate(document.matrix):
        rows.append(
            tuple(_parse_entry(entry, variables, f"matrix[{i}][{j}]") for j, entry in enumerate(row))
        )
    matrix = OperatorMatrix(tuple(rows), len(variables))
    sources = tuple(tuple(row) for row in document.matrix)
    return SystemSpec(variables=variables, matrix=matrix, label=document.label, sources=sources)


def parse_system(text: str | bytes, *, lenient: bool = False, limits: LimitsConfig | None = None) -> SystemSpec:
    """Parse a system document; only the operator matrix part is returned."""
    return build_system(load_document(text, lenient=lenient), limits)


def _parameter(value: Any, name: str) -> Fraction:
    if value is None:
        raise InputError(f"Weight parameter '{name}' is required.")
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def build_weight(document: WeightDocument) -> WeightSpec:
    family = document.family.strip().lower()
    if family not in WEIGHT_FAMILIES:
        raise InputError(f"Unknown weight family '{document.family}'; expected one of {', '.join(WEIGHT_FAMILIES)}.")
    label = document.label or ""
    if family == GEVREY:
        if document.beta is not None or document.points is not None:
            raise InputError("gevrey weights take only 'alpha'.")
        alpha = _parameter(document.alpha, "alpha")
        if not 0 < alpha < 1:
            raise InputError(f"gevrey weight t^alpha requires 0 < alpha < 1; got {format_rational(alpha)}.")
        return WeightSpec(GEVREY, alpha, normalize=document.normalize, label=label)
    if family in (LOGPOW, SUBLINEAR_LOG):
        if document.alpha is not None or document.points is not None:
            raise InputError(f"{family} weights take only 'beta'.")
        beta = _parameter(document.beta, "beta")
        if family == LOGPOW:
            if beta < 1:
                raise InputError(f"logpow weight log(1+t)^beta requires beta >= 1; got {format_rational(beta)}.")
            flags = (GAMMA_PRIME_ONLY,) if beta == 1 else ()
            return WeightSpec(LOGPOW, beta, normalize=document.normalize, label=label, flags=flags)
        if beta <= 1:
            raise InputError(f"sublinear-log weight t*log(e+t)^(-beta) requires beta > 1; got {format_rational(beta)}.")
        return WeightSpec(SUBLINEAR_LOG, beta, normalize=document.normalize, label=label)
    if document.alpha is not None or document.beta is not None:
        raise InputError("table weights take only 'points'.")
    points = []
    for t, value in document.points or []:
        try:
            pair = (float(parse_rational(t)), float(parse_rational(value)))
        except (ValueError, OverflowError) as exc:
            raise InputError(str(exc)) from exc
        if not all(math.isfinite(v) for v in pair) or pair[0] < 0:
            raise InputError(f"Table point {pair} must be finite with t >= 0.")
        points.append(pair)
    if len(points) < 2:
        raise InputError("A table weight needs at least two points.")
    if any(b[0] <= a[0] for a, b in zip(points, points[1:])):
        raise InputError("Table abscissae must be strictly increasing.")
    return WeightSpec(TABLE, None, points=tuple(points), normalize=document.normalize, label=label)


def parse_weight(text: str | bytes, *, lenient: bool = False) -> WeightSpec:
    """Accept a JSON weight object or the compact form `gevrey 1/2`."""
    raw: Any
    stripped = text.strip() if isinstance(text, str) else text.strip().decode("utf-8", errors="replace")
    if stripped[:1] in ("{", '"'):
        raw = _decode(text)
    else:
        raw = stripped
    try:
        document = WeightDocument.model_validate(raw, context={"lenient": lenient})
    except ValidationError as exc:
        raise InputError(f"Invalid weight: {_validation_message(exc)}") from exc
    except ValueError as exc:
        raise InputError(f"Invalid weight: {exc}") from exc
    return build_weight(document)


def _affine_rank(vertices: list[tuple[Fraction, ...]]) -> int:
    if len(vertices) < 2:
        return 0
    base = vertices[0]
    rows = [[to_qq(x - b) for x, b in zip(vertex, base)] for vertex in vertices[1:]]
    return DomainMatrix(rows, (len(rows), len(base)), QQ).rank()


def build_region(document: RegionDocument, nvars: int) -> RegionSpec:
    kind = document.kind.strip().lower()
    try:
        factors = tuple(parse_rational(f) for f in document.factors or [])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if any(f <= 0 for f in factors):
        raise InputError("Exhaustion factors must be positive.")
    if kind == BOX:
        if not document.bounds or len(document.bounds) != nvars:
            raise InputError(f"A box needs one [lo, hi] pair per variable ({nvars}).")
        try:
            bounds = tuple((parse_rational(lo), parse_rational(hi)) for lo, hi in document.bounds)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if any(lo > hi for lo, hi in bounds):
            raise InputError("Box bounds must satisfy lo <= hi on every axis.")
        rule = document.exhaustion or UNIT_DILATION
        lower = any(lo == hi for lo, hi in bounds)
        region = RegionSpec(BOX, nvars, bounds=bounds, exhaustion=rule, factors=factors, lower_dimensional=lower)
    elif kind == POLYTOPE:
        if not document.vertices:
            raise InputError("A polytope needs a nonempty vertex list.")
        try:
            vertices = tuple(tuple(parse_rational(x) for x in vertex) for vertex in document.vertices)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if any(len(v) != nvars for v in vertices):
            raise InputError(f"Every vertex needs {nvars} coordinates.")
        rule = document.exhaustion or CONSTANT
        lower = _affine_rank(list(vertices)) < nvars
        if lower:
            logger.info("polytope with %d vertices is lower-dimensional", len(vertices))
        region = RegionSpec(
            POLYTOPE, nvars, vertices=vertices, exhaustion=rule, factors=factors, lower_dimensional=lower
        )
    else:
        raise InputError(f"Unknown region kind '{document.kind}'; expected box or polytope.")
    if region.exhaustion not in EXHAUSTION_RULES:
        raise InputError(f"Unknown exhaustion rule '{region.exhaustion}'.")
    if region.exhaustion == SCALED and not factors:
        raise InputError("The scaled exhaustion rule needs a nonempty 'factors' list.")
    return region


def build_candidate(document: CandidateDocument, variables: tuple[str, ...]) -> CandidateSpec:
    kind = document.kind.strip().lower()
    if kind not in CANDIDATE_KINDS:
        raise InputError(f"Unknown candidate kind '{document.kind}'.")
    if kind == "log-abs-polynomial":
        if not document.polynomial:
            raise InputError("log-abs-polynomial candidates need a 'polynomial'.")
        poly = _parse_entry(document.polynomial, variables, "probe candidate")
        if poly.is_zero():
            raise InputError("log|0| is not a candidate.")
        return CandidateSpec(kind, polynomial=poly)
    if kind == "linear-imaginary":
        if not document.c or len(document.c) != len(variables):
            raise InputError(f"linear-imaginary candidates need 'c' with {len(variables)} entries.")
        try:
            return CandidateSpec(kind, direction=tuple(parse_rational(x) for x in document.c))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if not document.parts:
        raise InputError("psh-combination candidates need 'parts'.")
    return CandidateSpec(kind, parts=tuple(build_candidate(part, variables) for part in document.parts))


def build_document(document: SystemDocument, limits: LimitsConfig | None = None) -> WorkbenchDocument:
    variables = _check_variables(document.variables, limits)
    system = build_system(document, limits) if document.matrix else None
    curve = _parse_entry(document.curve, variables, "curve") if document.curve else None
    primes = tuple(_parse_entry(p, variables, f"primes[{i}]") for i, p in enumerate(document.primes or []))
    weights = tuple(build_weight(w) for w in document.weights)
    regions = None
    if document.regions is not None:
        regions = (
            build_region(document.regions.K1, len(variables)),
            build_region(document.regions.K2, len(variables)),
        )
    probe = ProbeSettings()
    if document.probe is not None:
        probe = ProbeSettings(
            alpha=document.probe.alpha,
            c_max=document.probe.c_max,
            beta_max=document.probe.beta_max,
            alpha_u_max=document.probe.alpha_u_max,
            candidates=tuple(build_candidate(c, variables) for c in document.probe.candidates or []),
            uniqueness=document.probe.uniqueness,
        )
    return WorkbenchDocument(
        label=document.label,
        variables=variables,
        system=system,
        curve=curve,
        primes=primes,
        weights=weights,
        regions=regions,
        probe=probe,
    )


def parse_document(
    text: str | bytes, *, lenient: bool = False, limits: LimitsConfig | None = None
) -> WorkbenchDocument:
    return build_document(load_document(text, lenient=lenient), limits)


# rendering ----------------------------------------------------------------


def render_system(spec: SystemSpec) -> str:
    payload = {
        "label": spec.label,
        "variables": list(spec.variables),
        "matrix": spec.matrix.render(spec.variables),
    }
    return json.dumps(payload, pretty=True).decode("utf-8")


def weight_payload(spec: WeightSpec) -> dict[str, Any]:
    payload: dict[str, Any] = {"family": spec.family, "normalize": spec.normalize}
    if spec.family == GEVREY:
        payload["alpha"] = format_rational(spec.parameter)  # type: ignore[arg-type]
    elif spec.family == TABLE:
        payload["points"] = [[repr(t), repr(w)] for t, w in spec.points]
    else:
        payload["beta"] = format_rational(spec.parameter)  # type: ignore[arg-type]
    if spec.label:
        payload["label"] = spec.label
    return payload


def render_weight(spec: WeightSpec) -> str:
    if spec.family != TABLE and spec.normalize and not spec.label:
        return f"{spec.family} {format_rational(spec.parameter)}"  # type: ignore[arg-type]
    return json.dumps(weight_payload(spec), pretty=True).decode("utf-8")


def region_payload(region: RegionSpec) -> dict[str, Any]:
    payload: dict[str, Any] = {"kind": region.kind, "exhaustion": region.exhaustion}
    if region.kind == BOX:
        payload["bounds"] = [[format_rational(lo), format_rational(hi)] for lo, hi in region.bounds]
    else:
        payload["vertices"] = [[format_rational(x) for x in vertex] for vertex in region.vertices]
    if region.factors:
        payload["factors"] = [format_rational(f) for f in region.factors]
    return payload


def candidate_payload(candidate: CandidateSpec, variables: tuple[str, ...]) -> dict[str, Any]:
    payload: dict[str, Any] = {"kind": candidate.kind}
    if candidate.polynomial is not None:
        payload["polynomial"] = render(candidate.polynomial, variables)
    if candidate.direction:
        payload["c"] = [format_rational(x) for x in candidate.direction]
    if candidate.parts:
        payload["parts"] = [candidate_payload(part, variables) for part in candidate.parts]
    return payload


def render_document(document: WorkbenchDocument) -> str:
    """Canonical JSON for a parsed document; parse_document reads it back to an equal object."""
    variables = document.variables
    payload: dict[str, Any] = {"label": document.label, "variables": list(variables)}
    if document.system is not None:
        payload["matrix"] = document.system.matrix.render(variables)
    if document.curve is not None:
        payload["curve"] = render(document.curve, variables)
    if document.primes:
        payload["primes"] = [render(p, variables) for p in document.primes]
    if document.weights:
        payload["weights"] = [weight_payload(w) for w in document.weights]
    if document.regions is not None:
        payload["regions"] = {"K1": region_payload(document.regions[0]), "K2": region_payload(document.regions[1])}
    probe = document.probe
    payload["probe"] = {
        "alpha": probe.alpha,
        "c_max": probe.c_max,
        "beta_max": probe.beta_max,
        "alpha_u_max": probe.alpha_u_max,
        "uniqueness": probe.uniqueness,
    }
    if probe.candidates:
        payload["probe"]["candidates"] = [candidate_payload(c, variables) for c in probe.candidates]
    return json.dumps(payload, pretty=True).decode("utf-8")
