"""
Hilbert resolution of M = coker tA_0 and the algebra read off from it.

Conventions: the system matrix A_0 is a1 x a0 and its rows are the generators
of image(tA_0) inside P^{a0}. The rows of A_{j+1} are the syzygies of the rows
of A_j, so tA_j . tA_{j+1} = 0 at every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union
import logging

from plbench.workbench.algebra.grammar import render
from plbench.workbench.algebra.groebner import buchberger, membership, oracle_agrees, syzygies
from plbench.workbench.algebra.matrices import OperatorMatrix
from plbench.workbench.algebra.poly import ModuleElement, Polynomial, TermOrder
from plbench.workbench.config import LimitsConfig
from plbench.workbench.core.exceptions import InputError, ResolutionError, ResourceLimitError
from plbench.workbench.system.models import SystemSpec

logger = logging.getLogger(__name__)

DEFAULT_ORDER = TermOrder("grevlex", "pot")
ORACLE_DEGREE = 2
FREE_MODULE_NOTE = "resolution of free module"
MAX_EXTRA_STEPS = 4

ExactValue = tuple[Fraction, Fraction]


@dataclass(frozen=True, slots=True)
class ResolutionCertificate:
    step: int
    composition_zero: bool
    oracle_degree: int
    oracle_passed: bool

    def as_dict(self) -> dict[str, object]:
        return {
            "step": self.step,
            "composition_zero": self.composition_zero,
            "oracle_degree": self.oracle_degree,
            "oracle_passed": self.oracle_passed,
        }


@dataclass(frozen=True, slots=True)
class FreeResolution:
    """Maps tA_0..tA_{d-1} with ranks a_0..a_d."""

    maps: tuple[OperatorMatrix, ...]
    ranks: tuple[int, ...]
    certificates: tuple[ResolutionCertificate, ...]
    nvars: int
    variables: tuple[str, ...]
    free_module: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def length(self) -> int:
        return len(self.maps)

    def operator(self, j: int) -> OperatorMatrix:
        """A_j, the transpose of the stored tA_j."""
        return self.maps[j].transpose()


@dataclass(frozen=True, slots=True)
class OverdeterminationReport:
    overdetermined: bool
    condition_count: int
    conditions: tuple[str, ...]
    integrability_matrix: tuple[tuple[str, ...], ...]

    def as_dict(self) -> dict[str, object]:
        return {
            "overdetermined": self.overdetermined,
            "condition_count": self.condition_count,
            "conditions": list(self.conditions),
            "integrability_matrix": [list(row) for row in self.integrability_matrix],
            "summary": "overdetermined" if self.overdetermined else "not overdetermined",
        }


@dataclass(frozen=True, slots=True)
class AnnihilatorIdeal:
    generators: tuple[Polynomial, ...]
    principal: bool

    @property
    def is_zero(self) -> bool:
        return not self.generators


@dataclass(frozen=True, slots=True)
class CharVariety:
    """V = {z : p(-z) = 0 for p in the source ideal}, stored by sign-flipped generators."""

    generators: tuple[Polynomial, ...]
    source: tuple[Polynomial, ...]
    label: str = ""

    def contains(self, point: Sequence[complex], tolerance: float = 1e-9) -> bool:
        for generator in self.generators:
            value = abs(generator.evaluate(point))
            if value > tolerance * _evaluation_scale(generator, point):
                return False
        return True


@dataclass(frozen=True, slots=True)
class ExtPresentation:
    """Ext^j_P(M, P) = P^k / relations, with generators living in P^{a_j}."""

    degree: int
    generators: tuple[ModuleElement, ...]
    relations: tuple[ModuleElement, ...]
    is_zero: bool
    composition_zero: bool

    def summary(self, variables: Sequence[str]) -> str:
        if self.is_zero:
            return "0"
        count = len(self.generators)
        free = "P" if count == 1 else f"P^{count}"
        if not self.relations:
            return free
        if count == 1:
            ideal = ", ".join(render(r.components[0], variables) for r in self.relations)
            return f"P/({ideal})"
        rows = "; ".join("(" + ", ".join(render(c, variables) for c in r.components) + ")" for r in self.relations)
        return f"{free}/<{rows}>"


def _transposed(rows: Sequence[ModuleElement], width: int, nvars: int) -> OperatorMatrix:
    if rows:
        return OperatorMatrix.from_rows(rows, nvars).transpose()
    return OperatorMatrix.zeros(0, width, nvars).transpose()


def length_bound(nvars: int) -> int:
    """Longest resolution that keeps the given tA_0 as its first map.

    Hilbert bounds the projective dimension of M by N. A fixed presentation
    with a nonzero kernel always needs a second map, so one variable allows two.
    """
    return max(nvars, 2)


def _constant_value(entry: Polynomial) -> Fraction | None:
    if entry.is_zero() or not entry.is_constant():
        return None
    return next(iter(entry.coefficients().values()))


def _find_unit(matrix: OperatorMatrix) -> tuple[int, int, Fraction] | None:
    for r, row in enumerate(matrix.entries):
        for c, entry in enumerate(row):
            value = _constant_value(entry)
            if value is not None:
                return r, c, value
    return None


def _cancel(maps: list[OperatorMatrix], j: int, r: int, c: int, unit: Fraction) -> None:
    """Split off P --unit--> P at entry (r, c) of tA_j and rewrite the neighbouring maps."""
    matrix = maps[j]
    rows, cols = matrix.shape
    entries = matrix.entries
    inverse = 1 / unit
    reduced = tuple(
        tuple(
            entries[i][k] - (entries[i][c] * entries[r][k]).scale(inverse)
            for k in range(cols)
            if k != c
        )
        for i in range(rows)
        if i != r
    )
    maps[j] = OperatorMatrix(reduced, matrix.nvars, matrix.orientation)
    if j + 1 < len(maps):
        following = maps[j + 1]
        maps[j + 1] = OperatorMatrix(
            tuple(row for i, row in enumerate(following.entries) if i != c), following.nvars, following.orientation
        )
    previous = maps[j - 1]
    maps[j - 1] = OperatorMatrix(
        tuple(tuple(e for k, e in enumerate(row) if k != r) for row in previous.entries),
        previous.nvars,
        previous.orientation,
    )


def cancel_units(maps: Sequence[OperatorMatrix], first: int = 2) -> list[OperatorMatrix]:
    """Prune constant entries from tA_first onwards; tA_0 and the rows of A_1 that survive are untouched."""
    pruned = list(maps)
    while True:
        hit = next(
            ((j, found) for j in range(first, len(pruned)) if (found := _find_unit(pruned[j])) is not None),
            None,
        )
        if hit is None:
            return pruned
        j, (r, c, unit) = hit
        _cancel(pruned, j, r, c, unit)
        logger.debug("cancelled unit at map %d entry (%d, %d)", j, r, c)
        empty = next((m for m, matrix in enumerate(pruned) if matrix.shape[1] == 0), None)
        if empty is not None:
            del pruned[empty:]


def hilbert_resolution(
    system: SystemSpec,
    order: TermOrder = DEFAULT_ORDER,
    limits: LimitsConfig | None = None,
    *,
    oracle_degree: int = ORACLE_DEGREE,
) -> FreeResolution:
    """Iterate syzygies of A_j until none are left, then cancel unit entries past A_1."""
    nvars = system.nvars
    a1, a0 = system.matrix.shape
    if system.matrix.is_zero():
        logger.info("A_0 is zero; M is free of rank %d", a0)
        return FreeResolution(
            maps=(system.matrix.transpose(),),
            ranks=(a0, a1),
            certificates=(),
            nvars=nvars,
            variables=system.variables,
            free_module=True,
            notes=(FREE_MODULE_NOTE,),
        )

    bound = length_bound(nvars)
    maps: list[OperatorMatrix] = [system.matrix.transpose()]
    oracle: list[bool] = []
    current = system.matrix.rows()
    step = 0
    while True:
        syz = syzygies(current, order, limits, step=step)
        oracle.append(oracle_agrees(current, syz, oracle_degree, order))
        if syz.is_empty():
            break
        following = _transposed(list(syz.rows), len(current), nvars)
        if not maps[-1].multiply(following).is_zero():
            raise ResolutionError(f"Composition of maps {step} and {step + 1} is not zero.")
        maps.append(following)
        current = list(syz.rows)
        step += 1
        if len(maps) > bound + MAX_EXTRA_STEPS:
            raise ResourceLimitError(
                f"Resolution did not terminate within {len(maps)} steps (step {step}); raise the limits or "
                "simplify the system."
            )

    raw_length = len(maps)
    maps = cancel_units(maps)
    notes: list[str] = []
    if len(maps) < raw_length:
        notes.append(f"unit cancellation shortened the resolution from {raw_length} to {len(maps)} maps")
    if len(maps) > bound:
        raise ResolutionError(f"Resolution length {len(maps)} exceeds the bound {bound} for {nvars} variables.")
    if len(maps) > nvars:
        notes.append(f"length {len(maps)} exceeds N = {nvars} because tA_0 itself has a kernel")

    certificates = []
    for j, matrix in enumerate(maps):
        composition_zero = j + 1 >= len(maps) or matrix.multiply(maps[j + 1]).is_zero()
        if not composition_zero:
            raise ResolutionError(f"Composition of maps {j} and {j + 1} is not zero after unit cancellation.")
        certificates.append(ResolutionCertificate(j, composition_zero, oracle_degree, oracle[j]))
    ranks = [maps[0].shape[0]] + [matrix.shape[1] for matrix in maps]
    logger.info("resolution ranks %s", ranks)
    return FreeResolution(
        maps=tuple(maps),
        ranks=tuple(ranks),
        certificates=tuple(certificates),
        nvars=nvars,
        variables=system.variables,
        notes=tuple(notes),
    )


def overdetermination_report(res: FreeResolution) -> OverdeterminationReport:
    if res.free_module or res.length < 2:
        return OverdeterminationReport(False, 0, (), ())
    a1_matrix = res.operator(1)
    if a1_matrix.is_zero():
        return OverdeterminationReport(False, 0, (), ())
    conditions = tuple(a1_matrix.operator_rows())
    rendered = tuple(tuple(row) for row in a1_matrix.render(res.variables))
    return OverdeterminationReport(True, len(conditions), conditions, rendered)


def annihilator(
    system: SystemSpec,
    order: TermOrder = DEFAULT_ORDER,
    limits: LimitsConfig | None = None,
) -> AnnihilatorIdeal:
    """ann(M) = {p : p P^{a0} in image tA_0}, via one syzygy computation.

    Work in a0 copies of P^{a0}: the first generator is (e_1 | ... | e_a0) and the
    others place each row of A_0 in one block. First components of the syzygies
    are exactly the p with p e_k in image tA_0 for every k.
    """
    nvars = system.nvars
    a0 = system.a0
    rows = system.matrix.rows()
    zero = Polynomial.zero(nvars)
    one = Polynomial.one(nvars)
    width = a0 * a0
    diagonal = ModuleElement(tuple(one if (i // a0) == (i % a0) else zero for i in range(width)))
    generators = [diagonal]
    for block in range(a0):
        for row in rows:
            components = [zero] * width
            for k, entry in enumerate(row.components):
                components[block * a0 + k] = entry
            generators.append(ModuleElement(tuple(components)))
    syz = syzygies(generators, order, limits)
    firsts = [row.components[0] for row in syz.rows if not row.components[0].is_zero()]
    if not firsts:
        return AnnihilatorIdeal((), False)
    basis = buchberger([ModuleElement((p,)) for p in firsts], TermOrder("grlex", "pot"), limits)
    generators_out = tuple(g.components[0] for g in basis.generators)
    return AnnihilatorIdeal(generators_out, principal=len(generators_out) == 1)


def annihilates(system: SystemSpec, p: Polynomial, order: TermOrder = DEFAULT_ORDER) -> bool:
    """True when p e_k reduces to zero modulo image tA_0 for every unit vector e_k."""
    image = buchberger(system.matrix.rows(), order)
    nvars = system.nvars
    for k in range(system.a0):
        if not membership(ModuleElement.unit(system.a0, k, nvars).scale(p), image):
            return False
    return True


def characteristic_variety(generators: Sequence[Polynomial], label: str = "") -> CharVariety:
    return CharVariety(tuple(g.sign_flip() for g in generators), tuple(generators), label)


def _evaluation_scale(poly: Polynomial, point: Sequence[complex]) -> float:
    total = 0.0
    for monomial, coefficient in poly.coefficients().items():
        term = abs(float(coefficient))
        for z, exponent in zip(point, monomial):
            term *= abs(complex(z)) ** exponent
        total += term
    return max(total, 1.0)


def _is_exact_point(zeta: Sequence[object]) -> bool:
    return all(isinstance(z, tuple) and len(z) == 2 for z in zeta)


def exponential_kernel_test(
    system: SystemSpec,
    zeta: Sequence[Union[complex, ExactValue]],
    tolerance: float = 1e-9,
) -> bool:
    """Does exp(-i<x, zeta>) solve A_0(D) f = 0, i.e. do all p(-zeta) vanish?"""
    if system.a0 != 1:
        raise InputError("The exponential kernel diagnostic needs a scalar system (a0 = 1).")
    if len(zeta) != system.nvars:
        raise InputError(f"Point has {len(zeta)} coordinates; expected {system.nvars}.")
    entries = [row.components[0] for row in system.matrix.rows()]
    if _is_exact_point(zeta):
        exact = [(Fraction(re), Fraction(im)) for re, im in zeta]  # type: ignore[misc]
        return all(entry.sign_flip().evaluate_exact(exact) == (0, 0) for entry in entries)
    point = [complex(z) for z in zeta]  # type: ignore[arg-type]
    for entry in entries:
        flipped = entry.sign_flip()
        if abs(flipped.evaluate(point)) > tolerance * _evaluation_scale(flipped, point):
            return False
    return True


def _kernel(matrix: OperatorMatrix, nvars: int, order: TermOrder, limits: LimitsConfig | None) -> list[ModuleElement]:
    """Generators of ker(A) in P^cols for the operator A acting on column vectors."""
    rows, cols = matrix.shape
    if rows == 0 or matrix.is_zero():
        return [ModuleElement.unit(cols, k, nvars) for k in range(cols)]
    return list(syzygies(matrix.columns(), order, limits).rows)


def dual_complex_homology(
    res: FreeResolution,
    order: TermOrder = DEFAULT_ORDER,
    limits: LimitsConfig | None = None,
) -> list[ExtPresentation]:
    """Presentations of Ext^j(M, P) = ker A_j / im A_{j-1} on the dualized resolution."""
    nvars = res.nvars
    if res.free_module:
        a0 = res.ranks[0]
        units = tuple(ModuleElement.unit(a0, k, nvars) for k in range(a0))
        return [
            ExtPresentation(0, units, (), a0 == 0, True),
            ExtPresentation(1, (), (), True, True),
        ]

    operators = [res.operator(j) for j in range(res.length)]
    presentations: list[ExtPresentation] = []
    for j, rank in enumerate(res.ranks):
        if j < len(operators):
            kernel = _kernel(operators[j], nvars, order, limits)
        else:
            kernel = [ModuleElement.unit(rank, k, nvars) for k in range(rank)]
        image = operators[j - 1].columns() if j >= 1 else []
        image = [g for g in image if not g.is_zero()]
        composition_zero = True
        if 1 <= j < len(operators):
            composition_zero = operators[j].multiply(operators[j - 1]).is_zero()
        if not kernel:
            presentations.append(ExtPresentation(j, (), (), True, composition_zero))
            continue
        relations = _relations(kernel, image, order, limits)
        count = len(kernel)
        if relations:
            relation_basis = buchberger(list(relations), order, limits)
            is_zero = all(membership(ModuleElement.unit(count, k, nvars), relation_basis) for k in range(count))
            relations = relation_basis.generators
        else:
            is_zero = False
        presentations.append(ExtPresentation(j, tuple(kernel), tuple(relations), is_zero, composition_zero))
    return presentations


def _relations(
    kernel: list[ModuleElement],
    image: list[ModuleElement],
    order: TermOrder,
    limits: LimitsConfig | None,
) -> tuple[ModuleElement, ...]:
    """{r in P^k : sum r_i kernel_i in span(image)} as generators."""
    if not image:
        syz = syzygies(kernel, order, limits)
        return syz.rows
    count = len(kernel)
    syz = syzygies(kernel + image, order, limits)
    relations = []
    for row in syz.rows:
        head = ModuleElement(row.components[:count])
        if not head.is_zero():
            relations.append(head)
    return tuple(relations)
