from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Protocol, Sequence

from plbench.workbench.system.models import GEVREY, WeightSpec
from plbench.workbench.utils.parsing import format_rational
from plbench.workbench.variety.puiseux import PuiseuxBranch

BRANCH_REPORT_LABEL = "branch data for Gevrey solvability analysis; no solvability verdict"


class BranchPredicate(Protocol):
    """Plug-in that annotates one branch against a weight; the result is stored verbatim."""

    name: str

    def __call__(self, branch: PuiseuxBranch, weight: WeightSpec) -> Any: ...


@dataclass(frozen=True, slots=True)
class BranchSummary:
    leading_exponent: str | None
    denominator: int
    ramification: int
    cycle: int
    coefficient_real: tuple[bool, ...]
    all_real: bool
    predicates: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, object]:
        return {
            "leading_exponent": self.leading_exponent,
            "denominator": self.denominator,
            "ramification": self.ramification,
            "cycle": self.cycle,
            "coefficient_real": list(self.coefficient_real),
            "all_real": self.all_real,
            "predicates": dict(self.predicates),
        }


@dataclass(frozen=True, slots=True)
class BranchReport:
    label: str
    weight: str
    gevrey_order: str | None
    branches: tuple[BranchSummary, ...]

    def as_dict(self) -> dict[str, object]:
        return {
            "label": self.label,
            "weight": self.weight,
            "gevrey_order_s": self.gevrey_order,
            "branches": [b.as_dict() for b in self.branches],
        }


def branch_report(
    branches: Sequence[PuiseuxBranch],
    weight: WeightSpec,
    predicates: Sequence[BranchPredicate] = (),
) -> BranchReport:
    """Per-branch exponent and reality data, shown next to s = 1/alpha for Gevrey weights."""
    gevrey_order = None
    if weight.family == GEVREY and weight.parameter:
        gevrey_order = format_rational(1 / weight.parameter)
    summaries = []
    for branch in branches:
        flags = branch.coefficient_real_flags()
        lead = branch.leading_exponent
        summaries.append(
            BranchSummary(
                leading_exponent=format_rational(lead) if lead is not None else None,
                denominator=lead.denominator if lead is not None else 1,
                ramification=branch.ramification,
                cycle=branch.cycle,
                coefficient_real=flags,
                all_real=all(flags),
                predicates={p.name: p(branch, weight) for p in predicates},
            )
        )
    return BranchReport(BRANCH_REPORT_LABEL, weight.describe(), gevrey_order, tuple(summaries))
