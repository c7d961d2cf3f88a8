from fractions import Fraction

import pytest

from plbench.workbench.algebra.grammar import parse_polynomial, render
from plbench.workbench.core.exceptions import InputError, PositiveDimensionalError, ResourceLimitError
from plbench.workbench.system.models import WeightSpec
from plbench.workbench.variety.factor import factor, minimal_primes_if_principal, square_free_part
from plbench.workbench.variety.puiseux import curve_expansion, puiseux_at_infinity, residual_exponent
from plbench.workbench.variety.report import BRANCH_REPORT_LABEL, branch_report
from plbench.workbench.variety.roots import cluster_roots, durand_kerner
from plbench.workbench.variety.solve import solve_zero_dim

XY = ("x", "y")
Z = ("z1", "z2")


def poly(text, variables=XY):
    return parse_polynomial(text, variables)


def test_durand_kerner_finds_cube_roots_of_unity():
    roots = durand_kerner([1, 0, 0, -1])
    assert len(roots) == 3
    for root in roots:
        assert abs(root**3 - 1) < 1e-10


def test_cluster_roots_counts_double_root():
    clusters = cluster_roots(durand_kerner([1, -2, 1]))
    assert len(clusters) == 1
    value, count = clusters[0]
    assert abs(value - 1) < 1e-6
    assert count == 2


def test_factor_reconstructs_input():
    p = poly("2*x^3 - 2*x*y^2")
    result = factor(p)
    assert result.complete
    assert result.reconstruct(2) == p
    rendered = sorted(render(f, XY) for f, _ in result.factors)
    assert rendered == sorted(["x", "x + y", "x - y"])


def test_factor_rejects_zero():
    with pytest.raises(InputError):
        factor(poly("0"))


def test_factor_bivariate_degree_cap():
    with pytest.raises(ResourceLimitError):
        factor(poly("x^9*y + 1"))


def test_square_free_part_drops_repeats():
    p = poly("x^2*(x - y)^3")
    assert render(square_free_part(p), XY) in {"x^2 - x*y", "-x^2 + x*y"}


def test_minimal_primes_of_principal_annihilator():
    primes = minimal_primes_if_principal((poly("x^2*y - x*y^2"),))
    assert len(primes) == 3
    assert minimal_primes_if_principal((poly("x"), poly("y"))) == ()
    assert minimal_primes_if_principal((poly("3"),)) == ()


def test_solve_two_points():
    points = solve_zero_dim([poly("x^2 - 1"), poly("y - x")])
    assert [p.multiplicity for p in points] == [1, 1]
    coordinates = [tuple(round(z.real, 9) for z in p.point) for p in points]
    assert coordinates == [(-1.0, -1.0), (1.0, 1.0)]
    assert all(p.residual < 1e-8 for p in points)


def test_solve_reports_multiplicity():
    points = solve_zero_dim([poly("x^2 - 2*x + 1", ("x",))])
    assert len(points) == 1
    assert points[0].multiplicity == 2
    assert abs(points[0].point[0] - 1) < 1e-6


def test_solve_inconsistent_system_is_empty():
    assert solve_zero_dim([poly("x"), poly("x - 1")]) == []


def test_solve_rejects_curves():
    with pytest.raises(PositiveDimensionalError):
        solve_zero_dim([poly("x*y - 1")])


def test_cusp_branches():
    expansion = curve_expansion(poly("z2^2 - z1^3", Z))
    assert len(expansion.branches) == 2
    assert all(b.leading_exponent == Fraction(3, 2) for b in expansion.branches)
    coefficients = sorted(round(b.leading_coefficient.real, 9) for b in expansion.branches)
    assert coefficients == [-1.0, 1.0]
    assert all(b.ramification == 2 for b in expansion.branches)
    assert {b.cycle for b in expansion.branches} == {0}
    assert expansion.ramification_total() == 2
    assert all(b.is_exact and b.truncation_exponent is None for b in expansion.branches)


def test_hyperbola_branch():
    branches = puiseux_at_infinity(poly("z1*z2 - 1", Z))
    assert len(branches) == 1
    assert branches[0].leading_exponent == Fraction(-1)
    assert branches[0].leading_coefficient == 1
    assert residual_exponent(poly("z1*z2 - 1", Z), branches[0]) is None


def test_residual_drops_with_order():
    curve = poly("z2^2 - z1 - 1", Z)
    for order, expected in ((1, Fraction(0)), (2, Fraction(-1))):
        branches = puiseux_at_infinity(curve, order)
        assert len(branches) == 2
        for branch in branches:
            residual = residual_exponent(curve, branch)
            assert residual == expected
            assert residual < branch.truncation_exponent


def test_curve_without_z2_has_no_branches():
    expansion = curve_expansion(poly("z1^2 - 1", Z))
    assert expansion.branches == ()
    assert expansion.notices


def test_square_free_notice():
    expansion = curve_expansion(poly("(z2 - z1)^2", Z))
    assert len(expansion.branches) == 1
    assert any("square-free" in n for n in expansion.notices)


def test_expansion_is_deterministic():
    curve = poly("z2^3 - z1^2*z2 + z1", Z)
    assert curve_expansion(curve).as_dict() == curve_expansion(curve).as_dict()


def test_expansion_needs_two_variables():
    with pytest.raises(InputError):
        curve_expansion(poly("x", ("x",)))


def test_branch_report_shows_gevrey_order():
    branches = puiseux_at_infinity(poly("z2^2 - z1^3", Z))
    report = branch_report(branches, WeightSpec("gevrey", Fraction(1, 2)))
    payload = report.as_dict()
    assert payload["label"] == BRANCH_REPORT_LABEL
    assert payload["gevrey_order_s"] == "2"
    assert [b["leading_exponent"] for b in payload["branches"]] == ["3/2", "3/2"]
    assert all(b["denominator"] == 2 and b["all_real"] for b in payload["branches"])


def test_branch_report_runs_predicates():
    class Exponent:
        name = "exponent-below-one"

        def __call__(self, branch, weight):
            return branch.leading_exponent < 1

    branches = puiseux_at_infinity(poly("z1*z2 - 1", Z))
    report = branch_report(branches, WeightSpec("logpow", Fraction(2)), [Exponent()])
    assert report.gevrey_order is None
    assert report.branches[0].predicates == {"exponent-below-one": True}


def test_non_monic_curve_keeps_coordinates_and_warns():
    expansion = curve_expansion(poly("z1*z2 - 1", Z))
    assert expansion.normalization == 0
    assert [b.leading_exponent for b in expansion.branches] == [Fraction(-1)]
    assert any("leading z2-coefficient z1 " in n for n in expansion.notices)
    assert not any("leading z2-coefficient" in n for n in curve_expansion(poly("z2^2 - z1^3", Z)).notices)
    normalized = curve_expansion(poly("z1*z2 - 1", Z), normalize=True)
    assert normalized.normalization == 1
    assert not any("leading z2-coefficient" in n for n in normalized.notices)
