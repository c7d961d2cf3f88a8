import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from plbench.workbench.algebra.grammar import parse_polynomial
from plbench.workbench.algebra.matrices import OperatorMatrix
from plbench.workbench.algebra.resolution import (
    FREE_MODULE_NOTE,
    annihilates,
    annihilator,
    cancel_units,
    characteristic_variety,
    dual_complex_homology,
    exponential_kernel_test,
    hilbert_resolution,
    length_bound,
    overdetermination_report,
)
from plbench.workbench.core.exceptions import InputError
from plbench.workbench.system.models import SystemSpec
from plbench.workbench.system.parser import parse_system

DATA_DIR = Path(__file__).parent / "data"


def load(name):
    return parse_system((DATA_DIR / name).read_bytes())


def test_gradient_yields_curl_condition():
    system = load("gradient.json")
    res = hilbert_resolution(system)
    assert res.ranks == (1, 3, 3, 1)
    assert res.length <= system.nvars
    assert res.operator(1).multiply(res.operator(0)).is_zero()
    report = overdetermination_report(res)
    assert report.overdetermined
    assert report.condition_count == 3
    assert all(c.composition_zero and c.oracle_passed for c in res.certificates)


def test_koszul_ranks_with_custom_names():
    res = hilbert_resolution(load("koszul3.json"))
    assert res.ranks == (1, 3, 3, 1)
    assert res.variables == ("x", "y", "t")


def test_single_operator_is_not_overdetermined():
    system = load("single.json")
    res = hilbert_resolution(system)
    assert res.ranks == (1, 1)
    assert overdetermination_report(res).as_dict()["summary"] == "not overdetermined"


def test_single_operator_annihilator_is_principal():
    system = load("single.json")
    ann = annihilator(system)
    assert ann.principal
    assert ann.generators[0] == parse_polynomial("z1^2 + z2^2", system.variables)
    assert annihilates(system, ann.generators[0])


def test_gradient_annihilator_is_the_maximal_ideal():
    system = load("gradient.json")
    ann = annihilator(system)
    assert not ann.principal
    assert len(ann.generators) == 3
    for generator in ann.generators:
        assert annihilates(system, generator)


def test_zero_operator_is_free_module():
    zero = OperatorMatrix.zeros(1, 2, 2)
    system = SystemSpec(variables=("z1", "z2"), matrix=zero)
    res = hilbert_resolution(system)
    assert res.free_module
    assert FREE_MODULE_NOTE in res.notes
    ext = dual_complex_homology(res)
    assert not ext[0].is_zero
    assert ext[1].is_zero


def test_single_operator_ext_groups():
    system = load("single.json")
    ext = dual_complex_homology(hilbert_resolution(system))
    assert ext[0].is_zero
    assert not ext[1].is_zero
    assert all(e.composition_zero for e in ext)


def test_gradient_top_ext_is_residue_field():
    system = load("gradient.json")
    ext = dual_complex_homology(hilbert_resolution(system))
    assert [e.is_zero for e in ext[:3]] == [True, True, True]
    assert not ext[3].is_zero


def test_characteristic_variety_sign_flip():
    system = load("single.json")
    p = parse_polynomial("z1^3 + z2", system.variables)
    variety = characteristic_variety([p])
    assert variety.generators[0] == parse_polynomial("-z1^3 - z2", system.variables)
    assert variety.contains([1, -1])
    assert not variety.contains([1, 1])


def test_exponential_kernel_matches_generator_vanishing():
    system = load("gradient.json")
    assert exponential_kernel_test(system, [0, 0, 0])
    assert not exponential_kernel_test(system, [1, 0, 0])
    assert exponential_kernel_test(system, [(Fraction(0), Fraction(0))] * 3)


def test_exponential_kernel_on_circle():
    system = load("single.json")
    # z1^2 + z2^2 vanishes at (1, i)
    assert exponential_kernel_test(system, [1, 1j])
    assert exponential_kernel_test(system, [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))])
    assert not exponential_kernel_test(system, [1, 1])


def test_exponential_kernel_needs_scalar_system():
    matrix = OperatorMatrix.zeros(1, 2, 2)
    system = SystemSpec(variables=("z1", "z2"), matrix=matrix)
    with pytest.raises(InputError):
        exponential_kernel_test(system, [0, 0])


def scalar_system(variables, entries):
    matrix = OperatorMatrix(tuple((parse_polynomial(e, variables),) for e in entries), len(variables))
    return SystemSpec(variables=tuple(variables), matrix=matrix)


def test_unimodular_pair_in_one_variable():
    system = scalar_system(["z1"], ["z1", "1 - z1"])
    res = hilbert_resolution(system)
    assert res.ranks == (1, 2, 1)
    assert res.length == length_bound(1) == 2
    assert res.maps[0] == system.matrix.transpose()
    assert all(c.composition_zero for c in res.certificates)
    assert res.maps[0].multiply(res.maps[1]).is_zero()


def test_unimodular_row_in_two_variables():
    system = scalar_system(["z1", "z2"], ["z1", "z2", "1 - z1 - z2"])
    res = hilbert_resolution(system)
    # the kernel of a unimodular row of length 3 is free of rank 2
    assert res.ranks == (1, 3, 2)
    assert res.length <= system.nvars
    assert res.maps[0].multiply(res.maps[1]).is_zero()


def test_cancel_units_splits_off_a_trivial_summand():
    variables = ("z1",)
    zero, one, z1 = (parse_polynomial(s, variables) for s in ("0", "1", "z1"))
    first = OperatorMatrix(((z1, zero),), 1)
    second = OperatorMatrix(((zero, zero), (one, zero)), 1)
    third = OperatorMatrix(((zero,), (one,)), 1)
    assert first.multiply(second).is_zero() and second.multiply(third).is_zero()
    pruned = cancel_units([first, second, third])
    assert [m.shape for m in pruned] == [(1, 2), (2, 1)]
    # from the second map on, the unit in A_1 goes as well
    pruned = cancel_units([first, second, third], first=1)
    assert [m.shape for m in pruned] == [(1, 1)]
    assert pruned[0].entries[0][0] == z1


def test_length_bound():
    assert [length_bound(n) for n in (1, 2, 3)] == [2, 2, 3]


def corpus_systems():
    entries = json.loads((DATA_DIR / "corpus.json").read_bytes())
    return [
        pytest.param(parse_system(json.dumps({k: e[k] for k in ("label", "variables", "matrix")})), id=e["label"])
        for e in entries
    ]


CORPUS = corpus_systems()
SAMPLE_COORDINATES = [Fraction(-1), Fraction(0), Fraction(1), Fraction(2), Fraction(1, 2), Fraction(-3, 2)]


@pytest.mark.parametrize("system", CORPUS)
def test_resolution_length_within_variable_count(system):
    res = hilbert_resolution(system)
    assert res.length <= system.nvars
    assert all(c.composition_zero for c in res.certificates)
    for left, right in zip(res.maps, res.maps[1:]):
        assert left.multiply(right).is_zero()


def flipped_value(poly, point):
    total = Fraction(0)
    for monomial, coefficient in poly.coefficients().items():
        term = coefficient
        for value, exponent in zip(point, monomial):
            term *= (-value) ** exponent
        total += term
    return total


@pytest.mark.parametrize("system", [case for case in CORPUS if case.values[0].a0 == 1])
def test_exponential_kernel_agrees_with_flipped_generators(system):
    rng = random.Random(7)
    entries = [row.components[0] for row in system.matrix.rows()]
    for _ in range(50):
        point = [rng.choice(SAMPLE_COORDINATES) for _ in range(system.nvars)]
        expected = all(flipped_value(entry, point) == 0 for entry in entries)
        assert exponential_kernel_test(system, [(x, Fraction(0)) for x in point]) == expected
        assert exponential_kernel_test(system, [complex(x) for x in point]) == expected
