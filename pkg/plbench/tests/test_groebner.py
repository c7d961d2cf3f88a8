import json
import random
from fractions import Fraction
from itertools import product
from pathlib import Path

import pytest
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.monomials import monomial_mul

from plbench.workbench.algebra.grammar import parse_polynomial
from plbench.workbench.algebra.groebner import (
    buchberger,
    membership,
    oracle_agrees,
    reduce,
    s_vectors_reduce_to_zero,
    syzygies,
    syzygy_oracle,
)
from plbench.workbench.algebra.poly import ModuleElement, Polynomial, TermOrder
from plbench.workbench.config import LimitsConfig
from plbench.workbench.core.exceptions import GroebnerLimitError, InputError
from plbench.workbench.system.parser import parse_system

XY = ["x", "y"]
XYZ = ["x", "y", "z"]
GRLEX = TermOrder("grlex")
DATA_DIR = Path(__file__).parent / "data"


def ideal(*texts, names=XY):
    return [ModuleElement((parse_polynomial(t, names),)) for t in texts]


def element(*texts, names=XY):
    return ModuleElement(tuple(parse_polynomial(t, names) for t in texts))


def load_corpus():
    cases = []
    for entry in json.loads((DATA_DIR / "corpus.json").read_bytes()):
        system = parse_system(json.dumps({k: entry[k] for k in ("label", "variables", "matrix")}))
        order = TermOrder.parse(entry["order"], entry.get("extension", "pot"))
        cases.append(pytest.param(system.matrix.rows(), order, id=entry["label"]))
    return cases


CORPUS = load_corpus()


@pytest.mark.parametrize("gens,order", CORPUS)
def test_s_vectors_reduce_to_zero(gens, order):
    basis = buchberger(gens, order)
    assert s_vectors_reduce_to_zero(basis)
    for generator in gens:
        assert membership(generator, basis)


@pytest.mark.parametrize("gens,order", CORPUS)
def test_transform_rows_rebuild_basis(gens, order):
    basis = buchberger(gens, order)
    for generator, row in zip(basis.generators, basis.transform):
        assert row.dot(list(gens)) == generator


def test_membership_of_combination():
    basis = buchberger(ideal("x^2 - y", "x*y - 1"), GRLEX)
    assert membership(element("x^3 - 1"), basis)
    assert not membership(element("x"), basis)


def test_unit_ideal_detected():
    basis = buchberger(ideal("x", "x - 1"), GRLEX)
    assert basis.is_unit_ideal()


def test_reduce_returns_quotients():
    divisors = [element("x"), element("y")]
    remainder, quotients = reduce(element("x^2 + x*y + 3"), divisors, GRLEX)
    assert remainder == element("3")
    rebuilt = ModuleElement(tuple(quotients)).dot(divisors) + remainder
    assert rebuilt == element("x^2 + x*y + 3")


def test_reduce_is_deterministic():
    divisors = [element("x*y - 1"), element("y^2 - x")]
    first = reduce(element("x^2*y^2 + y^3"), divisors, GRLEX)
    second = reduce(element("x^2*y^2 + y^3"), divisors, GRLEX)
    assert first == second


def test_rank_mismatch_rejected():
    with pytest.raises(InputError):
        buchberger([element("x"), element("x", "y")], GRLEX)


def test_pair_cap_raises_with_partial_stats():
    with pytest.raises(GroebnerLimitError) as info:
        buchberger(ideal("x^2 - y", "x*y - 1"), GRLEX, LimitsConfig(max_pairs=1))
    assert info.value.stats.pairs_processed == 1
    assert info.value.exit_code == 4


def test_koszul_syzygy_of_two_variables():
    gens = ideal("x", "y")
    syz = syzygies(gens, GRLEX)
    assert len(syz.rows) == 1
    assert syz.rows[0].dot(gens).is_zero()
    assert oracle_agrees(gens, syz, 2, GRLEX)


def test_syzygies_of_three_variables():
    gens = ideal("x", "y", "z", names=XYZ)
    syz = syzygies(gens, GRLEX)
    assert len(syz.rows) == 3
    for row in syz.rows:
        assert row.dot(gens).is_zero()
    assert oracle_agrees(gens, syz, 2, GRLEX)


def test_oracle_solutions_are_syzygies():
    gens = ideal("x^2 - y", "x*y - 1")
    for solution in syzygy_oracle(gens, 2):
        assert solution.dot(gens).is_zero()


def bounded_member(f, gens, degree):
    """Is f = sum h_i gens_i with deg h_i <= degree? Exact linear algebra over QQ."""
    nvars = f.nvars
    shifts = [m for m in product(range(degree + 1), repeat=nvars) if sum(m) <= degree]
    unknowns = [(i, shift) for i in range(len(gens)) for shift in shifts]
    equations = {}
    for column, (i, shift) in enumerate(unknowns):
        for position, component in enumerate(gens[i].components):
            for monomial, coefficient in component.element.items():
                row = equations.setdefault((position, monomial_mul(monomial, shift)), {})
                row[column] = row.get(column, QQ.zero) + coefficient
    target = {(p, m): c for p, component in enumerate(f.components) for m, c in component.element.items()}
    if any(key not in equations for key in target):
        return False
    keys = sorted(equations)
    rows = [[equations[key].get(column, QQ.zero) for column in range(len(unknowns))] for key in keys]
    augmented = [row + [target.get(key, QQ.zero)] for row, key in zip(rows, keys)]
    plain = DomainMatrix(rows, (len(keys), len(unknowns)), QQ)
    extended = DomainMatrix(augmented, (len(keys), len(unknowns) + 1), QQ)
    return plain.rank() == extended.rank()


def random_polynomial(rng, nvars, degree):
    monomials = [m for m in product(range(degree + 1), repeat=nvars) if sum(m) <= degree]
    terms = {m: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for m in rng.sample(monomials, min(3, len(monomials)))}
    return Polynomial.from_terms(nvars, terms)


@pytest.mark.parametrize("gens,order", CORPUS)
def test_membership_matches_bounded_linear_algebra(gens, order):
    rng = random.Random(20240611)
    basis = buchberger(gens, order)
    nvars, rank = gens[0].nvars, gens[0].rank
    for trial in range(10):
        multipliers = ModuleElement(tuple(random_polynomial(rng, nvars, 1) for _ in gens))
        member = multipliers.dot(list(gens))
        assert membership(member, basis)
        assert bounded_member(member, gens, 1)
        noise = [Polynomial.zero(nvars)] * rank
        noise[trial % rank] = random_polynomial(rng, nvars, 2)
        perturbed = member + ModuleElement(tuple(noise))
        assert membership(perturbed, basis) == bounded_member(perturbed, gens, 4)
