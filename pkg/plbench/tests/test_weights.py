import math
from fractions import Fraction

import numpy as np
import pytest

from plbench.workbench.core.exceptions import ConjugateRangeError, InputError
from plbench.workbench.system.models import TABLE, WeightSpec
from plbench.workbench.system.parser import GAMMA_PRIME_ONLY, parse_weight
from plbench.workbench.weights.axioms import (
    CONVERGES,
    DIVERGES,
    INCONCLUSIVE,
    check_axioms,
    check_beta,
    classify_tail,
    estimate_dilation_constant,
)
from plbench.workbench.weights.compare import (
    EQUIVALENT,
    SECOND_DOMINATED,
    equivalence_check,
    subadditivity_check,
)
from plbench.workbench.weights.conjugate import (
    CLOSED_FORM,
    NUMERIC,
    biconjugate_check,
    find_shift_constant,
    young_conjugate,
)
from plbench.workbench.weights.families import weight_function


def weight(text):
    return weight_function(parse_weight(text))


def test_normalized_gevrey_vanishes_on_unit_interval():
    w = weight("gevrey 1/2")
    assert np.allclose(w([0.0, 0.5, 1.0]), 0.0)
    assert w([4.0])[0] == pytest.approx(1.0)
    assert w.shift == pytest.approx(1.0)


def test_unnormalized_weight_keeps_raw_values():
    w = weight_function(WeightSpec("gevrey", Fraction(1, 2), normalize=False))
    assert w([0.25])[0] == pytest.approx(0.5)


def test_negative_argument_rejected():
    with pytest.raises(InputError):
        weight("logpow 2")([-1.0])


def test_gevrey_half_satisfies_all_axioms():
    report = check_axioms(weight("gevrey 1/2"))
    assert report.alpha.holds
    assert report.beta.verdict == CONVERGES
    assert report.gamma_prime.holds
    assert report.gamma.holds
    assert report.delta.holds
    assert report.flags == ()
    assert report.alpha.K < 1.5


def test_logpow_one_satisfies_only_gamma_prime():
    report = check_axioms(weight("logpow 1"))
    assert report.gamma_prime.holds
    assert report.gamma_prime.b == pytest.approx(1.0)
    assert not report.gamma.holds
    assert GAMMA_PRIME_ONLY in report.flags
    assert report.beta.verdict == CONVERGES


def test_borderline_sublinear_table_diverges():
    t = np.logspace(-3, 7, 3001)
    points = tuple((float(x), float(x / math.log(math.e + x))) for x in t)
    w = weight_function(WeightSpec(TABLE, None, points=points, normalize=False, label="t/log(e+t)"))
    verdict = check_beta(w, 1e6)
    assert verdict.verdict == DIVERGES
    assert verdict.tail_exponent == pytest.approx(1.0, abs=0.05)


@pytest.mark.parametrize(
    ("p", "r", "expected"),
    [
        (0.5, 0.0, CONVERGES),
        (1.2, -3.0, DIVERGES),
        (1.0, -2.0, CONVERGES),
        (1.0, -1.0, DIVERGES),
        (1.0, -1.1, INCONCLUSIVE),
    ],
)
def test_classify_tail(p, r, expected):
    assert classify_tail(p, r) == expected


def test_axiom_horizon_lower_bound():
    with pytest.raises(InputError):
        check_axioms(weight("gevrey 1/2"), horizon=5)


def test_dilation_constant_for_gevrey():
    assert 1.0 < estimate_dilation_constant(weight("gevrey 1/2"), 2.0) < 1.5


def test_gevrey_conjugate_at_zero():
    conjugate = young_conjugate(weight("gevrey 1/2"))
    assert conjugate.method == CLOSED_FORM
    assert conjugate(0.0) == 0.0
    assert conjugate(0.25) == 0.0


@pytest.mark.parametrize("y", [0.75, 1.0, 2.0, 10.0, 300.0, 1e4])
def test_closed_form_matches_numeric_search(y):
    w = weight("gevrey 1/2")
    closed = young_conjugate(w)(y)
    numeric = young_conjugate(w, numeric=True)
    assert numeric.method == NUMERIC
    assert numeric(y) == pytest.approx(closed, rel=1e-6, abs=1e-9)


def test_closed_form_value():
    # maximizer x = 2 log 4 for y = 2
    conjugate = young_conjugate(weight("gevrey 1/2"))
    x = 2.0 * math.log(4.0)
    assert conjugate.maximizer(2.0) == pytest.approx(x)
    assert conjugate(2.0) == pytest.approx(2.0 * x - 4.0 + 1.0)


def test_biconjugate_recovers_phi():
    assert biconjugate_check(young_conjugate(weight("gevrey 1/2")), samples=20) < 1e-6


def test_conjugate_rejects_negative_slope():
    with pytest.raises(InputError):
        young_conjugate(weight("gevrey 1/2"))(-1.0)


def test_table_conjugate_range():
    spec = parse_weight('{"family": "table", "points": [[1, 0], [10, 2]]}')
    conjugate = young_conjugate(weight_function(spec))
    assert conjugate.slope_limit == pytest.approx(2.0 / math.log(10.0))
    with pytest.raises(ConjugateRangeError):
        conjugate(5.0)


def test_shift_constant_found_for_gevrey():
    assert find_shift_constant(young_conjugate(weight("gevrey 1/2")), y_max=1e3) is not None


def test_subadditivity():
    w = weight("gevrey 1/2")
    assert subadditivity_check(w, 1.0).holds
    failing = subadditivity_check(w, 0.5)
    assert not failing.holds
    assert failing.worst_ratio > 1.0


def test_equivalence_verdicts():
    half, third = weight("gevrey 1/2"), weight("gevrey 1/3")
    assert equivalence_check(half, weight("gevrey 1/2")).verdict == EQUIVALENT
    assert equivalence_check(half, third).verdict == SECOND_DOMINATED


def test_logpow_one_conjugate_stops_at_slope_one():
    conjugate = young_conjugate(weight("logpow 1"))
    assert conjugate.method == NUMERIC
    assert conjugate.slope_limit == 1.0
    assert conjugate(0.5) == pytest.approx(0.0, abs=1e-9)
    assert conjugate(0.75) == pytest.approx(0.75 * math.log(3.0) - math.log(2.0), rel=1e-6)
    with pytest.raises(ConjugateRangeError):
        conjugate(2.0)
    found = find_shift_constant(conjugate)
    assert found is None or found >= 2.0


def test_conjugate_over_y_is_nondecreasing():
    conjugate = young_conjugate(weight("gevrey 1/2"))
    ys = np.logspace(-1, 4, 60)
    ratios = conjugate.evaluate(ys) / ys
    assert np.all(np.diff(ratios) >= -1e-12)
