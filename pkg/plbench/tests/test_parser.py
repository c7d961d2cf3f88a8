import json
from fractions import Fraction
from pathlib import Path

import pytest

from plbench.workbench.algebra.grammar import MAX_NESTING_DEPTH, parse_polynomial
from plbench.workbench.config import LimitsConfig
from plbench.workbench.core.exceptions import InputError, PolynomialSyntaxError, ResourceLimitError
from plbench.workbench.system.models import BOX, CONSTANT, POLYTOPE, SCALED, UNIT_DILATION, RegionDocument
from plbench.workbench.system.parser import (
    GAMMA_PRIME_ONLY,
    build_region,
    parse_document,
    parse_system,
    parse_weight,
    render_document,
    render_system,
    render_weight,
)

DATA_DIR = Path(__file__).parent / "data"


def document(**fields):
    payload = {"variables": ["z1", "z2"], **fields}
    return json.dumps(payload)


def test_gradient_system_shape():
    spec = parse_system(document(matrix=[["z1"], ["z2"]]))
    assert (spec.a1, spec.a0) == (2, 1)
    assert spec.nvars == 2


def test_single_row_system():
    spec = parse_system(document(matrix=[["z1^2 + z2", "-1"]]))
    assert (spec.a1, spec.a0) == (1, 2)


def test_unknown_variable_reports_location():
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_system(document(matrix=[["z3"]]))
    assert "matrix[0][0]" in str(info.value.reason)
    assert info.value.exit_code == 1


def test_deep_parentheses_are_a_syntax_error():
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_system(document(matrix=[["(" * 3000 + "z1" + ")" * 3000]]))
    assert "nested deeper" in info.value.reason
    assert info.value.column == MAX_NESTING_DEPTH + 1


def test_nesting_up_to_the_limit_parses():
    depth = MAX_NESTING_DEPTH
    spec = parse_system(document(matrix=[["(" * depth + "z1" + ")" * depth]]))
    assert spec.matrix.entries[0][0] == parse_polynomial("z1", ["z1", "z2"])


@pytest.mark.parametrize(("signs", "expected"), [("-" * 3000, "z1"), ("-" * 3001, "-z1"), ("+-" * 1500, "z1")])
def test_long_sign_chains_fold(signs, expected):
    spec = parse_system(document(matrix=[[signs + "z1"]]))
    assert spec.matrix.entries[0][0] == parse_polynomial(expected, ["z1", "z2"])


def test_variable_count_limit_is_configurable():
    payload = document(matrix=[["z1"], ["z2"]])
    with pytest.raises(ResourceLimitError) as info:
        parse_system(payload, limits=LimitsConfig(max_variables=1))
    assert info.value.exit_code == 4
    assert parse_system(payload, limits=LimitsConfig(max_variables=2)).nvars == 2


def test_ragged_matrix_rejected():
    with pytest.raises(InputError, match="Ragged"):
        parse_system(document(matrix=[["z1", "z2"], ["z1"]]))


def test_missing_matrix_rejected():
    with pytest.raises(InputError):
        parse_system(document(curve="z2"))


def test_duplicate_variables_rejected():
    with pytest.raises(InputError):
        parse_system(json.dumps({"variables": ["z", "z"], "matrix": [["z"]]}))


@pytest.mark.parametrize("payload", [b"\xff\xfe", b"[1, 2]", b"{", b"", b"null", b'{"variables": 3}'])
def test_malformed_input_raises_input_error(payload):
    with pytest.raises(InputError):
        parse_document(payload)


def test_unknown_fields_rejected_unless_lenient():
    text = document(matrix=[["z1"]], comment="draft")
    with pytest.raises(InputError):
        parse_system(text)
    assert parse_system(text, lenient=True).a1 == 1


def test_compact_gevrey_weight():
    spec = parse_weight("gevrey 1/2")
    assert spec.family == "gevrey"
    assert spec.parameter == Fraction(1, 2)
    assert spec.normalize


def test_logpow_one_is_flagged():
    spec = parse_weight("logpow 1")
    assert spec.flags == (GAMMA_PRIME_ONLY,)
    assert parse_weight("logpow 2").flags == ()


@pytest.mark.parametrize("text", ["gevrey 1", "gevrey 0", "logpow 1/2", "sublinear-log 1", "cauchy 2", "gevrey"])
def test_out_of_range_weights_rejected(text):
    with pytest.raises(InputError):
        parse_weight(text)


def test_json_weight_and_table():
    spec = parse_weight('{"family": "sublinear-log", "beta": "3/2", "normalize": false}')
    assert spec.parameter == Fraction(3, 2)
    assert not spec.normalize
    table = parse_weight('{"family": "table", "points": [[0, 0], [1, 0.5], [4, 2]]}')
    assert table.points == ((0.0, 0.0), (1.0, 0.5), (4.0, 2.0))


def test_table_abscissae_must_increase():
    with pytest.raises(InputError):
        parse_weight('{"family": "table", "points": [[0, 0], [2, 1], [1, 2]]}')


def test_box_region_defaults_to_unit_dilation():
    region = build_region(RegionDocument(kind="box", bounds=[(-1, 1), (0, "1/2")]), 2)
    assert region.kind == BOX
    assert region.exhaustion == UNIT_DILATION
    assert region.bounds[1] == (Fraction(0), Fraction(1, 2))
    assert not region.lower_dimensional


def test_flat_polytope_is_lower_dimensional():
    region = build_region(RegionDocument(kind="polytope", vertices=[[0, 0], [1, 1], [2, 2]]), 2)
    assert region.kind == POLYTOPE
    assert region.exhaustion == CONSTANT
    assert region.lower_dimensional


def test_scaled_rule_needs_factors():
    with pytest.raises(InputError):
        build_region(RegionDocument(kind="box", bounds=[(0, 1), (0, 1)], exhaustion=SCALED), 2)
    region = build_region(RegionDocument(kind="box", bounds=[(0, 1), (0, 1)], exhaustion=SCALED, factors=[1, 2]), 2)
    assert region.factors == (Fraction(1), Fraction(2))


def test_inverted_box_rejected():
    with pytest.raises(InputError):
        build_region(RegionDocument(kind="box", bounds=[(1, 0), (0, 1)]), 2)


def test_probe_document():
    parsed = parse_document((DATA_DIR / "line_probe.json").read_bytes())
    assert parsed.curve is not None
    assert parsed.system is None
    assert parsed.regions is not None
    assert [r.exhaustion for r in parsed.regions] == [CONSTANT, CONSTANT]
    assert parsed.probe.alpha == 1
    assert parsed.probe.candidates[0].direction == (Fraction(1), Fraction(0))


def test_bad_candidate_rejected():
    text = document(curve="z2", probe={"candidates": [{"kind": "linear-imaginary", "c": [1]}]})
    with pytest.raises(InputError):
        parse_document(text)


def test_render_system_reparses():
    spec = parse_system((DATA_DIR / "koszul3.json").read_bytes())
    assert parse_system(render_system(spec)) == spec


@pytest.mark.parametrize("text", ["gevrey 1/2", "logpow 3", '{"family": "table", "points": [[0, 0], [0.1, 0.3]]}'])
def test_render_weight_reparses(text):
    spec = parse_weight(text)
    assert parse_weight(render_weight(spec)) == spec


def test_render_document_reparses():
    text = document(
        label="mixed",
        matrix=[["z1", "z2"]],
        curve="z2^2 - z1^3",
        primes=["z1 - z2"],
        weights=["gevrey 1/3", {"family": "logpow", "beta": 2, "normalize": False}],
        regions={
            "K1": {"kind": "polytope", "vertices": [[0, 0], [1, 0], [0, 1]]},
            "K2": {"kind": "box", "bounds": [[-1, 1], [-1, 1]], "exhaustion": "scaled", "factors": [1, "3/2"]},
        },
        probe={
            "alpha": 2,
            "candidates": [
                {"kind": "log-abs-polynomial", "polynomial": "z1*z2 + 1"},
                {"kind": "psh-combination", "parts": [{"kind": "linear-imaginary", "c": ["1/2", -1]}]},
            ],
        },
    )
    parsed = parse_document(text)
    assert parse_document(render_document(parsed)) == parsed
    assert render_document(parse_document(render_document(parsed))) == render_document(parsed)
