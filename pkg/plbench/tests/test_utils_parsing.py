from fractions import Fraction

import pytest

from plbench.workbench.utils import json
from plbench.workbench.utils.parsing import format_rational, parse_bool, parse_rational


def test_parse_bool_values():
    assert parse_bool("true")
    assert parse_bool("YES")
    assert parse_bool(True)
    assert parse_bool("0") is False
    assert parse_bool("No") is False
    with pytest.raises(ValueError):
        parse_bool("maybe")


def test_parse_rational_forms():
    assert parse_rational("3") == 3
    assert parse_rational(" -2/5 ") == Fraction(-2, 5)
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational(0.1) == Fraction(1, 10)
    assert parse_rational(7) == 7


@pytest.mark.parametrize("value", ["", "1/0", "x", True])
def test_parse_rational_rejects(value):
    with pytest.raises(ValueError):
        parse_rational(value)


def test_format_rational():
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-3, 6)) == "-1/2"


def test_canonical_json():
    payload = {"b": 1.0 / 3.0, "a": [float("inf"), float("nan"), 1 + 2j], "c": None}
    text = json.dumps(payload).decode("utf-8")
    assert text.startswith('{"a":')
    assert '"inf"' in text and '"nan"' in text
    assert json.loads(text)["b"] == 0.333333333333
    assert json.dumps(payload) == json.dumps(dict(reversed(list(payload.items()))))
