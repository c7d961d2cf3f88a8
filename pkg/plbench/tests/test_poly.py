from fractions import Fraction

import pytest

from plbench.workbench.algebra.grammar import parse_polynomial, render
from plbench.workbench.algebra.poly import ModuleElement, Polynomial, TermOrder, polynomial_ring
from plbench.workbench.core.exceptions import InputError, PolynomialSyntaxError, ResourceLimitError

XY = ["x", "y"]


def poly(text, names=XY):
    return parse_polynomial(text, names)


def test_parse_and_render_round_trip():
    p = poly("x^2 - 2*x*y + 1/2")
    assert render(p, XY) == "x^2 - 2*x*y + 1/2"
    assert poly(render(p, XY)) == p


def test_render_uses_default_names():
    assert render(poly("y^3 - x")) == "z2^3 - z1"


def test_missing_multiplication_is_a_syntax_error():
    with pytest.raises(PolynomialSyntaxError) as info:
        poly("2x")
    assert info.value.line == 1


def test_unknown_variable_is_rejected():
    with pytest.raises(PolynomialSyntaxError):
        poly("x + w")


def test_sign_flip_is_an_involution():
    for text in ("x^3 - y + 1", "x*y - 1", "y^2 - x^3", "0"):
        p = poly(text)
        assert p.sign_flip().sign_flip() == p


def test_sign_flip_negates_odd_degrees():
    assert poly("x + y^2 - 3").sign_flip() == poly("-x + y^2 - 3")


def test_primitive_has_integer_coprime_coefficients():
    assert poly("1/2*x - 1").primitive() == poly("x - 2")
    assert poly("-2*x + 4").primitive() == poly("x - 2")


def test_substitute_linear_and_derivative():
    square = poly("x^2")
    assert square.substitute_linear(0, [1, 1]) == poly("x^2 + 2*x*y + y^2")
    assert poly("x^3*y").derivative(0) == poly("3*x^2*y")
    assert poly("x^3*y").derivative(1) == poly("x^3")


def test_degrees_and_leading_terms():
    p = poly("x*y^2 + x^3 - 1")
    assert p.total_degree() == 3
    assert p.degree_in(1) == 2
    assert p.leading_term(TermOrder("lex")) == ((3, 0), Fraction(1))
    assert p.leading_term(TermOrder("grevlex"))[0] in {(3, 0), (1, 2)}


def test_leading_terms_are_memoized_per_order():
    p = poly("x^3 + x*y^2 - y^4")
    lex, grlex = TermOrder("lex"), TermOrder("grlex")
    first = p.leading_term(lex)
    assert p.leading_term(TermOrder("lex")) is first
    assert p.leading_term(grlex) == ((0, 4), Fraction(-1))
    assert p.leading_term(lex) == ((3, 0), Fraction(1))
    assert p == poly("x^3 + x*y^2 - y^4")
    assert hash(p) == hash(poly("-y^4 + x*y^2 + x^3"))
    element = ModuleElement((poly("y"), p))
    assert element.leading_term(TermOrder("grlex", "top")) == (1, (0, 4), Fraction(-1))


def test_evaluate_is_close_to_exact():
    p = poly("x*y - 1")
    assert abs(p.evaluate([2, 0.5])) < 1e-15
    assert p.evaluate_exact([(Fraction(2), Fraction(0)), (Fraction(1, 2), Fraction(0))]) == (0, 0)


def test_ring_cap_on_variables():
    with pytest.raises(ResourceLimitError):
        polynomial_ring(9)


def test_variable_count_mismatch():
    with pytest.raises(InputError):
        Polynomial.variable(2, 0) + Polynomial.variable(3, 0)


def test_module_element_dot():
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    gens = [ModuleElement((x,)), ModuleElement((y,))]
    assert ModuleElement((y, -x)).dot(gens).is_zero()


def test_term_order_parse_aliases():
    assert TermOrder.parse("graded-reverse-lex").kind == "grevlex"
    with pytest.raises(InputError):
        TermOrder.parse("elimination")
