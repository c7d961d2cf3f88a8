"""
Polynomial text grammar shared by every input path.

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-')* power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | NAME | '(' expr ')'

Multiplication must be explicit; `2z1` is a syntax error. Parentheses nest at
most MAX_NESTING_DEPTH levels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence
import re

from plbench.workbench.algebra.poly import Polynomial, TermOrder
from plbench.workbench.core.exceptions import PolynomialSyntaxError, ResourceLimitError
from plbench.workbench.utils.parsing import format_rational


_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")
_RENDER_ORDER = TermOrder("grlex")
MAX_LITERAL_EXPONENT = 1024
MAX_NESTING_DEPTH = 128


@dataclass(slots=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def default_variables(nvars: int) -> list[str]:
    return [f"z{i}" for i in range(1, nvars + 1)]


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    position = 0
    line, line_start = 1, 0
    while position < len(text):
        char = text[position]
        if char == "\n":
            line += 1
            position += 1
            line_start = position
            continue
        if char.isspace():
            position += 1
            continue
        match = _TOKEN_RE.match(text, position)
        if match is None or match.end() == position:
            raise PolynomialSyntaxError(f"Unexpected character {char!r}", line=line, column=position - line_start + 1)
        start = match.start(match.lastgroup)  # type: ignore[arg-type]
        kind = match.lastgroup or "op"
        tokens.append(_Token(kind, match.group(kind), line, start - line_start + 1))
        position = match.end()
    tokens.append(_Token("end", "", line, position - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]) -> None:
        self.tokens = _tokenize(text)
        self.index = 0
        self.variables = {name: i for i, name in enumerate(variables)}
        self.nvars = len(variables)
        self.depth = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def _error(self, message: str, token: _Token | None = None) -> PolynomialSyntaxError:
        token = token or self.current
        return PolynomialSyntaxError(message, line=token.line, column=token.column)

    def _accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.index += 1
            return True
        return False

    def parse(self) -> Polynomial:
        if self.current.kind == "end":
            raise self._error("Empty polynomial")
        value = self._expr()
        if self.current.kind != "end":
            raise self._error(f"Expected an operator before {self.current.text!r}")
        return value

    def _expr(self) -> Polynomial:
        value = self._term()
        while True:
            if self._accept("+"):
                value = value + self._term()
            elif self._accept("-"):
                value = value - self._term()
            else:
                return value

    def _term(self) -> Polynomial:
        value = self._unary()
        while self._accept("*"):
            value = value * self._unary()
        return value

    def _unary(self) -> Polynomial:
        negate = False
        while True:
            if self._accept("-"):
                negate = not negate
            elif not self._accept("+"):
                break
        value = self._power()
        return -value if negate else value

    def _power(self) -> Polynomial:
        base = self._atom()
        if self._accept("^"):
            token = self.current
            if token.kind != "int":
                raise self._error("Exponent must be a non-negative integer literal")
            self.index += 1
            exponent = int(token.text)
            if exponent > MAX_LITERAL_EXPONENT:
                raise ResourceLimitError(
                    f"Exponent {exponent} at line {token.line}, column {token.column} exceeds {MAX_LITERAL_EXPONENT}."
                )
            return base**exponent
        return base

    def _atom(self) -> Polynomial:
        token = self.current
        if token.kind == "int":
            self.index += 1
            value = Fraction(int(token.text))
            if self._accept("/"):
                denominator = self.current
                if denominator.kind != "int":
                    raise self._error("Denominator must be an integer literal")
                if int(denominator.text) == 0:
                    raise self._error("Division by zero in rational literal", denominator)
                self.index += 1
                value = value / int(denominator.text)
            return Polynomial.constant(self.nvars, value)
        if token.kind == "name":
            if token.text not in self.variables:
                raise self._error(f"Unknown variable {token.text!r}")
            self.index += 1
            return Polynomial.variable(self.nvars, self.variables[token.text])
        if self._accept("("):
            if self.depth >= MAX_NESTING_DEPTH:
                raise self._error(f"Parentheses nested deeper than {MAX_NESTING_DEPTH}", token)
            self.depth += 1
            value = self._expr()
            if not self._accept(")"):
                raise self._error("Expected ')'")
            self.depth -= 1
            return value
        if token.kind == "end":
            raise self._error("Unexpected end of input")
        raise self._error(f"Unexpected token {token.text!r}")


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse `text` in the ring whose variables are `variables`, in order."""
    if not variables:
        raise PolynomialSyntaxError("No variables declared", line=1, column=1)
    return _Parser(text, variables).parse()


def render(poly: Polynomial, variables: Sequence[str] | None = None) -> str:
    names = list(variables) if variables is not None else default_variables(poly.nvars)
    pieces: list[str] = []
    for monomial, coefficient in poly.terms(_RENDER_ORDER):
        factors = [
            name if exponent == 1 else f"{name}^{exponent}"
            for name, exponent in zip(names, monomial)
            if exponent
        ]
        magnitude = abs(coefficient)
        if not factors:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([format_rational(magnitude), *factors])
        if not pieces:
            pieces.append(f"-{body}" if coefficient < 0 else body)
        else:
            pieces.append(f"- {body}" if coefficient < 0 else f"+ {body}")
    return " ".join(pieces) if pieces else "0"
