"""Input parsing helpers."""

from __future__ import annotations

from fractions import Fraction


def parse_bool(value: str | bool) -> bool:
    if isinstance(value, bool):
        return value
    normalized = value.strip().lower()
    if normalized in {"1", "true", "yes", "y"}:
        return True
    if normalized in {"0", "false", "no", "n"}:
        return False
    raise ValueError(f"Cannot parse boolean value from '{value}'.")


def parse_rational(value: str | int | float | Fraction) -> Fraction:
    """Accept `3`, `-2/5`, `0.25` or an existing number and return an exact rational."""
    if isinstance(value, bool):
        raise ValueError("Boolean is not a rational number.")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    text = value.strip()
    if not text:
        raise ValueError("Empty rational literal.")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"Cannot parse rational value from '{value}'.") from exc


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
