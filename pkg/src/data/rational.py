import math
import re
from fractions import Fraction

from data.errors import StructuralError

Rational = Fraction

_RATIONAL_PATTERN = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


def parse_rational(value, field: str | None = None) -> Fraction:
    """Parse an exact rational from an int or a "p/q" / "p" string.

    Floats are refused: they cannot be read back exactly.
    """
    if isinstance(value, bool):
        raise StructuralError(f"expected a rational, got boolean {value!r}", field)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL_PATTERN.match(value):
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise StructuralError(f"zero denominator in {value!r}", field) from None
    raise StructuralError(f"expected a rational string 'p/q', got {value!r}", field)


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def ceil_fraction(value: Fraction) -> int:
    return -((-value.numerator) // value.denominator)


def lcm_of_denominators(values) -> int:
    result = 1
    for value in values:
        result = math.lcm(result, Fraction(value).denominator)
    return result
