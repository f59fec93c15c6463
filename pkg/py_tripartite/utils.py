import math
from fractions import Fraction
from typing import Optional, Union

from py_tripartite.models import Tolerance


def snap(x: float, tol: float = Tolerance.IDENTITY) -> float:
    """
    Replace a float rounding residue with an exact zero.
    """
    return 0.0 if abs(x) < tol else float(x)


def canonical_angle(x: float, period: float) -> float:
    """
    Reduce an angle to [0, period).

    Args:
        x (float): the angle in radians.
        period (float): the period, π for ν and 2π for κ.

    Returns:
        float: the canonical angle; values within 1e-12 of a multiple of the period become 0.

    """
    r = math.fmod(x, period)
    if r < 0:
        r += period

    if r < Tolerance.IDENTITY or period - r < Tolerance.IDENTITY:
        return 0.0

    return r


def circular_distance(x: float, y: float, period: float) -> float:
    d = math.fmod(abs(x - y), period)
    return min(d, period - d)


def to_fraction(x: float, max_denominator: int = 1000) -> Optional[Fraction]:
    """
    Recognize a float as a small rational.

    Args:
        x (float): the value.
        max_denominator (int): the largest denominator tried. (1000)

    Returns:
        Optional[Fraction]: the fraction if it matches x within 1e-10, otherwise None.

    """
    try:
        fraction = Fraction(x).limit_denominator(max_denominator)
        if abs(float(fraction) - x) <= Tolerance.FORMULA:
            return fraction

    except (ValueError, OverflowError):
        pass


def format_float(x: float) -> str:
    """
    Format a float with 17 significant digits.
    """
    return format(float(x), '.17g')


def render_rational(x: float) -> dict:
    """
    Render a number as {'numerator', 'denominator', 'float'}, or {'float'} alone when it is not a small rational.
    """
    fraction = to_fraction(x)
    if fraction is None:
        return {'float': float(x)}

    return {'numerator': fraction.numerator, 'denominator': fraction.denominator, 'float': float(x)}


def fraction_text(x: float) -> str:
    """
    Get '7/12' for a small rational and the 17-digit float otherwise.
    """
    fraction = to_fraction(x)
    if fraction is None:
        return format_float(x)

    return str(fraction)


def angle_text(x: float) -> str:
    """
    Get an angle as a rational multiple of π, e.g. 'π/8', '3π/8', '0'.
    """
    fraction = to_fraction(x / math.pi, max_denominator=64)
    if fraction is None:
        return format_float(x)

    if fraction == 0:
        return '0'

    numerator = '' if fraction.numerator == 1 else str(fraction.numerator)
    return f'{numerator}π' if fraction.denominator == 1 else f'{numerator}π/{fraction.denominator}'


def parse_angle(text: Union[str, float], degrees: bool = False) -> float:
    """
    Parse an angle given in radians, or in degrees if requested.

    Raises:
        ValueError: the value is not a finite number.

    """
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f'Angles must be finite, got {text!r}')

    return math.radians(value) if degrees else value
