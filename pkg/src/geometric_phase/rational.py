"""Exact rational and number-theoretic arithmetic.

All commensurability and period arithmetic runs on ``fractions.Fraction``,
which keeps arbitrary-precision integers, so LCM/GCD chains never overflow.
"""

import math
import re
from collections.abc import Iterable
from fractions import Fraction

from .logging_config import get_logger
from .models.spectrum import RationalizationResult

logger = get_logger(__name__)

DEFAULT_MAX_DENOMINATOR = 10**6
DEFAULT_RAT_TOL = 1e-9

_RATIONAL_TEXT = re.compile(r"^[+-]?\d+(/\d+)?$")


def reduce(numerator: int, denominator: int) -> Fraction:
    """Return numerator/denominator in lowest terms with a positive denominator."""
    if denominator == 0:
        raise ValueError("zero denominator")
    return Fraction(numerator, denominator)


def lcm_set(values: Iterable[Fraction]) -> Fraction:
    """
    Least common multiple of a set of positive rationals.

    The result L is the smallest positive rational with L/r an integer for
    every r. For reduced fractions p_k/q_k it equals LCM(p_k)/GCD(q_k).

    Raises:
        ValueError: if the set is empty or holds a non-positive member
    """
    members = [Fraction(v) for v in values]
    if not members:
        raise ValueError("lcm_set of an empty set")
    for value in members:
        if value <= 0:
            raise ValueError(f"lcm_set requires positive rationals, got {format_rational(value)}")

    numerator = math.lcm(*(v.numerator for v in members))
    denominator = math.gcd(*(v.denominator for v in members))
    return Fraction(numerator, denominator)


def rationalize(x: float, max_denominator: int = DEFAULT_MAX_DENOMINATOR, tol: float = DEFAULT_RAT_TOL) -> RationalizationResult:
    """
    Best rational approximation of ``x`` with denominator at most ``max_denominator``.

    ``Fraction.limit_denominator`` walks the continued-fraction convergents
    (and the admissible semiconvergent) of the exact binary value of ``x``.
    """
    if max_denominator < 1:
        raise ValueError("max_denominator must be at least 1")
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if not math.isfinite(x):
        raise ValueError(f"cannot rationalize non-finite value {x!r}")

    exact = Fraction(x)
    value = exact.limit_denominator(max_denominator)
    residual = float(abs(exact - value))
    return RationalizationResult(value=value, residual=residual, converged=residual <= tol)


def recognize_rational(
    x: float,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    tol: float = DEFAULT_RAT_TOL,
) -> Fraction | None:
    """
    Decide whether a float is (numerically) a rational and return it.

    A candidate p/q is accepted only when its residual is below ``tol/q**2``:
    the next continued-fraction partial quotient would have to exceed
    ``1/tol``, so the expansion has terminated at floating-point precision.
    Irrationals such as sqrt(2) keep residuals near ``1/q**2`` and are
    rejected for every denominator.
    """
    result = rationalize(x, max_denominator, tol)
    q = result.value.denominator
    if result.residual <= tol / (q * q):
        return result.value
    logger.debug(f"{x!r} not recognized as rational (best {result.value}, residual {result.residual:.3e})")
    return None


def squarefree_part(n: int) -> int:
    """
    Square-free kernel s of n, with n = s * m**2.

    Trial division up to sqrt(n); inputs are products of small denominators.
    """
    if n < 1:
        raise ValueError(f"squarefree_part requires n >= 1, got {n}")

    result = 1
    remaining = n
    factor = 2
    while factor * factor <= remaining:
        exponent = 0
        while remaining % factor == 0:
            remaining //= factor
            exponent += 1
        if exponent % 2 == 1:
            result *= factor
        factor += 1 if factor == 2 else 2
    # Whatever is left is a prime appearing once
    return result * remaining


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (optional sign, no whitespace) exactly."""
    if not isinstance(text, str) or not _RATIONAL_TEXT.match(text):
        raise ValueError(f"invalid rational literal {text!r} (expected 'p/q' or 'p')")
    if "/" in text:
        numerator, denominator = text.split("/")
        return reduce(int(numerator), int(denominator))
    return Fraction(int(text))


def format_rational(value: Fraction) -> str:
    """Render a rational as ``"p/q"``, or ``"p"`` for integers."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
