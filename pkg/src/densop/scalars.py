"""Exact rational scalars.

Everything in this package is computed over the rationals, with no rounding
ever.  Scalars are gmpy2.mpq when available (much faster), otherwise
fractions.Fraction; both are arbitrary precision, kept in lowest terms with a
positive denominator.  ``Q`` is the constructor used throughout.

Serialization: a rational renders as ``"p/q"``, or ``"n"`` when the
denominator is 1.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Q  # type: ignore[import-untyped]
except ImportError:  # pragma: no cover - gmpy2 is normally present
    from fractions import Fraction as Q  # type: ignore[assignment]

QZERO = Q(0)
QONE = Q(1)


def is_rational(value) -> bool:
    return isinstance(value, (int, type(QZERO)))


def format_rational(value) -> str:
    """Render ``p/q`` or bare ``n`` when the denominator is 1."""
    value = Q(value)
    if value.denominator == 1:
        return str(int(value.numerator))
    return "%d/%d" % (int(value.numerator), int(value.denominator))


def parse_rational(text: str):
    """Parse ``"p/q"`` or ``"n"`` into an exact rational.

    Raises ValueError on malformed input or a zero denominator.
    """
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        d = int(den)
        if d == 0:
            raise ValueError("zero denominator in rational %r" % text)
        return Q(int(num), d)
    return Q(int(text))


def binomial(n: int, k: int) -> int:
    """C(n, k), with the convention that out-of-range k gives 0."""
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def multinomial(parts) -> int:
    """Multinomial coefficient (sum parts)! / prod(part!)."""
    out = 1
    total = 0
    for p in parts:
        total += p
        out *= binomial(total, p)
    return out
