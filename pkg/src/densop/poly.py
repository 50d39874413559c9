"""Dense one-variable polynomials with exact coefficients.

Coefficients live in ascending degree order and trailing zeros are stripped,
so the zero polynomial has an empty coefficient list and degree() == -1 (the
distinguished value).  Coefficients are usually rationals but may be any
value supporting +, -, scalar multiplication and == 0 (the equivariance
machinery substitutes linear forms in unknown map entries); a polynomial is
never multiplied by another polynomial unless at least one side has rational
coefficients.
"""

from __future__ import annotations

from .scalars import Q, QZERO


def _is_zero(c) -> bool:
    return c == 0


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = cs

    @staticmethod
    def rational(coeffs) -> "Poly":
        """Build from rational-like entries, normalizing each through Q."""
        return Poly([Q(c) for c in coeffs])

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def const(c) -> "Poly":
        return Poly([Q(c)])

    @staticmethod
    def x_power(n: int, c=1) -> "Poly":
        return Poly([QZERO] * n + [Q(c)])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        raise TypeError("Poly is not hashable")

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = list(self.coeffs)
        for i, c in enumerate(other.coeffs):
            if i < len(out):
                out[i] = out[i] - c
            else:
                out.append(-c)
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [QZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    def scale(self, c) -> "Poly":
        if _is_zero(c):
            return Poly()
        return Poly([coef * c for coef in self.coeffs])

    def deriv(self, n: int = 1) -> "Poly":
        cs = self.coeffs
        for _ in range(n):
            if len(cs) <= 1:
                return Poly()
            cs = [cs[i] * i for i in range(1, len(cs))]
        return Poly(cs)

    def eval(self, point):
        out = QZERO
        for c in reversed(self.coeffs):
            out = out * point + c
        return out

    def coefficient(self, power: int):
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return QZERO

    def map_coeffs(self, fn) -> "Poly":
        return Poly([fn(c) for c in self.coeffs])

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("%s*x" % c)
            else:
                terms.append("%s*x^%d" % (c, i))
        return "Poly(%s)" % " + ".join(terms)


ZERO_POLY = Poly()
ONE_POLY = Poly.const(1)
X_POLY = Poly.x_power(1)
