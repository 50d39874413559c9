"""Linear and affine forms used by the equivariance machinery.

Two small symbolic layers, both exact:

* ``ParamAffine`` -- an affine expression a_0 + sum a_p * param_p in named
  module parameters (the weights and the shift).  The equivariance residual
  of any local constant-coefficient map is affine in those parameters, which
  lets one symbolic assembly serve an entire parameter grid; multiplying two
  non-constant ParamAffine values is therefore a bug and raises.

* ``LinComb`` -- a linear-plus-constant combination of named unknowns (map
  entries being solved for).  Values attached to the unknowns are rationals
  or ParamAffine; multiplying two LinCombs is likewise a structural error.

Both types are immutable in practice and safe to share.
"""

from __future__ import annotations

from .scalars import Q, QZERO, is_rational


class ParamAffine:
    __slots__ = ("terms", "const")

    def __init__(self, terms=None, const=QZERO):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}
        self.const = Q(const)

    @staticmethod
    def var(name: str) -> "ParamAffine":
        return ParamAffine({name: Q(1)})

    @staticmethod
    def of(value) -> "ParamAffine":
        if isinstance(value, ParamAffine):
            return value
        return ParamAffine(const=value)

    def is_constant(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamAffine):
            return self.terms == other.terms and self.const == other.const
        if is_rational(other):
            return not self.terms and self.const == other
        return NotImplemented

    def __hash__(self):
        raise TypeError("ParamAffine is not hashable")

    def __add__(self, other):
        if isinstance(other, LinComb):
            return NotImplemented
        other = ParamAffine.of(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, QZERO) + v
        return ParamAffine(terms, self.const + other.const)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, LinComb):
            return NotImplemented
        return self + (-ParamAffine.of(other))

    def __rsub__(self, other):
        return ParamAffine.of(other) + (-self)

    def __neg__(self):
        return ParamAffine({k: -v for k, v in self.terms.items()}, -self.const)

    def __mul__(self, other):
        if isinstance(other, LinComb):
            return NotImplemented
        if isinstance(other, ParamAffine):
            if other.is_constant():
                other = other.const
            elif self.is_constant():
                self, other = other, self.const
            else:
                raise TypeError("product of two non-constant ParamAffine values")
        return ParamAffine(
            {k: v * other for k, v in self.terms.items()}, self.const * other
        )

    __rmul__ = __mul__

    def subs(self, values: dict):
        """Evaluate at a parameter assignment; returns an exact rational."""
        out = self.const
        for k, v in self.terms.items():
            out = out + v * values[k]
        return out

    def key(self):
        return (tuple(sorted(self.terms.items())), self.const)

    def __repr__(self):
        parts = ["%s*%s" % (v, k) for k, v in sorted(self.terms.items())]
        if self.const != 0 or not parts:
            parts.append(str(self.const))
        return "ParamAffine(%s)" % " + ".join(parts)


class LinComb:
    __slots__ = ("terms", "const")

    def __init__(self, terms=None, const=QZERO):
        self.terms = {k: v for k, v in (terms or {}).items() if not _val_is_zero(v)}
        self.const = const if isinstance(const, ParamAffine) else Q(const)

    @staticmethod
    def unknown(label) -> "LinComb":
        return LinComb({label: Q(1)})

    @staticmethod
    def of(value) -> "LinComb":
        if isinstance(value, LinComb):
            return value
        return LinComb(const=value)

    def is_constant(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, LinComb):
            return self.terms == other.terms and self.const == other.const
        if is_rational(other) or isinstance(other, ParamAffine):
            return not self.terms and self.const == other
        return NotImplemented

    def __hash__(self):
        raise TypeError("LinComb is not hashable")

    def __add__(self, other):
        other = LinComb.of(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = _val_add(terms.get(k, QZERO), v)
        return LinComb(terms, _val_add(self.const, other.const))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-LinComb.of(other))

    def __rsub__(self, other):
        return LinComb.of(other) + (-self)

    def __neg__(self):
        return LinComb({k: -v for k, v in self.terms.items()}, -self.const)

    def __mul__(self, scalar):
        if isinstance(scalar, LinComb):
            if scalar.is_constant():
                scalar = scalar.const
            elif self.is_constant():
                self, scalar = scalar, self.const
            else:
                raise TypeError("product of two non-constant LinComb values")
        return LinComb(
            {k: _val_mul(v, scalar) for k, v in self.terms.items()},
            _val_mul(self.const, scalar),
        )

    __rmul__ = __mul__

    def subs_params(self, values: dict) -> "LinComb":
        """Substitute module parameters, leaving the unknowns symbolic."""
        terms = {}
        for k, v in self.terms.items():
            terms[k] = v.subs(values) if isinstance(v, ParamAffine) else v
        const = (
            self.const.subs(values)
            if isinstance(self.const, ParamAffine)
            else self.const
        )
        return LinComb(terms, const)

    def eval(self, assignment: dict):
        """Evaluate with every unknown bound to a rational."""
        out = self.const
        for k, v in self.terms.items():
            out = out + v * assignment[k]
        return out

    def __repr__(self):
        parts = ["(%r)*%s" % (v, k) for k, v in self.terms.items()]
        if not parts or not _val_is_zero(self.const):
            parts.append(repr(self.const))
        return "LinComb(%s)" % " + ".join(parts)


def _val_is_zero(v) -> bool:
    return v == 0


def _val_add(a, b):
    if isinstance(a, ParamAffine) or isinstance(b, ParamAffine):
        return ParamAffine.of(a) + ParamAffine.of(b)
    return a + b


def _val_mul(a, scalar):
    if isinstance(a, ParamAffine) or isinstance(scalar, ParamAffine):
        return ParamAffine.of(a) * scalar
    return a * scalar
