"""Vector-field actions on weighted densities and multilinear operators.

A vector field is X = f(x) d/dx with f polynomial.  A weighted density of
weight lam transforms by

    X . (a (dx)^lam) = (f a' + lam f' a) (dx)^lam.

An m-linear differential operator A of order k sends a tuple of densities
(weights lam_1..lam_m) to a density of weight mu,

    A(phi_1, ..., phi_m) = sum_{|i| <= k} a_i  d^{i_1}phi_1 ... d^{i_m}phi_m,

and the field action on operators is the commutator-style action

    (X . A)(phis) = X . (A(phis)) - sum_j A(..., X . phi_j, ...).

``act_direct`` computes that definition literally, by Leibniz-expanding both
compositions on formal derivative symbols of the arguments.  ``act_closed``
evaluates the closed-form coefficient expression

    (X.A)_s = X.a_s  (weight delta - |s|)
              - sum_j sum_{i >= s_j+1}  [ C(i, i+1-s_j) + lam_j C(i, i-s_j) ]
                                        f^(i+1-s_j) a_{s with s_j := i}

(with delta = mu - sum lam_j, and coefficients of degree beyond k read as
zero), plus the separate degree-zero line that only involves the pure
indices i * e_j.  The two are checked against each other exhaustively in the
test suite; act_direct is the ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

from .indexing import MultiIndex, bump, degree, enumerate_multi_indices, replace_slot
from .poly import Poly, ZERO_POLY
from .scalars import Q, binomial


@dataclass(frozen=True)
class VectorField:
    """X = coefficient(x) * d/dx."""

    coefficient: Poly

    @staticmethod
    def monomial(n: int, c=1) -> "VectorField":
        return VectorField(Poly.x_power(n, c))

    def is_zero(self) -> bool:
        return self.coefficient.is_zero()


@dataclass(frozen=True)
class Density:
    coefficient: Poly
    weight: object  # rational


@dataclass(frozen=True)
class MOperator:
    """m-linear differential operator with polynomial coefficients.

    ``coeffs`` maps multi-indices of total degree <= order to polynomials;
    missing indices are zero.  The order is the formal order bound of the
    module the operator lives in, not the degree of its support.
    """

    arity: int
    order: int
    in_weights: tuple
    out_weight: object
    coeffs: Dict[MultiIndex, Poly] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.in_weights) != self.arity:
            raise ValueError("expected %d input weights" % self.arity)
        cleaned = {}
        for idx, poly in self.coeffs.items():
            if len(idx) != self.arity:
                raise ValueError("index %r has wrong length" % (idx,))
            if degree(idx) > self.order:
                raise ValueError(
                    "index %r exceeds order %d" % (idx, self.order)
                )
            if not poly.is_zero():
                cleaned[idx] = poly
        object.__setattr__(self, "coeffs", cleaned)

    @property
    def shift(self):
        return self.out_weight - sum(self.in_weights, Q(0))

    def coefficient(self, idx: MultiIndex) -> Poly:
        return self.coeffs.get(tuple(idx), ZERO_POLY)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MOperator):
            return NotImplemented
        return (
            self.arity == other.arity
            and self.order == other.order
            and tuple(self.in_weights) == tuple(other.in_weights)
            and self.out_weight == other.out_weight
            and self.coeffs == other.coeffs
        )

    def apply(self, densities) -> Density:
        """Evaluate on concrete polynomial densities."""
        if len(densities) != self.arity:
            raise ValueError("expected %d arguments" % self.arity)
        total = ZERO_POLY
        for idx, a in self.coeffs.items():
            term = a
            for j, d in enumerate(densities):
                term = term * d.coefficient.deriv(idx[j])
            total = total + term
        return Density(total, self.out_weight)


@dataclass(frozen=True)
class SymbolVector:
    """Graded symbol of an operator: component i transforms as a density of
    weight shift - |i|."""

    arity: int
    order: int
    shift: object
    components: Dict[MultiIndex, Poly] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {
            idx: poly for idx, poly in self.components.items() if not poly.is_zero()
        }
        object.__setattr__(self, "components", cleaned)

    def component(self, idx: MultiIndex) -> Poly:
        return self.components.get(tuple(idx), ZERO_POLY)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolVector):
            return NotImplemented
        return (
            self.arity == other.arity
            and self.order == other.order
            and self.shift == other.shift
            and self.components == other.components
        )


def lie_derivative_density(X: VectorField, d: Density) -> Density:
    f = X.coefficient
    out = f * d.coefficient.deriv() + (f.deriv() * d.coefficient).scale(d.weight)
    return Density(out, d.weight)


def lie_derivative_poly(X: VectorField, a: Poly, weight) -> Poly:
    """Coefficient part of the density action: f a' + weight f' a."""
    f = X.coefficient
    return f * a.deriv() + (f.deriv() * a).scale(weight)


def commutator(X: VectorField, Y: VectorField) -> VectorField:
    f, g = X.coefficient, Y.coefficient
    return VectorField(f * g.deriv() - g * f.deriv())


def act_direct(X: VectorField, A: MOperator) -> MOperator:
    """The action computed from its definition.

    Work with formal symbols d^n phi_j: an m-linear expression is a map from
    derivative multi-indices to polynomial coefficients.  Expanding
    X.(A(phis)) - sum_j A(..., X.phi_j, ...) term by term, the derivative
    orders above k cancel; that cancellation is asserted.
    """
    f = X.coefficient
    fp = f.deriv()
    mu = A.out_weight
    out: Dict[MultiIndex, Poly] = {}

    def add(idx: MultiIndex, poly: Poly):
        if poly.is_zero():
            return
        cur = out.get(idx)
        out[idx] = poly if cur is None else cur + poly

    for idx, a in A.coeffs.items():
        # X . (a * Phi(idx)) with output weight mu:
        #   (f a' + mu f' a) Phi(idx) + f a * sum_j Phi(idx + e_j)
        add(idx, f * a.deriv() + (fp * a).scale(mu))
        for j in range(A.arity):
            add(bump(idx, j), f * a)
        # minus A with X acting inside slot j: d^{i_j}(f phi' + lam f' phi)
        for j in range(A.arity):
            lam = A.in_weights[j]
            i_j = idx[j]
            for r in range(i_j + 1):
                c = binomial(i_j, r)
                add(
                    replace_slot(idx, j, i_j + 1 - r),
                    -(a * f.deriv(r)).scale(c),
                )
                add(
                    replace_slot(idx, j, i_j - r),
                    -(a * f.deriv(r + 1)).scale(c * lam),
                )

    coeffs = {}
    for idx, poly in out.items():
        if poly.is_zero():
            continue
        if degree(idx) > A.order:
            raise AssertionError(
                "order-raising terms failed to cancel at %r" % (idx,)
            )
        coeffs[idx] = poly
    return MOperator(A.arity, A.order, A.in_weights, A.out_weight, coeffs)


def act_closed(X: VectorField, A: MOperator) -> MOperator:
    """The action evaluated through the closed-form coefficient expression."""
    f = X.coefficient
    m, k = A.arity, A.order
    lams = A.in_weights
    delta = A.shift
    coeffs: Dict[MultiIndex, Poly] = {}
    for s in enumerate_up_to_cached(m, k):
        p = degree(s)
        a_s = A.coefficient(s)
        acc = lie_derivative_poly(X, a_s, delta - p) if not a_s.is_zero() else ZERO_POLY
        if p == 0:
            # degree-zero line: only the pure indices i * e_j contribute
            for j in range(m):
                lam = lams[j]
                if lam == 0:
                    continue
                for i in range(1, k + 1):
                    a_hi = A.coefficient(replace_slot(s, j, i))
                    if a_hi.is_zero():
                        continue
                    acc = acc - (a_hi * f.deriv(i + 1)).scale(lam)
        else:
            for j in range(m):
                lam = lams[j]
                s_j = s[j]
                for i in range(s_j + 1, k + 1):
                    a_hi = A.coefficient(replace_slot(s, j, i))
                    if a_hi.is_zero():
                        continue
                    w = Q(binomial(i, i + 1 - s_j)) + lam * binomial(i, i - s_j)
                    if w == 0:
                        continue
                    acc = acc - (a_hi * f.deriv(i + 1 - s_j)).scale(w)
        if not acc.is_zero():
            coeffs[s] = acc
    return MOperator(m, k, lams, A.out_weight, coeffs)


_INDEX_CACHE: Dict[tuple, list] = {}


def enumerate_up_to_cached(m: int, k: int) -> list:
    key = (m, k)
    got = _INDEX_CACHE.get(key)
    if got is None:
        got = []
        for p in range(k + 1):
            got.extend(enumerate_multi_indices(m, p))
        _INDEX_CACHE[key] = got
    return got


def third_derivative_cocycle(X: VectorField, theta) -> MOperator:
    """The map phi -> X''' phi viewed as an operator F_theta -> F_{theta+2}."""
    return MOperator(
        1, 0, (theta,), theta + 2, {(0,): X.coefficient.deriv(3)}
    )
