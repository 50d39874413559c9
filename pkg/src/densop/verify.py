"""Seeded randomized verification suites.

Each suite exercises one exact identity on randomly generated data and
reports the first counterexample verbatim; all randomness flows from an
explicit seed, so runs are reproducible.  The CLI exposes these as
``densop verify <suite>`` and the test suite drives the same functions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .action import (
    MOperator,
    VectorField,
    act_closed,
    act_direct,
    commutator,
    third_derivative_cocycle,
)
from .engine import MapAnsatz, OperatorSpace, SymbolSpace, residual_is_zero, sl2_fields
from .indexing import enumerate_multi_indices
from .poly import Poly
from .scalars import Q
from .serialize import operator_to_json
from .tables import (
    apply_quantization,
    apply_symbol,
    quantization_table,
    resonance_set,
    symbol_table,
)


@dataclass
class SuiteReport:
    suite: str
    passed: bool
    cases: int
    counterexample: Optional[dict] = None


def random_rational(rng: random.Random, span: int = 9, dens=(1, 1, 2, 3)):
    return Q(rng.randint(-span, span), rng.choice(dens))


def random_poly(rng: random.Random, max_degree: int, span: int = 9) -> Poly:
    deg = rng.randint(0, max_degree)
    return Poly.rational([random_rational(rng, span) for _ in range(deg + 1)])


def random_field(rng: random.Random, max_degree: int = 5) -> VectorField:
    f = random_poly(rng, max_degree, span=5)
    if f.is_zero():
        f = Poly.const(1)
    return VectorField(f)


def random_weights(rng: random.Random, m: int):
    return tuple(random_rational(rng, span=4) for _ in range(m))


def nonresonant_weights(rng: random.Random, m: int, k: int):
    res = resonance_set(k)
    while True:
        lams = random_weights(rng, m)
        mu = random_rational(rng, span=6)
        if mu - sum(lams, Q(0)) not in res:
            return lams, mu


def random_operator(
    rng: random.Random, m: int, k: int, lams, mu, coeff_degree: int = 3
) -> MOperator:
    coeffs = {}
    for p in range(k + 1):
        for idx in enumerate_multi_indices(m, p):
            if rng.random() < 0.2:
                continue  # keep some coefficients zero
            coeffs[idx] = random_poly(rng, coeff_degree)
    return MOperator(m, k, tuple(Q(v) for v in lams), Q(mu), coeffs)


def random_skew_operator(
    rng: random.Random, m: int, k: int, lam, mu, coeff_degree: int = 3
) -> MOperator:
    from .engine import SkewOperatorSpace

    space = SkewOperatorSpace(m, k, Q(lam), Q(mu))
    strict = {
        idx: random_poly(rng, coeff_degree)
        for p in range(1, k + 1)
        for idx in enumerate_multi_indices(m, p, "strictly_decreasing")
    }
    return MOperator(m, k, space.in_weights, Q(mu), space.extend(strict))


def suite_action_oracle(
    m: int,
    k: int,
    cases: int,
    seed: int,
    coeff_degree: int = 3,
    field_degree: int = 5,
) -> SuiteReport:
    """act_closed must reproduce act_direct coefficient for coefficient."""
    rng = random.Random(seed)
    for case in range(cases):
        lams = random_weights(rng, m)
        mu = random_rational(rng, span=6)
        A = random_operator(rng, m, k, lams, mu, coeff_degree)
        X = random_field(rng, field_degree)
        direct = act_direct(X, A)
        closed = act_closed(X, A)
        if direct != closed:
            return SuiteReport(
                "action-oracle",
                False,
                case + 1,
                {
                    "operator": operator_to_json(A),
                    "field": [str(c) for c in X.coefficient.coeffs],
                    "direct": operator_to_json(direct),
                    "closed": operator_to_json(closed),
                },
            )
    return SuiteReport("action-oracle", True, cases)


def suite_lie_law(
    m: int, k: int, cases: int, seed: int, coeff_degree: int = 3
) -> SuiteReport:
    """act(X, act(Y, A)) - act(Y, act(X, A)) = act([X, Y], A)."""
    rng = random.Random(seed)
    for case in range(cases):
        lams = random_weights(rng, m)
        mu = random_rational(rng, span=6)
        A = random_operator(rng, m, k, lams, mu, coeff_degree)
        X = random_field(rng, 4)
        Y = random_field(rng, 4)
        lhs_coeffs = {}
        xy = act_direct(X, act_direct(Y, A))
        yx = act_direct(Y, act_direct(X, A))
        for idx in set(xy.coeffs) | set(yx.coeffs):
            diff = xy.coefficient(idx) - yx.coefficient(idx)
            if not diff.is_zero():
                lhs_coeffs[idx] = diff
        lhs = MOperator(m, k, A.in_weights, A.out_weight, lhs_coeffs)
        rhs = act_direct(commutator(X, Y), A)
        if lhs != rhs:
            return SuiteReport(
                "lie-law",
                False,
                case + 1,
                {
                    "operator": operator_to_json(A),
                    "X": [str(c) for c in X.coefficient.coeffs],
                    "Y": [str(c) for c in Y.coefficient.coeffs],
                },
            )
    return SuiteReport("lie-law", True, cases)


def suite_inverse(m: int, k: int, cases: int, seed: int) -> SuiteReport:
    """Symbol then quantization (and the reverse) are exact round trips."""
    rng = random.Random(seed)
    for case in range(cases):
        lams, mu = nonresonant_weights(rng, m, k)
        sigma = symbol_table(lams, mu, k)
        quant = quantization_table(lams, mu, k)
        A = random_operator(rng, m, k, lams, mu)
        back = apply_quantization(quant, apply_symbol(sigma, A))
        if back != A:
            return SuiteReport(
                "inverse", False, case + 1, {"operator": operator_to_json(A)}
            )
        sym = apply_symbol(sigma, A)
        again = apply_symbol(sigma, apply_quantization(quant, sym))
        if again != sym:
            return SuiteReport(
                "inverse",
                False,
                case + 1,
                {"operator": operator_to_json(A), "direction": "symbol side"},
            )
    return SuiteReport("inverse", True, cases)


def suite_sl2(lams, mu, k: int, seed: int = 0) -> SuiteReport:
    """The symbol map commutes exactly with the three projective fields."""
    lams = tuple(Q(v) for v in lams)
    mu = Q(mu)
    m = len(lams)
    table = symbol_table(lams, mu, k)
    delta = mu - sum(lams, Q(0))
    source = OperatorSpace(m, k, lams, mu)
    target = SymbolSpace(m, k, delta)
    ansatz = MapAnsatz.from_table(table, source, target)
    for X in sl2_fields():
        if not residual_is_zero(ansatz, X):
            return SuiteReport(
                "sl2",
                False,
                3,
                {
                    "lambda": [str(v) for v in lams],
                    "mu": str(mu),
                    "field": [str(c) for c in X.coefficient.coeffs],
                },
            )
    return SuiteReport("sl2", True, 3)


def first_order_lowering(lams, delta):
    """Reference first-order entries: weight_j / (1 - shift)."""
    return {j: lams[j] / (1 - delta) for j in range(len(lams))}


def second_order_reference(lams, delta):
    """Reference second-order quantization entries (identity blocks).

    Returns a dict over (s, i) pairs; every pair absent from the dict and
    off the diagonal must vanish in the generated table.
    """
    m = len(lams)
    out = {}
    for j in range(m):
        e_j = tuple(1 if t == j else 0 for t in range(m))
        two_j = tuple(2 if t == j else 0 for t in range(m))
        zero = (0,) * m
        out[(e_j, zero)] = lams[j] / (1 - delta)
        out[(two_j, zero)] = (
            lams[j] * (2 * lams[j] + 1) / ((delta - 2) * (2 * delta - 3))
        )
        out[(two_j, e_j)] = (2 * lams[j] + 1) / (2 - delta)
        for i in range(m):
            if i == j:
                continue
            e_i = tuple(1 if t == i else 0 for t in range(m))
            pair = tuple((1 if t == i else 0) + (1 if t == j else 0) for t in range(m))
            out[(pair, zero)] = (
                2 * lams[i] * lams[j] / ((delta - 2) * (2 * delta - 3))
            )
            out[(pair, e_j)] = lams[i] / (2 - delta)
    return out


def suite_closed_forms(m: int, cases: int, seed: int) -> SuiteReport:
    """Generated quantization tables match the order-1 and order-2 reference
    formulas entry for entry, all unlisted entries vanishing."""
    rng = random.Random(seed)
    for case in range(cases):
        lams, mu = nonresonant_weights(rng, m, 2)
        delta = mu - sum(lams, Q(0))

        table1 = quantization_table(lams, mu, 1)
        expected = first_order_lowering(lams, delta)
        zero = (0,) * m
        for j in range(m):
            e_j = tuple(1 if t == j else 0 for t in range(m))
            if table1.entry(e_j, zero) != expected[j]:
                return SuiteReport(
                    "closed-forms",
                    False,
                    case + 1,
                    {"order": 1, "lambda": [str(v) for v in lams], "mu": str(mu)},
                )

        table2 = quantization_table(lams, mu, 2)
        reference = second_order_reference(lams, delta)
        for (s, i), value in table2.entries.items():
            if sum(s) == sum(i):
                continue  # identity blocks
            if table2.entry(s, i) != reference.get((s, i), Q(0)):
                return SuiteReport(
                    "closed-forms",
                    False,
                    case + 1,
                    {
                        "order": 2,
                        "lambda": [str(v) for v in lams],
                        "mu": str(mu),
                        "entry": [list(s), list(i)],
                    },
                )
        for (s, i), value in reference.items():
            if table2.entry(s, i) != value:
                return SuiteReport(
                    "closed-forms",
                    False,
                    case + 1,
                    {
                        "order": 2,
                        "lambda": [str(v) for v in lams],
                        "mu": str(mu),
                        "entry": [list(s), list(i)],
                        "expected": str(value),
                    },
                )
    return SuiteReport("closed-forms", True, cases)


def suite_cocycle(cases: int, seed: int) -> SuiteReport:
    """c(X) phi = X''' phi satisfies the cocycle identity for the action on
    maps F_theta -> F_{theta+2}."""
    rng = random.Random(seed)
    for case in range(cases):
        theta = random_rational(rng, span=4)
        X = random_field(rng, 5)
        Y = random_field(rng, 5)
        lhs = third_derivative_cocycle(commutator(X, Y), theta)
        cx = third_derivative_cocycle(X, theta)
        cy = third_derivative_cocycle(Y, theta)
        acted = act_direct(X, cy)
        acted2 = act_direct(Y, cx)
        rhs = MOperator(
            1,
            0,
            (theta,),
            theta + 2,
            {(0,): acted.coefficient((0,)) - acted2.coefficient((0,))},
        )
        if lhs != rhs:
            return SuiteReport(
                "cocycle",
                False,
                case + 1,
                {
                    "theta": str(theta),
                    "X": [str(c) for c in X.coefficient.coeffs],
                    "Y": [str(c) for c in Y.coefficient.coeffs],
                },
            )
    return SuiteReport("cocycle", True, cases)
