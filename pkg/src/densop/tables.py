"""Equivariant symbol and quantization coefficient tables.

A table holds one family of constants c[s, i] indexed by pairs of
multi-indices with |s| >= |i|.  The diagonal layers |s| = |i| = p are the
principal blocks (square, nonsingular); everything below the diagonal is
filled in by the two-term recursion

    (|s| - |i|) (2 delta - |s| - |i| - 1) c[s, i]
        = sum_j s_j (2 lam_j + s_j - 1) c[s - e_j, i]          (symbol kind)

    (|s| - |i|) (2 delta - |s| - |i| - 1) c[s, i]
        = - sum_j (i_j + 1) (2 lam_j + i_j) c[s, i + e_j]      (quantization)

which has a unique solution whenever the shift delta = mu - sum(lam) avoids
the resonant set {1, 3/2, 2, ..., k}.  The skew kind runs the symbol
recursion over strictly decreasing indices only (coefficients that would
acquire a repeated entry drop out), with blocks sized by the distinct-part
partition counts.

Applying a symbol table to an operator takes the coefficient a_s through its
(|s|-|i|)-th derivative; a quantization table does the same to symbol
components.  With identity blocks the two tables are mutually inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

from .action import MOperator, SymbolVector
from .indexing import (
    MultiIndex,
    bump,
    component_count,
    enumerate_multi_indices,
    is_strictly_decreasing,
    skew_component_count,
)
from .linalg import ShapeError, det_and_rank, identity
from .poly import ZERO_POLY
from .scalars import Q, QZERO


class ResonanceError(ValueError):
    """The shift hits a zero of a recursion divisor."""

    def __init__(self, delta, k, pair):
        self.delta = delta
        self.k = k
        self.pair = pair  # (|s|, |i|) with vanishing divisor
        p, q = pair
        super().__init__(
            "resonant shift %s for order %d: divisor (|s|-|i|)(2d-|s|-|i|-1) "
            "vanishes at |s|=%d, |i|=%d" % (delta, k, p, q)
        )


class InvalidPrincipalSymbolError(ValueError):
    """A supplied principal block is singular or mis-sized."""


def resonance_set(k: int):
    """{1, 3/2, 2, ..., k}; empty for k = 0."""
    return {Q(p, 2) for p in range(2, 2 * k + 1)}


@dataclass(frozen=True)
class ResonanceReport:
    k: int
    resonant_values: frozenset
    delta: object
    is_resonant: bool


def resonance_report(k: int, delta) -> ResonanceReport:
    values = frozenset(resonance_set(k))
    return ResonanceReport(k, values, delta, Q(delta) in values)


def _resonant_pair(delta, k):
    """First (|s|, |i|) whose divisor vanishes, for the error message."""
    for p in range(1, k + 1):
        for q in range(p):
            if 2 * Q(delta) == p + q + 1:
                return (p, q)
    return None


def check_resonance(delta, k: int):
    pair = _resonant_pair(delta, k)
    if pair is not None:
        raise ResonanceError(delta, k, pair)


@dataclass(frozen=True)
class CoeffTable:
    kind: str  # symbol | quantization | skew_symbol
    arity: int
    order: int
    in_weights: tuple
    out_weight: object
    entries: Dict[Tuple[MultiIndex, MultiIndex], object]
    principal_blocks: list = field(default_factory=list)

    @property
    def shift(self):
        return self.out_weight - sum(self.in_weights, QZERO)

    def entry(self, s: MultiIndex, i: MultiIndex):
        return self.entries.get((tuple(s), tuple(i)), QZERO)

    def block(self, p: int):
        return self.principal_blocks[p]


def _layers(m: int, k: int, skew: bool):
    mode = "strictly_decreasing" if skew else "all"
    start = 1 if skew else 0
    return {p: enumerate_multi_indices(m, p, mode) for p in range(start, k + 1)}


def _prepare_blocks(layers, k: int, blocks, skew: bool):
    start = 1 if skew else 0
    if blocks is None:
        blocks = [identity(len(layers[p])) for p in range(start, k + 1)]
    else:
        blocks = [[list(row) for row in b] for b in blocks]
    if len(blocks) != k + 1 - start:
        raise ShapeError(
            "expected %d principal blocks, got %d" % (k + 1 - start, len(blocks))
        )
    out = {}
    for p in range(start, k + 1):
        b = blocks[p - start]
        n = len(layers[p])
        if len(b) != n or any(len(row) != n for row in b):
            raise ShapeError("principal block %d must be %dx%d" % (p, n, n))
        if n:
            d, _ = det_and_rank(b)
            if d == 0:
                raise InvalidPrincipalSymbolError(
                    "principal block %d is singular" % p
                )
        out[p] = b
    return out


def _base_entries(layers, blocks):
    entries = {}
    for p, idxs in layers.items():
        b = blocks[p]
        for r, i in enumerate(idxs):
            for c, s in enumerate(idxs):
                v = Q(b[r][c])
                if v != 0:
                    entries[(s, i)] = v
    return entries


def symbol_table(lams, mu, k: int, blocks=None) -> CoeffTable:
    """sl(2)-equivariant symbol constants for weights lams -> mu, order k."""
    lams = tuple(Q(v) for v in lams)
    mu = Q(mu)
    m = len(lams)
    delta = mu - sum(lams, QZERO)
    check_resonance(delta, k)
    layers = _layers(m, k, skew=False)
    blocks_by_p = _prepare_blocks(layers, k, blocks, skew=False)
    entries = _base_entries(layers, blocks_by_p)
    for d in range(1, k + 1):
        for q in range(0, k - d + 1):
            p = q + d
            divisor = d * (2 * delta - p - q - 1)
            for i in layers[q]:
                for s in layers[p]:
                    acc = QZERO
                    for j in range(m):
                        s_j = s[j]
                        if s_j == 0:
                            continue
                        prev = entries.get((bump(s, j, -1), i))
                        if prev is None:
                            continue
                        acc = acc + s_j * (2 * lams[j] + s_j - 1) * prev
                    if acc != 0:
                        entries[(s, i)] = acc / divisor
    return CoeffTable(
        "symbol", m, k, lams, mu, entries,
        [blocks_by_p[p] for p in range(k + 1)],
    )


def quantization_table(lams, mu, k: int, blocks=None) -> CoeffTable:
    """Quantization constants; inverse of the symbol table for identity blocks."""
    lams = tuple(Q(v) for v in lams)
    mu = Q(mu)
    m = len(lams)
    delta = mu - sum(lams, QZERO)
    check_resonance(delta, k)
    layers = _layers(m, k, skew=False)
    blocks_by_p = _prepare_blocks(layers, k, blocks, skew=False)
    entries = _base_entries(layers, blocks_by_p)
    for p in range(1, k + 1):
        for s in layers[p]:
            for q in range(p - 1, -1, -1):
                d = p - q
                divisor = d * (2 * delta - p - q - 1)
                for i in layers[q]:
                    acc = QZERO
                    for j in range(m):
                        nxt = entries.get((s, bump(i, j)))
                        if nxt is None:
                            continue
                        acc = acc + (i[j] + 1) * (2 * lams[j] + i[j]) * nxt
                    if acc != 0:
                        entries[(s, i)] = -acc / divisor
    return CoeffTable(
        "quantization", m, k, lams, mu, entries,
        [blocks_by_p[p] for p in range(k + 1)],
    )


def skew_symbol_table(lam, mu, k: int, m: int, blocks=None) -> CoeffTable:
    """Symbol constants for skew-symmetric operators (equal weights lam).

    Indices run over strictly decreasing tuples of degree 1..k; a recursion
    term whose lowered index acquires a repeated entry drops out, which is
    exactly the restriction of the full equal-weights table to the
    skew-symmetric subspace.
    """
    if m < 2:
        raise ShapeError("skew tables need arity >= 2")
    lam = Q(lam)
    mu = Q(mu)
    delta = mu - m * lam
    check_resonance(delta, k)
    layers = _layers(m, k, skew=True)
    blocks_by_p = _prepare_blocks(layers, k, blocks, skew=True)
    entries = _base_entries(layers, blocks_by_p)
    for d in range(1, k):
        for q in range(1, k - d + 1):
            p = q + d
            divisor = d * (2 * delta - p - q - 1)
            for i in layers[q]:
                for s in layers[p]:
                    acc = QZERO
                    for j in range(m):
                        s_j = s[j]
                        if s_j == 0:
                            continue
                        low = bump(s, j, -1)
                        if not is_strictly_decreasing(low):
                            continue
                        prev = entries.get((low, i))
                        if prev is None:
                            continue
                        acc = acc + s_j * (2 * lam + s_j - 1) * prev
                    if acc != 0:
                        entries[(s, i)] = acc / divisor
    lams = tuple([lam] * m)
    return CoeffTable(
        "skew_symbol", m, k, lams, mu, entries,
        [[]] + [blocks_by_p[p] for p in range(1, k + 1)],
    )


def _require(cond: bool, message: str):
    if not cond:
        raise ShapeError(message)


def apply_symbol(table: CoeffTable, A: MOperator) -> SymbolVector:
    """Symbol of A: component i is sum over |s| >= |i| of c[s,i] a_s^(|s|-|i|)."""
    _require(table.kind == "symbol", "expected a symbol table")
    _require(
        table.arity == A.arity and table.order == A.order,
        "table and operator disagree on (m, k)",
    )
    _require(
        tuple(table.in_weights) == tuple(A.in_weights)
        and table.out_weight == A.out_weight,
        "table and operator disagree on weights",
    )
    m, k = A.arity, A.order
    comps = {}
    for q in range(k + 1):
        for i in enumerate_multi_indices(m, q):
            acc = ZERO_POLY
            for p in range(q, k + 1):
                for s in enumerate_multi_indices(m, p):
                    c = table.entries.get((s, i))
                    if c is None:
                        continue
                    a_s = A.coefficient(s)
                    if a_s.is_zero():
                        continue
                    acc = acc + a_s.deriv(p - q).scale(c)
            if not acc.is_zero():
                comps[i] = acc
    return SymbolVector(m, k, table.shift, comps)


def apply_quantization(table: CoeffTable, v: SymbolVector) -> MOperator:
    """Operator with coefficient i equal to sum of c[s,i] v_s^(|s|-|i|)."""
    _require(table.kind == "quantization", "expected a quantization table")
    _require(
        table.arity == v.arity and table.order == v.order,
        "table and symbol disagree on (m, k)",
    )
    _require(table.shift == v.shift, "table and symbol disagree on the shift")
    m, k = v.arity, v.order
    coeffs = {}
    for q in range(k + 1):
        for i in enumerate_multi_indices(m, q):
            acc = ZERO_POLY
            for p in range(q, k + 1):
                for s in enumerate_multi_indices(m, p):
                    c = table.entries.get((s, i))
                    if c is None:
                        continue
                    comp = v.component(s)
                    if comp.is_zero():
                        continue
                    acc = acc + comp.deriv(p - q).scale(c)
            if not acc.is_zero():
                coeffs[i] = acc
    return MOperator(m, k, table.in_weights, table.out_weight, coeffs)


def apply_skew_symbol(table: CoeffTable, A: MOperator) -> SymbolVector:
    """Symbol of a skew-symmetric operator, on strictly decreasing components."""
    _require(table.kind == "skew_symbol", "expected a skew table")
    _require(
        table.arity == A.arity and table.order == A.order,
        "table and operator disagree on (m, k)",
    )
    _require(
        tuple(table.in_weights) == tuple(A.in_weights)
        and table.out_weight == A.out_weight,
        "table and operator disagree on weights",
    )
    m, k = A.arity, A.order
    comps = {}
    for q in range(1, k + 1):
        for i in enumerate_multi_indices(m, q, "strictly_decreasing"):
            acc = ZERO_POLY
            for p in range(q, k + 1):
                for s in enumerate_multi_indices(m, p, "strictly_decreasing"):
                    c = table.entries.get((s, i))
                    if c is None:
                        continue
                    a_s = A.coefficient(s)
                    if a_s.is_zero():
                        continue
                    acc = acc + a_s.deriv(p - q).scale(c)
            if not acc.is_zero():
                comps[i] = acc
    return SymbolVector(m, k, table.shift, comps)


def table_sizes(m: int, k: int, skew: bool = False):
    """Block sizes per degree: binomial counts, or distinct-part counts."""
    if skew:
        return {p: skew_component_count(p, m) for p in range(1, k + 1)}
    return {p: component_count(m, p) for p in range(k + 1)}
