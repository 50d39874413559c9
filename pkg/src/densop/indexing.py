"""Multi-index combinatorics.

A multi-index is a plain tuple of m naturals (i_1, ..., i_m); it labels one
coefficient of an m-linear differential operator (slot j differentiated i_j
times).  The canonical order on multi-indices is graded: by total degree
first, then lexicographically *descending* on the tuple, so for m=2, degree 2
the order is (2,0), (1,1), (0,2).  All matrix layouts in this package follow
that order.

``count_distinct_partitions(i, m)`` is the number of ways of writing i as a
sum of exactly m distinct positive parts, computed by brute-force
enumeration; ``skew_component_count(i, m)`` adds the count for m-1 parts and
equals the number of strictly decreasing m-tuples of naturals summing to i.
"""

from __future__ import annotations

from typing import Iterator, Tuple

from .scalars import binomial

MultiIndex = Tuple[int, ...]


class ArityError(ValueError):
    """Raised when an operation is asked for arity m < 1."""


def degree(idx: MultiIndex) -> int:
    return sum(idx)


def bump(idx: MultiIndex, j: int, amount: int = 1) -> MultiIndex:
    """Return idx with slot j (0-based) increased by amount."""
    out = list(idx)
    out[j] += amount
    return tuple(out)


def replace_slot(idx: MultiIndex, j: int, value: int) -> MultiIndex:
    out = list(idx)
    out[j] = value
    return tuple(out)


def _compositions_desc(total: int, parts: int) -> Iterator[MultiIndex]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions_desc(total - first, parts - 1):
            yield (first,) + rest


def enumerate_multi_indices(m: int, p: int, mode: str = "all") -> list[MultiIndex]:
    """All multi-indices of length m and total degree p, canonically ordered.

    mode="all": every composition, graded-lex descending; the count is
    C(p+m-1, m-1).  mode="strictly_decreasing": only tuples with
    i_1 > i_2 > ... > i_m >= 0; the count is skew_component_count(p, m).
    """
    if m < 1:
        raise ArityError("arity must be >= 1, got m=%d" % m)
    if p < 0:
        return []
    if mode == "all":
        return list(_compositions_desc(p, m))
    if mode == "strictly_decreasing":
        return [
            idx
            for idx in _compositions_desc(p, m)
            if all(idx[j] > idx[j + 1] for j in range(m - 1))
        ]
    raise ValueError("unknown enumeration mode %r" % mode)


def enumerate_up_to(m: int, k: int, mode: str = "all") -> list[MultiIndex]:
    """Canonically ordered indices of every degree 0..k (lowest degree first)."""
    out: list[MultiIndex] = []
    for p in range(k + 1):
        out.extend(enumerate_multi_indices(m, p, mode))
    return out


def component_count(m: int, p: int) -> int:
    """Size of the degree-p layer: C(p+m-1, m-1)."""
    return binomial(p + m - 1, m - 1)


def is_strictly_decreasing(idx: MultiIndex) -> bool:
    return all(idx[j] > idx[j + 1] for j in range(len(idx) - 1))


def count_distinct_partitions(i: int, m: int) -> int:
    """Q(i, m): partitions of i into exactly m distinct positive parts."""

    def count(remaining: int, parts: int, cap: int) -> int:
        if parts == 0:
            return 1 if remaining == 0 else 0
        # parts distinct positive values < cap summing to remaining
        total = 0
        for first in range(min(cap - 1, remaining), 0, -1):
            # smallest possible sum of the rest: (parts-1) distinct values < first
            if remaining - first > (parts - 1) * (2 * first - parts) // 2:
                break
            total += count(remaining - first, parts - 1, first)
        return total

    if m < 0 or i < 0:
        return 0
    if m == 0:
        return 1 if i == 0 else 0
    return count(i, m, i + 1)


def skew_component_count(i: int, m: int) -> int:
    """R(i, m) = Q(i, m) + Q(i, m-1)."""
    return count_distinct_partitions(i, m) + count_distinct_partitions(i, m - 1)


def format_index(idx: MultiIndex) -> str:
    return ",".join(str(v) for v in idx)


def parse_index(text: str) -> MultiIndex:
    return tuple(int(part) for part in text.split(","))
