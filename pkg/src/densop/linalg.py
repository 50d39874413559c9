"""Exact linear algebra over the rationals.

Matrices are plain lists of rows.  The elimination core is fraction-free
(Bareiss): each row is first scaled to integers, then pivoting uses the
two-step minor identity so every intermediate entry stays an integer and
entry growth is bounded by minor size.  Back-substitution returns exact
rationals.

``solve_linear_system`` returns a SolutionSet: one particular solution (or
the inconsistent marker) together with a nullspace basis, so the full
solution set is particular + span(nullspace).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .scalars import Q, QZERO, QONE


class ShapeError(ValueError):
    """Dimension mismatch in a matrix operation."""


@dataclass(frozen=True)
class SolutionSet:
    particular: "list | None"  # None marks an inconsistent system
    nullspace: "list[list]"

    @property
    def inconsistent(self) -> bool:
        return self.particular is None

    @property
    def dimension(self) -> int:
        return len(self.nullspace)


def _check_rect(mat) -> tuple[int, int]:
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    if any(len(r) != cols for r in mat):
        raise ShapeError("ragged matrix")
    return rows, cols


def _to_int_rows(mat):
    """Scale each row by the lcm of denominators; returns int rows."""
    out = []
    for row in mat:
        scale = 1
        qs = [Q(v) for v in row]
        for v in qs:
            d = int(v.denominator)
            scale = scale // gcd(scale, d) * d
        out.append([int(v.numerator) * (scale // int(v.denominator)) for v in qs])
    return out


def _ff_forward(rows: "list[list[int]]", pivot_cols: int):
    """In-place fraction-free forward elimination; returns pivot list."""
    prev = 1
    r = 0
    pivots = []
    for c in range(pivot_cols):
        pr = None
        for rr in range(r, len(rows)):
            if rows[rr][c] != 0:
                pr = rr
                break
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        for rr in range(r + 1, len(rows)):
            val = rows[rr][c]
            row = rows[rr]
            top = rows[r]
            rows[rr] = [(piv * row[j] - val * top[j]) // prev for j in range(len(row))]
        pivots.append((r, c))
        prev = piv
        r += 1
    return pivots


def _back_substitute(rows, pivots, ncols, rhs_col, free_assignment):
    """Solve an echelon system exactly; free columns take the given values."""
    x = [QZERO] * ncols
    pivot_cols = {c for _, c in pivots}
    for c in range(ncols):
        if c not in pivot_cols:
            x[c] = free_assignment.get(c, QZERO)
    for r, c in reversed(pivots):
        acc = Q(rows[r][rhs_col]) if rhs_col is not None else QZERO
        for j in range(c + 1, ncols):
            v = rows[r][j]
            if v:
                acc = acc - v * x[j]
        x[c] = acc / rows[r][c]
    return x


def solve_linear_system(mat, rhs) -> SolutionSet:
    """Exact particular solution and nullspace basis of mat * x = rhs."""
    nrows, ncols = _check_rect(mat)
    if len(rhs) != nrows:
        raise ShapeError(
            "rhs length %d does not match %d rows" % (len(rhs), nrows)
        )
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    rows = _to_int_rows(aug) if nrows else []
    pivots = _ff_forward(rows, ncols)
    rank = len(pivots)
    for r in range(rank, nrows):
        if rows[r][ncols] != 0:
            return SolutionSet(None, [])
    particular = _back_substitute(rows, pivots, ncols, ncols, {})
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        basis.append(_back_substitute(rows, pivots, ncols, None, {free: QONE}))
    return SolutionSet(particular, basis)


def nullspace_basis(mat) -> "list[list]":
    nrows, ncols = _check_rect(mat)
    return solve_linear_system(mat, [QZERO] * nrows).nullspace


def rank(mat) -> int:
    nrows, ncols = _check_rect(mat)
    if nrows == 0 or ncols == 0:
        return 0
    rows = _to_int_rows(mat)
    return len(_ff_forward(rows, ncols))


def det_and_rank(mat):
    """Exact determinant and rank of a square matrix."""
    nrows, ncols = _check_rect(mat)
    if nrows != ncols:
        raise ShapeError("determinant of non-square %dx%d matrix" % (nrows, ncols))
    if nrows == 0:
        return QONE, 0
    scales = []
    int_rows = []
    for row in mat:
        qs = [Q(v) for v in row]
        scale = 1
        for v in qs:
            d = int(v.denominator)
            scale = scale // gcd(scale, d) * d
        scales.append(scale)
        int_rows.append(
            [int(v.numerator) * (scale // int(v.denominator)) for v in qs]
        )
    swaps = 0
    prev = 1
    r = 0
    pivots = []
    rows = int_rows
    for c in range(ncols):
        pr = None
        for rr in range(r, nrows):
            if rows[rr][c] != 0:
                pr = rr
                break
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
            swaps += 1
        piv = rows[r][c]
        for rr in range(r + 1, nrows):
            val = rows[rr][c]
            row = rows[rr]
            top = rows[r]
            rows[rr] = [(piv * row[j] - val * top[j]) // prev for j in range(len(row))]
        pivots.append((r, c))
        prev = piv
        r += 1
    rk = len(pivots)
    if rk < nrows:
        return QZERO, rk
    det = Q(prev)  # final Bareiss pivot equals det of the scaled matrix
    if swaps % 2:
        det = -det
    for s in scales:
        det = det / s
    return det, rk


def det(mat):
    return det_and_rank(mat)[0]


def identity(n: int):
    return [[QONE if i == j else QZERO for j in range(n)] for i in range(n)]


def mat_vec(mat, vec):
    nrows, ncols = _check_rect(mat)
    if len(vec) != ncols:
        raise ShapeError("vector length mismatch")
    return [sum((row[j] * vec[j] for j in range(ncols)), QZERO) for row in mat]


def mat_mul(a, b):
    ar, ac = _check_rect(a)
    br, bc = _check_rect(b)
    if ac != br:
        raise ShapeError("inner dimensions differ")
    bt = list(zip(*b)) if br else []
    return [
        [sum((row[t] * col[t] for t in range(ac)), QZERO) for col in bt]
        for row in a
    ]


def mat_inverse(mat):
    """Exact inverse; raises ShapeError when singular."""
    n, m = _check_rect(mat)
    if n != m:
        raise ShapeError("inverse of non-square matrix")
    cols = []
    for j in range(n):
        e = [QZERO] * n
        e[j] = QONE
        sol = solve_linear_system(mat, e)
        if sol.inconsistent:
            raise ShapeError("matrix is singular")
        cols.append(sol.particular)
    return [[cols[j][i] for j in range(n)] for i in range(n)]
