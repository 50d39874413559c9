"""Structure maps and the isomorphism classification of operator modules.

The only isomorphism invariant available a priori is the shift
delta = mu - sum(lam_j); maps between modules with different shifts do not
exist.  Beyond that, every equivariant isomorphism is block diagonal in the
equivariant symbols, and for second-order modules the decisive datum is the
obstruction vector

    alpha[2 e_s]      = 2 lam_s (1 - delta - lam_s) / (2 delta - 3),
    alpha[e_s + e_t]  = -2 lam_s lam_t / (2 delta - 3)      (s != t),

the third-derivative defect of the degree-zero symbol component.  Modules
whose obstruction vector vanishes identically (weights 0 or (1-delta) e_j)
are singular: isomorphic only to each other, through conjugations and
permutations.

``iso_search`` decides existence for k <= 2 by assembling the full
equivariance system for a general local map and testing for solutions with
nonsingular diagonal blocks; in the generic second-order case the verdict is
cross-checked against the obstruction dichotomy and the reported map sends
the source obstruction vector to the destination one, completed to a
nonsingular block deterministically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Optional

from .action import MOperator
from .engine import (
    InternalVerificationError,
    block_specs,
    decide_nonsingular_blocks,
    iso_system,
    solve_system,
)
from .indexing import (
    MultiIndex,
    degree,
    enumerate_multi_indices,
    format_index,
)
from .linalg import ShapeError, det_and_rank, mat_inverse, mat_mul, solve_linear_system
from .poly import Poly
from .scalars import Q, QZERO, QONE, multinomial
from .tables import resonance_set


@dataclass(frozen=True)
class ModuleParams:
    arity: int
    order: int
    in_weights: tuple
    out_weight: object

    def __post_init__(self):
        object.__setattr__(
            self, "in_weights", tuple(Q(v) for v in self.in_weights)
        )
        object.__setattr__(self, "out_weight", Q(self.out_weight))
        if len(self.in_weights) != self.arity:
            raise ValueError("expected %d weights" % self.arity)

    @property
    def shift(self):
        return self.out_weight - sum(self.in_weights, QZERO)


def shift(params: ModuleParams):
    return params.shift


def permute(A: MOperator, i: int, j: int) -> MOperator:
    """Interchange argument slots i and j (1-based)."""
    m = A.arity
    if not (1 <= i <= m and 1 <= j <= m) or i == j:
        raise IndexError("slots must be distinct and in 1..%d" % m)
    a, b = i - 1, j - 1

    def swap(seq):
        out = list(seq)
        out[a], out[b] = out[b], out[a]
        return tuple(out)

    return MOperator(
        m,
        A.order,
        swap(A.in_weights),
        A.out_weight,
        {swap(idx): poly for idx, poly in A.coeffs.items()},
    )


def conjugate(A: MOperator) -> MOperator:
    """Adjoint under integration by parts.

    Sends an operator on weights (lam_1, ..., lam_m) -> mu to one on
    (lam_2, ..., lam_m, 1 - mu) -> 1 - lam_1: the first argument becomes the
    output pairing slot, with the outer derivative Leibniz-expanded:

        A*(phi_2, ..., phi_m, phi)
            = sum_i (-1)^{i_1} d^{i_1} ( a_i  d^{i_2}phi_2 ... d^{i_m}phi_m  phi ).
    """
    m = A.arity
    coeffs: Dict[MultiIndex, Poly] = {}
    for idx, a in A.coeffs.items():
        i1 = idx[0]
        sign = -1 if i1 % 2 else 1
        for split in _compositions(i1, m + 1):
            r0, mids, r_phi = split[0], split[1 : m], split[m]
            c = multinomial(split) * sign
            tgt = tuple(idx[1 + t] + mids[t] for t in range(m - 1)) + (r_phi,)
            term = a.deriv(r0).scale(Q(c))
            if term.is_zero():
                continue
            cur = coeffs.get(tgt)
            coeffs[tgt] = term if cur is None else cur + term
    new_weights = tuple(A.in_weights[1:]) + (1 - A.out_weight,)
    return MOperator(m, A.order, new_weights, 1 - A.in_weights[0], coeffs)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def obstruction_vector(params: ModuleParams) -> Dict[MultiIndex, object]:
    """Third-derivative defect coefficients of the degree-zero symbol
    component, indexed by the degree-2 multi-indices."""
    if params.order != 2:
        raise ShapeError("obstruction vector is a second-order invariant")
    delta = params.shift
    if 2 * delta == 3:
        from .tables import ResonanceError

        raise ResonanceError(delta, params.order, (2, 1))
    lams = params.in_weights
    denom = 2 * delta - 3
    out = {}
    for idx in enumerate_multi_indices(params.arity, 2):
        hot = [j for j, v in enumerate(idx) if v]
        if len(hot) == 1:
            s = hot[0]
            out[idx] = 2 * lams[s] * (1 - delta - lams[s]) / denom
        else:
            s, t = hot
            out[idx] = -2 * lams[s] * lams[t] / denom
    return out


def obstruction_column(params: ModuleParams):
    vec = obstruction_vector(params)
    return [vec[idx] for idx in enumerate_multi_indices(params.arity, 2)]


def is_singular_second_order(params: ModuleParams) -> bool:
    """True exactly when the obstruction vector vanishes, i.e. the weights
    are all zero or a single slot carries 1 - delta."""
    delta = params.shift
    if delta in resonance_set(2):
        raise ValueError(
            "singularity test needs a non-resonant shift, got %s" % delta
        )
    return all(v == 0 for v in obstruction_vector(params).values())


@dataclass(frozen=True)
class IsoResult:
    exists: str  # yes | no
    reason: Optional[str] = None
    tau_blocks: Optional[list] = None
    derivative_terms: Optional[dict] = None
    free_parameters: Optional[dict] = None
    verified: bool = False
    note: Optional[str] = None


def _tau_from_assignment(m: int, k: int, assignment: dict):
    blocks = []
    for p in range(k + 1):
        layer = enumerate_multi_indices(m, p)
        blocks.append(
            [
                [assignment.get((s, i), QZERO) for s in layer]
                for i in layer
            ]
        )
    lowering = {
        label: v
        for label, v in assignment.items()
        if degree(label[0]) > degree(label[1]) and v != 0
    }
    return blocks, lowering


def _normalize_scale(assignment: dict, m: int) -> dict:
    origin = ((0,) * m, (0,) * m)
    scale = assignment.get(origin, QZERO)
    if scale == 0:
        return dict(assignment)
    inv = 1 / scale
    return {label: v * inv for label, v in assignment.items()}


def _completion_mapping(src_vec, dst_vec):
    """A deterministic nonsingular matrix sending src_vec to dst_vec.

    Uses the bases (src_vec, e_l for l != pivot(src)) and
    (dst_vec, e_l for l != pivot(dst)).
    """
    n = len(src_vec)
    i0 = next(idx for idx, v in enumerate(src_vec) if v != 0)
    j0 = next(idx for idx, v in enumerate(dst_vec) if v != 0)
    src_basis = [list(src_vec)] + [
        [QONE if r == l else QZERO for r in range(n)] for l in range(n) if l != i0
    ]
    dst_basis = [list(dst_vec)] + [
        [QONE if r == l else QZERO for r in range(n)] for l in range(n) if l != j0
    ]
    src_cols = [[src_basis[c][r] for c in range(n)] for r in range(n)]
    dst_cols = [[dst_basis[c][r] for c in range(n)] for r in range(n)]
    return mat_mul(dst_cols, mat_inverse(src_cols))


def _solve_with_fixed_blocks(system, m: int, k: int, fixed: dict):
    """Solve the assembled system with all diagonal-block entries pinned."""
    remaining = sorted(
        (u for u in system.unknowns if u not in fixed),
        key=lambda u: (degree(u[0]), u),
    )
    pos = {u: t for t, u in enumerate(remaining)}
    mat, rhs = [], []
    for row, b in zip(system.rows, system.rhs):
        dense = [QZERO] * len(remaining)
        acc = b
        for label, v in row.items():
            if label in fixed:
                acc = acc - v * fixed[label]
            else:
                dense[pos[label]] = v
        if any(v != 0 for v in dense) or acc != 0:
            mat.append(dense)
            rhs.append(acc)
    if not mat:
        return dict(fixed)
    sol = solve_linear_system(mat, rhs)
    if sol.inconsistent:
        return None
    out = dict(fixed)
    for u, v in zip(remaining, sol.particular):
        out[u] = v
    return out


def iso_search(
    src: ModuleParams,
    dst: ModuleParams,
    rng: Optional[random.Random] = None,
    sample_count: int = 64,
    allow_experimental: bool = False,
) -> IsoResult:
    """Decide whether the two modules are isomorphic and exhibit a map.

    Equal shift is necessary and checked first.  Otherwise the full
    equivariance system for a general local map is assembled over monomial
    fields and searched for a solution with every diagonal block
    nonsingular.  For generic second-order shifts the verdict must agree
    with the obstruction-vector dichotomy.
    """
    if src.arity != dst.arity or src.order != dst.order:
        raise ShapeError("modules differ in arity or order")
    m, k = src.arity, src.order
    if k not in (1, 2) and not allow_experimental:
        raise NotImplementedError(
            "classification is established for k <= 2 only"
        )
    if src.shift != dst.shift:
        return IsoResult("no", reason="shift")
    delta = src.shift
    system = iso_system(
        m, k, src.in_weights, dst.in_weights, delta, max_field_degree=k + 3
    )
    solution = solve_system(system)
    specs = block_specs(m, k)
    rng = rng if rng is not None else random.Random(0)
    verdict = decide_nonsingular_blocks(
        system, solution, specs, rng, sample_count
    )

    generic_second_order = k == 2 and delta not in resonance_set(2)
    if generic_second_order:
        predicted = is_singular_second_order(src) == is_singular_second_order(
            dst
        )
        if (verdict.exists == "yes") != predicted:
            raise InternalVerificationError(
                "engine verdict contradicts the obstruction dichotomy"
            )

    if verdict.exists != "yes":
        reason = None
        if generic_second_order and is_singular_second_order(
            src
        ) != is_singular_second_order(dst):
            reason = "singular_pair"
        return IsoResult(
            verdict.exists,
            reason=reason,
            free_parameters={"dimension": verdict.free_dimension},
            note=verdict.note,
        )

    assignment = verdict.witness
    if generic_second_order and not is_singular_second_order(src):
        canonical = _canonical_generic_tau(system, src, dst, m, k)
        if canonical is not None:
            assignment = canonical
    assignment = _normalize_scale(assignment, m)
    for value in system.evaluate(assignment):
        if value != 0:
            raise InternalVerificationError("normalized map fails a row")
    blocks, lowering = _tau_from_assignment(m, k, assignment)
    for b in blocks:
        d, _ = det_and_rank(b)
        if d == 0:
            raise InternalVerificationError("normalized map has singular block")
    return IsoResult(
        "yes",
        tau_blocks=blocks,
        derivative_terms={
            "%s|%s" % (format_index(s), format_index(i)): v
            for (s, i), v in sorted(lowering.items())
        },
        free_parameters={"dimension": verdict.free_dimension},
        verified=True,
    )


def _canonical_generic_tau(system, src, dst, m, k):
    """Deterministic representative: the transposed top block carries the
    destination obstruction vector to the source one (the equivariance
    constraint in this layout), completed to a nonsingular matrix; lower
    blocks identity, lowering terms solved from the system."""
    src_vec = obstruction_column(src)
    dst_vec = obstruction_column(dst)
    carry = _completion_mapping(dst_vec, src_vec)
    top = [list(row) for row in zip(*carry)]
    layer2 = enumerate_multi_indices(m, 2)
    fixed = {}
    for r, i in enumerate(layer2):
        for c, s in enumerate(layer2):
            fixed[(s, i)] = top[r][c]
    for p in range(k):
        layer = enumerate_multi_indices(m, p)
        for r, i in enumerate(layer):
            for c, s in enumerate(layer):
                fixed[(s, i)] = QONE if r == c else QZERO
    return _solve_with_fixed_blocks(system, m, k, fixed)
