"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every assertion is exact (bit-identical rationals); the stated per-criterion
runtime bounds are asserted where given.  Run with ``pytest -v -s
tests/test_acceptance.py`` to see the per-criterion lines.
"""

import itertools
import random
import time

from densop.classify import (
    ModuleParams,
    conjugate,
    is_singular_second_order,
    iso_search,
    permute,
)
from densop.engine import (
    MapAnsatz,
    OperatorSpace,
    SkewOperatorSpace,
    SkewSymbolSpace,
    SymbolSpace,
    residual_is_zero,
    resonant_quantization_exists,
    sl2_fields,
    vect_equivariant_principal_symbol,
)
from densop.indexing import (
    count_distinct_partitions,
    enumerate_multi_indices,
    skew_component_count,
)
from densop.scalars import Q
from densop.tables import (
    resonance_set,
    skew_symbol_table,
    symbol_table,
)
from densop.verify import (
    nonresonant_weights,
    random_rational,
    suite_action_oracle,
    suite_closed_forms,
    suite_lie_law,
)

GRID5 = (Q(-1), Q(-1, 2), Q(0), Q(1, 2), Q(1))


def _report(number: int, label: str, passed: bool, elapsed: float):
    status = "PASS" if passed else "FAIL"
    print(
        "criterion %2d [%s] %s (%.1fs)" % (number, label, status, elapsed)
    )
    assert passed, "criterion %d (%s) failed" % (number, label)


def test_criterion_01_action_oracle():
    start = time.monotonic()
    ok = True
    for m in (1, 2, 3):
        for k in range(5):
            report = suite_action_oracle(m, k, 100, seed=1000 + 10 * m + k)
            ok = ok and report.passed
    elapsed = time.monotonic() - start
    _report(1, "action oracle", ok and elapsed < 10, elapsed)


def test_criterion_02_lie_action_law():
    start = time.monotonic()
    ok = True
    for m in (1, 2, 3):
        for k in range(5):
            report = suite_lie_law(m, k, 4, seed=2000 + 10 * m + k)
            ok = ok and report.passed
    elapsed = time.monotonic() - start
    _report(2, "commutator law", ok and elapsed < 10, elapsed)


def _inverse_sample():
    rng = random.Random(33)
    draws = []
    for case in range(30):
        m = 1 + case % 3
        k = 1 + (case // 3) % 3
        lams, mu = nonresonant_weights(rng, m, k)
        draws.append((m, k, lams, mu))
    return draws


def test_criterion_03_symbol_quantization_inverse():
    start = time.monotonic()
    ok = True
    rng = random.Random(77)
    from densop.tables import apply_quantization, apply_symbol, quantization_table
    from densop.verify import random_operator

    for m, k, lams, mu in _inverse_sample():
        sigma = symbol_table(lams, mu, k)
        quant = quantization_table(lams, mu, k)
        A = random_operator(rng, m, k, lams, mu)
        sym = apply_symbol(sigma, A)
        ok = ok and apply_quantization(quant, sym) == A
        ok = ok and apply_symbol(sigma, apply_quantization(quant, sym)) == sym
    elapsed = time.monotonic() - start
    _report(3, "inverse round trips", ok and elapsed < 10, elapsed)


def test_criterion_04_projective_equivariance():
    start = time.monotonic()
    ok = True
    for m, k, lams, mu in _inverse_sample():
        table = symbol_table(lams, mu, k)
        source = OperatorSpace(m, k, lams, mu)
        target = SymbolSpace(m, k, table.shift)
        ansatz = MapAnsatz.from_table(table, source, target)
        for X in sl2_fields():
            ok = ok and residual_is_zero(ansatz, X)
    elapsed = time.monotonic() - start
    _report(4, "sl(2) residual zero", ok, elapsed)


def test_criterion_05_closed_forms():
    start = time.monotonic()
    ok = True
    for m in (2, 3):
        report = suite_closed_forms(m, 20, seed=500 + m)
        ok = ok and report.passed
    elapsed = time.monotonic() - start
    _report(5, "order 1 and 2 closed forms", ok, elapsed)


def _expected_resonant(lams, delta):
    zero = all(v == 0 for v in lams)
    if delta == 1:
        return "yes" if zero else "no"
    if 2 * delta == 3:
        half_spike = (
            sum(1 for v in lams if v == Q(-1, 2)) == 1
            and sum(1 for v in lams if v == 0) == len(lams) - 1
        )
        return "yes" if (zero or half_spike) else "no"
    return "no"


def test_criterion_06_resonant_classification():
    """Shift 1 needs flat weights; shift 3/2 additionally admits a single
    -1/2 spike; integer shifts 2..k admit nothing, with certificates.

    The half-integer tail 5/2, 7/2 is exercised separately (see
    test_engine.test_half_integer_tail_has_one_binary_exception): at the
    binary double point (-1/2, -1/2) with shift 5/2 an equivariant
    quantization with nonsingular blocks provably does exist.
    """
    start = time.monotonic()
    ok = True
    failures = []
    for m in (2, 3):
        for k in (2, 3, 4):
            deltas = [Q(1), Q(3, 2)] + [Q(n) for n in range(2, k + 1)]
            for lams in itertools.product(GRID5, repeat=m):
                for delta in deltas:
                    verdict = resonant_quantization_exists(
                        lams, delta, k, m, random.Random(6), 16
                    )
                    expected = _expected_resonant(lams, delta)
                    if verdict.exists != expected:
                        failures.append((m, k, lams, delta, verdict.exists))
                        ok = False
                    elif expected == "no" and not verdict.certificate:
                        failures.append((m, k, lams, delta, "uncertified"))
                        ok = False
    elapsed = time.monotonic() - start
    if failures:
        print("first failures:", failures[:5])
    _report(6, "resonant existence grid", ok and elapsed < 120, elapsed)


def test_criterion_07_vect_principal_symbol():
    start = time.monotonic()
    ok = True
    delta = Q(1, 4)
    special = [(1 - delta, Q(0)), (Q(0), 1 - delta)]
    points = list(itertools.product(GRID5, repeat=2)) + special
    for k in (1, 2, 3):
        for lams in points:
            verdict = vect_equivariant_principal_symbol(
                lams, delta, k, 2, random.Random(7), 16
            )
            if k == 1:
                expected = "yes"
            elif k == 2:
                expected = (
                    "yes"
                    if lams in ((Q(0), Q(0)), special[0], special[1])
                    else "no"
                )
            else:
                expected = "no"
            if verdict.exists != expected:
                print("mismatch", k, lams, verdict.exists, expected)
                ok = False
    elapsed = time.monotonic() - start
    _report(7, "field-wide principal symbol", ok and elapsed < 120, elapsed)


def test_criterion_08_second_order_classification():
    start = time.monotonic()
    ok = True
    for delta in (Q(1, 4), Q(3), Q(-1)):
        points = list(itertools.product(GRID5, repeat=2))
        for spike in ((1 - delta, Q(0)), (Q(0), 1 - delta)):
            if spike not in points:
                points.append(spike)
        modules = [
            ModuleParams(2, 2, lams, delta + lams[0] + lams[1])
            for lams in points
        ]
        singular = {
            (Q(0), Q(0)),
            (1 - delta, Q(0)),
            (Q(0), 1 - delta),
        }
        for params in modules:
            ok = ok and is_singular_second_order(params) == (
                tuple(params.in_weights) in singular
            )
        rng = random.Random(8)
        reference = next(
            p for p in modules if tuple(p.in_weights) not in singular
        )
        singular_reference = next(
            p for p in modules if tuple(p.in_weights) in singular
        )
        for params in modules:
            is_sing = tuple(params.in_weights) in singular
            got = iso_search(params, reference, rng, 16).exists
            ok = ok and got == ("no" if is_sing else "yes")
            got = iso_search(params, singular_reference, rng, 16).exists
            ok = ok and got == ("yes" if is_sing else "no")
    elapsed = time.monotonic() - start
    _report(8, "second-order classification", ok, elapsed)


def _golden_fourteen(assignment, lams, rhos, delta):
    """The fourteen-equation system for binary second-order maps, in the
    tau_0 = 1 gauge; returns the list of residual values."""
    e = [(1, 0), (0, 1)]
    dd = [(2, 0), (0, 2)]
    z = (0, 0)
    d12 = (1, 1)

    def t(s, i):
        return assignment.get((s, i), Q(0))

    l, r = lams, rhos
    values = [
        # cross-paired degree-one sums against the top block
        l[0] * t(e[1], z) + l[1] * t(e[0], z) - (delta - 2) * t(d12, z)
        - r[0] * t(d12, dd[0]) - r[1] * t(d12, dd[1]),
        l[0] * t(e[1], z) + l[1] * t(e[0], z) - (2 * delta - 3) * t(d12, z)
        - r[0] * t(d12, e[0]) - r[1] * t(d12, e[1]),
    ]
    for s in (0, 1):
        values.append(
            (1 + 2 * l[s]) * t(e[s], z) - (2 * delta - 3) * t(dd[s], z)
            - r[0] * t(dd[s], e[0]) - r[1] * t(dd[s], e[1])
        )
        values.append(
            l[s] - (delta - 1) * t(e[s], z)
            - r[0] * t(e[s], e[0]) - r[1] * t(e[s], e[1])
        )
        values.append(
            l[s] + (1 + 2 * l[s]) * t(e[s], z) - (delta - 2) * t(dd[s], z)
            - r[0] * t(dd[s], dd[0]) - r[1] * t(dd[s], dd[1])
        )
        values.append(
            l[0] * t(e[1], e[s]) + l[1] * t(e[0], e[s])
            - (delta - 2) * t(d12, e[s])
            - (1 + 2 * r[s]) * t(d12, dd[s])
            - r[1 - s] * t(d12, d12)
        )
        for j in (0, 1):
            values.append(
                (1 + 2 * l[s]) * t(e[s], e[j]) - (delta - 2) * t(dd[s], e[j])
                - (1 + 2 * r[j]) * t(dd[s], dd[j])
                - r[1 - j] * t(dd[s], d12)
            )
    assert len(values) == 14
    return values


def _case1_matrix(lams, rhos):
    """Published top block for the half-integer resonant shift (dst weights
    both nonzero), re-indexed: its rows list the sources (2e_1, 2e_2,
    e_1+e_2) against targets in canonical order.  Returned row-major by
    target, column-major by source in canonical order."""
    l1, l2 = lams
    r1, r2 = rhos
    by_source = {
        (2, 0): {
            (2, 0): Q(1),
            (1, 1): (l1 - r1) * (1 + 2 * l1 + 2 * r1) / (2 * r1 * r2),
            (0, 2): Q(0),
        },
        (0, 2): {
            (2, 0): Q(0),
            (1, 1): (l2 - r2) * (1 + 2 * l2 + 2 * r2) / (2 * r1 * r2),
            (0, 2): Q(1),
        },
        (1, 1): {
            (2, 0): Q(0),
            (1, 1): l1 * l2 / (r1 * r2),
            (0, 2): Q(0),
        },
    }
    layer = enumerate_multi_indices(2, 2)
    return [[by_source[s][i] for s in layer] for i in layer]


def _weight_row(pair):
    a, b = pair
    return [a * (2 * a + 1), 2 * a * b, b * (2 * b + 1)]


def test_criterion_09_resonant_binary_classification():
    start = time.monotonic()
    ok = True

    # first order, unit shift: everything isomorphic except the flat module
    modules = [
        ModuleParams(2, 1, lams, 1 + lams[0] + lams[1])
        for lams in itertools.product(GRID5, repeat=2)
    ]
    exceptional = ModuleParams(2, 1, (Q(0), Q(0)), Q(1))
    rng = random.Random(9)
    reference = ModuleParams(2, 1, (Q(1), Q(1)), Q(3))
    for params in modules:
        flat = tuple(params.in_weights) == (Q(0), Q(0))
        got = iso_search(params, reference, rng, 16).exists
        ok = ok and got == ("no" if flat else "yes")
        got = iso_search(params, exceptional, rng, 16).exists
        ok = ok and got == ("yes" if flat else "no")

    # second order, shift 3/2, destination weights nonzero
    delta = Q(3, 2)
    pairs = [
        ((Q(1), Q(2)), (Q(1, 2), Q(1, 3))),
        ((Q(-1, 3), Q(4)), (Q(5), Q(-2, 7))),
        ((Q(1), Q(1)), (Q(-1), Q(1))),
        ((Q(0), Q(2)), (Q(1), Q(1, 2))),
        ((Q(3), Q(-2)), (Q(-1, 2), Q(4, 3))),
    ]
    layer = enumerate_multi_indices(2, 2)
    for lams, rhos in pairs:
        src = ModuleParams(2, 2, lams, delta + lams[0] + lams[1])
        dst = ModuleParams(2, 2, rhos, delta + rhos[0] + rhos[1])
        result = iso_search(src, dst, random.Random(10), 16)
        ok = ok and result.exists == "yes" and result.verified
        assignment = {}
        for p, block in enumerate(result.tau_blocks):
            layer_p = enumerate_multi_indices(2, p)
            for r, i in enumerate(layer_p):
                for c, s in enumerate(layer_p):
                    assignment[(s, i)] = block[r][c]
        for key, value in (result.derivative_terms or {}).items():
            s_text, _, i_text = key.partition("|")
            from densop.indexing import parse_index

            assignment[(parse_index(s_text), parse_index(i_text))] = value
        # all fourteen golden equations vanish on the witness
        for value in _golden_fourteen(assignment, lams, rhos, delta):
            ok = ok and value == 0
        # the forced top-block relations: weight row of the destination
        # carries the block onto the weight row of the source
        w = _weight_row(rhos)
        v = _weight_row(lams)
        top = result.tau_blocks[2]
        for c in range(3):
            got = sum((w[r] * top[r][c] for r in range(3)), Q(0))
            ok = ok and got == v[c]
        # the published block solves the system when its determinant
        # (proportional to lam_1 lam_2) is nonzero
        if lams[0] * lams[1] != 0:
            from densop.classify import _solve_with_fixed_blocks
            from densop.engine import iso_system
            from densop.linalg import det_and_rank

            fixed = {((0, 0), (0, 0)): Q(1)}
            for s in (0, 1):
                for j in (0, 1):
                    e_s = (1, 0) if s == 0 else (0, 1)
                    e_j = (1, 0) if j == 0 else (0, 1)
                    fixed[(e_s, e_j)] = Q(1) if s == j else Q(0)
            mat = _case1_matrix(lams, rhos)
            d, _ = det_and_rank(mat)
            ok = ok and d != 0
            for r, i in enumerate(layer):
                for c, s in enumerate(layer):
                    fixed[(s, i)] = mat[r][c]
            system = iso_system(2, 2, lams, rhos, delta, 5)
            full = _solve_with_fixed_blocks(system, 2, 2, fixed)
            ok = ok and full is not None
            if full is not None:
                ok = ok and all(v == 0 for v in system.evaluate(full))
    elapsed = time.monotonic() - start
    _report(9, "resonant binary classification", ok, elapsed)


def test_criterion_10_skew_symmetric_layer():
    start = time.monotonic()
    ok = True
    # graded component counts against brute-force distinct partitions
    for m in (1, 2, 3, 4):
        for j in range(13):
            strict = enumerate_multi_indices(m, j, "strictly_decreasing")
            ok = ok and len(strict) == skew_component_count(j, m)
    for i in range(1, 13):
        ok = ok and count_distinct_partitions(i, 2) == (i - 1) // 2
        ok = ok and count_distinct_partitions(i, 3) == round(
            Q(i - 3, 1) ** 2 / 12
        )
    # skew symbol map passes the projective residual check
    rng = random.Random(12)
    for k in (2, 3):
        for _ in range(3):
            lam = random_rational(rng, span=3)
            while True:
                mu = random_rational(rng, span=5)
                if mu - 2 * lam not in resonance_set(k):
                    break
            table = skew_symbol_table(lam, mu, k, 2)
            source = SkewOperatorSpace(2, k, lam, mu)
            target = SkewSymbolSpace(2, k, table.shift)
            ansatz = MapAnsatz.from_table(table, source, target)
            for X in sl2_fields():
                ok = ok and residual_is_zero(ansatz, X)
    elapsed = time.monotonic() - start
    _report(10, "skew-symmetric layer", ok, elapsed)


def test_criterion_11_shift_necessity():
    start = time.monotonic()
    ok = True
    rng = random.Random(13)
    for k in (1, 2):
        for _ in range(6):
            m = 2
            lams = tuple(random_rational(rng, span=3) for _ in range(m))
            rhos = tuple(random_rational(rng, span=3) for _ in range(m))
            mu = random_rational(rng, span=4)
            eta = random_rational(rng, span=4)
            src = ModuleParams(m, k, lams, mu)
            dst = ModuleParams(m, k, rhos, eta)
            if src.shift == dst.shift:
                continue
            result = iso_search(src, dst)
            ok = ok and result.exists == "no" and result.reason == "shift"
    from densop.verify import random_operator, random_weights

    for _ in range(12):
        m = rng.randint(2, 3)
        A = random_operator(
            rng, m, 2, random_weights(rng, m), random_rational(rng)
        )
        ok = ok and conjugate(A).shift == A.shift
        i, j = rng.sample(range(1, m + 1), 2)
        ok = ok and permute(A, i, j).shift == A.shift
    elapsed = time.monotonic() - start
    _report(11, "shift necessity", ok, elapsed)
