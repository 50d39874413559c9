import random

import pytest

from densop.action import MOperator, act_direct
from densop.classify import (
    ModuleParams,
    conjugate,
    is_singular_second_order,
    iso_search,
    obstruction_column,
    obstruction_vector,
    permute,
    shift,
)
from densop.linalg import ShapeError, mat_vec
from densop.poly import Poly
from densop.scalars import Q
from densop.verify import random_field, random_operator, random_rational, random_weights


def test_shift_examples():
    assert shift(ModuleParams(2, 2, (Q(1), Q(2)), Q(7))) == Q(4)
    assert shift(ModuleParams(3, 1, (Q(0), Q(0), Q(0)), Q(5, 7))) == Q(5, 7)


def test_shift_preserved_by_conjugation_weights():
    params = ModuleParams(2, 2, (Q(1, 3), Q(5)), Q(2))
    A = MOperator(2, 2, params.in_weights, params.out_weight, {})
    conj = conjugate(A)
    assert conj.shift == A.shift
    assert conj.in_weights == (Q(5), Q(-1))
    assert conj.out_weight == Q(2, 3)


def test_permute_swaps_weights_and_indices():
    A = MOperator(2, 1, (Q(1), Q(2)), Q(5), {(1, 0): Poly.const(1)})
    out = permute(A, 1, 2)
    assert out.in_weights == (Q(2), Q(1))
    assert out.coeffs == {(0, 1): Poly.const(1)}


def test_permute_is_involution():
    rng = random.Random(3)
    for _ in range(10):
        m = rng.randint(2, 3)
        A = random_operator(rng, m, 2, random_weights(rng, m), random_rational(rng))
        i, j = rng.sample(range(1, m + 1), 2)
        assert permute(permute(A, i, j), i, j) == A


def test_permute_rejects_bad_slots():
    A = MOperator(2, 1, (Q(1), Q(2)), Q(5), {})
    with pytest.raises(IndexError):
        permute(A, 1, 1)
    with pytest.raises(IndexError):
        permute(A, 0, 2)


def test_permute_commutes_with_action():
    rng = random.Random(9)
    for _ in range(8):
        m = rng.randint(2, 3)
        A = random_operator(rng, m, 2, random_weights(rng, m), random_rational(rng))
        X = random_field(rng)
        i, j = rng.sample(range(1, m + 1), 2)
        assert permute(act_direct(X, A), i, j) == act_direct(X, permute(A, i, j))


def test_conjugate_unary_derivative():
    A = MOperator(1, 1, (Q(1, 2),), Q(2), {(1,): Poly.const(1)})
    out = conjugate(A)
    assert out.coeffs == {(1,): Poly.const(-1)}
    assert out.in_weights == (Q(-1),) and out.out_weight == Q(1, 2)


def test_conjugate_binary_by_hand():
    # first slot differentiated once: the adjoint flips the derivative onto
    # the other argument and the pairing slot
    A = MOperator(2, 1, (Q(1), Q(2)), Q(4), {(1, 0): Poly.const(1)})
    out = conjugate(A)
    assert out.coeffs == {
        (1, 0): Poly.const(-1),
        (0, 1): Poly.const(-1),
    }
    assert out.in_weights == (Q(2), Q(-3)) and out.out_weight == Q(0)


def test_conjugate_pairing_identity():
    """Integration by parts: the pairing integral of A(phis) against phi has
    zero total-derivative discrepancy with phi_1 against A*(rest, phi)."""
    rng = random.Random(17)
    for _ in range(10):
        m = rng.randint(1, 3)
        lams = random_weights(rng, m)
        mu = random_rational(rng)
        A = random_operator(rng, m, 2, lams, mu, coeff_degree=2)
        star = conjugate(A)
        from densop.poly import Poly as P
        from densop.verify import random_poly
        from densop.action import Density

        args = [random_poly(rng, 3) for _ in range(m)]
        pairing = random_poly(rng, 3)
        lhs = A.apply(
            [Density(a, w) for a, w in zip(args, lams)]
        ).coefficient * pairing
        rhs = args[0] * star.apply(
            [Density(a, Q(0)) for a in args[1:] + [pairing]]
        ).coefficient
        diff = lhs - rhs
        # difference must be a total derivative: exact antiderivative exists
        integral = P(
            [Q(0)] + [c / (n + 1) for n, c in enumerate(diff.coeffs)]
        )
        assert integral.deriv() == diff


def test_double_conjugation_unary():
    rng = random.Random(23)
    for _ in range(10):
        A = random_operator(rng, 1, 2, random_weights(rng, 1), random_rational(rng))
        assert conjugate(conjugate(A)) == A


def test_conjugation_is_equivariant():
    rng = random.Random(29)
    for _ in range(8):
        m = rng.randint(1, 3)
        A = random_operator(rng, m, 2, random_weights(rng, m), random_rational(rng))
        X = random_field(rng)
        assert conjugate(act_direct(X, A)) == act_direct(X, conjugate(A))


def test_obstruction_examples():
    assert all(
        v == 0
        for v in obstruction_vector(ModuleParams(2, 2, (Q(0), Q(0)), Q(1, 4))).values()
    )
    delta = Q(1, 4)
    assert all(
        v == 0
        for v in obstruction_vector(
            ModuleParams(2, 2, (Q(0), 1 - delta), delta + 1 - delta)
        ).values()
    )
    col = obstruction_column(ModuleParams(2, 2, (Q(1), Q(1)), Q(5, 2)))
    assert col == [Q(1, 2), Q(1), Q(1, 2)]


def test_obstruction_requires_order_two():
    with pytest.raises(ShapeError):
        obstruction_vector(ModuleParams(2, 1, (Q(1), Q(1)), Q(5, 2)))


def test_singularity_grid():
    values = [Q(-2), Q(-1), Q(-1, 2), Q(0), Q(1, 2), Q(1), Q(2)]
    for delta in (Q(1, 4), Q(3), Q(-1)):
        expected_singular = {
            (Q(0), Q(0)),
            (1 - delta, Q(0)),
            (Q(0), 1 - delta),
        }
        for l1 in values:
            for l2 in values:
                params = ModuleParams(2, 2, (l1, l2), delta + l1 + l2)
                assert is_singular_second_order(params) == (
                    (l1, l2) in expected_singular
                )


def test_singularity_rejects_resonant_shift():
    with pytest.raises(ValueError):
        is_singular_second_order(ModuleParams(2, 2, (Q(1), Q(1)), Q(7, 2)))


def test_iso_identity():
    params = ModuleParams(2, 2, (Q(1), Q(1)), Q(5, 2))
    result = iso_search(params, params)
    assert result.exists == "yes" and result.verified
    from densop.linalg import identity

    assert result.tau_blocks == [identity(1), identity(2), identity(3)]
    assert result.derivative_terms == {}


def test_iso_requires_equal_shift():
    a = ModuleParams(2, 2, (Q(0), Q(0)), Q(1, 4))
    b = ModuleParams(2, 2, (Q(1), Q(1)), Q(3))
    result = iso_search(a, b)
    assert result.exists == "no" and result.reason == "shift"


def test_iso_generic_pair_with_witness_relation():
    src = ModuleParams(2, 2, (Q(1), Q(1)), Q(5, 2))
    dst = ModuleParams(2, 2, (Q(2), Q(0)), Q(5, 2))
    result = iso_search(src, dst)
    assert result.exists == "yes" and result.verified
    top = result.tau_blocks[2]
    transposed = [list(row) for row in zip(*top)]
    assert mat_vec(transposed, obstruction_column(dst)) == obstruction_column(src)


def test_iso_singular_vs_nonsingular():
    src = ModuleParams(2, 2, (Q(0), Q(0)), Q(1, 4))
    dst = ModuleParams(2, 2, (Q(1), Q(1)), Q(9, 4))
    result = iso_search(src, dst)
    assert result.exists == "no" and result.reason == "singular_pair"


def test_iso_between_singular_family_members():
    delta = Q(1, 4)
    src = ModuleParams(2, 2, (Q(0), Q(0)), delta)
    dst = ModuleParams(2, 2, (1 - delta, Q(0)), Q(1))
    result = iso_search(src, dst)
    assert result.exists == "yes"


def test_iso_symmetry():
    rng = random.Random(31)
    delta = Q(-1)
    mods = [
        ModuleParams(2, 2, (l1, l2), delta + l1 + l2)
        for l1, l2 in [(Q(1), Q(0)), (Q(0), Q(0)), (Q(1, 2), Q(-1)), (Q(2), Q(2))]
    ]
    for a in mods:
        for b in mods:
            assert (
                iso_search(a, b).exists
                == iso_search(b, a).exists
            )


def test_iso_resonant_three_halves():
    src = ModuleParams(2, 2, (Q(1), Q(2)), Q(3, 2) + 3)
    dst = ModuleParams(2, 2, (Q(1, 2), Q(1, 3)), Q(3, 2) + Q(5, 6))
    result = iso_search(src, dst)
    assert result.exists == "yes" and result.verified


def test_iso_first_order_resonant_exceptional_module():
    exceptional = ModuleParams(2, 1, (Q(0), Q(0)), Q(1))
    other = ModuleParams(2, 1, (Q(1), Q(2)), Q(4))
    third = ModuleParams(2, 1, (Q(1, 2), Q(0)), Q(3, 2))
    assert iso_search(exceptional, other).exists == "no"
    assert iso_search(other, third).exists == "yes"
    assert iso_search(exceptional, exceptional).exists == "yes"


def test_iso_first_order_generic():
    a = ModuleParams(2, 1, (Q(1), Q(2)), Q(8))  # shift 5
    b = ModuleParams(2, 1, (Q(-1), Q(0)), Q(4))  # shift 5
    assert iso_search(a, b).exists == "yes"


def test_iso_rejects_unsupported_order():
    a = ModuleParams(2, 3, (Q(1), Q(2)), Q(8))
    with pytest.raises(NotImplementedError):
        iso_search(a, a)
    assert iso_search(a, a, allow_experimental=True).exists == "yes"


def test_iso_arity_mismatch():
    a = ModuleParams(2, 2, (Q(1), Q(2)), Q(8))
    b = ModuleParams(3, 2, (Q(1), Q(2), Q(0)), Q(8))
    with pytest.raises(ShapeError):
        iso_search(a, b)


def test_resonant_three_halves_singular_family_is_isolated():
    """At shift 3/2 the three modules with flat or single -1/2 weights are
    mutually isomorphic and isomorphic to nothing else."""
    family = [
        ModuleParams(2, 2, (Q(0), Q(0)), Q(3, 2)),
        ModuleParams(2, 2, (Q(-1, 2), Q(0)), Q(1)),
        ModuleParams(2, 2, (Q(0), Q(-1, 2)), Q(1)),
    ]
    generic = ModuleParams(2, 2, (Q(1), Q(2)), Q(3, 2) + 3)
    for a in family:
        assert iso_search(a, generic).exists == "no"
        assert iso_search(generic, a).exists == "no"
        for b in family:
            assert iso_search(a, b).exists == "yes"
