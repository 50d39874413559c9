import random

import pytest

from densop.scalars import Q, binomial, format_rational, multinomial, parse_rational


def test_binomial_values():
    assert binomial(4, 2) == 6
    assert binomial(3, -1) == 0
    assert binomial(5, 5) == 1
    assert binomial(5, 6) == 0
    assert binomial(0, 0) == 1


def test_binomial_pascal():
    for n in range(1, 12):
        for k in range(n + 1):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


def test_multinomial():
    assert multinomial([2, 1]) == 3
    assert multinomial([1, 1, 1]) == 6
    assert multinomial([0, 0]) == 1
    assert multinomial([3]) == 1


@pytest.mark.parametrize(
    "text,num,den",
    [("3/4", 3, 4), ("-1/2", -1, 2), ("7", 7, 1), (" 5/10 ", 1, 2)],
)
def test_parse_rational(text, num, den):
    v = parse_rational(text)
    assert v.numerator == num and v.denominator == den


def test_parse_rational_rejects_zero_denominator():
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("x")


def test_format_rational():
    assert format_rational(Q(3, 4)) == "3/4"
    assert format_rational(Q(-6, 4)) == "-3/2"
    assert format_rational(Q(8, 2)) == "4"
    assert format_rational(Q(0)) == "0"


def test_format_parse_roundtrip():
    rng = random.Random(5)
    for _ in range(200):
        v = Q(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        assert parse_rational(format_rational(v)) == v


def test_field_axioms_on_random_triples():
    rng = random.Random(11)
    for _ in range(300):
        a = Q(rng.randint(-99, 99), rng.randint(1, 40))
        b = Q(rng.randint(-99, 99), rng.randint(1, 40))
        c = Q(rng.randint(-99, 99), rng.randint(1, 40))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert a + (-a) == 0
        if a != 0:
            assert a * (1 / a) == 1


def test_lowest_terms_positive_denominator():
    rng = random.Random(7)
    for _ in range(100):
        num = rng.randint(-500, 500)
        den = rng.choice([v for v in range(-60, 61) if v])
        v = Q(num, den)
        assert v.denominator > 0
        from math import gcd

        assert gcd(int(v.numerator), int(v.denominator)) == 1
