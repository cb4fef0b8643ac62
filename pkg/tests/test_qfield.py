from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from clipcone.qfield import QuadraticScalar, scalar_from_json, scalar_to_json, sqrt_rational, squarefree_decomposition

rats = st.fractions(min_value=-50, max_value=50, max_denominator=20)
radicands = st.sampled_from([2, 3, 5, 6, 7, 10, 13])


def q(d):
    return st.builds(lambda a, b: QuadraticScalar(a, b, d), rats, rats)


@settings(max_examples=300)
@given(radicands.flatmap(q))
def test_sign_agrees_with_float(x):
    f = float(x.a) + float(x.b) * math.sqrt(x.d)
    assume(abs(f) > 1e-9)
    assert x.sign() == (1 if f > 0 else -1)


@settings(max_examples=200)
@given(radicands.flatmap(lambda d: st.tuples(q(d), q(d), q(d))))
def test_field_axioms(t):
    x, y, z = t
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == 0
    if x != 0:
        assert x * (1 / x) == 1
        assert (y / x) * x == y


@settings(max_examples=200)
@given(radicands.flatmap(lambda d: st.tuples(q(d), q(d))))
def test_order_is_total_and_compatible(t):
    x, y = t
    assert (x < y) + (x == y) + (x > y) == 1
    if x < y:
        assert x + 1 < y + 1


@given(st.integers(1, 10**6))
def test_squarefree_decomposition(n):
    k, d = squarefree_decomposition(n)
    assert k * k * d == n
    assert all(d % (p * p) for p in range(2, math.isqrt(d) + 1))


def test_sqrt_rational():
    assert sqrt_rational(Fraction(9, 4)) == Fraction(3, 2)
    r = sqrt_rational(Fraction(1, 2))
    assert isinstance(r, QuadraticScalar) and r * r == Fraction(1, 2)
    with pytest.raises(ValueError):
        sqrt_rational(-1)


def test_mixed_radicands_refused():
    with pytest.raises(ValueError):
        QuadraticScalar(0, 1, 2) + QuadraticScalar(0, 1, 3)
    with pytest.raises(ValueError):
        QuadraticScalar(0, 1, 4)


def test_json_round_trip():
    x = QuadraticScalar(Fraction(1, 2), -3, 5)
    assert scalar_from_json(scalar_to_json(x), 5) == x
    assert scalar_from_json(scalar_to_json(Fraction(-7, 3))) == Fraction(-7, 3)
