from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from clipcone import linalg as la

small = st.integers(-6, 6)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def symmetric(n):
    return square(n).map(lambda a: [[a[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)])


def test_to_fraction_parses_and_refuses():
    assert la.to_fraction("-3/2") == Fraction(-3, 2)
    assert la.to_fraction(4) == Fraction(4)
    with pytest.raises(TypeError):
        la.to_fraction(0.5)
    with pytest.raises(TypeError):
        la.to_fraction(True)


def test_primitive_keeps_direction():
    assert la.primitive([Fraction(2, 3), Fraction(-4, 3), 0]) == (1, -2, 0)
    with pytest.raises(ValueError):
        la.primitive([0, 0])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_det_matches_sympy(a):
    assert la.det(la.mat(a)) == sympy.Matrix(a).det()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n + 1, max_size=n + 1), min_size=n, max_size=n)))
def test_rref_and_rank_match_sympy(a):
    ours, piv = la.rref(la.mat(a))
    ref, ref_piv = sympy.Matrix(a).rref()
    assert list(piv) == list(ref_piv)
    assert sympy.Matrix(ours) == ref
    assert la.rank(la.mat(a)) == sympy.Matrix(a).rank()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_inverse_solves(a):
    m = la.mat(a)
    if la.det(m) == 0:
        with pytest.raises(ValueError):
            la.inverse(m)
        return
    assert la.matmul(m, la.inverse(m)) == la.identity(len(a))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5).flatmap(symmetric))
def test_inertia_matches_sympy_eigenvalues(a):
    ev = sympy.Matrix(a).eigenvals()
    pos = sum(k for v, k in ev.items() if sympy.re(sympy.N(v, 50)) > 1e-30)
    neg = sum(k for v, k in ev.items() if sympy.re(sympy.N(v, 50)) < -1e-30)
    assert la.inertia(la.mat(a)) == (pos, neg, len(a) - pos - neg)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(symmetric))
def test_definiteness_is_consistent_with_inertia(a):
    m = la.mat(a)
    pos, neg, zero = la.inertia(m)
    assert la.is_positive_definite(m) == (pos == len(a))
    assert la.is_positive_semidefinite(m) == (neg == 0)


def _saturated(basis, n):
    # a sublattice is saturated iff its Smith invariants are all 1
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(sympy.Matrix(basis), domain=sympy.ZZ)
    return all(abs(snf[i, i]) == 1 for i in range(len(basis)))


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda m: st.integers(m + 1, 5).flatmap(
            lambda n: st.tuples(st.just(n), st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m))
        )
    )
)
def test_integer_kernel_is_saturated_basis(case):
    n, a = case
    ker = la.integer_kernel(a, n)
    sm = sympy.Matrix(a)
    assert len(ker) == n - sm.rank()
    for v in ker:
        assert sm * sympy.Matrix(v) == sympy.zeros(len(a), 1)
    if ker:
        assert sympy.Matrix(ker).rank() == len(ker)
        assert _saturated(ker, n)
        assert la.hermite_rows(ker) == ker


def test_integer_kernel_example():
    # x + 2y = 0 in Z^2 has kernel generated by (2, -1) up to sign
    (v,) = la.integer_kernel([[1, 2]], 2)
    assert v in ((2, -1), (-2, 1))


def test_integer_inverse():
    assert la.integer_inverse(la.mat([[2, 1], [1, 1]])) == la.mat([[1, -1], [-1, 2]])
    assert la.integer_inverse(la.mat([[2, 0], [0, 1]])) is None
