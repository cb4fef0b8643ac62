from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from clipcone import linalg as la
from clipcone.errors import CapExceeded, NotLatticePreserving
from clipcone.lattice import (
    QuadLattice,
    group_closure,
    invariant_coordinates,
    invariant_form,
    invariant_sublattice,
    maschke_projection,
    reynolds,
    embed,
    trivial_action,
)

SWAP = [[0, 1], [1, 0]]
ROT4 = [[0, -1], [1, 0]]


def test_lattice_rejects_bad_grams():
    with pytest.raises(ValueError):
        QuadLattice([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        QuadLattice([[1, 1], [1, 1]])


def test_signature_and_pairing():
    lat = QuadLattice([[0, 1], [1, 0]])
    assert lat.signature() == (1, 1, 0)
    assert lat.pair((1, 0), (0, 1)) == 1
    assert lat.norm((1, 1)) == 2
    assert lat.scaled_gram == (((0, 1), (1, 0)), 1)
    assert QuadLattice([["-3/2", 1], [1, -2]]).scaled_gram == (((-3, 2), (2, -4)), 2)


def test_group_closure_orders():
    assert group_closure([ROT4]).order == 4
    assert group_closure([SWAP, [[-1, 0], [0, -1]]]).order == 4
    assert trivial_action(3).order == 1


def test_group_closure_errors():
    with pytest.raises(NotLatticePreserving):
        group_closure([[[2, 0], [0, 1]]])
    with pytest.raises(CapExceeded):
        group_closure([[[1, 1], [0, 1]]], cap=50)  # infinite order


def test_inverse_and_orbit():
    act = group_closure([ROT4])
    for g in act.elements:
        gi = act.inverse(g)
        assert la.matmul(la.mat(g), la.mat(gi)) == la.identity(2)
    assert len(act.orbit((1, 0))) == 4


def test_invariant_sublattice_is_saturated():
    # the sign-swap (x, y) -> (-y, -x) fixes the line x = -y
    act = group_closure([[[0, -1], [-1, 0]]])
    assert invariant_sublattice(act) == [(1, -1)]
    # index-2 trap: (x, y) -> (y, x) on a sublattice basis
    act = group_closure([[[1, 0, 0], [0, 0, 1], [0, 1, 0]]])
    basis = invariant_sublattice(act)
    assert sympy.Matrix(basis).rank() == 2
    for v in basis:
        assert act.apply(act.generators[0], v) == la.vec(v)


def test_reynolds_is_equivariant_idempotent():
    act = group_closure([[[0, 1, 0], [0, 0, 1], [1, 0, 0]]])
    r = reynolds(act)
    assert la.matmul(r, r) == r
    for g in act.matrices():
        assert la.matmul(g, r) == r == la.matmul(r, g)
    assert la.rank(r) == len(invariant_sublattice(act))


def test_maschke_projection_from_skew_seed():
    act = group_closure([SWAP])
    skew = la.mat([[1, 0], [1, 0]])  # non-equivariant projection onto span (1, 1)
    assert la.matmul(skew, skew) == skew
    p = maschke_projection(act, skew)
    assert la.matmul(p, p) == p
    for g in act.matrices():
        assert la.matmul(g, p) == la.matmul(p, g)
    assert la.matvec(p, (1, 1)) == la.vec((1, 1))


def test_invariant_form_is_invariant():
    act = group_closure([ROT4])
    f = invariant_form(act, [[2, 1], [1, 1]])
    for g in act.matrices():
        assert la.matmul(la.matmul(la.transpose(g), f), g) == f
    assert la.is_integral(f) and la.is_positive_definite(f)


def test_coordinates_round_trip():
    basis = [(1, 1, 0), (0, 0, 1)]
    y = (Fraction(3, 2), Fraction(-2))
    assert invariant_coordinates(basis, embed(basis, y)) == y
