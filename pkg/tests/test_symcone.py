from __future__ import annotations

import pytest

from clipcone.errors import PreconditionFailure, Unsupported
from clipcone.lattice import QuadLattice, group_closure, trivial_action
from clipcone.symcone import (
    Factor,
    SymCone,
    invariant_hyperbolic_type,
    member,
    psd_index,
    symmetric_to_vector,
    validate,
    vector_to_symmetric,
)

U2 = [[0, 1, 0], [1, 0, 0], [0, 0, -2]]


def lorentz_u2():
    return SymCone(QuadLattice(U2), (Factor("lorentz", (0, 1, 2), h=(1, 1, 0)),))


def diag(*xs):
    return [[xs[i] if i == j else 0 for j in range(len(xs))] for i in range(len(xs))]


def test_signature_examples():
    assert QuadLattice(U2).signature() == (1, 2, 0)
    assert QuadLattice(diag(1, 1, 1)).signature() == (3, 0, 0)
    assert QuadLattice(diag(1, -1)).signature() == (1, 1, 0)


def test_validate_examples():
    assert validate(lorentz_u2()).ok
    two = SymCone(QuadLattice(diag(1, 1)), (Factor("halfline", (0,)), Factor("halfline", (1,))))
    assert validate(two).ok
    bad = SymCone(QuadLattice(diag(1, -1, -1, -1)), (Factor("lorentz", (0, 1, 2, 3), h=(0, 1, 0, 0)),))
    rep = validate(bad)
    assert not rep.ok and rep.failures[0]["check"] == "witness"


def test_validate_block_structure():
    # off-diagonal coupling between two factors
    g = [[1, 1], [1, -1]]
    rep = validate(SymCone(QuadLattice(g), (Factor("halfline", (0,)), Factor("halfline", (1,)))))
    assert not rep.ok


def test_member_lorentz():
    c = lorentz_u2()
    assert member(c, (2, 1, 1), "interior")
    assert not member(c, (1, 0, 0), "interior")
    assert member(c, (1, 0, 0), "closure")
    assert member(c, (1, 0, 0), "plus")
    assert not member(c, (-2, -1, 0), "closure")


def test_member_psd():
    c = SymCone(QuadLattice(diag(1, 2, 2, 1, 2, 1)), (Factor("psd", tuple(range(6)), m=3),))
    ident = symmetric_to_vector([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert member(c, ident, "interior")
    rank_one = symmetric_to_vector([[1, 1, 0], [1, 1, 0], [0, 0, 0]])
    assert member(c, rank_one, "closure") and not member(c, rank_one, "interior")
    with pytest.raises(Unsupported):
        member(c, ident, "plus")


def test_psd_coordinates_round_trip():
    assert psd_index(2) == [(0, 0), (0, 1), (1, 1)]
    v = (1, 2, 3, 4, 5, 6)
    assert symmetric_to_vector(vector_to_symmetric(v, 3)) == tuple(v)


def test_invariant_type_examples():
    c3 = SymCone(QuadLattice(diag(1, -1, -1)), (Factor("lorentz", (0, 1, 2), h=(1, 0, 0)),))
    t = invariant_hyperbolic_type(c3, [0], group_closure([diag(1, 1, -1)]))
    assert t.kind == "TwoHalflines" and t.dim == 2
    c4 = SymCone(QuadLattice(diag(1, -1, -1, -1)), (Factor("lorentz", (0, 1, 2, 3), h=(1, 0, 0, 0)),))
    t = invariant_hyperbolic_type(c4, [0], group_closure([diag(1, 1, 1, -1)]))
    assert t.kind == "Hyperbolic" and t.signature == (1, 2, 0)
    assert invariant_hyperbolic_type(c3, [0], trivial_action(3)).kind == "Hyperbolic"
    t = invariant_hyperbolic_type(c3, [0], group_closure([diag(1, -1, -1)]))
    assert t.kind == "Halfline"


def test_invariant_type_needs_lorentz_orbit():
    two = SymCone(QuadLattice(diag(1, 1)), (Factor("halfline", (0,)), Factor("halfline", (1,))))
    with pytest.raises(PreconditionFailure):
        invariant_hyperbolic_type(two, [0], trivial_action(2))
