from __future__ import annotations

import pytest

from clipcone import linalg as la
from clipcone.chamber import (
    crossing_count,
    dirichlet_domain,
    reduce,
    reflection_ball,
    sample_interior,
    translate_disjointness,
    word_ball,
)
from clipcone.clipping import ClippedCone, canonicalize_roots, reflection_matrix
from clipcone.errors import NotInPlusCone, StabilizerNontrivial
from clipcone.lattice import QuadLattice
from clipcone.symcone import Factor, SymCone, member

U2 = [[0, 1, 0], [1, 0, 0], [0, 0, -2]]
U22 = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, -2, 0], [0, 0, 0, -2]]


def make(gram, raw, witness):
    n = len(gram)
    sym = SymCone(QuadLattice(gram), (Factor("lorentz", tuple(range(n)), h=(1, 1) + (0,) * (n - 2)),))
    roots, rej = canonicalize_roots(raw, sym, witness)
    assert not rej
    return ClippedCone(sym, tuple(roots), witness)


def test_reduce_single_reflection():
    cone = make(U2, [(0, 0, 1)], (2, 1, -1))
    tr = reduce((2, 1, 1), cone, track=True)
    assert tr.word == [0]
    assert tr.end == la.vec((2, 1, -1))
    assert tr.crossings_initial == 1 and tr.crossings == [1, 0]


def test_reduce_fixed_point_in_chamber():
    cone = make(U2, [(0, 0, 1)], (2, 1, -1))
    tr = reduce((3, 1, -1), cone)
    assert tr.word == [] and tr.end == la.vec((3, 1, -1))
    # a point on the wall is already in the closure
    assert reduce((2, 1, 0), cone).word == []


def test_reduce_two_orthogonal_walls():
    cone = make(U22, [(0, 0, 1, 0), (0, 0, 0, 1)], (3, 1, -1, -1))
    tr = reduce((3, 1, 1, 1), cone)
    assert sorted(tr.word) == [0, 1]
    assert tr.end == la.vec((3, 1, -1, -1))
    assert crossing_count((3, 1, 1, 1), cone) == 2
    # reducing the end again does nothing
    assert reduce(tr.end, cone).word == []


def test_reduce_rejects_outside_points():
    cone = make(U2, [(0, 0, 1)], (2, 1, -1))
    with pytest.raises(NotInPlusCone):
        reduce((-2, -1, 0), cone)


def test_word_ball_sizes():
    cone = make(U22, [(0, 0, 1, 0), (0, 0, 0, 1)], (3, 1, -1, -1))
    # Klein four-group: the ball saturates at length 2
    assert len(reflection_ball(cone, 0)) == 1
    assert len(reflection_ball(cone, 1)) == 3
    assert len(reflection_ball(cone, 5)) == 4
    assert word_ball([la.identity(2)], 3) == [la.identity(2)]


def test_dirichlet_identity_has_no_cuts():
    cone = make(U2, [(0, 0, 1)], (2, 1, -1))
    dom = dirichlet_domain((2, 1, -1), [la.identity(3)], cone.ambient)
    assert dom.normals == [] and not dom.stabilizer
    assert dom.contains((5, 1, 1)) and dom.contains((5, 1, -1))


def test_dirichlet_single_reflection_cuts_along_root():
    cone = make(U2, [(0, 0, 1)], (2, 1, -1))
    sigma = reflection_matrix(cone.roots[0], cone.lattice)
    dom = dirichlet_domain((2, 1, -1), [la.identity(3), sigma], cone.ambient, cone.roots)
    assert dom.normals == [la.vec((0, 0, -1))]
    assert dom.orbit_avoids_walls
    assert dom.contains((2, 1, -1)) and not dom.contains((2, 1, 1))


def test_dirichlet_stabilizer_warns():
    cone = make(U2, [(0, 0, 1)], (2, 1, -1))
    sigma = reflection_matrix(cone.roots[0], cone.lattice)
    with pytest.warns(StabilizerNontrivial):
        dom = dirichlet_domain((2, 1, 0), [la.identity(3), sigma], cone.ambient)
    assert dom.stabilizer == [1]


def test_translate_disjointness():
    cone = make(U2, [(0, 0, 1)], (2, 1, -1))
    pts = sample_interior(cone.ambient, (2, 1, -1), 200, seed=3)
    ident = [la.identity(3)]
    dom = dirichlet_domain((2, 1, -1), ident, cone.ambient)
    rep = translate_disjointness(dom, ident, pts, ident)
    assert rep["max_multiplicity"] == 1 and rep["covered_fraction"] == 1.0
    assert rep["quotients_covered"]
    ball = reflection_ball(cone, 2)
    dom = dirichlet_domain((2, 1, -1), ball, cone.ambient)
    rep = translate_disjointness(dom, ball, pts, ball)
    assert rep["max_multiplicity"] == 1 and rep["translates"] == 2


def test_sample_interior_is_seeded_and_inside():
    cone = make(U2, [(0, 0, 1)], (2, 1, -1))
    a = sample_interior(cone.ambient, (2, 1, -1), 50, seed=9)
    assert a == sample_interior(cone.ambient, (2, 1, -1), 50, seed=9)
    assert len(a) == 50 and all(member(cone.ambient, p, "interior") for p in a)
