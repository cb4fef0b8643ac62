from __future__ import annotations

from fractions import Fraction

import pytest

from clipcone import corpus
from clipcone import linalg as la
from clipcone.clipping import ClippedCone, canonicalize_roots, make_root, reflection_matrix
from clipcone.descent import centralizer_lift, descend, descend_walls, orbit_sum
from clipcone.errors import BlockStructureViolation, PreconditionFailure, PsdOrbitUnsupported
from clipcone.lattice import QuadLattice, group_closure, trivial_action
from clipcone.symcone import Factor, SymCone

SWAP_GRAM = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, -2, 1], [0, 0, 1, -2]]
SWAP = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]


def test_orbit_sum_examples():
    act = group_closure([SWAP])
    assert orbit_sum((0, 0, 1, 0), act) == (0, 0, 1, 1)
    lat = QuadLattice(SWAP_GRAM)
    assert lat.norm((0, 0, 1, 1)) == -2
    assert orbit_sum((0, 1, 0, 0), act) == (0, 1, 0, 0)
    # two orthogonal roots of square -2 swapped: q(eps) = -4
    flip = group_closure([[[1, 0, 0], [0, 0, 1], [0, 1, 0]]])
    eps = orbit_sum((0, 1, 0), flip)
    assert QuadLattice([[1, 0, 0], [0, -2, 0], [0, 0, -2]]).norm(eps) == -4


def test_identity_descent():
    inst = corpus.swap_a2(identity=True)
    rep = descend(inst.cone, inst.action, samples=200)
    assert rep.ok
    assert rep.I_star == list(range(len(inst.cone.roots)))
    for k, r in enumerate(inst.cone.roots):
        assert rep.epsilons[k]["ambient"] == r.vector
        assert rep.taus[k] == reflection_matrix(r, inst.cone.lattice)


def test_swap_descent():
    inst = corpus.swap_a2()
    rep = descend(inst.cone, inst.action, samples=200)
    assert rep.ok and rep.I_star == [0]
    eps = rep.epsilons[0]["ambient"]
    assert eps == (0, 0, 1, 1)
    lat = inst.cone.lattice
    e = inst.cone.roots[0]
    assert lat.pair(e.vector, eps) == -e.s / 2
    # tau fixes the U part and negates the image of eps
    t = rep.taus[0]
    assert t == la.mat([[1, 0, 0], [0, 1, 0], [0, 0, -1]])
    lift = rep.lifts[0]
    assert lift.word == [0, 1, 0]
    assert lift.matrix == reflection_matrix(eps, lat)


def test_two_halfline_orbit():
    inst = corpus.plane_j2()
    rep = descend(inst.cone, inst.action, samples=200)
    assert rep.ok
    assert rep.I_star == [] and rep.J2 == [0]
    assert [p.kind for p in rep.B.parts] == ["plane"]


def test_centralizer_lift_orthogonal_pair():
    lat = QuadLattice([[1, 0, 0], [0, -2, 0], [0, 0, -2]])
    act = group_closure([[[1, 0, 0], [0, 0, 1], [0, 1, 0]]])
    roots = [make_root((0, 1, 0), lat, 0), make_root((0, 0, 1), lat, 0)]
    res = centralizer_lift(roots, act, lat)
    assert res.blocks == [[0], [1]]
    prod = la.matmul(reflection_matrix(roots[0], lat), reflection_matrix(roots[1], lat))
    assert res.matrix == prod
    assert res.checks["blocks_commute"] and res.checks["commutes_with_G"]


def test_centralizer_lift_bad_pairing():
    # pairing 1 with s = 4 is neither 0 nor s/2
    lat = QuadLattice([[1, 0, 0], [0, -4, 1], [0, 1, -4]])
    act = group_closure([[[1, 0, 0], [0, 0, 1], [0, 1, 0]]])
    roots = [make_root((0, 1, 0), lat, 0), make_root((0, 0, 1), lat, 0)]
    with pytest.raises(BlockStructureViolation):
        centralizer_lift(roots, act, lat)


def test_descend_walls_examples():
    lat = QuadLattice(SWAP_GRAM)
    assert descend_walls([(0, 0, 1, 0)], group_closure([SWAP]), lat) == [(0, 0, 1, 1)]
    assert descend_walls([(0, 0, 1, 0)], trivial_action(4), lat) == [(0, 0, 1, 0)]
    # q(w, w + g w) = -2 + 3 >= 0: dropped
    lat2 = QuadLattice([[1, 0, 0], [0, -2, 3], [0, 3, -2]])
    act = group_closure([[[1, 0, 0], [0, 0, 1], [0, 1, 0]]])
    assert descend_walls([(0, 1, 0)], act, lat2) == []


def test_precondition_witness_side():
    inst = corpus.sign_flip()
    neg = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]
    with pytest.raises(PreconditionFailure) as exc:
        descend(inst.cone, group_closure([neg]))
    assert exc.value.hypothesis in ("root set G-stable", "clipped interior preserved")


def test_precondition_lorentz_component():
    inst = corpus.sign_flip()
    minus = [[-1 if i == j else 0 for j in range(4)] for i in range(4)]
    with pytest.raises(PreconditionFailure):
        descend(inst.cone, group_closure([minus]))


def test_psd_factor_moved():
    gram = [[1 if i == j else 0 for j in range(12)] for i in range(12)]
    for i in (1, 2, 4, 7, 8, 10):
        gram[i][i] = 2
    sym = SymCone(QuadLattice(gram), (Factor("psd", tuple(range(6)), m=3), Factor("psd", tuple(range(6, 12)), m=3)))
    swap = [[int(j == (i + 6) % 12) for j in range(12)] for i in range(12)]
    ident = (1, 0, 0, 1, 0, 1) * 2
    cone = ClippedCone(sym, (), tuple(Fraction(x) for x in ident))
    with pytest.raises(PsdOrbitUnsupported):
        descend(cone, group_closure([swap]))


def test_sampling_is_seeded():
    inst = corpus.three_roots(cyclic=True)
    a = descend(inst.cone, inst.action, samples=100, seed=4).to_json()
    b = descend(inst.cone, inst.action, samples=100, seed=4).to_json()
    assert a == b


def test_root_set_must_be_stable():
    sym = corpus.three_roots().cone.ambient
    roots, _ = canonicalize_roots([(0, 0, 1, 0, 0)], sym, (3, 3, -1, -1, -1))
    cone = ClippedCone(sym, tuple(roots), (3, 3, -1, -1, -1))
    with pytest.raises(PreconditionFailure):
        descend(cone, corpus.three_roots().action)
