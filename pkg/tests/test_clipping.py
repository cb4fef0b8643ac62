from __future__ import annotations

from fractions import Fraction

from clipcone import corpus
from clipcone import linalg as la
from clipcone.clipping import (
    ClippedCone,
    angle_class,
    canonicalize_roots,
    check_integrality,
    check_pairwise,
    direct_sum_clipped,
    member_clipped,
    reflection_matrix,
    validate_clipped,
)
from clipcone.lattice import QuadLattice
from clipcone.symcone import Factor, SymCone

U2 = [[0, 1, 0], [1, 0, 0], [0, 0, -2]]


def u2_cone(witness=(2, 1, -1)):
    sym = SymCone(QuadLattice(U2), (Factor("lorentz", (0, 1, 2), h=(1, 1, 0)),))
    roots, rej = canonicalize_roots([(0, 0, -2)], sym, witness)
    return ClippedCone(sym, tuple(roots), witness), rej


def test_canonicalize_example():
    cone, rej = u2_cone()
    assert not rej
    (r,) = cone.roots
    assert r.vector == (0, 0, 1) and r.factor == 0 and r.s == 2


def test_canonicalize_rejections():
    sym = SymCone(
        QuadLattice([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, -2]]),
        (Factor("halfline", (0,)), Factor("lorentz", (1, 2, 3), h=(1, 1, 0))),
    )
    raw = [(0, 0, 0, 0), (0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 3), (0, 0, 0, -1), (1, 0, 0, 1)]
    roots, rej = canonicalize_roots(raw, sym, (1, 2, 1, -1))
    reasons = {r["index"]: r["reason"] for r in rej}
    assert reasons == {
        0: "zero vector",
        1: "not negative square",
        2: "not negative square",
        4: "merged",
        5: "assumption (i)",
    }
    assert [r.vector for r in roots] == [(0, 0, 0, 1)]
    _, rej = canonicalize_roots([(0, 0, 0, 1)], sym, (1, 1, 1, 0))
    assert rej[0]["reason"] == "witness on hyperplane"


def test_integrality_examples():
    r = check_integrality((1, 0), corpus.klt_lattice())
    assert not r and r.basis_index == 1 and r.coefficient == Fraction(4, 3)
    assert check_integrality((0, 0, 1), QuadLattice(U2))
    # s = 1 in an integral lattice is always integral
    assert check_integrality((0, 1), QuadLattice([[1, 0], [0, -1]]))
    # the Fraction path agrees with the integer path
    assert check_integrality(("0", "0", "1"), QuadLattice(U2))


def test_reflection_matrix_examples():
    s = reflection_matrix((0, 0, 1), QuadLattice(U2))
    assert s == la.mat([[1, 0, 0], [0, 1, 0], [0, 0, -1]])
    k = reflection_matrix((1, 0), corpus.klt_lattice())
    assert k[0] == (Fraction(-1), Fraction(4, 3)) and not la.is_integral(k)


def test_angle_classes():
    assert angle_class(Fraction(1, 4)) == "pi/3"
    assert angle_class(Fraction(1)) == "parallel"
    assert angle_class(Fraction(2)) == "ultraparallel"
    assert angle_class(Fraction(1, 3)) == "violation"
    lat = QuadLattice([[-2, 1], [1, -2]])
    rep = check_pairwise([(1, 0), (0, 1)], lat)
    assert rep.ok and rep.pairs[0]["class"] == "pi/3"
    assert check_pairwise([(1, 0), (0, 1)], QuadLattice([[-2, 0], [0, -2]])).pairs[0]["class"] == "pi/2"
    bad = check_pairwise([(1, 0), (0, 1)], QuadLattice([[-2, -1], [-1, -2]]))
    assert bad.violations[0]["reason"] == "negative pairing"


def test_member_clipped_examples():
    cone, _ = u2_cone()
    assert member_clipped(cone, cone.witness)
    assert not member_clipped(cone, (2, 1, 1))
    assert member_clipped(cone, (0, 0, 0), "closure")
    assert not member_clipped(cone, (0, 0, 0))


def test_validate_clipped_reports():
    cone, _ = u2_cone()
    rep = validate_clipped(cone)
    assert rep["ok"] and all(c["ok"] for c in rep["checks"].values())
    inst = corpus.klt_instance()
    from clipcone.instance import parse

    bad, _ = parse(inst).clipped()
    rep = validate_clipped(bad)
    assert not rep["ok"] and not rep["checks"]["assumption_ii"]["ok"]


def test_direct_sum_stays_valid():
    a, _ = u2_cone()
    s = direct_sum_clipped(a, a)
    assert s.rank == 6 and len(s.roots) == 2
    assert validate_clipped(s)["ok"]
