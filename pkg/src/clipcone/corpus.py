"""Small worked instances used by the self-test, the test-suite and the CLI."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .clipping import ClippedCone, canonicalize_roots
from .lattice import FiniteAction, QuadLattice, group_closure, trivial_action
from .symcone import Factor, SymCone, psd_index


@dataclass(frozen=True)
class Instance:
    name: str
    cone: ClippedCone
    action: FiniteAction


def _diag(*xs):
    n = len(xs)
    return [[xs[i] if i == j else 0 for j in range(n)] for i in range(n)]


def _blocks(*bs):
    n = sum(len(b) for b in bs)
    g = [[0] * n for _ in range(n)]
    off = 0
    for b in bs:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                g[off + i][off + j] = x
        off += len(b)
    return g


U = [[0, 1], [1, 0]]


def _perm(p):
    n = len(p)
    return [[int(p[j] == i) for j in range(n)] for i in range(n)]


def _build(name, gram, factors, raw_roots, witness, generators=None) -> Instance:
    sym = SymCone(QuadLattice(gram), tuple(factors))
    roots, rejected = canonicalize_roots(raw_roots, sym, witness)
    if rejected:
        raise ValueError(f"{name}: rejected roots {rejected}")
    n = sym.rank
    act = group_closure(generators) if generators else trivial_action(n)
    return Instance(name, ClippedCone(sym, tuple(roots), witness), act)


def swap_a2(identity: bool = False) -> Instance:
    gens = None if identity else [_perm([0, 1, 3, 2])]
    return _build(
        "swap_a2_identity" if identity else "swap_a2",
        _blocks(U, [[-2, 1], [1, -2]]),
        [Factor("lorentz", (0, 1, 2, 3), h=(1, 1, 0, 0))],
        [(0, 0, 1, 0), (0, 0, 0, 1)],
        (2, 2, -1, -1),
        gens,
    )


def plane_j2() -> Instance:
    return _build(
        "plane_j2",
        _diag(1, -1, -1),
        [Factor("lorentz", (0, 1, 2), h=(1, 0, 0))],
        [(0, 1, 0)],
        (2, 1, 0),
        [_diag(1, 1, -1)],
    )


def sign_flip() -> Instance:
    return _build(
        "sign_flip",
        _blocks(U, [[-2]], [[-2]]),
        [Factor("lorentz", (0, 1, 2, 3), h=(1, 1, 0, 0))],
        [(0, 0, 1, 0)],
        (2, 2, -1, 0),
        [_diag(1, 1, 1, -1)],
    )


def klein_sign_flips() -> Instance:
    return _build(
        "klein_sign_flips",
        _blocks(U, [[-2]], [[-4]], [[-4]]),
        [Factor("lorentz", (0, 1, 2, 3, 4), h=(1, 1, 0, 0, 0))],
        [(0, 0, 1, 0, 0)],
        (3, 3, -1, 0, 0),
        [_diag(1, 1, 1, -1, 1), _diag(1, 1, 1, 1, -1)],
    )


def three_roots(cyclic: bool = False) -> Instance:
    gens = [_perm([0, 1, 3, 4, 2])] if cyclic else [_perm([0, 1, 3, 2, 4]), _perm([0, 1, 2, 4, 3])]
    return _build(
        "cyclic_three_roots" if cyclic else "symmetric_three_roots",
        _blocks(U, [[-2]], [[-2]], [[-2]]),
        [Factor("lorentz", (0, 1, 2, 3, 4), h=(1, 1, 0, 0, 0))],
        [(0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)],
        (3, 3, -1, -1, -1),
        gens,
    )


def factor_swap() -> Instance:
    b = _blocks(U, [[-2]])
    return _build(
        "factor_swap",
        _blocks(b, b),
        [Factor("lorentz", (0, 1, 2), h=(1, 1, 0)), Factor("lorentz", (3, 4, 5), h=(1, 1, 0))],
        [(0, 0, 1, 0, 0, 0), (0, 0, 0, 0, 0, 1)],
        (2, 2, -1, 2, 2, -1),
        [_perm([3, 4, 5, 0, 1, 2])],
    )


def halfline_swap() -> Instance:
    return _build(
        "halfline_swap",
        _blocks([[1]], [[1]], U, [[-2]]),
        [Factor("halfline", (0,)), Factor("halfline", (1,)), Factor("lorentz", (2, 3, 4), h=(1, 1, 0))],
        [(0, 0, 0, 0, 1)],
        (1, 1, 2, 2, -1),
        [_perm([1, 0, 2, 3, 4])],
    )


def halflines_cyclic() -> Instance:
    return _build(
        "halflines_cyclic",
        _diag(1, 1, 1, 1),
        [Factor("halfline", (i,)) for i in range(4)],
        [],
        (1, 1, 1, 1),
        [_perm([1, 2, 3, 0])],
    )


def rotation_d1() -> Instance:
    return _build(
        "rotation_d1",
        _diag(1, -1, -1),
        [Factor("lorentz", (0, 1, 2), h=(1, 0, 0))],
        [],
        (1, 0, 0),
        [[[1, 0, 0], [0, 0, -1], [0, 1, 0]]],
    )


def _psd_conjugation(p) -> list:
    """Action X -> P X P^T on upper-triangle coordinates, P a signed
    permutation given as (image index, sign) per basis vector."""
    idx = psd_index(len(p))
    pos = {ij: k for k, ij in enumerate(idx)}
    g = [[0] * len(idx) for _ in idx]
    for k, (i, j) in enumerate(idx):
        (a, sa), (b, sb) = p[i], p[j]
        g[pos[(min(a, b), max(a, b))]][k] = sa * sb
    return g


def psd_conjugation() -> Instance:
    # trace form on the psd block: diagonal entries weight 1, off-diagonal 2
    tw = [1 if i == j else 2 for i, j in psd_index(3)]
    gram = _blocks(_diag(*tw), [[1]], [[1]])
    swap = _blocks(_psd_conjugation([(1, 1), (0, 1), (2, 1)]), _perm([1, 0]))
    flip = _blocks(_psd_conjugation([(0, 1), (1, 1), (2, -1)]), _diag(1, 1))
    return _build(
        "psd_conjugation",
        gram,
        [Factor("psd", tuple(range(6)), m=3), Factor("halfline", (6,)), Factor("halfline", (7,))],
        [],
        (2, 1, 0, 3, 0, 4, 1, 1),
        [swap, flip],
    )


def vinberg_i12() -> Instance:
    """diag(1,-1,-1) with the three simple roots of its full reflection
    group (a (2,4,infinity) triangle group)."""
    return _build(
        "vinberg_i12",
        _diag(1, -1, -1),
        [Factor("lorentz", (0, 1, 2), h=(1, 0, 0))],
        [(0, -1, 1), (0, 0, -1), (1, 1, 1)],
        (4, 2, 1),
    )


def vinberg_i13() -> Instance:
    """diag(1,-1,-1,-1) with the four simple roots of its full reflection
    group."""
    return _build(
        "vinberg_i13",
        _diag(1, -1, -1, -1),
        [Factor("lorentz", (0, 1, 2, 3), h=(1, 0, 0, 0))],
        [(0, -1, 1, 0), (0, 0, -1, 1), (0, 0, 0, -1), (1, 1, 1, 1)],
        (7, 3, 2, 1),
    )


def descent_corpus() -> list[Instance]:
    return [
        swap_a2(identity=True),
        swap_a2(),
        plane_j2(),
        sign_flip(),
        klein_sign_flips(),
        three_roots(),
        three_roots(cyclic=True),
        factor_swap(),
        halfline_swap(),
        halflines_cyclic(),
        rotation_d1(),
        psd_conjugation(),
        vinberg_i12(),
    ]


def chamber_corpus() -> list[Instance]:
    return [
        swap_a2(),
        plane_j2(),
        sign_flip(),
        three_roots(),
        factor_swap(),
        halfline_swap(),
        vinberg_i12(),
        vinberg_i13(),
    ]


# --- regression instances ---------------------------------------------------


def klt_lattice() -> QuadLattice:
    """Negative definite rank-2 lattice whose first basis vector has a
    non-integral reflection."""
    return QuadLattice([[Fraction(-3, 2), 1], [1, -2]])


def klt_instance() -> dict:
    """The rank-2 lattice above, made hyperbolic by adding <2>."""
    return {
        "schema": 1,
        "name": "klt_k3",
        "gram": [[2, 0, 0], [0, "-3/2", 1], [0, 1, -2]],
        "factors": [{"kind": "lorentz", "coords": [0, 1, 2], "h": [1, 0, 0]}],
        "roots": [[0, 1, 0]],
        "witness": [2, 0, 1],
    }


THIRTEEN_T = (
    Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3), Fraction(5),
    Fraction(-5), Fraction(-3), Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(-1, 3),
)


def thirteen_gon() -> dict:
    """Rank-3 instance whose 13 roots are the edges of a compact polygon
    with rational vertices on a circle of radius 1/2 in the disc model."""
    pts = []
    for t in THIRTEEN_T:
        den = 1 + t * t
        pts.append((Fraction(1), (1 - t * t) / (2 * den), t / den))
    pts.sort(key=lambda p: math.atan2(p[2], p[1]))
    ginv = _diag(1, -1, -1)  # diag(1,-1,-1) is its own inverse
    roots = []
    for k in range(len(pts)):
        a, b = pts[k], pts[(k + 1) % len(pts)]
        cross = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
        roots.append(list(la.primitive(la.matvec(la.mat(ginv), cross))))
    return {
        "schema": 1,
        "name": "thirteen_gon",
        "gram": _diag(1, -1, -1),
        "factors": [{"kind": "lorentz", "coords": [0, 1, 2], "h": [1, 0, 0]}],
        "roots": roots,
        "witness": [1, 0, 0],
    }
