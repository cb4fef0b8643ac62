"""Roots, reflections and the checks that make a clipped symmetric cone
well-behaved: single-factor support, integral reflections and nonnegative
pairings, with a classification of the angle between each pair of walls."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .errors import DimensionMismatch
from .lattice import QuadLattice
from .symcone import LORENTZ, Factor, SymCone, member, validate

# angle classes keyed by r = q(e,f)^2 / (q(e,e) q(f,f))
ANGLE_CLASSES = {
    Fraction(0): "pi/2",
    Fraction(1, 4): "pi/3",
    Fraction(1, 2): "pi/4",
    Fraction(3, 4): "pi/6",
    Fraction(1): "parallel",
}
ULTRAPARALLEL = "ultraparallel"
VIOLATION = "violation"


@dataclass(frozen=True)
class Root:
    """Primitive negative-square normal of a wall, oriented towards the cone.

    ``factor`` is the index of the Lorentz factor carrying it, or None when
    the root lives on a bare lattice without cone data.
    """

    vector: tuple
    factor: int | None
    s: Fraction

    def to_json(self) -> dict:
        return {"e": list(self.vector), "factor": self.factor, "s": la.fmt(self.s)}


@dataclass(frozen=True)
class ClippedCone:
    ambient: SymCone
    roots: tuple
    witness: tuple

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(self.roots))
        object.__setattr__(self, "witness", la.vec(self.witness))

    @property
    def lattice(self) -> QuadLattice:
        return self.ambient.lattice

    @property
    def rank(self) -> int:
        return self.ambient.rank

    def member(self, v, mode: str = "interior") -> bool:
        return member_clipped(self, v, mode)


def make_root(vector: Sequence, lattice: QuadLattice, factor: int | None = None) -> Root:
    """Root from a vector already known to be a valid normal (made primitive)."""
    e = la.primitive(vector)
    return Root(e, factor, -lattice.norm(e))


def carrying_factor(sym: SymCone, v: Sequence) -> int | None:
    """Factor index whose coordinates contain the support of ``v``, if any."""
    support = {i for i, x in enumerate(v) if x != 0}
    for i, f in enumerate(sym.factors):
        if support <= set(f.coords):
            return i
    return None


def canonicalize_roots(raw: Sequence[Sequence], ambient: SymCone, witness: Sequence):
    """Normalize raw wall normals into roots.

    Returns ``(roots, rejections)``.  Each rejection is a dict with the input
    index, the vector and a reason.  Proportional inputs are merged into the
    first occurrence and reported under ``merged``.
    """
    lat = ambient.lattice
    c = la.vec(witness)
    roots: list[Root] = []
    rejections: list[dict] = []
    seen: dict[tuple, int] = {}
    for idx, v in enumerate(raw):
        v = la.vec(v)
        if len(v) != ambient.rank:
            raise DimensionMismatch(f"root {idx} has length {len(v)}, expected {ambient.rank}")
        if not any(v):
            rejections.append({"index": idx, "vector": [la.fmt(x) for x in v], "reason": "zero vector"})
            continue
        e = la.primitive(v)
        qe = lat.norm(e)
        if qe >= 0:
            rejections.append({"index": idx, "vector": list(e), "reason": "not negative square"})
            continue
        fi = carrying_factor(ambient, e)
        if fi is None or ambient.factors[fi].kind != LORENTZ:
            rejections.append({"index": idx, "vector": list(e), "reason": "assumption (i)"})
            continue
        qc = lat.pair(e, c)
        if qc == 0:
            rejections.append({"index": idx, "vector": list(e), "reason": "witness on hyperplane"})
            continue
        if qc < 0:
            e = tuple(-x for x in e)
        if e in seen:
            rejections.append({"index": idx, "vector": list(e), "reason": "merged", "into": seen[e]})
            continue
        seen[e] = len(roots)
        roots.append(Root(e, fi, -qe))
    return roots, rejections


def reflection_matrix(root, lattice: QuadLattice) -> tuple:
    """Matrix of v -> v - (2 q(e,v) / q(e,e)) e."""
    e = la.vec(root.vector if isinstance(root, Root) else root)
    qee = lattice.norm(e)
    if qee == 0:
        raise ValueError("cannot reflect in an isotropic vector")
    ge = lattice.dual(e)
    n = lattice.rank
    return tuple(
        tuple(Fraction(int(i == j)) - 2 * e[i] * ge[j] / qee for j in range(n)) for i in range(n)
    )


@dataclass(frozen=True)
class IntegralityResult:
    ok: bool
    basis_index: int | None = None
    coefficient: Fraction | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {"ok": self.ok}
        if not self.ok:
            out["basis_index"] = self.basis_index
            out["coefficient"] = la.fmt(self.coefficient)
        return out


def _int_vector(v) -> tuple | None:
    out = []
    for x in v:
        if type(x) is not int:
            try:
                x = la.to_fraction(x)
            except TypeError:
                return None
            if x.denominator != 1:
                return None
            x = int(x)
        out.append(x)
    return tuple(out)


def _scaled_dual(lattice: QuadLattice, e: tuple) -> tuple[list, int]:
    # D * G e in integers, for integral e
    g, d = lattice.scaled_gram
    return [sum(a * b for a, b in zip(row, e)) for row in g], d


def check_integrality(root, lattice: QuadLattice) -> IntegralityResult:
    """Whether the reflection in ``root`` preserves Z^n.

    On failure, reports the first basis vector b with sigma(b) = b + k e
    for non-integral k, together with k.
    """
    raw = root.vector if isinstance(root, Root) else root
    e = _int_vector(raw)
    if e is not None:
        ge, _ = _scaled_dual(lattice, e)
        qee = sum(a * b for a, b in zip(ge, e))
        if qee == 0:
            raise ValueError("cannot reflect in an isotropic vector")
        for v, g in enumerate(ge):
            if (2 * g) % qee:
                return IntegralityResult(False, v, Fraction(-2 * g, qee))
        return IntegralityResult(True)
    e = la.vec(raw)
    qee = lattice.norm(e)
    for v, g in enumerate(lattice.dual(e)):
        k = -2 * g / qee
        if k.denominator != 1:
            return IntegralityResult(False, v, k)
    return IntegralityResult(True)


def angle_class(ratio: Fraction) -> str:
    if ratio in ANGLE_CLASSES:
        return ANGLE_CLASSES[ratio]
    return ULTRAPARALLEL if ratio > 1 else VIOLATION


@dataclass
class PairwiseReport:
    pairs: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "pairs": self.pairs, "violations": self.violations}


def check_pairwise(roots: Sequence, lattice: QuadLattice) -> PairwiseReport:
    """Pairing sign and angle class for every unordered pair of roots."""
    raw = [r.vector if isinstance(r, Root) else r for r in roots]
    ints = [_int_vector(v) for v in raw]
    if all(v is not None for v in ints):
        # integer arithmetic on D * G; the ratio is scale free
        vecs = ints
        duals = [_scaled_dual(lattice, v)[0] for v in vecs]
        dot = lambda u, w: sum(a * b for a, b in zip(u, w))  # noqa: E731
        d = lattice.scaled_gram[1]
    else:
        vecs = [la.vec(v) for v in raw]
        duals = [lattice.dual(v) for v in vecs]
        dot, d = la.dot, 1
    norms = [dot(v, g) for v, g in zip(vecs, duals)]
    rep = PairwiseReport()
    for i in range(len(vecs)):
        for k in range(i + 1, len(vecs)):
            p = dot(vecs[k], duals[i])
            r = Fraction(p * p) / (norms[i] * norms[k])
            cls = angle_class(r)
            entry = {"i": i, "k": k, "pairing": la.fmt(Fraction(p) / d), "ratio": la.fmt(r), "class": cls}
            rep.pairs.append(entry)
            if p < 0:
                rep.violations.append(dict(entry, reason="negative pairing"))
            elif cls == VIOLATION:
                rep.violations.append(dict(entry, reason="ratio outside allowed set"))
    return rep


def member_clipped(cone: ClippedCone, v: Sequence, mode: str = "interior") -> bool:
    if mode not in ("interior", "closure"):
        raise ValueError(f"unknown mode {mode!r}")
    v = la.vec(v)
    if not member(cone.ambient, v, mode):
        return False
    lat = cone.lattice
    if mode == "interior":
        return all(lat.pair(r.vector, v) > 0 for r in cone.roots)
    return all(lat.pair(r.vector, v) >= 0 for r in cone.roots)


def validate_clipped(cone: ClippedCone) -> dict:
    """Run every structural check and return a JSON-ready report.

    Checks: ambient structure, witness, root canonicity, assumption (i)
    (single Lorentz factor support), (ii) integrality and (iii) pairings.
    """
    checks: dict[str, dict] = {}
    amb = validate(cone.ambient)
    checks["ambient"] = amb.to_json()
    lat = cone.lattice
    c = cone.witness

    bad = []
    if amb.ok and not member(cone.ambient, c, "interior"):
        bad.append({"reason": "witness not in ambient interior"})
    for i, r in enumerate(cone.roots):
        if lat.pair(r.vector, c) <= 0:
            bad.append({"root": i, "reason": "q(e, witness) <= 0"})
    checks["witness"] = {"ok": not bad, "failures": bad}

    bad = []
    prim = set()
    for i, r in enumerate(cone.roots):
        if tuple(la.primitive(r.vector)) != tuple(r.vector):
            bad.append({"root": i, "reason": "not primitive"})
        if lat.norm(r.vector) >= 0:
            bad.append({"root": i, "reason": "not negative square"})
        key = la.primitive(r.vector)
        if key in prim:
            bad.append({"root": i, "reason": "proportional to an earlier root"})
        prim.add(key)
    checks["canonical"] = {"ok": not bad, "failures": bad}

    bad = []
    for i, r in enumerate(cone.roots):
        fi = carrying_factor(cone.ambient, r.vector)
        if fi is None or cone.ambient.factors[fi].kind != LORENTZ:
            bad.append({"root": i, "reason": "support not inside one hyperbolic factor"})
        elif r.factor is not None and r.factor != fi:
            bad.append({"root": i, "reason": f"factor recorded as {r.factor}, carried by {fi}"})
    checks["assumption_i"] = {"ok": not bad, "failures": bad}

    bad = []
    for i, r in enumerate(cone.roots):
        res = check_integrality(r, lat)
        if not res:
            bad.append(dict(res.to_json(), root=i))
    checks["assumption_ii"] = {"ok": not bad, "failures": bad}

    pw = check_pairwise(cone.roots, lat)
    checks["assumption_iii"] = {"ok": pw.ok, "failures": pw.violations, "pairs": pw.pairs}

    return {"ok": all(ch["ok"] for ch in checks.values()), "checks": checks}


def direct_sum_clipped(a: ClippedCone, b: ClippedCone) -> ClippedCone:
    """Clipped cone on the orthogonal sum, each summand keeping its roots."""
    n1, n2 = a.rank, b.rank
    g = [[Fraction(0)] * (n1 + n2) for _ in range(n1 + n2)]
    for i in range(n1):
        for j in range(n1):
            g[i][j] = a.lattice.gram[i][j]
    for i in range(n2):
        for j in range(n2):
            g[n1 + i][n1 + j] = b.lattice.gram[i][j]
    facs = list(a.ambient.factors) + [
        Factor(f.kind, tuple(c + n1 for c in f.coords), f.h, f.m) for f in b.ambient.factors
    ]
    nf = len(a.ambient.factors)
    roots = [Root(tuple(r.vector) + (0,) * n2, r.factor, r.s) for r in a.roots]
    roots += [
        Root((0,) * n1 + tuple(r.vector), None if r.factor is None else r.factor + nf, r.s)
        for r in b.roots
    ]
    sym = SymCone(QuadLattice(g), tuple(facs))
    return ClippedCone(sym, tuple(roots), tuple(a.witness) + tuple(b.witness))


def root_closure(seeds: Sequence[Sequence], matrices: Sequence, word_length: int) -> list[tuple]:
    """Truncated closure of seed roots under words of length <= word_length
    in ``matrices``.  The output is a finite truncation, not the full orbit
    when the generated group is infinite."""
    mats = [la.mat(m) for m in matrices]
    found = {}
    frontier = []
    for s in seeds:
        v = tuple(la.primitive(s))
        if v not in found:
            found[v] = None
            frontier.append(v)
    for _ in range(word_length):
        nxt = []
        for v in frontier:
            for m in mats:
                w = tuple(la.primitive(la.matvec(m, v)))
                if w not in found:
                    found[w] = None
                    nxt.append(w)
        frontier = nxt
    return list(found)
