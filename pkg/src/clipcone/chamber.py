"""Chamber reduction by root reflections and truncated Dirichlet domains."""
from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg as la
from . import polycone as pc
from .clipping import ClippedCone, reflection_matrix
from .errors import IterationCap, NotInPlusCone, StabilizerNontrivial
from .qfield import scalar_to_json
from .symcone import SymCone, member


@dataclass
class ReductionTrace:
    start: tuple
    end: tuple
    word: list
    crossings_initial: int | None
    crossings: list = field(default_factory=list)  # count before each step, then at the end

    def to_json(self) -> dict:
        return {
            "start": [la.fmt(x) for x in self.start],
            "end": [la.fmt(x) for x in self.end],
            "word": list(self.word),
            "crossings_initial": self.crossings_initial,
            "crossings": list(self.crossings),
        }


def _reflect(e, ge, qee, x) -> tuple:
    # v - (2 q(e,v) / q(e,e)) e, with ge = G e precomputed
    k = 2 * la.dot(ge, x) / qee
    return tuple(xi - k * ei for xi, ei in zip(x, e))


class _Walls:
    """Root data with the Gram products cached."""

    def __init__(self, cone: ClippedCone):
        self.lat = cone.lattice
        self.roots = [la.vec(r.vector) for r in cone.roots]
        self.duals = [self.lat.dual(e) for e in self.roots]
        self.norms = [la.dot(e, d) for e, d in zip(self.roots, self.duals)]

    def pairings(self, x) -> list:
        return [la.dot(d, x) for d in self.duals]


def crossing_count(x: Sequence, cone: ClippedCone, cap: int = 100_000, seed: int = 0) -> int:
    """Number of walls of the reflection group generated by the roots that
    separate ``x`` from the chamber cut out by the roots.

    Walks the segment from an interior point of the chamber to ``x``,
    crossing one chamber wall at a time and moving the walls along.  Walls
    containing ``x`` are not counted.  The start point is perturbed inside
    the chamber when the segment meets two walls at once.
    """
    w = _Walls(cone)
    rng = random.Random(seed)
    gram, _ = cone.lattice.scaled_gram
    # walls and both endpoints only matter up to positive scaling
    roots = [_primitive_int(r) for r in w.roots]
    xi = _primitive_int(la.vec(x))
    start = cone.witness
    for _ in range(64):
        count = _walk(gram, roots, _primitive_int(start), xi, cap)
        if count is not None:
            return count
        start = _perturb(w, cone.witness, rng)
    raise IterationCap("could not find a generic start point for the crossing walk")


def _primitive_int(v) -> list:
    return [int(t) for t in la.primitive(v)] if any(v) else [0] * len(v)


def _perturb(w: _Walls, c, rng) -> tuple:
    n = len(c)
    while True:
        d = [Fraction(rng.randint(-1000, 1000), 1000) for _ in range(n)]
        for scale in (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)):
            p = tuple(ci + scale * di for ci, di in zip(c, d))
            if all(q > 0 for q in w.pairings(p)):
                return p


def _idot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def _walk(gram, roots, start, x, cap: int) -> int | None:
    # integer version: duals are (D G) r, reflections are rescaled to stay
    # integral and primitive
    roots = [list(r) for r in roots]
    duals = [[_idot(row, r) for row in gram] for r in roots]
    t_prev = Fraction(0)
    count = 0
    while True:
        qx = [_idot(d, x) for d in duals]
        if all(v >= 0 for v in qx):
            return count
        qs = [_idot(d, start) for d in duals]
        best, hit = None, []
        for k, (a, b) in enumerate(zip(qs, qx)):
            if b >= 0:
                continue
            t = Fraction(a, a - b)
            if t <= t_prev:
                continue
            if best is None or t < best:
                best, hit = t, [k]
            elif t == best:
                hit.append(k)
        if best is None or len(hit) > 1:
            return None
        h = hit[0]
        r, gr = roots[h], duals[h]
        qrr = _idot(r, gr)  # negative
        new = []
        for v, gv in zip(roots, duals):
            # (-q(r,r)) v + 2 q(r, v) r, a positive multiple of the reflection
            c = 2 * _idot(gr, v)
            u = [-qrr * a + c * b for a, b in zip(v, r)]
            gcd = 0
            for a in u:
                gcd = math.gcd(gcd, a)
            new.append([a // gcd for a in u] if gcd > 1 else u)
        roots = new
        duals = [[_idot(row, v) for row in gram] for v in roots]
        t_prev = best
        count += 1
        if count > cap:
            raise IterationCap(f"more than {cap} wall crossings")


def reduce(
    x: Sequence, cone: ClippedCone, max_steps: int = 10_000, track: bool = False, seed: int = 0
) -> ReductionTrace:
    """Reflect ``x`` into the chamber closure.

    Each step reflects in the root with the largest q(e,x)^2 / s among those
    with q(e,x) < 0, lowest index on ties.  With ``track`` the crossing
    count is recorded before every step and at the end.
    """
    x = la.vec(x)
    if not member(cone.ambient, x, "plus"):
        raise NotInPlusCone("point is not in the plus-hull of the ambient cone")
    w = _Walls(cone)
    s = [-q for q in w.norms]
    start = x
    word = []
    crossings = []
    initial = crossing_count(x, cone, seed=seed)
    for _ in range(max_steps + 1):
        if track:
            crossings.append(crossing_count(x, cone, seed=seed))
        q = w.pairings(x)
        best = None
        for i, v in enumerate(q):
            if v < 0 and (best is None or v * v * s[best] > q[best] * q[best] * s[i]):
                best = i
        if best is None:
            return ReductionTrace(start, x, word, initial, crossings)
        x = _reflect(w.roots[best], w.duals[best], w.norms[best], x)
        word.append(best)
    raise IterationCap(f"no chamber point after {max_steps} reflections")


# --- word balls ---------------------------------------------------------------


def word_ball(generators: Sequence, length: int) -> list[tuple]:
    """Distinct products of at most ``length`` generators, identity first,
    in order of first appearance by word length."""
    gens = [tuple(tuple(x for x in row) for row in la.mat(g)) for g in generators]
    n = len(gens[0])
    ident = la.identity(n)
    seen = {ident: None}
    frontier = [ident]
    for _ in range(length):
        nxt = []
        for h in frontier:
            for g in gens:
                p = la.matmul(h, g)
                if p not in seen:
                    seen[p] = None
                    nxt.append(p)
        frontier = nxt
    return list(seen)


def reflection_ball(cone: ClippedCone, length: int) -> list[tuple]:
    return word_ball([reflection_matrix(r, cone.lattice) for r in cone.roots], length)


# --- Dirichlet domains ------------------------------------------------------


@dataclass
class DirichletDomain:
    base: tuple
    normals: list  # G (gamma a - a) for every element moving a
    cone: pc.PolyCone
    ambient: SymCone
    elements: int
    stabilizer: list  # indices of non-identity elements fixing a
    orbit_avoids_walls: bool | None = None

    def contains(self, x, mode: str = "interior") -> bool:
        """Membership in Pi intersected with the ambient plus-hull (closure)
        or ambient interior (interior)."""
        x = la.vec(x)
        if mode == "interior":
            return member(self.ambient, x, "interior") and all(la.dot(v, x) > 0 for v in self.normals)
        return member(self.ambient, x, "plus") and all(la.dot(v, x) >= 0 for v in self.normals)

    def to_json(self) -> dict:
        return {
            "base": [la.fmt(x) for x in self.base],
            "facets": [[scalar_to_json(x) for x in f] for f in self.cone.facets],
            "truncation": {"elements": self.elements},
            "stabilizer": list(self.stabilizer),
            "orbit_avoids_walls": self.orbit_avoids_walls,
        }


def dirichlet_domain(a: Sequence, elements: Sequence, cone: SymCone, roots: Sequence | None = None) -> DirichletDomain:
    """Polyhedral cone {x : q(x, g a - a) >= 0} over the supplied elements.

    Warns with StabilizerNontrivial when a non-identity element fixes ``a``.
    With ``roots``, also reports whether every image g a avoids every root
    hyperplane (checked over the supplied elements only).
    """
    a = la.vec(a)
    lat = cone.lattice
    n = lat.rank
    normals, stab = [], []
    ident = la.identity(n)
    for k, g in enumerate(elements):
        ga = la.matvec(la.mat(g), a)
        diff = la.vsub(ga, a)
        if not any(diff):
            if la.mat(g) != ident:
                stab.append(k)
            continue
        normals.append(tuple(la.primitive(lat.dual(diff))))
    normals = list(dict.fromkeys(normals))
    if stab:
        warnings.warn(f"{len(stab)} non-identity elements fix the base point", StabilizerNontrivial)
    poly = pc.dd_convert(facets=normals, dim=n)
    avoid = None
    if roots is not None:
        duals = [lat.dual(r.vector if hasattr(r, "vector") else r) for r in roots]
        avoid = all(la.dot(d, la.matvec(la.mat(g), a)) != 0 for g in elements for d in duals)
    return DirichletDomain(a, normals, poly, cone, len(elements), stab, avoid)


def _as_array(rows, bound: int) -> np.ndarray:
    # int64 when products cannot overflow, exact Python ints otherwise
    dtype = np.int64 if bound < 2**62 else object
    return np.array(rows, dtype=dtype)


def translate_disjointness(
    domain: DirichletDomain,
    translates: Sequence,
    points: Sequence[Sequence],
    domain_elements: Sequence | None = None,
) -> dict:
    """For each sample point x count the translates g(Pi) holding x in their
    interior, i.e. g^-1 x in the interior of Pi.

    ``domain_elements`` (the list Pi was cut with) lets the report state
    whether every quotient g'^-1 g of two translates belongs to it, which is
    what makes the truncated disjointness claim meaningful.
    """
    n = len(domain.base)
    facets = [tuple(int(x) for x in la.primitive(f)) for f in domain.cone.facets] if domain.cone.facets else []
    pts = []
    for p in points:
        v = la.vec(p)
        m = la.denominator_lcm(v)
        pts.append(tuple(int(x * m) for x in v))
    invs = []
    for g in translates:
        gi = la.inverse(la.mat(g))
        invs.append(tuple(tuple(int(x) for x in row) for row in gi))
    pmax = max((abs(x) for p in pts for x in p), default=1)
    gmax = max((abs(x) for g in invs for row in g for x in row), default=1)
    fmax = max((abs(x) for f in facets for x in f), default=1)
    bound = pmax * gmax * fmax * n * n + 1
    P = _as_array(pts, bound)
    F = _as_array(facets, bound).reshape(len(facets), n)
    counts = np.zeros(len(pts), dtype=np.int64)
    for gi in invs:
        Y = P @ _as_array(gi, bound).T
        if len(facets):
            inside = np.all((Y @ F.T) > 0, axis=1)
        else:
            inside = np.ones(len(pts), dtype=bool)
        counts += inside.astype(np.int64)
    covered = int(np.count_nonzero(counts))
    report = {
        "samples": len(pts),
        "translates": len(invs),
        "max_multiplicity": int(counts.max()) if len(pts) else 0,
        "covered_fraction": covered / len(pts) if pts else 0.0,
        "facets": len(facets),
    }
    if domain_elements is not None:
        elems = {tuple(tuple(Fraction(x) for x in row) for row in la.mat(e)) for e in domain_elements}
        tl = [la.mat(g) for g in translates]
        report["quotients_covered"] = all(
            la.matmul(la.inverse(b), a) in elems for a in tl for b in tl
        )
    return report


def _float_candidates(sym: SymCone, X: np.ndarray) -> np.ndarray:
    """Float prefilter with slack; exact membership decides afterwards."""
    from .symcone import HALFLINE, LORENTZ, psd_index

    g = np.array([[float(x) for x in row] for row in sym.lattice.gram])
    keep = np.ones(len(X), dtype=bool)
    for f in sym.factors:
        c = list(f.coords)
        part = X[:, c]
        scale = np.abs(part).max(axis=1) ** 2 + 1.0
        if f.kind == HALFLINE:
            keep &= part[:, 0] > -1e-9 * scale
        elif f.kind == LORENTZ:
            block = g[np.ix_(c, c)]
            h = np.array([float(x) for x in f.h])
            qv = np.einsum("si,ij,sj->s", part, block, part)
            qh = part @ block @ h
            keep &= (qv > -1e-9 * scale) & (qh > -1e-9 * scale)
        else:
            idx = psd_index(f.m)
            m = np.zeros((len(X), f.m, f.m))
            for k, (i, j) in enumerate(idx):
                m[:, i, j] = part[:, k]
                m[:, j, i] = part[:, k]
            keep &= np.linalg.eigvalsh(m)[:, 0] > -1e-9 * scale
    return keep


def sample_interior(sym: SymCone, base: Sequence, samples: int, seed: int = 0, spread: int = 4) -> list[tuple]:
    """Random rational points of the open ambient cone, drawn around
    multiples of ``base`` and kept by rejection (float prefilter, exact
    test)."""
    rng = np.random.default_rng(seed)
    base = la.vec(base)
    m = la.denominator_lcm(base)
    b = np.array([int(x * m) for x in base], dtype=np.int64)
    r = int(np.abs(b).max()) * spread
    n = len(b)
    out = []
    tried = 0
    while len(out) < samples:
        if tried > 200 * samples + 1000:
            raise IterationCap("rejection sampling found too few interior points")
        batch = max(64, 4 * (samples - len(out)))
        tried += batch
        t = rng.integers(1, 4, size=(batch, 1))
        num = t * b + rng.integers(-r, r + 1, size=(batch, n))
        den = rng.integers(1, 4, size=(batch, n))
        for k in np.flatnonzero(_float_candidates(sym, num / den)):
            v = tuple(Fraction(int(a), int(d)) for a, d in zip(num[k], den[k]))
            if member(sym, v, "interior"):
                out.append(v)
                if len(out) == samples:
                    break
    return out
