"""Exact polyhedral cones: double description, membership, direct sums and
the ``rules`` preorder on simplicial cones.

A cone is stored in both forms.  The H-form is a list of inequality normals
``f`` (meaning <f, x> >= 0) plus a list of equation normals (<f, x> = 0);
the V-form is a list of extreme rays plus a lineality basis.  Scalars are
Fractions or, for cones with quadratic-irrational rays, QuadraticScalars of a
single field.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .errors import DegenerateInput, NotSimplicial, Unsupported, DimensionMismatch
from .qfield import QuadraticScalar, is_rational_scalar


def _is_rational_vector(v) -> bool:
    return all(is_rational_scalar(x) for x in v)


def _to_rational(v) -> tuple:
    return tuple(x.a if isinstance(x, QuadraticScalar) else Fraction(x) for x in v)


def normalize(v: Sequence) -> tuple:
    """Canonical positive representative of the ray through ``v``.

    Rational vectors become primitive integer vectors; irrational ones are
    divided by the absolute value of their first nonzero coordinate.
    """
    if _is_rational_vector(v):
        return tuple(Fraction(x) for x in la.primitive(_to_rational(v)))
    lead = next(x for x in v if x != 0)
    s = abs(lead)
    out = []
    for x in v:
        y = x / s
        out.append(y.a if isinstance(y, QuadraticScalar) and y.is_rational else y)
    return tuple(out)


def proportional_to_rational(v: Sequence) -> bool:
    """True if the line through ``v`` contains a nonzero rational vector."""
    if not any(x != 0 for x in v):
        return True
    lead = next(x for x in v if x != 0)
    return all(is_rational_scalar(x / lead) for x in v)


def _sort_key(v):
    return tuple((float(x), str(x)) for x in v)


def _canonical_set(vectors) -> tuple:
    out = {}
    for v in vectors:
        if any(x != 0 for x in v):
            n = normalize(v)
            out[n] = None
    return tuple(sorted(out, key=_sort_key))


def _lineality_basis(vectors, n) -> tuple:
    """Canonical basis of a linear subspace (rref rows)."""
    vectors = [v for v in vectors if any(x != 0 for x in v)]
    if not vectors:
        return ()
    r, piv = la.rref(tuple(tuple(v) for v in vectors))
    return tuple(tuple(row) for row in r[: len(piv)])


def double_description(constraints: Sequence[Sequence], n: int):
    """Generators of {x in R^n : <a, x> >= 0 for a in constraints}.

    Incremental double description with the combinatorial adjacency test.
    Returns (rays, lineality_basis); rays are extreme rays of the pointed
    part (taken modulo the lineality space).
    """
    zero = Fraction(0)
    one = Fraction(1)
    lin = [tuple(one if i == j else zero for i in range(n)) for j in range(n)]
    rays: list[tuple] = []
    processed: list[tuple] = []
    # zero sets: for each ray, the indices of processed constraints it makes tight
    zsets: list[frozenset] = []
    for a in constraints:
        a = tuple(a)
        if not any(x != 0 for x in a):
            continue
        vals = [la.dot(a, l) for l in lin]
        k = next((i for i, v in enumerate(vals) if v != 0), None)
        idx = len(processed)
        processed.append(a)
        if k is not None:
            l0 = lin[k]
            v0 = vals[k]
            if v0 < 0:
                l0 = tuple(-x for x in l0)
                v0 = -v0
            new_lin = []
            for i, l in enumerate(lin):
                if i == k:
                    continue
                c = vals[i] / v0
                new_lin.append(tuple(x - c * y for x, y in zip(l, l0)) if c != 0 else l)
            new_rays = []
            new_z = []
            for r, z in zip(rays, zsets):
                c = la.dot(a, r) / v0
                new_rays.append(tuple(x - c * y for x, y in zip(r, l0)) if c != 0 else r)
                new_z.append(z | {idx})
            # the former lineality direction becomes a ray, tight on all old constraints
            new_rays.append(l0)
            new_z.append(frozenset(range(idx)))
            lin, rays, zsets = new_lin, new_rays, new_z
            continue
        pos, neg, zer = [], [], []
        for i, r in enumerate(rays):
            v = la.dot(a, r)
            (pos if v > 0 else neg if v < 0 else zer).append((i, v))
        if not neg:
            zsets = [z | {idx} if any(i == j for j, _ in zer) else z for i, z in enumerate(zsets)]
            continue
        new_rays = [rays[i] for i, _ in pos] + [rays[i] for i, _ in zer]
        new_z = [zsets[i] for i, _ in pos] + [zsets[i] | {idx} for i, _ in zer]
        for ip, vp in pos:
            for jn, vn in neg:
                common = zsets[ip] & zsets[jn]
                # adjacency: no third ray's zero set contains the common one
                adjacent = True
                for t, zt in enumerate(zsets):
                    if t != ip and t != jn and common <= zt:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                r = tuple(vp * x - vn * y for x, y in zip(rays[jn], rays[ip]))
                new_rays.append(r)
                new_z.append(common | {idx})
        rays, zsets = new_rays, new_z
    return rays, lin


@dataclass(frozen=True)
class PolyCone:
    """Closed polyhedral cone in both representations (see module doc)."""

    ambient_dim: int
    rays: tuple
    lineality: tuple
    facets: tuple
    equations: tuple

    @property
    def generators(self) -> tuple:
        """Rays followed by +- lineality directions."""
        out = list(self.rays)
        for l in self.lineality:
            out.append(l)
            out.append(tuple(-x for x in l))
        return tuple(out)

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_simplicial(self) -> bool:
        return self.is_pointed and len(self.rays) == self.dim

    @property
    def is_rational(self) -> bool:
        return all(_is_rational_vector(v) for v in self.rays + self.lineality)

    def contains(self, v, mode: str = "closure") -> bool:
        return contains(self, v, mode)


def _from_hrep(ineqs, eqs, n, irredundant: bool = False) -> PolyCone:
    cons = list(ineqs)
    for e in eqs:
        cons.append(tuple(e))
        cons.append(tuple(-x for x in e))
    rays, lin = double_description(cons, n)
    lin_b = _lineality_basis(lin, n)
    # rays are only defined modulo lineality; project onto its complement
    rays = [_reduce_mod(r, lin_b) for r in rays]
    rays = _canonical_set(rays)
    if irredundant:
        return PolyCone(n, rays, lin_b, _canonical_set(ineqs), _canonical_set(eqs))
    # facets: dual cone generators
    gens = list(rays) + list(lin_b) + [tuple(-x for x in l) for l in lin_b]
    return _assemble(n, rays, lin_b, gens)


def _reduce_mod(r, lin_b):
    if not lin_b:
        return r
    # subtract the component along the lineality rref basis (pivot elimination)
    r = list(r)
    for row in lin_b:
        p = next(i for i, x in enumerate(row) if x != 0)
        c = r[p] / row[p]
        if c != 0:
            r = [x - c * y for x, y in zip(r, row)]
    return tuple(r)


def _assemble(n, rays, lin_b, gens) -> PolyCone:
    drays, dlin = double_description(gens, n)
    dlin_b = _lineality_basis(dlin, n)
    dfacets = _canonical_set(_reduce_mod(r, dlin_b) for r in drays)
    eqs = _canonical_set(dlin_b)
    return PolyCone(n, tuple(rays), tuple(lin_b), tuple(dfacets), tuple(eqs))


def dd_convert(*, rays=None, facets=None, equations=(), lineality=(), dim: int | None = None) -> PolyCone:
    """Build a PolyCone from generators (``rays`` + ``lineality``) or from an
    H-description (``facets`` + ``equations``)."""
    if (rays is None) == (facets is None):
        raise ValueError("pass exactly one of rays= or facets=")
    if rays is not None:
        vecs = [tuple(r) for r in rays] + [tuple(l) for l in lineality]
        if dim is None:
            if not vecs:
                raise DegenerateInput("cannot infer dimension from an empty ray list")
            dim = len(vecs[0])
        if dim < 1:
            raise DegenerateInput("ambient dimension must be >= 1")
        if any(len(v) != dim for v in vecs):
            raise DimensionMismatch("rays of different lengths")
        if not any(any(x != 0 for x in v) for v in vecs):
            raise DegenerateInput("all generators are zero")
        gens = vecs + [tuple(-x for x in l) for l in lineality]
        # facets of cone(gens) = extreme rays of its dual; round-trip for an
        # irredundant generator list
        drays, dlin = double_description(gens, dim)
        dlin_b = _lineality_basis(dlin, dim)
        fac = _canonical_set(_reduce_mod(r, dlin_b) for r in drays)
        return _from_hrep(fac, dlin_b, dim, irredundant=True)
    rows = [tuple(f) for f in facets]
    eqs = [tuple(e) for e in equations]
    if dim is None:
        allv = rows + eqs
        if not allv:
            raise DegenerateInput("cannot infer dimension from an empty facet list")
        dim = len(allv[0])
    if dim < 1:
        raise DegenerateInput("ambient dimension must be >= 1")
    if any(len(v) != dim for v in rows + eqs):
        raise DimensionMismatch("facets of different lengths")
    return _from_hrep(rows, eqs, dim)


def contains(cone: PolyCone, v: Sequence, mode: str = "closure") -> bool:
    """Membership of ``v`` in the cone.

    ``closure``: all facet forms >= 0 and equations vanish.
    ``interior``: topological interior (False for lower-dimensional cones).
    ``plus``: convex hull of the rational points of the closure; equal to the
    closure for rational cones.
    """
    if len(v) != cone.ambient_dim:
        raise DimensionMismatch(f"vector of length {len(v)} in R^{cone.ambient_dim}")
    if mode == "interior":
        if not cone.is_full_dimensional:
            return False
        return all(la.dot(f, v) > 0 for f in cone.facets)
    if mode not in ("closure", "plus"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "plus" and not cone.is_rational:
        raise Unsupported("plus-hull membership is only defined for rational cones here")
    if any(la.dot(e, v) != 0 for e in cone.equations):
        return False
    return all(la.dot(f, v) >= 0 for f in cone.facets)


def direct_sum(a: PolyCone, b: PolyCone) -> PolyCone:
    na, nb = a.ambient_dim, b.ambient_dim
    z = Fraction(0)
    rays = [tuple(r) + (z,) * nb for r in a.rays] + [(z,) * na + tuple(r) for r in b.rays]
    lin = [tuple(l) + (z,) * nb for l in a.lineality] + [(z,) * na + tuple(l) for l in b.lineality]
    if not rays and not lin:
        return dd_convert(facets=[], dim=na + nb, equations=[
            tuple(Fraction(int(i == j)) for i in range(na + nb)) for j in range(na + nb)
        ])
    return dd_convert(rays=rays, lineality=lin, dim=na + nb)


def same_cone(a: PolyCone, b: PolyCone) -> bool:
    """Exact equality of two cones (mutual containment of generators)."""
    if a.ambient_dim != b.ambient_dim:
        return False
    return all(contains(b, g) for g in a.generators) and all(contains(a, g) for g in b.generators)


def _span_rank(vectors) -> int:
    vectors = [tuple(v) for v in vectors]
    return la.rank(tuple(vectors)) if vectors else 0


def rules(sigma: PolyCone, xi: PolyCone) -> bool:
    """Whether the simplicial cone ``sigma`` rules the simplicial cone ``xi``.

    (1) every extremal ray of ``xi`` not proportional to a rational vector is
    an extremal ray of ``sigma``; (2) the span of the rational extremal rays
    of ``xi`` is spanned by a subset of the extremal rays of ``sigma``.
    """
    for c, name in ((sigma, "sigma"), (xi, "xi")):
        if not c.is_simplicial:
            raise NotSimplicial(f"{name} is not simplicial")
    if sigma.ambient_dim != xi.ambient_dim:
        raise DimensionMismatch("cones live in different spaces")
    s_rays = [normalize(r) for r in sigma.rays]
    irr = [r for r in xi.rays if not proportional_to_rational(r)]
    rat = [r for r in xi.rays if proportional_to_rational(r)]
    if any(normalize(r) not in s_rays for r in irr):
        return False
    k = _span_rank(rat)
    # sigma's rays are independent, so the only candidate subset is the set
    # of sigma-rays lying in span(rat)
    inside = [s for s in sigma.rays if _span_rank(rat + [s]) == k]
    return len(inside) == k


def orthant(n: int) -> PolyCone:
    e = [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    return PolyCone(n, tuple(e), (), tuple(e), ())


def simplicial_cone(rays: Sequence[Sequence]) -> PolyCone:
    """Simplicial cone from independent rays (any scalar field), without
    running double description."""
    rays = [tuple(r) for r in rays]
    if not rays:
        raise DegenerateInput("need at least one ray")
    n = len(rays[0])
    k = _span_rank(rays)
    if k != len(rays):
        raise NotSimplicial("rays are linearly dependent")
    return dd_convert(rays=rays, dim=n)
