"""Descent of a clipped cone to the invariant subspace of a finite group."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from . import polycone as pc
from .clipping import (
    ClippedCone,
    Root,
    check_integrality,
    check_pairwise,
    member_clipped,
    reflection_matrix,
)
from .errors import (
    BlockStructureViolation,
    DegenerateB,
    NotIsometry,
    PreconditionFailure,
    PsdOrbitUnsupported,
)
from .lattice import (
    FiniteAction,
    QuadLattice,
    embed,
    invariant_coordinates,
    invariant_sublattice,
    reynolds,
)
from .qfield import scalar_to_json, sqrt_rational
from .symcone import (
    HALFLINE,
    LORENTZ,
    PSD,
    factor_permutation,
    invariant_hyperbolic_type,
    member_factor,
    psd_index,
    validate,
)

PLANE = "plane"


def orbit_sum(root, action: FiniteAction) -> tuple:
    """Sum of the distinct elements of the orbit G.e."""
    e = root.vector if isinstance(root, Root) else root
    out = [0] * len(e)
    for w in action.orbit(la.vec(e)):
        for i, x in enumerate(w):
            out[i] += x
    return tuple(int(x) for x in out)


def descend_walls(walls: Sequence[Sequence], action: FiniteAction, lattice: QuadLattice) -> list[tuple]:
    """Full-group sums S = sum_g g.w, kept when q(w, S) < 0, deduplicated."""
    out: dict[tuple, None] = {}
    for w in walls:
        w = la.vec(w)
        s = [Fraction(0)] * len(w)
        for g in action.elements:
            for i, x in enumerate(action.apply(g, w)):
                s[i] += x
        s = tuple(int(x) for x in s)
        if lattice.pair(w, s) < 0 and s not in out:
            out[s] = None
    return list(out)


# --- the descended ambient cone ---------------------------------------------


@dataclass(frozen=True)
class InvariantPart:
    """One summand of the descended ambient cone, on invariant coordinates
    ``coords``.

    ``halfline``: the coordinate is positive.  ``lorentz``: Lorentz cone of
    the restricted form with witness ``h`` (local).  ``plane``: the 2-dim
    polyhedral cone ``cone`` (local).  ``psd``: membership of the embedded
    vector in the fixed PSD factor ``factors[0]``.
    """

    kind: str
    coords: tuple
    orbit: int
    factors: tuple
    h: tuple | None = None
    cone: pc.PolyCone | None = None
    full: pc.PolyCone | None = None  # plane only: the unclipped invariant cone

    def to_json(self) -> dict:
        out = {"kind": self.kind, "coords": list(self.coords), "orbit": self.orbit}
        if self.h is not None:
            out["h"] = [la.fmt(x) for x in self.h]
        if self.cone is not None:
            out["rays"] = [[scalar_to_json(x) for x in r] for r in self.cone.rays]
        return out


@dataclass(frozen=True)
class DescendedCone:
    """Clipped cone on V^G written in the invariant lattice basis."""

    lattice: QuadLattice
    basis: tuple  # ambient vectors
    parts: tuple
    roots: tuple
    witness: tuple
    source: object = field(default=None, compare=False, repr=False)  # ambient SymCone

    @property
    def rank(self) -> int:
        return len(self.basis)

    def ambient_member(self, y, mode: str = "interior") -> bool:
        return all(self._part_member(p, y, mode) for p in self.parts)

    def _part_member(self, p: InvariantPart, y, mode: str) -> bool:
        loc = [y[c] for c in p.coords]
        strict = mode == "interior"
        if p.kind == HALFLINE:
            return loc[0] > 0 if strict else loc[0] >= 0
        if p.kind == LORENTZ:
            g = la.submatrix(self.lattice.gram, p.coords, p.coords)
            qv = la.dot(loc, la.matvec(g, loc))
            qh = la.dot(p.h, la.matvec(g, loc))
            return (qv > 0 and qh > 0) if strict else (qv >= 0 and qh >= 0)
        if p.kind == PLANE:
            return pc.contains(p.cone, loc, mode)
        return member_factor(self.source, p.factors[0], embed(self.basis, y), mode)

    def member(self, y, mode: str = "interior") -> bool:
        if not self.ambient_member(y, mode):
            return False
        if mode == "interior":
            return all(self.lattice.pair(r.vector, y) > 0 for r in self.roots)
        return all(self.lattice.pair(r.vector, y) >= 0 for r in self.roots)


# --- reports ----------------------------------------------------------------


@dataclass
class OrbitInfo:
    factors: tuple
    kind: str
    d: int
    type: str
    coords: tuple  # invariant coordinates of this orbit

    def to_json(self) -> dict:
        return {
            "factors": list(self.factors),
            "kind": self.kind,
            "d": self.d,
            "type": self.type,
            "invariant_coords": list(self.coords),
        }


@dataclass
class LiftResult:
    word: list
    matrix: tuple
    blocks: list
    checks: dict

    def to_json(self) -> dict:
        return {
            "word": list(self.word),
            "blocks": [list(b) for b in self.blocks],
            "matrix": _mat_json(self.matrix),
            "checks": dict(self.checks),
        }


@dataclass
class DescentReport:
    invariant_basis: list
    orbit_table: list
    J1: list
    J2: list
    J3: list  # orbits with d >= 3
    root_orbits: list
    I_star: list
    epsilons: dict
    B: DescendedCone
    taus: dict
    lifts: dict
    checks: dict
    sampling: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "invariant_basis": [list(b) for b in self.invariant_basis],
            "orbit_table": [o.to_json() for o in self.orbit_table],
            "J1": self.J1,
            "J2": self.J2,
            "J_ge3": self.J3,
            "root_orbits": [list(o) for o in self.root_orbits],
            "I_star": self.I_star,
            "epsilons": {
                str(k): {"ambient": list(v["ambient"]), "invariant": [la.fmt(x) for x in v["invariant"]]}
                for k, v in sorted(self.epsilons.items())
            },
            "B": {
                "gram": _mat_json(self.B.lattice.gram),
                "parts": [p.to_json() for p in self.B.parts],
                "roots": [r.to_json() for r in self.B.roots],
                "witness": [la.fmt(x) for x in self.B.witness],
            },
            "taus": {str(k): _mat_json(v) for k, v in sorted(self.taus.items())},
            "lifts": {str(k): v.to_json() for k, v in sorted(self.lifts.items())},
            "checks": dict(self.checks),
            "sampling": dict(self.sampling),
            "ok": self.ok,
        }


def _mat_json(m) -> list:
    return [[la.fmt(x) for x in row] for row in m]


# --- centralizer lifts ------------------------------------------------------


def centralizer_lift(
    orbit: Sequence[Root],
    action: FiniteAction,
    lattice: QuadLattice,
    indices: Sequence[int] | None = None,
    basis: Sequence | None = None,
    tau=None,
) -> LiftResult:
    """Product of commuting ambient reflections over the blocks of a root
    orbit.  Blocks are singletons, or pairs with q(e, e') = s/2.

    With ``basis`` and ``tau`` the restriction to V^G is compared with tau.
    """
    vecs = [la.vec(r.vector) for r in orbit]
    idx = list(indices) if indices is not None else list(range(len(vecs)))
    n = lattice.rank
    nbrs = [[k for k in range(len(vecs)) if k != i and lattice.pair(vecs[i], vecs[k]) > 0] for i in range(len(vecs))]
    degs = {len(x) for x in nbrs}
    if degs not in ({0}, {1}):
        raise BlockStructureViolation(f"positive-pairing degrees {sorted(degs)} on the orbit")
    blocks, done = [], set()
    for i in range(len(vecs)):
        if i in done:
            continue
        if not nbrs[i]:
            blocks.append((i,))
            done.add(i)
            continue
        k = nbrs[i][0]
        if nbrs[k] != [i]:
            raise BlockStructureViolation("positive pairings do not form a matching")
        s = -lattice.norm(vecs[i])
        if lattice.pair(vecs[i], vecs[k]) != s / 2:
            raise BlockStructureViolation(f"paired roots {idx[i]}, {idx[k]} have pairing other than s/2")
        blocks.append((i, k))
        done.update((i, k))
    sig = [reflection_matrix(v, lattice) for v in vecs]
    word, mats = [], []
    for b in blocks:
        if len(b) == 1:
            word.append(idx[b[0]])
            mats.append(sig[b[0]])
        else:
            i, k = b
            word.extend([idx[i], idx[k], idx[i]])
            mats.append(la.matmul(la.matmul(sig[i], sig[k]), sig[i]))
    m = la.identity(n)
    for bv in mats:
        m = la.matmul(m, bv)
    checks = {
        "blocks_commute": all(
            la.matmul(a, b) == la.matmul(b, a) for x, a in enumerate(mats) for b in mats[x + 1:]
        ),
        "commutes_with_G": all(la.matmul(m, la.mat(g)) == la.matmul(la.mat(g), m) for g in action.elements),
        "integral": la.is_integral(m),
    }
    if basis is not None and tau is not None:
        t = la.mat(tau)
        checks["restricts_to_tau"] = all(
            la.matvec(m, b) == embed(basis, [t[r][a] for r in range(len(basis))])
            for a, b in enumerate(basis)
        )
    return LiftResult(word, m, [[idx[i] for i in b] for b in blocks], checks)


# --- preconditions ----------------------------------------------------------


def _root_permutations(cone: ClippedCone, action: FiniteAction) -> list[list[int]]:
    where = {tuple(r.vector): i for i, r in enumerate(cone.roots)}
    perms = []
    for g in action.elements:
        p = []
        for r in cone.roots:
            img = tuple(int(x) for x in action.apply(g, r.vector))
            if img not in where:
                raise PreconditionFailure("root set G-stable", f"image {list(img)} of root {list(r.vector)} is not a root")
            p.append(where[img])
        perms.append(p)
    return perms


def _check_preconditions(cone: ClippedCone, action: FiniteAction) -> list[list[int]]:
    sym = cone.ambient
    if action.dim != sym.rank:
        raise PreconditionFailure("group acts on the lattice", f"group of degree {action.dim}, lattice rank {sym.rank}")
    rep = validate(sym)
    if not rep.ok:
        raise PreconditionFailure("ambient cone valid", rep.failures[0]["message"])
    try:
        action.check_isometry(sym.lattice)
    except NotIsometry as exc:
        raise PreconditionFailure("isometry", str(exc)) from exc
    n = sym.rank
    perms = []
    for g in action.elements:
        perm = factor_permutation(sym, g)
        if perm is None:
            raise PreconditionFailure("factor decomposition preserved", f"element {action.index(g)} mixes factors")
        for i, f in enumerate(sym.factors):
            j = perm[i]
            f2 = sym.factors[j]
            if f.kind == PSD:
                if j != i:
                    raise PsdOrbitUnsupported(f"psd factor {i} is moved to factor {j}")
                unit = [0] * n
                for c, (a, b) in zip(f.coords, psd_index(f.m)):
                    unit[c] = int(a == b)
                if not member_factor(sym, i, action.apply(g, unit), "interior"):
                    raise PreconditionFailure("psd cone preserved", f"element {action.index(g)} on factor {i}")
            elif f.kind == HALFLINE:
                img = action.apply(g, [int(k == f.coords[0]) for k in range(n)])
                if img[f2.coords[0]] <= 0:
                    raise PreconditionFailure("halfline orientation preserved", f"factor {i}")
            else:
                img = action.apply(g, f.ambient_h(n))
                if sym.lattice.pair(img, f2.ambient_h(n)) <= 0:
                    raise PreconditionFailure("Lorentz components preserved", f"factor {i} sent to the past cone of {j}")
        perms.append(perm)
    for g in action.elements:
        if not member_clipped(cone, action.apply(g, cone.witness), "interior"):
            raise PreconditionFailure("clipped interior preserved", f"element {action.index(g)} moves the witness out")
    return perms


def _orbits(perms: list[list[int]], size: int) -> list[list[int]]:
    seen, out = set(), []
    for i in range(size):
        if i in seen:
            continue
        orb = sorted({p[i] for p in perms})
        seen.update(orb)
        out.append(orb)
    return out


# --- the plane pieces -------------------------------------------------------


def _isotropic_rays(g, h) -> list[tuple]:
    """The two isotropic rays of a 2x2 form of signature (1,1), oriented
    into the future of ``h``."""
    a, b, c = g[0][0], g[0][1], g[1][1]
    disc = b * b - a * c
    if a != 0:
        r = sqrt_rational(disc)
        rays = [((-b + r) / a, Fraction(1)), ((-b - r) / a, Fraction(1))]
    else:
        rays = [(Fraction(1), Fraction(0)), (c, -2 * b)]
    out = []
    for ray in rays:
        qh = h[0] * (g[0][0] * ray[0] + g[0][1] * ray[1]) + h[1] * (g[1][0] * ray[0] + g[1][1] * ray[1])
        out.append(tuple(-x for x in ray) if qh < 0 else tuple(ray))
    return out


# --- main pipeline ----------------------------------------------------------


def descend(cone: ClippedCone, action: FiniteAction, samples: int = 1000, seed: int = 0) -> DescentReport:
    sym = cone.ambient
    lat = sym.lattice
    n = sym.rank
    perms = _check_preconditions(cone, action)
    rperms = _root_permutations(cone, action)

    # (1)-(2) factor orbits, invariant basis, types
    forbits = _orbits(perms, len(sym.factors))
    basis: list[tuple] = []
    table: list[OrbitInfo] = []
    J1, J2, J3 = [], [], []
    orbit_of_factor = {}
    h_orbit = {}
    for k, orb in enumerate(forbits):
        for i in orb:
            orbit_of_factor[i] = k
        kind = sym.factors[orb[0]].kind
        coords = sorted(c for i in orb for c in sym.factors[i].coords)
        if kind == LORENTZ:
            it = invariant_hyperbolic_type(sym, orb, action)
            local = list(it.basis)
            typ = it.kind
            hs = [0] * n
            for g in action.elements:
                for i in orb:
                    hs = la.vadd(hs, action.apply(g, sym.factors[i].ambient_h(n)))
            h_orbit[k] = hs
            if it.dim == 1:
                if lat.pair(local[0], hs) < 0:
                    local = [tuple(-x for x in local[0])]
        else:
            sub = action.restrict(coords)
            local = []
            for b in invariant_sublattice(sub):
                v = [0] * n
                for c, x in zip(coords, b):
                    v[c] = x
                local.append(tuple(v))
            if kind == HALFLINE and sum(local[0]) < 0:
                local = [tuple(-x for x in local[0])]
            typ = "Halfline" if kind == HALFLINE else "PsdInvariant"
        d = len(local)
        inv_coords = tuple(range(len(basis), len(basis) + d))
        basis.extend(tuple(int(x) for x in b) for b in local)
        table.append(OrbitInfo(tuple(orb), kind, d, typ, inv_coords))
        if kind == LORENTZ:
            (J1 if d == 1 else J2 if d == 2 else J3).append(k)
    ginv = lat.restrict(basis)

    def coords_of(v):
        return invariant_coordinates(basis, v)

    # (3) root orbits and I*
    rorbits = _orbits(rperms, len(cone.roots))
    eps, istar = {}, []
    for t, orb in enumerate(rorbits):
        e = cone.roots[orb[0]]
        s = orbit_sum(e, action)
        eps[t] = {"ambient": s, "invariant": coords_of(s)}
        k = orbit_of_factor[e.factor] if e.factor is not None else None
        if k is not None and table[k].d >= 3 and lat.norm(s) < 0:
            istar.append(t)

    # witness of the descended cone: the group average of c
    pc_amb = la.matvec(reynolds(action), cone.witness)
    wy = coords_of(pc_amb)

    # (4) the corrected ambient cone
    parts = []
    for k, info in enumerate(table):
        cs = info.coords
        if info.kind == HALFLINE or (info.kind == LORENTZ and info.d == 1):
            parts.append(InvariantPart(HALFLINE, cs, k, info.factors))
        elif info.kind == PSD:
            parts.append(InvariantPart(PSD, cs, k, info.factors))
        elif info.d >= 3:
            hl = [coords_of(h_orbit[k])[c] for c in cs]
            parts.append(InvariantPart(LORENTZ, cs, k, info.factors, h=tuple(la.primitive(hl))))
        else:
            gl = la.submatrix(ginv.gram, cs, cs)
            hl = [coords_of(h_orbit[k])[c] for c in cs]
            rays = _isotropic_rays(gl, hl)
            full = pc.dd_convert(rays=rays)
            normals = list(full.facets)
            for t, orb in enumerate(rorbits):
                if orbit_of_factor.get(cone.roots[orb[0]].factor) == k:
                    ey = eps[t]["invariant"]
                    normals.append(la.matvec(gl, [ey[c] for c in cs]))
            clipped = pc.dd_convert(facets=normals, dim=2)
            if clipped.dim != 2:
                raise DegenerateB(f"clipping orbit {k} leaves a cone of dimension {clipped.dim}")
            parts.append(InvariantPart(PLANE, cs, k, info.factors, cone=clipped, full=full))

    # (5) descended roots
    droots = []
    for t in istar:
        v = la.primitive(eps[t]["invariant"])
        if ginv.pair(v, wy) < 0:
            v = tuple(-x for x in v)
        part = next(
            (i for i, p in enumerate(parts) if set(c for c, x in enumerate(v) if x) <= set(p.coords)), None
        )
        droots.append(Root(v, part, -ginv.norm(v)))
    B = DescendedCone(ginv, tuple(basis), tuple(parts), tuple(droots), wy, sym)

    checks: dict[str, bool] = {}
    # q(e_i, eps_i) in {-s_i, -s_i/2}
    checks["epsilon_pairing"] = all(
        lat.pair(cone.roots[i].vector, eps[t]["ambient"]) in (-cone.roots[i].s, -cone.roots[i].s / 2)
        for t in istar
        for i in rorbits[t]
    )
    checks["epsilon_invariant"] = all(
        all(x.denominator == 1 for x in eps[t]["invariant"]) for t in eps
    )

    # (6) re-validation on the invariant lattice
    checks["descended_witness"] = B.member(wy, "interior")
    checks["descended_assumption_i"] = all(
        r.factor is not None and parts[r.factor].kind == LORENTZ and ginv.norm(r.vector) < 0 for r in droots
    )
    checks["descended_assumption_ii"] = all(bool(check_integrality(r, ginv)) for r in droots)
    checks["descended_assumption_iii"] = check_pairwise(droots, ginv).ok

    # (7) tau matrices
    taus = {}
    tau_ok = True
    for t in istar:
        e = cone.roots[rorbits[t][0]].vector
        s_amb = eps[t]["ambient"]
        ey = eps[t]["invariant"]
        denom = lat.pair(e, s_amb)
        m = len(basis)
        cols = [lat.pair(e, b) for b in basis]
        tau = tuple(
            tuple(Fraction(int(r == a)) - 2 * cols[a] / denom * ey[r] for a in range(m)) for r in range(m)
        )
        taus[t] = tau
        tau_ok &= la.is_integral(tau)
        tau_ok &= la.matmul(tau, tau) == la.identity(m)
        tau_ok &= la.matmul(la.matmul(la.transpose(tau), ginv.gram), tau) == ginv.gram
        tau_ok &= ginv.pair(ey, wy) > 0
    checks["tau_integral_involutive_isometric"] = bool(tau_ok)

    # (8) centralizer lifts
    lifts = {}
    for t in istar:
        orb = rorbits[t]
        lifts[t] = centralizer_lift([cone.roots[i] for i in orb], action, lat, orb, basis, taus[t])
    checks["lifts"] = all(all(l.checks.values()) for l in lifts.values())

    # (9) geometric equality, compatibility of round and simplicial parts
    sampling = _sampled_equality(cone, B, samples, seed)
    checks["sampled_equality"] = sampling["disagreements"] == 0
    if all(f.kind == HALFLINE for f in sym.factors):
        checks["exact_equality"] = _exact_equality(sym, basis, len(basis))
        sampling["exact"] = True
    checks["round_part"] = _round_compatible(B, sym, table, samples, seed)
    checks["simplicial_rules"] = _simplicial_rules(B)

    return DescentReport(
        [tuple(b) for b in basis], table, J1, J2, J3, rorbits, istar, eps, B, taus, lifts, checks, sampling
    )


def _sample_points(B: DescendedCone, samples: int, seed: int) -> list[tuple]:
    rng = random.Random(seed)
    base = la.primitive(B.witness)
    bound = max(abs(x) for x in base) + 1
    pts = []
    for k in range(samples):
        t = rng.choice((1, 2, 3))
        if k % 4 == 3:
            y = [Fraction(rng.randint(-bound, bound), rng.randint(1, 3)) for _ in base]
        else:
            y = [t * b + Fraction(rng.randint(-bound, bound), rng.randint(1, 4)) for b in base]
        pts.append(tuple(y))
    return pts


def _sampled_equality(cone: ClippedCone, B: DescendedCone, samples: int, seed: int) -> dict:
    dis, inside = 0, 0
    first = None
    for y in _sample_points(B, samples, seed):
        lhs = member_clipped(cone, embed(B.basis, y), "interior")
        rhs = B.member(y, "interior")
        inside += lhs
        if lhs != rhs:
            dis += 1
            if first is None:
                first = [la.fmt(x) for x in y]
    out = {"samples": samples, "seed": seed, "inside": inside, "disagreements": dis, "exact": False}
    if first is not None:
        out["first_disagreement"] = first
    return out


def _exact_equality(sym, basis, m) -> bool:
    # A^G in invariant coordinates: x_i = sum_a y_a basis[a][i] >= 0
    facets = [tuple(b[i] for b in basis) for i in range(sym.rank)]
    lhs = pc.dd_convert(facets=facets, dim=m)
    return pc.same_cone(lhs, pc.orthant(m))


def _round_compatible(B: DescendedCone, sym, table, samples: int, seed: int) -> bool:
    rng = random.Random(seed + 1)
    base = la.primitive(B.witness)
    bound = max(abs(x) for x in base) + 1
    for p in B.parts:
        if p.kind not in (LORENTZ, PSD):
            continue
        for _ in range(max(1, samples // 4)):
            y = [Fraction(0)] * B.rank
            for c in p.coords:
                y[c] = base[c] * rng.choice((1, 2)) + Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
            x = embed(B.basis, y)
            lhs = all(member_factor(sym, i, x, "interior") for i in table[p.orbit].factors)
            if lhs != B._part_member(p, y, "interior"):
                return False
    return True


def _simplicial_rules(B: DescendedCone) -> bool:
    sigma = xi = None
    for p in B.parts:
        if p.kind == HALFLINE:
            s = x = pc.orthant(1)
        elif p.kind == PLANE:
            s, x = p.full, p.cone
        else:
            continue
        sigma = s if sigma is None else pc.direct_sum(sigma, s)
        xi = x if xi is None else pc.direct_sum(xi, x)
    if sigma is None:
        return True
    return pc.rules(sigma, xi)
