"""Self-dual homogeneous cones assembled from halfline, Lorentz and real PSD
factors on disjoint coordinate blocks of a lattice."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .errors import DimensionMismatch, PreconditionFailure, SignatureAnomaly, Unsupported
from .lattice import FiniteAction, QuadLattice, invariant_sublattice
from .polycone import proportional_to_rational

HALFLINE = "halfline"
LORENTZ = "lorentz"
PSD = "psd"
KINDS = (HALFLINE, LORENTZ, PSD)


def psd_index(m: int) -> list[tuple[int, int]]:
    """Matrix positions (i, j), i <= j, in the coordinate order used by PSD
    factors: upper triangle, row-major."""
    return [(i, j) for i in range(m) for j in range(i, m)]


def vector_to_symmetric(v: Sequence, m: int) -> tuple:
    x = [[0] * m for _ in range(m)]
    for val, (i, j) in zip(v, psd_index(m)):
        x[i][j] = x[j][i] = val
    return tuple(tuple(r) for r in x)


def symmetric_to_vector(x: Sequence[Sequence]) -> tuple:
    return tuple(x[i][j] for i, j in psd_index(len(x)))


@dataclass(frozen=True)
class Factor:
    """One indecomposable summand.

    ``h`` (Lorentz only) is given in factor-local coordinates, i.e. indexed
    like ``coords``.
    """

    kind: str
    coords: tuple
    h: tuple | None = None
    m: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown factor kind {self.kind!r}")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if self.h is not None:
            object.__setattr__(self, "h", la.vec(self.h))
        if self.kind == PSD and self.m is None:
            raise ValueError("psd factor needs its matrix size m")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def ambient_h(self, n: int) -> tuple:
        """The Lorentz witness embedded in Z^n."""
        out = [Fraction(0)] * n
        for c, x in zip(self.coords, self.h):
            out[c] = x
        return tuple(out)


@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, check: str, factor: int | None, message: str) -> None:
        self.failures.append({"check": check, "factor": factor, "message": message})

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures)}


@dataclass(frozen=True)
class SymCone:
    lattice: QuadLattice
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def factor_of(self, coord: int) -> int:
        for i, f in enumerate(self.factors):
            if coord in f.coords:
                return i
        raise KeyError(coord)

    def restrict(self, factor_indices: Sequence[int]) -> tuple["SymCone", list[int]]:
        """Sub-sum on the chosen factors, re-indexed to its own coordinates.

        Returns the cone and the ambient coordinates it lives on.
        """
        coords = [c for i in factor_indices for c in self.factors[i].coords]
        where = {c: k for k, c in enumerate(coords)}
        sub = QuadLattice(la.submatrix(self.lattice.gram, coords, coords))
        facs = [
            Factor(f.kind, tuple(where[c] for c in f.coords), f.h, f.m)
            for f in (self.factors[i] for i in factor_indices)
        ]
        return SymCone(sub, tuple(facs)), coords

    def round_part(self) -> tuple["SymCone", list[int]] | None:
        idx = [i for i, f in enumerate(self.factors) if f.kind != HALFLINE]
        return self.restrict(idx) if idx else None

    def simplicial_part(self) -> tuple["SymCone", list[int]] | None:
        idx = [i for i, f in enumerate(self.factors) if f.kind == HALFLINE]
        return self.restrict(idx) if idx else None

    def member(self, v, mode: str = "interior") -> bool:
        return member(self, v, mode)


def validate(sym: SymCone) -> ValidationReport:
    """Check block structure and per-factor invariants; never raises."""
    rep = ValidationReport()
    n = sym.rank
    g = sym.lattice.gram
    seen: dict[int, int] = {}
    for i, f in enumerate(sym.factors):
        for c in f.coords:
            if not 0 <= c < n:
                rep.fail("coords", i, f"coordinate {c} out of range 0..{n - 1}")
            elif c in seen:
                rep.fail("coords", i, f"coordinate {c} also used by factor {seen[c]}")
            else:
                seen[c] = i
    missing = sorted(set(range(n)) - set(seen))
    if missing:
        rep.fail("coords", None, f"coordinates {missing} not covered by any factor")
    if not rep.ok:
        return rep
    for a in range(n):
        for b in range(n):
            if g[a][b] != 0 and seen[a] != seen[b]:
                rep.fail("block", seen[a], f"Gram entry ({a},{b}) couples factors {seen[a]} and {seen[b]}")
    for i, f in enumerate(sym.factors):
        block = la.submatrix(g, f.coords, f.coords)
        if f.kind == HALFLINE:
            if f.dim != 1:
                rep.fail("halfline", i, "halfline factor must have exactly one coordinate")
            elif block[0][0] <= 0:
                rep.fail("halfline", i, "form is not positive on the halfline")
        elif f.kind == LORENTZ:
            if f.dim < 3:
                rep.fail("lorentz", i, "hyperbolic factor needs dimension >= 3")
            sig = la.inertia(block)
            if sig != (1, f.dim - 1, 0):
                rep.fail("lorentz", i, f"signature {sig}, expected (1, {f.dim - 1}, 0)")
            if f.h is None or len(f.h) != f.dim:
                rep.fail("witness", i, "missing or mis-sized witness h")
            else:
                qh = la.dot(f.h, la.matvec(block, f.h))
                if qh <= 0:
                    rep.fail("witness", i, f"q(h) = {qh} is not positive")
        elif f.kind == PSD:
            if f.m < 3:
                rep.fail("psd", i, "psd factor needs matrix size m >= 3")
            if f.dim != f.m * (f.m + 1) // 2:
                rep.fail("psd", i, f"psd factor of size {f.m} needs {f.m * (f.m + 1) // 2} coordinates")
            elif not la.is_positive_definite(block):
                rep.fail("psd", i, "form is not positive definite on the psd block")
    return rep


def _lorentz_member(f: Factor, block, v, mode: str) -> bool:
    qv = la.dot(v, la.matvec(block, v))
    qh = la.dot(f.h, la.matvec(block, v))
    if mode == "interior":
        return qv > 0 and qh > 0
    closed = qv >= 0 and qh >= 0
    if mode == "closure" or not closed:
        return closed
    # plus: interior, or a boundary ray through a rational point, or zero
    if qv > 0 and qh > 0:
        return True
    return proportional_to_rational(v)


def _psd_member(f: Factor, v, mode: str) -> bool:
    x = vector_to_symmetric(v, f.m)
    if mode == "interior":
        return la.is_positive_definite(x)
    if mode == "closure":
        return la.is_positive_semidefinite(x)
    raise Unsupported("plus-hull membership for psd factors is not implemented")


def member_factor(sym: SymCone, i: int, v, mode: str = "interior") -> bool:
    """Membership of the factor-``i`` block of ambient vector ``v``."""
    f = sym.factors[i]
    part = [v[c] for c in f.coords]
    if f.kind == HALFLINE:
        return part[0] > 0 if mode == "interior" else part[0] >= 0
    if f.kind == LORENTZ:
        block = la.submatrix(sym.lattice.gram, f.coords, f.coords)
        return _lorentz_member(f, block, part, mode)
    return _psd_member(f, part, mode)


def member(sym: SymCone, v, mode: str = "interior") -> bool:
    """Membership in the open cone (``interior``), its closure, or the hull of
    its rational closure points (``plus``)."""
    if mode not in ("interior", "closure", "plus"):
        raise ValueError(f"unknown mode {mode!r}")
    if len(v) != sym.rank:
        raise DimensionMismatch(f"vector of length {len(v)} for a rank-{sym.rank} cone")
    return all(member_factor(sym, i, v, mode) for i in range(len(sym.factors)))


# --- invariant cones of Lorentz orbits ------------------------------------

HALFLINE_TYPE = "Halfline"
TWO_HALFLINES = "TwoHalflines"
HYPERBOLIC = "Hyperbolic"


@dataclass(frozen=True)
class InvariantType:
    kind: str
    dim: int
    basis: tuple  # ambient integer vectors spanning the invariant part
    signature: tuple  # of the form restricted to ``basis``

    def to_json(self) -> dict:
        return {
            "type": self.kind,
            "d": self.dim,
            "basis": [list(b) for b in self.basis],
            "signature": list(self.signature),
        }


def factor_permutation(sym: SymCone, g) -> list[int] | None:
    """Index map i -> j with g(span factor i) = span factor j, or None."""
    perm = []
    for f in sym.factors:
        target = None
        for j, f2 in enumerate(sym.factors):
            if f2.dim != f.dim or f2.kind != f.kind:
                continue
            other = [r for r in range(sym.rank) if r not in f2.coords]
            if all(g[r][c] == 0 for r in other for c in f.coords):
                target = j
                break
        if target is None:
            return None
        perm.append(target)
    return perm


def invariant_hyperbolic_type(sym: SymCone, orbit: Sequence[int], action: FiniteAction) -> InvariantType:
    """Type of the invariant cone of a G-orbit of Lorentz factors:
    a halfline, two halflines, or a hyperbolic cone, by the dimension of the
    invariant subspace of the orbit span (with a signature certificate)."""
    orbit = sorted(set(orbit))
    for i in orbit:
        if sym.factors[i].kind != LORENTZ:
            raise PreconditionFailure("orbit of Lorentz factors", f"factor {i} is {sym.factors[i].kind}")
    reached = {orbit[0]}
    for g in action.elements:
        perm = factor_permutation(sym, g)
        if perm is None:
            raise PreconditionFailure("factor decomposition preserved", "an element mixes factors")
        for i in orbit:
            if perm[i] not in orbit:
                raise PreconditionFailure("orbit stable", f"factor {i} is sent outside the orbit")
        reached.add(perm[orbit[0]])
    if reached != set(orbit):
        raise PreconditionFailure("single orbit", f"factors {sorted(set(orbit) - reached)} not reached")
    coords = [c for i in orbit for c in sym.factors[i].coords]
    sub = action.restrict(coords)
    local = invariant_sublattice(sub)
    n = sym.rank
    basis = []
    for b in local:
        v = [0] * n
        for c, x in zip(coords, b):
            v[c] = x
        basis.append(tuple(v))
    d = len(basis)
    sig = sym.lattice.restrict(basis).signature() if d else (0, 0, 0)
    if sig != (1, d - 1, 0):
        raise SignatureAnomaly(f"invariant form on the orbit has signature {sig}, expected (1, {d - 1}, 0)")
    kind = HALFLINE_TYPE if d == 1 else TWO_HALFLINES if d == 2 else HYPERBOLIC
    return InvariantType(kind, d, tuple(basis), sig)
