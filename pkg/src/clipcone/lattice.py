"""Lattices with rational quadratic forms and finite matrix groups acting on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg as la
from .errors import CapExceeded, NotLatticePreserving, NotIsometry


@dataclass(frozen=True)
class QuadLattice:
    """Z^n with a non-degenerate symmetric rational Gram matrix."""

    gram: tuple

    def __post_init__(self):
        g = la.mat(self.gram)
        if not g or len(g) != len(g[0]):
            raise ValueError("Gram matrix must be square and nonempty")
        if not la.is_symmetric(g):
            raise ValueError("Gram matrix must be symmetric")
        if la.det(g) == 0:
            raise ValueError("Gram matrix must be non-degenerate")
        object.__setattr__(self, "gram", g)
        d = la.denominator_lcm([x for r in g for x in r])
        object.__setattr__(self, "_scaled", (tuple(tuple(int(x * d) for x in r) for r in g), d))

    @property
    def scaled_gram(self) -> tuple[tuple, int]:
        """(D * G as integers, D) for the least common denominator D."""
        return self._scaled

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, u: Sequence, v: Sequence):
        """The bilinear form q(u, v) = u^T G v."""
        return la.dot(u, la.matvec(self.gram, v))

    def norm(self, v: Sequence):
        """The quadratic form q(v) = q(v, v)."""
        return self.pair(v, v)

    def dual(self, v: Sequence) -> tuple:
        """Coefficient vector of the functional x -> q(v, x)."""
        return la.matvec(self.gram, v)

    def signature(self) -> tuple[int, int, int]:
        return signature(self)

    def restrict(self, basis: Sequence[Sequence]) -> "QuadLattice":
        """Lattice spanned by ``basis`` (rows) with the induced form."""
        b = la.mat(basis)
        return QuadLattice(la.matmul(la.matmul(b, self.gram), la.transpose(b)))

    def is_integral(self) -> bool:
        return la.is_integral(self.gram)


def signature(lattice: QuadLattice) -> tuple[int, int, int]:
    """Inertia (pos, neg, zero) of the Gram matrix."""
    return la.inertia(lattice.gram)


def _as_int_matrix(g) -> tuple:
    m = la.mat(g)
    if not la.is_integral(m):
        raise NotLatticePreserving("matrix has non-integer entries")
    return tuple(tuple(int(x) for x in row) for row in m)


def _mul_int(a, b):
    n = len(a)
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


@dataclass(frozen=True)
class FiniteAction:
    """A finite subgroup of GL(n, Z), kept with its full element list.

    ``elements[0]`` is always the identity.  Build instances with
    :func:`group_closure`.
    """

    generators: tuple
    elements: tuple
    _index: dict = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {g: i for i, g in enumerate(self.elements)})

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return len(self.elements[0])

    def matrices(self) -> list:
        """Elements as Fraction matrices."""
        return [la.mat(g) for g in self.elements]

    def index(self, g) -> int:
        return self._index[tuple(tuple(int(x) for x in r) for r in g)]

    def inverse(self, g):
        ident = self.elements[0]
        for h in self.elements:
            if _mul_int(g, h) == ident:
                return h
        raise ValueError("element not in group")

    def apply(self, g, v: Sequence) -> tuple:
        return tuple(la.dot(row, v) for row in g)

    def orbit(self, v: Sequence) -> list[tuple]:
        """Distinct images of ``v`` in first-seen order."""
        seen = {}
        for g in self.elements:
            w = self.apply(g, v)
            if w not in seen:
                seen[w] = None
        return list(seen)

    def is_isometry_of(self, lattice: QuadLattice) -> bool:
        return all(
            la.matmul(la.matmul(la.transpose(la.mat(g)), lattice.gram), la.mat(g))
            == lattice.gram
            for g in self.generators
        )

    def check_isometry(self, lattice: QuadLattice) -> None:
        if lattice.rank != self.dim:
            raise ValueError("group and lattice ranks differ")
        if not self.is_isometry_of(lattice):
            raise NotIsometry("a generator does not preserve the Gram matrix")

    def restrict(self, coords: Sequence[int]) -> "FiniteAction":
        """Action on a coordinate subspace that every element preserves."""
        coords = list(coords)
        others = [i for i in range(self.dim) if i not in coords]
        for g in self.generators:
            if any(g[i][j] for i in others for j in coords):
                raise ValueError("coordinate subspace is not invariant")
        gens = [tuple(tuple(g[i][j] for j in coords) for i in coords) for g in self.generators]
        return group_closure(gens, cap=max(self.order, 1))


def group_closure(generators: Iterable, cap: int = 10_000, dim: int | None = None) -> FiniteAction:
    """Enumerate the group generated by integer matrices.

    Raises NotLatticePreserving if a generator is not in GL(n, Z) and
    CapExceeded as soon as more than ``cap`` elements have been found.
    """
    gens = [_as_int_matrix(g) for g in generators]
    if not gens:
        if dim is None:
            raise ValueError("need at least one generator or an explicit dim")
        gens = [tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))]
    n = len(gens[0])
    for g in gens:
        if len(g) != n or any(len(r) != n for r in g):
            raise ValueError("generators must be square matrices of equal size")
        if abs(la.det(la.mat(g))) != 1:
            raise NotLatticePreserving("generator has determinant other than +-1")
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    elements = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                p = _mul_int(g, h)
                if p not in seen:
                    seen.add(p)
                    elements.append(p)
                    nxt.append(p)
                    if len(elements) > cap:
                        raise CapExceeded(f"group order exceeds cap {cap}")
        frontier = nxt
    return FiniteAction(tuple(gens), tuple(elements))


def trivial_action(n: int) -> FiniteAction:
    return group_closure([], dim=n)


def invariant_sublattice(action: FiniteAction) -> list[tuple[int, ...]]:
    """Saturated basis (rows, Hermite normal form) of {v in Z^n : g v = v}."""
    n = action.dim
    rows = []
    for g in action.generators:
        for i in range(n):
            rows.append([g[i][j] - (1 if i == j else 0) for j in range(n)])
    if not rows:
        rows = [[0] * n]
    return la.integer_kernel(rows, n)


def reynolds(action: FiniteAction) -> tuple:
    """(1/|G|) sum_g g, the averaging operator onto V^G."""
    n = action.dim
    total = [[0] * n for _ in range(n)]
    for g in action.elements:
        for i in range(n):
            for j in range(n):
                total[i][j] += g[i][j]
    k = action.order
    return tuple(tuple(Fraction(x, k) for x in row) for row in total)


def invariant_form(action: FiniteAction, seed=None) -> tuple:
    """Smallest positive integer multiple of the group average of
    g^T seed g that has integer entries."""
    n = action.dim
    s = la.identity(n) if seed is None else la.mat(seed)
    if not la.is_positive_definite(s):
        raise ValueError("seed form must be positive definite")
    acc = la.zeros(n)
    for g in action.matrices():
        acc = la.add(acc, la.matmul(la.matmul(la.transpose(g), s), g))
    avg = la.scale(Fraction(1, action.order), acc)
    m = la.denominator_lcm(x for row in avg for x in row)
    return la.scale(m, avg)


def orthogonal_projection(basis: Sequence[Sequence], form) -> tuple:
    """Projection onto span(basis) orthogonal w.r.t. a positive-definite form."""
    n = len(form)
    if not basis:
        return la.zeros(n)
    b = la.transpose(la.mat(basis))  # n x k, columns = basis
    bt = la.transpose(b)
    inner = la.matmul(la.matmul(bt, form), b)
    return la.matmul(la.matmul(la.matmul(b, la.inverse(inner)), bt), form)


def maschke_projection(action: FiniteAction, projection=None) -> tuple:
    """G-equivariant projection onto V^G obtained by averaging the conjugates
    g p g^-1 of a seed projection ``p`` onto V^G.

    The default seed is the projection orthogonal for an invariant positive
    definite form.
    """
    n = action.dim
    if projection is None:
        basis = invariant_sublattice(action)
        projection = orthogonal_projection(basis, invariant_form(action))
    p = la.mat(projection)
    acc = la.zeros(n)
    for g in action.elements:
        gm = la.mat(g)
        ginv = la.mat(action.inverse(g))
        acc = la.add(acc, la.matmul(la.matmul(gm, p), ginv))
    return la.scale(Fraction(1, action.order), acc)


def invariant_coordinates(basis: Sequence[Sequence], v: Sequence) -> tuple:
    """Coordinates y with sum_a y_a basis[a] = v (v must lie in the span)."""
    return la.solve(la.transpose(la.mat(basis)), la.vec(v))


def embed(basis: Sequence[Sequence], y: Sequence) -> tuple:
    """sum_a y_a basis[a]."""
    n = len(basis[0])
    out = [0] * n
    for coef, b in zip(y, basis):
        if coef:
            for i in range(n):
                out[i] += coef * b[i]
    return tuple(Fraction(x) for x in out)
