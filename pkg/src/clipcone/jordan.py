"""Formally real Jordan algebras behind the implemented cone factors.

An algebra is stored through its structure constants in a fixed basis,
``(b_i o b_j)_k = table[(i, j)][k]``, kept sparse.  Spin factors come from a
Lorentz block, symmetric-matrix algebras from PSD blocks, and products of
these from whole SymCones.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import DimensionMismatch, NotAutomorphism, NotInterior
from .lattice import FiniteAction, invariant_coordinates, invariant_sublattice
from .symcone import HALFLINE, LORENTZ, PSD, SymCone, psd_index

SPIN = "SpinFactor"
SYM = "SymMatrices"
PRODUCT = "Product"


@dataclass(frozen=True)
class JordanAlgebra:
    dim: int
    unit: tuple
    table: dict  # (i, j) -> tuple of (k, coefficient) with nonzero coefficients
    kind: str
    embedding: tuple | None = field(default=None, compare=False)
    # spin factors only: the normalized Lorentz form q / q(e)
    form: tuple | None = field(default=None, compare=False)

    def basis_product(self, i: int, j: int) -> tuple:
        out = [Fraction(0)] * self.dim
        for k, c in self.table.get((i, j), ()):
            out[k] = c
        return tuple(out)


def _from_dense(dim: int, products: dict, unit, kind: str, embedding=None, form=None) -> JordanAlgebra:
    table = {}
    for (i, j), v in products.items():
        nz = tuple((k, Fraction(c)) for k, c in enumerate(v) if c != 0)
        if nz:
            table[(i, j)] = nz
    return JordanAlgebra(dim, la.vec(unit), table, kind, embedding, form)


def jmul(alg: JordanAlgebra, x: Sequence, y: Sequence) -> tuple:
    """The Jordan product x o y."""
    if len(x) != alg.dim or len(y) != alg.dim:
        raise DimensionMismatch(f"vectors must have length {alg.dim}")
    out = [0] * alg.dim
    for (i, j), entries in alg.table.items():
        xi = x[i]
        if not xi:
            continue
        yj = y[j]
        if not yj:
            continue
        w = xi * yj
        for k, c in entries:
            out[k] += w * c
    return tuple(Fraction(v) for v in out)


def spin_factor(gram: Sequence[Sequence], unit: Sequence) -> JordanAlgebra:
    """Spin factor on a Lorentz space with unit ``unit`` (q(unit) > 0):
    x o y = q'(x,e) y + q'(y,e) x - q'(x,y) e, with q' = q / q(e)."""
    g = la.mat(gram)
    e = la.vec(unit)
    n = len(g)
    qe = la.dot(e, la.matvec(g, e))
    if qe <= 0:
        raise ValueError("spin factor unit must have positive square")
    ge = la.matvec(g, e)
    products = {}
    for i in range(n):
        for j in range(n):
            v = [Fraction(0)] * n
            v[j] += ge[i] / qe
            v[i] += ge[j] / qe
            qij = g[i][j] / qe
            for k in range(n):
                v[k] -= qij * e[k]
            products[(i, j)] = v
    return _from_dense(n, products, e, SPIN, form=la.scale(1 / qe, g))


def standard_spin_factor(n: int) -> JordanAlgebra:
    """Spin factor on (x0, xbar) with the standard positive form on xbar."""
    g = [[Fraction(0)] * n for _ in range(n)]
    g[0][0] = Fraction(1)
    for i in range(1, n):
        g[i][i] = Fraction(-1)
    return spin_factor(g, [1] + [0] * (n - 1))


def sym_matrices(m: int) -> JordanAlgebra:
    """Real symmetric m x m matrices with X o Y = (XY + YX) / 2, in the
    upper-triangle coordinates shared with PSD factors."""
    idx = psd_index(m)
    n = len(idx)

    def basis_matrix(k):
        i, j = idx[k]
        x = [[Fraction(0)] * m for _ in range(m)]
        x[i][j] = x[j][i] = Fraction(1)
        return x

    mats = [basis_matrix(k) for k in range(n)]
    products = {}
    for a in range(n):
        for b in range(n):
            xa, xb = mats[a], mats[b]
            p = [[sum(xa[i][t] * xb[t][j] + xb[i][t] * xa[t][j] for t in range(m)) / 2
                  for j in range(m)] for i in range(m)]
            products[(a, b)] = [p[i][j] for (i, j) in idx]
    unit = [Fraction(int(i == j)) for (i, j) in idx]
    return _from_dense(n, products, unit, SYM)


def halfline_algebra() -> JordanAlgebra:
    return _from_dense(1, {(0, 0): [1]}, [1], PRODUCT)


def product(algebras: Sequence[JordanAlgebra], coords: Sequence[Sequence[int]] | None = None,
            dim: int | None = None) -> JordanAlgebra:
    """Direct product; ``coords[t]`` places algebra t on ambient coordinates."""
    if coords is None:
        coords, off = [], 0
        for a in algebras:
            coords.append(list(range(off, off + a.dim)))
            off += a.dim
    n = dim if dim is not None else sum(a.dim for a in algebras)
    table = {}
    unit = [Fraction(0)] * n
    for a, cs in zip(algebras, coords):
        for (i, j), entries in a.table.items():
            table[(cs[i], cs[j])] = tuple((cs[k], c) for k, c in entries)
        for k, c in enumerate(a.unit):
            unit[cs[k]] = c
    return JordanAlgebra(n, tuple(unit), table, PRODUCT)


def from_symcone(sym: SymCone) -> JordanAlgebra:
    """Product algebra whose cone of squares is the closure of ``sym``;
    Lorentz factors are unital at their witness h."""
    algs, coords = [], []
    for f in sym.factors:
        if f.kind == HALFLINE:
            algs.append(halfline_algebra())
        elif f.kind == LORENTZ:
            algs.append(spin_factor(la.submatrix(sym.lattice.gram, f.coords, f.coords), f.h))
        elif f.kind == PSD:
            algs.append(sym_matrices(f.m))
        coords.append(list(f.coords))
    if len(algs) == 1 and list(coords[0]) == list(range(sym.rank)):
        return algs[0]
    return product(algs, coords, sym.rank)


def multiplication_operator(alg: JordanAlgebra, x: Sequence) -> tuple:
    """Matrix of L(x): y -> x o y."""
    n = alg.dim
    m = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), entries in alg.table.items():
        if x[i]:
            for k, c in entries:
                m[k][j] += x[i] * c
    return tuple(tuple(r) for r in m)


def quadratic_rep(alg: JordanAlgebra, b: Sequence) -> tuple:
    """Q(b) = 2 L(b)^2 - L(b o b)."""
    b = la.vec(b)
    lb = multiplication_operator(alg, b)
    lb2 = multiplication_operator(alg, jmul(alg, b, b))
    return la.sub(la.scale(2, la.matmul(lb, lb)), lb2)


def trace_form(alg: JordanAlgebra) -> tuple:
    """Gram matrix of (x, y) -> Tr L(x o y) on the basis."""
    n = alg.dim
    tr = [Fraction(0)] * n  # Tr L(b_k)
    for (i, j), entries in alg.table.items():
        for k, c in entries:
            if k == j:
                tr[i] += c
    g = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), entries in alg.table.items():
        g[i][j] = sum((c * tr[k] for k, c in entries), Fraction(0))
    return tuple(tuple(r) for r in g)


def is_invertible(alg: JordanAlgebra, b: Sequence) -> bool:
    if alg.kind == SPIN and alg.form is not None:
        # spin norm x0^2 - bbar(xbar, xbar) = q(b) / q(e)
        b = la.vec(b)
        return la.dot(b, la.matvec(alg.form, b)) != 0
    if alg.kind == SYM:
        m = _sym_size(alg.dim)
        from .symcone import vector_to_symmetric

        return la.det(vector_to_symmetric(b, m)) != 0
    return la.det(quadratic_rep(alg, b)) != 0


def _sym_size(n: int) -> int:
    m = 0
    while m * (m + 1) // 2 < n:
        m += 1
    return m


def is_interior(alg: JordanAlgebra, a: Sequence) -> bool:
    """a lies in the open cone of squares iff L(a) is positive definite for
    the (positive definite) trace form."""
    t = trace_form(alg)
    la_ = multiplication_operator(alg, la.vec(a))
    return la.is_positive_definite(la.matmul(t, la_))


def is_square_closure(alg: JordanAlgebra, a: Sequence) -> bool:
    t = trace_form(alg)
    return la.is_positive_semidefinite(la.matmul(t, multiplication_operator(alg, la.vec(a))))


# --- invariants ---------------------------------------------------------------


def check_automorphisms(alg: JordanAlgebra, action: FiniteAction) -> None:
    e = alg.unit
    for g in action.generators:
        gm = la.mat(g)
        if la.matvec(gm, e) != tuple(e):
            raise NotAutomorphism("an element does not fix the unit")
        cols = [tuple(r[j] for r in gm) for j in range(alg.dim)]
        for i in range(alg.dim):
            for j in range(i, alg.dim):
                lhs = la.matvec(gm, alg.basis_product(i, j))
                rhs = jmul(alg, cols[i], cols[j])
                if lhs != rhs:
                    raise NotAutomorphism(f"g(b_{i} o b_{j}) != g b_{i} o g b_{j}")


def invariant_subalgebra(alg: JordanAlgebra, action: FiniteAction) -> JordanAlgebra:
    """The subalgebra of G-fixed vectors, written in an integer basis of the
    invariant lattice (kept in ``embedding``)."""
    check_automorphisms(alg, action)
    basis = invariant_sublattice(action)
    k = len(basis)
    bvec = [la.vec(b) for b in basis]
    products = {}
    for a in range(k):
        for b in range(k):
            products[(a, b)] = invariant_coordinates(basis, jmul(alg, bvec[a], bvec[b]))
    unit = invariant_coordinates(basis, alg.unit)
    kind = alg.kind if (k == alg.dim or alg.kind == SPIN) else PRODUCT
    return _from_dense(k, products, unit, kind, embedding=tuple(basis))


def _structure_tensor(alg: JordanAlgebra) -> tuple[np.ndarray, int]:
    """Integer tensor D * c_ijk and the common denominator D."""
    coeffs = [c for entries in alg.table.values() for _, c in entries]
    d = la.denominator_lcm(coeffs) if coeffs else 1
    c = np.zeros((alg.dim,) * 3, dtype=object)
    for (i, j), entries in alg.table.items():
        for k, v in entries:
            c[i, j, k] = int(v * d)
    return c, d


def _jm(c: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # rows of x, y are vectors; scaled product for each row pair
    return np.einsum("si,sj,ijk->sk", x, y, c)


def check_axioms(alg: JordanAlgebra, samples: int = 100, seed: int = 0, bound: int = 15) -> dict:
    """Commutativity, the unit law and the Jordan identity on the basis and
    on ``samples`` random integer pairs, plus formal reality via the trace
    form.

    The identities are homogeneous, so integer samples stand for arbitrary
    rational ones.  Arithmetic is exact: int64 when the entry bound allows,
    Python integers otherwise.
    """
    n = alg.dim
    basis = [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    comm = all(alg.basis_product(i, j) == alg.basis_product(j, i) for i in range(n) for j in range(i + 1, n))
    unit = all(jmul(alg, alg.unit, b) == b for b in basis)
    c, d = _structure_tensor(alg)
    cmax = max((abs(v) for v in c.flat), default=1) or 1
    # |(x^2) o (x o y)| <= n^4 cmax^3 bound^4
    dtype = np.int64 if n**4 * cmax**3 * bound**4 < 2**62 else object
    c = c.astype(dtype)
    rng = np.random.default_rng(seed)
    x = rng.integers(-bound, bound + 1, size=(samples, n)).astype(dtype)
    y = rng.integers(-bound, bound + 1, size=(samples, n)).astype(dtype)
    xy = _jm(c, x, y)
    comm = comm and bool(np.array_equal(xy, _jm(c, y, x)))
    ue = la.vec(alg.unit)
    um = la.denominator_lcm(ue)
    u = np.array([[int(v * um) for v in ue]], dtype=dtype)
    unit = unit and bool(np.array_equal(_jm(c, np.repeat(u, samples, axis=0), x), x * (d * um)))
    xx = _jm(c, x, x)
    jordan = bool(np.array_equal(_jm(c, xx, xy), _jm(c, x, _jm(c, xx, y))))
    return {
        "commutative": comm,
        "unit": unit,
        "jordan_identity": jordan,
        "formally_real": la.is_positive_definite(trace_form(alg)),
    }


# --- transitivity -----------------------------------------------------------


def _numeric_sqrt(alg: JordanAlgebra, a: Sequence) -> np.ndarray:
    """Newton iteration b <- (b + L(b)^-1 a) / 2 from the unit; iterates stay
    in the associative subalgebra generated by a."""
    table = alg.table
    n = alg.dim

    def lmat(x):
        m = np.zeros((n, n))
        for (i, j), entries in table.items():
            if x[i]:
                for k, c in entries:
                    m[k, j] += x[i] * float(c)
        return m

    af = np.array([float(v) for v in a])
    b = np.array([float(v) for v in alg.unit])
    for _ in range(200):
        nb = 0.5 * (b + np.linalg.solve(lmat(b), af))
        if np.max(np.abs(nb - b)) <= 1e-15 * max(1.0, np.max(np.abs(nb))):
            b = nb
            break
        b = nb
    return b


def transporter(alg: JordanAlgebra, a: Sequence, precision=Fraction(1, 10**6)) -> tuple[tuple, Fraction]:
    """Rational b with ||b o b - a||_inf <= precision, so that Q(b) maps the
    unit to (approximately) a.  Exact when a is the square of a rational
    interior element with small denominators."""
    a = la.vec(a)
    precision = la.to_fraction(precision)
    if not is_interior(alg, a):
        raise NotInterior("target is not in the interior of the cone of squares")
    approx = _numeric_sqrt(alg, a)
    b = tuple(Fraction(float(x)).limit_denominator(10**6) for x in approx)
    residual = _residual(alg, b, a)
    limit = max(10**6, int(1 / precision) ** 2) if precision > 0 else 10**40
    for _ in range(100):
        if residual <= precision:
            break
        # exact Newton step, then trim denominators
        step = la.solve(multiplication_operator(alg, b), a)
        b = tuple((Fraction(x + y) / 2).limit_denominator(limit) for x, y in zip(b, step))
        residual = _residual(alg, b, a)
    return b, residual


def _residual(alg, b, a) -> Fraction:
    return max(abs(u - v) for u, v in zip(jmul(alg, b, b), a))
