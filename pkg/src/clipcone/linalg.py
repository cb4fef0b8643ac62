"""Exact dense linear algebra over Q (and any field whose scalars support
``+ - * /`` and ordering, e.g. :class:`clipcone.qfield.QuadraticScalar`).

Matrices are tuples of row tuples, vectors are tuples.  Nothing here ever
rounds; floats are rejected at the parsing boundary.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence

Vector = tuple
Matrix = tuple


def to_fraction(x) -> Fraction:
    """Parse an exact rational: int, Fraction, or a string like ``"-3/2"``."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "item") and not isinstance(x, float):
        # numpy integer scalars
        return to_fraction(x.item())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def vec(xs: Iterable) -> Vector:
    return tuple(to_fraction(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(vec(r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise ValueError("ragged matrix")
    return m


def fmt(x) -> str:
    """Serialize a rational as ``"p/q"`` (or ``"p"`` when integral)."""
    return str(x)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    s = 0
    for x, y in zip(u, v):
        if x and y:
            s = s + x * y
    return s


def matvec(a: Matrix, v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in a)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def scale(c, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in r) for r in a)


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vscale(c, v: Sequence) -> Vector:
    return tuple(c * x for x in v)


def outer(u: Sequence, v: Sequence) -> Matrix:
    return tuple(tuple(x * y for y in v) for x in u)


def submatrix(a: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return tuple(tuple(a[i][j] for j in cols) for i in rows)


def is_symmetric(a: Matrix) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def is_integral(a) -> bool:
    """True if every entry of a vector or matrix is an integer."""
    if a and isinstance(a[0], tuple):
        return all(is_integral(r) for r in a)
    return all(Fraction(x).denominator == 1 for x in a)


def denominator_lcm(xs: Iterable) -> int:
    out = 1
    for x in xs:
        d = Fraction(x).denominator
        out = out * d // gcd(out, d)
    return out


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector
    (positive multiple)."""
    v = vec(v)
    if not any(v):
        raise ValueError("zero vector has no primitive representative")
    m = denominator_lcm(v)
    ints = [int(x * m) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def _row_echelon(a: list[list], ncols: int | None = None):
    """In-place reduced row echelon form; returns pivot columns."""
    rows = len(a)
    cols = ncols if ncols is not None else (len(a[0]) if a else 0)
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c] if not isinstance(a[r][c], int) else Fraction(1, a[r][c])
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    work = [list(r) for r in a]
    piv = _row_echelon(work)
    return tuple(tuple(r) for r in work), piv


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of {x : a x = 0} over the scalar field."""
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if not a:
        return [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    r, piv = rref(a)
    free = [c for c in range(n) if c not in piv]
    zero = r[0][0] * 0
    one = zero + 1
    basis = []
    for f in free:
        x = [zero] * n
        x[f] = one
        for row, pc in zip(r, piv):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def det(a: Matrix):
    n = len(a)
    if n == 0:
        return Fraction(1)
    work = [list(r) for r in a]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if work[i][c] != 0), None)
        if p is None:
            return work[0][0] * 0
        if p != c:
            work[c], work[p] = work[p], work[c]
            d = -d
        d = d * work[c][c]
        for i in range(c + 1, n):
            if work[i][c] != 0:
                f = work[i][c] / work[c][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[c])]
    return d


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    work = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    piv = _row_echelon(work, ncols=n)
    if piv != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(r[n:]) for r in work)


def solve(a: Matrix, b: Sequence) -> Vector:
    """Solve ``a x = b`` for a full-column-rank (possibly tall) ``a``.

    Raises ValueError when the system is inconsistent.
    """
    rows, cols = shape(a)
    work = [list(r) + [b[i]] for i, r in enumerate(a)]
    piv = _row_echelon(work, ncols=cols)
    if len(piv) != cols:
        raise ValueError("coefficient matrix does not have full column rank")
    for r in work[len(piv):]:
        if r[cols] != 0:
            raise ValueError("inconsistent linear system")
    return tuple(work[i][cols] for i in range(cols))


def leading_minors(a: Matrix) -> list:
    return [det(submatrix(a, range(k), range(k))) for k in range(1, len(a) + 1)]


def is_positive_definite(a: Matrix) -> bool:
    """Sylvester's criterion (exact)."""
    return all(m > 0 for m in leading_minors(a))


def is_positive_semidefinite(a: Matrix) -> bool:
    """All principal minors nonnegative (exact, exponential in size)."""
    from itertools import combinations

    n = len(a)
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            if det(submatrix(a, idx, idx)) < 0:
                return False
    return True


def inertia(a: Matrix) -> tuple[int, int, int]:
    """Signature (pos, neg, zero) of a symmetric matrix by congruence
    (symmetric Gaussian reduction over Q)."""
    if not is_symmetric(a):
        raise ValueError("inertia requires a symmetric matrix")
    work = [list(r) for r in a]
    n = len(work)
    pos = neg = 0
    active = list(range(n))
    while active:
        p = next((i for i in active if work[i][i] != 0), None)
        if p is None:
            pair = next(
                ((i, j) for i in active for j in active if i < j and work[i][j] != 0),
                None,
            )
            if pair is None:
                break
            i, j = pair
            # x_i <- x_i + x_j makes the (i, i) entry 2 a_ij != 0
            for k in range(n):
                work[i][k] += work[j][k]
            for k in range(n):
                work[k][i] += work[k][j]
            p = i
        piv = work[p][p]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        active.remove(p)
        for i in active:
            if work[i][p] != 0:
                f = work[i][p] / piv
                for k in range(n):
                    work[i][k] -= f * work[p][k]
        for i in active:
            work[p][i] = work[i][p] = Fraction(0)
    return pos, neg, n - pos - neg


# --- integer lattice algorithms -------------------------------------------


def integer_kernel(a: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Basis of the saturated lattice {x in Z^n : a x = 0}.

    Unimodular column reduction of ``a`` (tracked in ``u``); columns of ``u``
    that end up multiplying zero columns span the kernel, and that sub-basis
    is primitive because ``u`` is unimodular.  The result is returned in
    row Hermite normal form so it is canonical.
    """
    rows = [list(map(int, r)) for r in a]
    n = ncols
    cols = [[rows[i][j] for i in range(len(rows))] for j in range(n)]
    u = [[int(i == j) for i in range(n)] for j in range(n)]  # u[j] = column j of U
    start = 0
    for i in range(len(rows)):
        while True:
            nz = [j for j in range(start, n) if cols[j][i] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(cols[j][i]))
            cols[start], cols[j0] = cols[j0], cols[start]
            u[start], u[j0] = u[j0], u[start]
            done = True
            for j in range(start + 1, n):
                if cols[j][i] != 0:
                    q = cols[j][i] // cols[start][i]
                    cols[j] = [x - q * y for x, y in zip(cols[j], cols[start])]
                    u[j] = [x - q * y for x, y in zip(u[j], u[start])]
                    if cols[j][i] != 0:
                        done = False
            if done:
                start += 1
                break
        if start == n:
            break
    kernel = [tuple(u[j]) for j in range(n) if not any(cols[j])]
    return hermite_rows(kernel)


def hermite_rows(basis: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of an integer basis (full row rank)."""
    a = [list(map(int, r)) for r in basis]
    if not a:
        return []
    m, n = len(a), len(a[0])
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if a[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[p] = a[p], a[r]
            clean = True
            for i in range(r + 1, m):
                if a[i][c] != 0:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c] != 0:
                        clean = False
            if clean:
                break
        if not any(a[i][c] for i in range(r, m)):
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return [tuple(row) for row in a if any(row)]


def integer_inverse(a: Matrix) -> Matrix | None:
    """Inverse of a square rational matrix if it lies in GL(n, Z), else None."""
    if not is_integral(a):
        return None
    d = det(a)
    if abs(d) != 1:
        return None
    return inverse(a)
