"""Exact linear algebra over Q.

Matrices are lists of rows of ``Fraction`` (or ``int``).  Rank and
determinant use fraction-free (Bareiss) elimination on an integer copy with
row denominators cleared; bases use reduced row echelon form over Q.
Shapes are passed explicitly where a matrix may have zero rows.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

Matrix = list[list[Fraction]]
Vector = list[Fraction]


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def matrix(rows) -> Matrix:
    return [[to_fraction(v) for v in row] for row in rows]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def shape(a: Matrix, ncols: int | None = None) -> tuple[int, int]:
    if a:
        return len(a), len(a[0])
    return 0, ncols or 0


def matmul(a: Matrix, b: Matrix, inner: int | None = None, ncols: int | None = None) -> Matrix:
    """Product ``a @ b``; ``ncols`` is needed when ``b`` has no rows."""
    if not b:
        return [[Fraction(0)] * (ncols or 0) for _ in a]
    cols = list(zip(*b))
    out = []
    for row in a:
        nz = [(k, v) for k, v in enumerate(row) if v]
        out.append([sum((v * col[k] for k, v in nz), Fraction(0)) for col in cols])
    return out


def matvec(a: Matrix, v: Vector) -> Vector:
    return [sum((x * y for x, y in zip(row, v) if x), Fraction(0)) for row in a]


def transpose(a: Matrix, ncols: int = 0) -> Matrix:
    if not a:
        return [[] for _ in range(ncols)]
    return [list(c) for c in zip(*a)]


def is_zero(a: Matrix) -> bool:
    return all(not v for row in a for v in row)


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def scale(a: Matrix, c) -> Matrix:
    c = to_fraction(c)
    return [[c * x for x in row] for row in a]


def _integer_rows(a) -> list[list[int]]:
    out = []
    for row in a:
        den = 1
        for v in row:
            if isinstance(v, Fraction) and v.denominator != 1:
                den = lcm(den, v.denominator)
        out.append([int(v * den) for v in row])
    return out


def _bareiss(m: list[list[int]]) -> tuple[int, int]:
    """In-place fraction-free elimination; returns (rank, sign-adjusted last pivot)."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    prev = 1
    r = 0
    sign = 1
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        pr = m[r]
        p = pr[c]
        for i in range(r + 1, rows):
            ri = m[i]
            f = ri[c]
            if f:
                for j in range(c + 1, cols):
                    ri[j] = (p * ri[j] - f * pr[j]) // prev
            elif p != prev:
                for j in range(c + 1, cols):
                    if ri[j]:
                        ri[j] = p * ri[j] // prev
            ri[c] = 0
        prev = p
        r += 1
    return r, sign * prev


def rank(a) -> int:
    if not a or not a[0]:
        return 0
    m = _integer_rows(a)
    # eliminate along the shorter side
    if len(m[0]) < len(m):
        m = [list(c) for c in zip(*m)]
    return _bareiss(m)[0]


def det(a) -> Fraction:
    n = len(a)
    if n == 0:
        return Fraction(1)
    dens = []
    for row in a:
        d = 1
        for v in row:
            v = to_fraction(v)
            d = lcm(d, v.denominator)
        dens.append(d)
    m = [[int(to_fraction(v) * d) for v in row] for row, d in zip(a, dens)]
    r, last = _bareiss(m)
    if r < n:
        return Fraction(0)
    scale_ = 1
    for d in dens:
        scale_ *= d
    return Fraction(last, scale_)


def rref(a: Matrix, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (copy; input untouched)."""
    m = [list(map(to_fraction, row)) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else (ncols or 0)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        inv = 1 / pr[c]
        if inv != 1:
            pr = m[r] = [v * inv for v in pr]
        nz = [j for j in range(c, cols) if pr[j]]
        for i in range(rows):
            if i != r:
                ri = m[i]
                f = ri[c]
                if f:
                    for j in nz:
                        ri[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace(a: Matrix, ncols: int) -> list[Vector]:
    """Basis of {x : a x = 0} for ``a`` with ``ncols`` columns."""
    if not a:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, pivots = rref(a, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(r, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def span_basis(vectors: list[Vector], dim: int) -> list[Vector]:
    """A basis (rref rows) of the span of ``vectors``."""
    if not vectors:
        return []
    r, _ = rref(vectors, dim)
    return r


class IncrementalBasis:
    """Grow a basis one vector at a time, keeping an echelon copy for tests."""

    def __init__(self, dim: int):
        self.dim = dim
        self.vectors: list[Vector] = []
        self._echelon: list[tuple[int, Vector]] = []  # (pivot, row with 1 at pivot)

    def _reduce(self, v: Vector) -> Vector:
        v = list(v)
        for p, row in self._echelon:
            f = v[p]
            if f:
                for j in range(self.dim):
                    if row[j]:
                        v[j] -= f * row[j]
        return v

    def add(self, v: Vector) -> bool:
        w = self._reduce(v)
        p = next((j for j, x in enumerate(w) if x), None)
        if p is None:
            return False
        inv = 1 / w[p]
        w = [x * inv for x in w]
        for k, (q, row) in enumerate(self._echelon):
            f = row[p]
            if f:
                self._echelon[k] = (q, [a - f * b for a, b in zip(row, w)])
        self._echelon.append((p, w))
        self.vectors.append(list(v))
        return True

    def __len__(self):
        return len(self.vectors)


def coordinates(basis: list[Vector], v: Vector) -> Vector | None:
    """Coefficients c with sum c_i basis_i = v, or None if v is outside the span."""
    k = len(basis)
    if k == 0:
        return [] if all(not x for x in v) else None
    dim = len(v)
    aug = [[basis[j][i] for j in range(k)] + [v[i]] for i in range(dim)]
    r, pivots = rref(aug, k + 1)
    if pivots and pivots[-1] == k:
        return None
    c = [Fraction(0)] * k
    for row, pc in zip(r, pivots):
        c[pc] = row[k]
    return c


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(map(to_fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    r, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def format_fraction(x: Fraction) -> str:
    x = to_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
