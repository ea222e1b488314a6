"""Finite first-quadrant double complexes over Q and their spectral sequences.

``C[p][q]`` has dimension ``dims[p][q]``; ``d_h[p][q]`` maps C^{p,q} to
C^{p+1,q} and ``d_v[p][q]`` maps C^{p,q} to C^{p,q+1}.  The two differentials
commute, and the total differential on Tot^n = sum_{p+q=n} C^{p,q} is
d_h + (-1)^p d_v.

Both spectral sequences are computed from the filtration of the total
complex: by columns (p) for the vertical one, by rows (q) for the
horizontal one.  With F^s the filtration and d the total differential,

    Z_r^s = F^s ∩ d^{-1}(F^{s+r}),   B_r^s = F^s ∩ d(F^{s-r}),
    E_r^s = Z_r^s / (Z_{r-1}^{s+1} + B_{r-1}^s),

and since Z_{r-1}^{s+1} ∩ B_{r-1}^s = B_r^{s+1}, every page dimension is a
signed sum of ranks of blocks of d.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from anosovkit import linalg as la
from anosovkit.errors import InvalidComplexError, ValidationError

VERTICAL = "vertical"
HORIZONTAL = "horizontal"
MAX_GRID = 16
MAX_SPACE_DIM = 64


def _zero(rows: int, cols: int) -> la.Matrix:
    return la.zeros(rows, cols)


@dataclass(eq=False)
class DoubleComplex:
    width: int
    height: int
    dims: tuple[tuple[int, ...], ...]
    d_h: list[list[la.Matrix]]
    d_v: list[list[la.Matrix]]

    def __post_init__(self):
        if not (0 < self.width <= MAX_GRID and 0 < self.height <= MAX_GRID):
            raise ValidationError(f"grid {self.width}x{self.height} outside 1..{MAX_GRID}")
        if len(self.dims) != self.width or any(len(col) != self.height for col in self.dims):
            raise ValidationError("dims must be a width x height array")
        if any(d < 0 or d > MAX_SPACE_DIM for col in self.dims for d in col):
            raise ValidationError(f"space dimensions must lie in 0..{MAX_SPACE_DIM}")

    def dim(self, p: int, q: int) -> int:
        if 0 <= p < self.width and 0 <= q < self.height:
            return self.dims[p][q]
        return 0

    def hmap(self, p: int, q: int) -> la.Matrix:
        if 0 <= p < self.width - 1 and 0 <= q < self.height:
            return self.d_h[p][q]
        return _zero(self.dim(p + 1, q), self.dim(p, q))

    def vmap(self, p: int, q: int) -> la.Matrix:
        if 0 <= p < self.width and 0 <= q < self.height - 1:
            return self.d_v[p][q]
        return _zero(self.dim(p, q + 1), self.dim(p, q))

    @property
    def max_degree(self) -> int:
        return self.width + self.height - 2

    @classmethod
    def zero(cls, width: int, height: int) -> DoubleComplex:
        dims = tuple(tuple(0 for _ in range(height)) for _ in range(width))
        return from_maps(dims, {}, {})

    # ---- total complex -------------------------------------------------

    def blocks(self, n: int) -> list[tuple[int, int, int]]:
        """(p, q, offset) of each summand of Tot^n, in increasing p."""
        out = []
        off = 0
        for p in range(self.width):
            q = n - p
            if 0 <= q < self.height:
                out.append((p, q, off))
                off += self.dims[p][q]
        return out

    def tot_dim(self, n: int) -> int:
        return sum(self.dim(p, n - p) for p in range(self.width))

    @cached_property
    def _total(self) -> dict[int, la.Matrix]:
        return {}

    def total_differential(self, n: int) -> la.Matrix:
        """Matrix of d: Tot^n -> Tot^{n+1}."""
        if n in self._total:
            return self._total[n]
        src = self.blocks(n)
        dst = {(p, q): off for p, q, off in self.blocks(n + 1)}
        m = _zero(self.tot_dim(n + 1), self.tot_dim(n))
        for p, q, off in src:
            parts = []
            if (p + 1, q) in dst:
                parts.append((dst[(p + 1, q)], self.hmap(p, q), 1))
            if (p, q + 1) in dst:
                parts.append((dst[(p, q + 1)], self.vmap(p, q), -1 if p % 2 else 1))
            for roff, block, sign in parts:
                for i, row in enumerate(block):
                    target = m[roff + i]
                    for j, v in enumerate(row):
                        if v:
                            target[off + j] = sign * v
        self._total[n] = m
        return m


def from_maps(dims, d_h: dict, d_v: dict) -> DoubleComplex:
    """Build a complex from sparse dicts ``{(p, q): matrix}``; missing maps are zero."""
    dims = tuple(tuple(int(d) for d in col) for col in dims)
    width = len(dims)
    height = len(dims[0]) if dims else 0
    H = []
    V = []
    for p in range(width):
        hcol, vcol = [], []
        for q in range(height):
            tgt_h = dims[p + 1][q] if p + 1 < width else 0
            tgt_v = dims[p][q + 1] if q + 1 < height else 0
            hcol.append(la.matrix(d_h[(p, q)]) if (p, q) in d_h else _zero(tgt_h, dims[p][q]))
            vcol.append(la.matrix(d_v[(p, q)]) if (p, q) in d_v else _zero(tgt_v, dims[p][q]))
        H.append(hcol)
        V.append(vcol)
    return DoubleComplex(width, height, dims, H, V)


# ---- validation ----------------------------------------------------------


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    @property
    def first(self) -> str | None:
        return self.violations[0] if self.violations else None


def _check_shape(m, rows, cols) -> bool:
    if rows == 0:
        return len(m) == 0
    return len(m) == rows and all(len(r) == cols for r in m)


def validate(dc: DoubleComplex) -> ValidationReport:
    """Shapes, d_h^2 = 0, d_v^2 = 0 and commuting squares, in grid order."""
    bad = []
    for p in range(dc.width):
        for q in range(dc.height):
            if p + 1 < dc.width and not _check_shape(dc.d_h[p][q], dc.dims[p + 1][q], dc.dims[p][q]):
                bad.append(f"shape of d_h at ({p},{q})")
            if q + 1 < dc.height and not _check_shape(dc.d_v[p][q], dc.dims[p][q + 1], dc.dims[p][q]):
                bad.append(f"shape of d_v at ({p},{q})")
    if bad:
        return ValidationReport(False, bad)
    for p in range(dc.width):
        for q in range(dc.height):
            a = dc.dim(p, q)
            hh = la.matmul(dc.hmap(p + 1, q), dc.hmap(p, q), ncols=a)
            if not la.is_zero(hh):
                bad.append(f"d_h∘d_h != 0 at ({p},{q})")
            vv = la.matmul(dc.vmap(p, q + 1), dc.vmap(p, q), ncols=a)
            if not la.is_zero(vv):
                bad.append(f"d_v∘d_v != 0 at ({p},{q})")
            vh = la.matmul(dc.vmap(p + 1, q), dc.hmap(p, q), ncols=a)
            hv = la.matmul(dc.hmap(p, q + 1), dc.vmap(p, q), ncols=a)
            if vh != hv:
                bad.append(f"square at ({p},{q}) does not commute")
    return ValidationReport(not bad, bad)


def _require_valid(dc: DoubleComplex) -> None:
    if getattr(dc, "_validated", False):
        return
    report = validate(dc)
    if not report.ok:
        raise InvalidComplexError(f"invalid double complex: {report.first} (see validate())", report)
    dc._validated = True


# ---- total cohomology ------------------------------------------------------


def total_cohomology(dc: DoubleComplex, k: int) -> int:
    _require_valid(dc)
    if k < 0 or k > dc.max_degree:
        return 0
    return dc.tot_dim(k) - _rank_cached(dc, k, None, None) - _rank_cached(dc, k - 1, None, None)


def _filtration_index(direction: str):
    if direction == VERTICAL:
        return lambda p, q: p
    if direction == HORIZONTAL:
        return lambda p, q: q
    raise ValidationError(f"direction must be {VERTICAL!r} or {HORIZONTAL!r}")


def _rank_cached(dc: DoubleComplex, n: int, row_below, col_from, direction: str = VERTICAL) -> int:
    """rank of d^n restricted to rows with filtration < row_below and cols >= col_from."""
    if n < 0 or n >= dc.max_degree:
        return 0
    cache = dc.__dict__.setdefault("_ranks", {})
    key = (n, row_below, col_from, direction if (row_below is not None or col_from is not None) else None)
    if key in cache:
        return cache[key]
    f = _filtration_index(direction)
    m = dc.total_differential(n)
    rows = [
        i
        for p, q, off in dc.blocks(n + 1)
        if row_below is None or f(p, q) < row_below
        for i in range(off, off + dc.dims[p][q])
    ]
    cols = [
        j
        for p, q, off in dc.blocks(n)
        if col_from is None or f(p, q) >= col_from
        for j in range(off, off + dc.dims[p][q])
    ]
    r = la.rank([[m[i][j] for j in cols] for i in rows]) if rows and cols else 0
    cache[key] = r
    return r


def _fdim(dc, n, s, direction) -> int:
    f = _filtration_index(direction)
    return sum(dc.dims[p][q] for p, q, _ in dc.blocks(n) if f(p, q) >= s)


def _z_dim(dc, n, s, r, direction) -> int:
    return _fdim(dc, n, s, direction) - _rank_cached(dc, n, s + r, s, direction)


def _b_dim(dc, n, s, r, direction) -> int:
    full = _rank_cached(dc, n - 1, None, s - r, direction)
    return full - _rank_cached(dc, n - 1, s, s - r, direction)


def _page_dim(dc, n, s, r, direction) -> int:
    return (
        _z_dim(dc, n, s, r, direction)
        - _z_dim(dc, n, s + 1, r - 1, direction)
        - _b_dim(dc, n, s, r - 1, direction)
        + _b_dim(dc, n, s + 1, r, direction)
    )


def _position(direction, n, s) -> tuple[int, int]:
    return (s, n - s) if direction == VERTICAL else (n - s, s)


def _filtration_of(direction, p, q) -> int:
    return p if direction == VERTICAL else q


def stable_page(dc: DoubleComplex) -> int:
    """A page index past which every differential leaves the grid."""
    return max(dc.width, dc.height) + 1


def page_dims(dc: DoubleComplex, direction: str, r: int) -> dict[tuple[int, int], int]:
    _require_valid(dc)
    if r < 0:
        raise ValidationError("page index r must be >= 0")
    out = {}
    for p in range(dc.width):
        for q in range(dc.height):
            s = _filtration_of(direction, p, q)
            out[(p, q)] = _page_dim(dc, p + q, s, r, direction)
    return out


def e_infinity(dc: DoubleComplex, direction: str) -> dict[tuple[int, int], int]:
    return page_dims(dc, direction, stable_page(dc))


# ---- explicit pages ----------------------------------------------------------


def _restrict_cols(dc, n, s, direction):
    f = _filtration_index(direction)
    return [j for p, q, off in dc.blocks(n) if f(p, q) >= s for j in range(off, off + dc.dims[p][q])]


def _rows_below(dc, n, s, direction):
    f = _filtration_index(direction)
    return [i for p, q, off in dc.blocks(n) if f(p, q) < s for i in range(off, off + dc.dims[p][q])]


def _z_basis(dc, n, s, r, direction) -> list[la.Vector]:
    dim = dc.tot_dim(n)
    if dim == 0:
        return []
    cols = _restrict_cols(dc, n, s, direction)
    if not cols:
        return []
    if 0 <= n < dc.max_degree:
        m = dc.total_differential(n)
        rows = _rows_below(dc, n + 1, s + r, direction)
        sub = [[m[i][j] for j in cols] for i in rows]
    else:
        sub = []
    out = []
    for v in la.nullspace(sub, len(cols)):
        full = [Fraction(0)] * dim
        for j, x in zip(cols, v):
            full[j] = x
        out.append(full)
    return out


def _b_basis(dc, n, s, r, direction) -> list[la.Vector]:
    """F^s ∩ d(F^{s-r}) in degree n, as d of Z_r^{s-r} in degree n-1."""
    if n - 1 < 0 or dc.tot_dim(n) == 0:
        return []
    src = _z_basis(dc, n - 1, s - r, r, direction)
    m = dc.total_differential(n - 1)
    images = [la.matvec(m, v) for v in src]
    return la.span_basis([v for v in images if any(v)], dc.tot_dim(n))


@dataclass
class _PageBasis:
    reps: list[la.Vector]  # representatives of a basis of E_r
    ambient: list[la.Vector]  # denominator basis followed by reps: a basis of Z_r
    n_den: int

    def classes(self, v: la.Vector) -> la.Vector:
        c = la.coordinates(self.ambient, v)
        if c is None:
            raise ArithmeticError("vector is not in Z_r")
        return c[self.n_den :]


def _page_basis(dc, n, s, r, direction) -> _PageBasis:
    dim = dc.tot_dim(n)
    den = la.IncrementalBasis(dim)
    for v in _z_basis(dc, n, s + 1, r - 1, direction) + _b_basis(dc, n, s, r - 1, direction):
        den.add(v)
    n_den = len(den)
    reps = []
    for v in _z_basis(dc, n, s, r, direction):
        if den.add(v):
            reps.append(v)
    return _PageBasis(reps, den.vectors, n_den)


@dataclass
class SpectralPage:
    direction: str
    r: int
    dims: dict[tuple[int, int], int]
    maps: dict[tuple[int, int], la.Matrix]  # source (p, q) -> matrix into target(p, q)

    def target(self, p: int, q: int) -> tuple[int, int]:
        if self.direction == VERTICAL:
            return p + self.r, q - self.r + 1
        return p - self.r + 1, q + self.r


def spectral_page(dc: DoubleComplex, direction: str = VERTICAL, r: int = 0, with_maps: bool = True) -> SpectralPage:
    """E_r with its differential d_r, in explicit bases of representatives."""
    dims = page_dims(dc, direction, r)
    page = SpectralPage(direction, r, dims, {})
    if not with_maps:
        return page
    bases = {}
    for p in range(dc.width):
        for q in range(dc.height):
            s = _filtration_of(direction, p, q)
            bases[(p, q)] = _page_basis(dc, p + q, s, r, direction)
            assert len(bases[(p, q)].reps) == dims[(p, q)]
    for (p, q), basis in bases.items():
        tp, tq = page.target(p, q)
        if (tp, tq) not in bases:
            page.maps[(p, q)] = _zero(0, len(basis.reps))
            continue
        tgt = bases[(tp, tq)]
        n = p + q
        m = dc.total_differential(n) if n < dc.max_degree else None
        cols = []
        for v in basis.reps:
            dv = la.matvec(m, v) if m is not None else [Fraction(0)] * dc.tot_dim(n + 1)
            cols.append(tgt.classes(dv))
        page.maps[(p, q)] = la.transpose(cols, len(tgt.reps)) if cols else _zero(len(tgt.reps), 0)
    return page


# ---- low-degree terms ------------------------------------------------------------


@dataclass
class LdtSequence:
    """0 -> E_2 (filtration 1, degree 1) -> H^1 -> E_2 (filtration 0, degree 1)."""

    direction: str
    first_position: tuple[int, int]
    last_position: tuple[int, int]
    first_dim: int
    h1_dim: int
    last_dim: int
    alpha: la.Matrix  # E_2 -> H^1, h1_dim x first_dim
    beta: la.Matrix  # H^1 -> E_2, last_dim x h1_dim
    rank_alpha: int
    rank_beta: int
    composite_zero: bool
    _bases: dict = field(default_factory=dict, repr=False)

    @property
    def injective(self) -> bool:
        return self.rank_alpha == self.first_dim

    @property
    def exact_at_h1(self) -> bool:
        return self.composite_zero and self.rank_alpha == self.h1_dim - self.rank_beta

    @property
    def exact(self) -> bool:
        return self.injective and self.exact_at_h1


def _h1_basis(dc: DoubleComplex) -> _PageBasis:
    dim = dc.tot_dim(1)
    den = la.IncrementalBasis(dim)
    if dc.tot_dim(0):
        m0 = dc.total_differential(0)
        for j in range(dc.tot_dim(0)):
            den.add([row[j] for row in m0])
    n_den = len(den)
    m1 = dc.total_differential(1) if dc.max_degree > 1 else []
    reps = []
    for v in la.nullspace(m1, dim):
        if den.add(v):
            reps.append(v)
    return _PageBasis(reps, den.vectors, n_den)


def _matrix_from_columns(cols, nrows):
    return la.transpose(cols, nrows) if cols else _zero(nrows, 0)


def ldt(dc: DoubleComplex, direction: str = VERTICAL) -> LdtSequence:
    _require_valid(dc)
    first = _page_basis(dc, 1, 1, 2, direction)
    last = _page_basis(dc, 1, 0, 2, direction)
    h1 = _h1_basis(dc)
    alpha = _matrix_from_columns([h1.classes(v) for v in first.reps], len(h1.reps))
    beta = _matrix_from_columns([last.classes(v) for v in h1.reps], len(last.reps))
    comp = la.matmul(beta, alpha, ncols=len(first.reps)) if beta else []
    return LdtSequence(
        direction=direction,
        first_position=_position(direction, 1, 1),
        last_position=_position(direction, 1, 0),
        first_dim=len(first.reps),
        h1_dim=len(h1.reps),
        last_dim=len(last.reps),
        alpha=alpha,
        beta=beta,
        rank_alpha=la.rank(alpha),
        rank_beta=la.rank(beta),
        composite_zero=la.is_zero(comp),
        _bases={"first": first, "h1": h1, "last": last},
    )


# ---- morphisms -------------------------------------------------------------------


def is_morphism(f: dict, X: DoubleComplex, Y: DoubleComplex) -> bool:
    """``f[(p, q)]`` : X^{p,q} -> Y^{p,q} commuting with both differentials."""
    for p in range(X.width):
        for q in range(X.height):
            a = X.dim(p, q)
            fpq = f.get((p, q), _zero(Y.dim(p, q), a))
            fh = f.get((p + 1, q), _zero(Y.dim(p + 1, q), X.dim(p + 1, q)))
            fv = f.get((p, q + 1), _zero(Y.dim(p, q + 1), X.dim(p, q + 1)))
            if la.matmul(fh, X.hmap(p, q), ncols=a) != la.matmul(Y.hmap(p, q), fpq, ncols=a):
                return False
            if la.matmul(fv, X.vmap(p, q), ncols=a) != la.matmul(Y.vmap(p, q), fpq, ncols=a):
                return False
    return True


def _total_map(f: dict, X: DoubleComplex, Y: DoubleComplex, n: int) -> la.Matrix:
    m = _zero(Y.tot_dim(n), X.tot_dim(n))
    ydst = {(p, q): off for p, q, off in Y.blocks(n)}
    for p, q, off in X.blocks(n):
        if (p, q) not in ydst or (p, q) not in f:
            continue
        roff = ydst[(p, q)]
        for i, row in enumerate(f[(p, q)]):
            for j, v in enumerate(row):
                m[roff + i][off + j] = la.to_fraction(v)
    return m


@dataclass
class LdtMorphism:
    first: la.Matrix
    h1: la.Matrix
    last: la.Matrix
    left_square_commutes: bool
    right_square_commutes: bool


def induced_ldt_map(f: dict, X: DoubleComplex, Y: DoubleComplex, direction: str = VERTICAL) -> LdtMorphism:
    """Maps induced on the three LDT terms by a morphism X -> Y, with both squares checked."""
    if not is_morphism(f, X, Y):
        raise ValidationError("f does not commute with the differentials")
    lx, ly = ldt(X, direction), ldt(Y, direction)
    F1 = _total_map(f, X, Y, 1)

    def induced(src: _PageBasis, dst: _PageBasis) -> la.Matrix:
        cols = [dst.classes(la.matvec(F1, v)) for v in src.reps]
        return _matrix_from_columns(cols, len(dst.reps))

    m_first = induced(lx._bases["first"], ly._bases["first"])
    m_h1 = induced(lx._bases["h1"], ly._bases["h1"])
    m_last = induced(lx._bases["last"], ly._bases["last"])
    left = la.matmul(ly.alpha, m_first, ncols=lx.first_dim) == la.matmul(m_h1, lx.alpha, ncols=lx.first_dim)
    right = la.matmul(ly.beta, m_h1, ncols=lx.h1_dim) == la.matmul(m_last, lx.beta, ncols=lx.h1_dim)
    return LdtMorphism(m_first, m_h1, m_last, left, right)


# ---- JSON ------------------------------------------------------------------------


def _mat_json(m):
    return [[la.format_fraction(v) for v in row] for row in m]


def to_json(dc: DoubleComplex) -> str:
    payload = {
        "width": dc.width,
        "height": dc.height,
        "dims": [list(col) for col in dc.dims],
        "d_h": [[_mat_json(dc.d_h[p][q]) for q in range(dc.height)] for p in range(dc.width)],
        "d_v": [[_mat_json(dc.d_v[p][q]) for q in range(dc.height)] for p in range(dc.width)],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def from_json(text: str | dict) -> DoubleComplex:
    data = json.loads(text) if isinstance(text, str) else text
    try:
        width, height = int(data["width"]), int(data["height"])
        dims = tuple(tuple(int(d) for d in col) for col in data["dims"])
        H = [[la.matrix(data["d_h"][p][q]) for q in range(height)] for p in range(width)]
        V = [[la.matrix(data["d_v"][p][q]) for q in range(height)] for p in range(width)]
    except (KeyError, IndexError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"malformed complex JSON: {exc}") from exc
    return DoubleComplex(width, height, dims, H, V)


# ---- random valid complexes ------------------------------------------------------


def _random_unimodular(rng: random.Random, n: int) -> tuple[la.Matrix, la.Matrix]:
    """An integer matrix with integer inverse: product of random elementary moves."""
    g = la.identity(n)
    ginv = la.identity(n)
    for _ in range(2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice((-2, -1, 1, 2))
        # g <- g E, E = I + c e_ij ; ginv <- E^{-1} ginv
        for row in g:
            row[j] += c * row[i]
        ginv[i] = [a - c * b for a, b in zip(ginv[i], ginv[j])]
    return g, ginv


def random_double_complex(
    rng: random.Random,
    max_width: int = 8,
    max_height: int = 8,
    max_dim: int = 16,
    pieces: int | None = None,
) -> DoubleComplex:
    """A random valid complex: a direct sum of dots, squares and zigzags,
    with random scalars on the arrows, followed by a random change of basis
    in every C^{p,q}.

    Over a field every finite double complex is isomorphic to such a sum, so
    this reaches all isomorphism classes, including ones with nonzero higher
    differentials.
    """
    W = rng.randint(1, max_width)
    H = rng.randint(1, max_height)
    if pieces is None:
        pieces = rng.randint(0, 3 * (W + H))
    dims = [[0] * H for _ in range(W)]
    hs: dict = {}
    vs: dict = {}

    def scalar():
        return Fraction(rng.choice((-3, -2, -1, 1, 2, 3)), rng.choice((1, 1, 1, 2)))

    def fits(nodes):
        need = {}
        for node in nodes:
            need[node] = need.get(node, 0) + 1
        return all(0 <= p < W and 0 <= q < H and dims[p][q] + k <= max_dim for (p, q), k in need.items())

    def place(nodes, harrows, varrows):
        idx = {}
        for node in nodes:
            p, q = node
            idx[node] = dims[p][q]
            dims[p][q] += 1
        for a, b, c in harrows:
            hs.setdefault(a, []).append((idx[b], idx[a], c))
        for a, b, c in varrows:
            vs.setdefault(a, []).append((idx[b], idx[a], c))

    for _ in range(pieces):
        kind = rng.random()
        p0, q0 = rng.randrange(W), rng.randrange(H)
        if kind < 0.2:
            nodes = [(p0, q0)]
            if fits(nodes):
                place(nodes, [], [])
        elif kind < 0.45:
            a, b, c, d = (p0, q0), (p0 + 1, q0), (p0, q0 + 1), (p0 + 1, q0 + 1)
            if fits([a, b, c, d]):
                x, y, z = scalar(), scalar(), scalar()
                # d_v(b<-a-route) y*x must equal d_h z composed: w*z = y*x
                w = y * x / z
                place([a, b, c, d], [(a, b, x), (c, d, w)], [(a, c, z), (b, d, y)])
        else:
            length = rng.randint(2, 6)
            start_hi = rng.random() < 0.5
            seq = []
            k = 0
            a = (p0, q0)
            while len(seq) < length + int(start_hi):
                seq.append(("lo", (a[0] + k, a[1] - k)))
                seq.append(("hi", (a[0] + k + 1, a[1] - k)))
                k += 1
            seq = seq[int(start_hi) : int(start_hi) + length]
            nodes = [pos for _, pos in seq]
            if not fits(nodes):
                continue
            harrows, varrows = [], []
            for (t1, n1), (t2, n2) in zip(seq, seq[1:]):
                if t1 == "lo":  # lo -> hi by d_h
                    harrows.append((n1, n2, scalar()))
                else:  # next lo -> this hi by d_v
                    varrows.append((n2, n1, scalar()))
            place(nodes, harrows, varrows)

    d_h = {}
    d_v = {}
    for (p, q), entries in hs.items():
        m = _zero(dims[p + 1][q], dims[p][q])
        for i, j, c in entries:
            m[i][j] = c
        d_h[(p, q)] = m
    for (p, q), entries in vs.items():
        m = _zero(dims[p][q + 1], dims[p][q])
        for i, j, c in entries:
            m[i][j] = c
        d_v[(p, q)] = m
    g = {}
    for p in range(W):
        for q in range(H):
            if dims[p][q]:
                g[(p, q)] = _random_unimodular(rng, dims[p][q])
    for (p, q), m in list(d_h.items()):
        d_h[(p, q)] = la.matmul(la.matmul(g[(p + 1, q)][0], m), g[(p, q)][1])
    for (p, q), m in list(d_v.items()):
        d_v[(p, q)] = la.matmul(la.matmul(g[(p, q + 1)][0], m), g[(p, q)][1])
    return from_maps(dims, d_h, d_v)


def tensor_product(a_dims, a_maps, b_dims, b_maps) -> DoubleComplex:
    """C^{p,q} = A^p ⊗ B^q for cochain complexes A, B (maps[k]: degree k -> k+1)."""
    W, H = len(a_dims), len(b_dims)
    dims = [[a_dims[p] * b_dims[q] for q in range(H)] for p in range(W)]
    d_h, d_v = {}, {}

    def kron(x, y, rows_y, cols_y):
        out = []
        for xr in x:
            for yr in range(rows_y):
                out.append([xv * y[yr][c] for xv in xr for c in range(cols_y)])
        return out

    for p in range(W):
        for q in range(H):
            if p + 1 < W and dims[p][q] and dims[p + 1][q]:
                d_h[(p, q)] = kron(a_maps[p], la.identity(b_dims[q]), b_dims[q], b_dims[q])
            if q + 1 < H and dims[p][q] and dims[p][q + 1]:
                d_v[(p, q)] = kron(la.identity(a_dims[p]), b_maps[q], b_dims[q + 1], b_dims[q])
    return from_maps(dims, d_h, d_v)


def direct_sum(X: DoubleComplex, Y: DoubleComplex) -> DoubleComplex:
    """X ⊕ Y on the union grid, X's basis first in every C^{p,q}."""
    W, H = max(X.width, Y.width), max(X.height, Y.height)
    dims = [[X.dim(p, q) + Y.dim(p, q) for q in range(H)] for p in range(W)]

    def block(a, b, ra, ca, rb, cb):
        out = _zero(ra + rb, ca + cb)
        for i, row in enumerate(a):
            out[i][:ca] = row
        for i, row in enumerate(b):
            out[ra + i][ca:] = row
        return out

    d_h, d_v = {}, {}
    for p in range(W):
        for q in range(H):
            xa, ya = X.dim(p, q), Y.dim(p, q)
            if p + 1 < W:
                d_h[(p, q)] = block(X.hmap(p, q), Y.hmap(p, q), X.dim(p + 1, q), xa, Y.dim(p + 1, q), ya)
            if q + 1 < H:
                d_v[(p, q)] = block(X.vmap(p, q), Y.vmap(p, q), X.dim(p, q + 1), xa, Y.dim(p, q + 1), ya)
    return from_maps(dims, d_h, d_v)


def consistency_report(dc: DoubleComplex) -> dict:
    """Total cohomology, E_infinity sums per degree and LDT exactness, both directions."""
    h = [total_cohomology(dc, k) for k in range(dc.max_degree + 1)]
    out = {"width": dc.width, "height": dc.height, "h": h}
    for direction in (VERTICAL, HORIZONTAL):
        ei = e_infinity(dc, direction)
        sums = [0] * (dc.max_degree + 1)
        for (p, q), d in ei.items():
            sums[p + q] += d
        seq = ldt(dc, direction)
        out[direction] = {
            "e_inf_sums": sums,
            "converges": sums == h,
            "ldt_dims": [seq.first_dim, seq.h1_dim, seq.last_dim],
            "ldt_injective": seq.injective,
            "ldt_exact_at_h1": seq.exact_at_h1,
        }
    return out
