"""Low-degree cohomology of finitely presented groups via Fox calculus.

A cocycle z: Γ -> V is determined by its values on generators, and the
cocycle identity applied to each relator r gives the linear constraint
sum_i ρ(∂r/∂g_i) z(g_i) = 0.  Its solution space is Z^1.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from anosovkit import linalg as la
from anosovkit.errors import RepresentationError, ValidationError

Word = tuple[int, ...]  # signed 1-based generator indices


def free_reduce(word) -> Word:
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


@dataclass(frozen=True)
class GroupPresentation:
    generators: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        if self.generators < 0:
            raise ValidationError("generator count must be >= 0")
        reduced = []
        for r in self.relators:
            for letter in r:
                if letter == 0 or abs(letter) > self.generators:
                    raise ValidationError(
                        f"relator {format_word(r)!r} uses generator {letter} outside ±1..±{self.generators}"
                    )
            r = free_reduce(r)
            if r:
                reduced.append(r)
        object.__setattr__(self, "relators", tuple(reduced))


def parse_word(text: str) -> Word:
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise ValidationError(f"cannot parse relator {text!r}") from None


def format_word(word) -> str:
    return " ".join(str(x) for x in word)


def surface_group(g: int) -> GroupPresentation:
    """<a1, b1, ..., ag, bg | [a1, b1] ... [ag, bg]>, generators numbered a1=1, b1=2, ..."""
    if g < 1:
        raise ValidationError("genus must be >= 1")
    rel = []
    for i in range(g):
        a, b = 2 * i + 1, 2 * i + 2
        rel += [a, b, -a, -b]
    return GroupPresentation(2 * g, (tuple(rel),))


def free_group(k: int) -> GroupPresentation:
    return GroupPresentation(k, ())


def parse_presentation(text: str) -> GroupPresentation:
    """Either JSON ``{"generators": k, "relators": ["1 2 -1 -2", ...]}`` or plain
    text: the generator count on the first line, then one relator per line.
    Lines starting with ``#`` are ignored."""
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        rels = data.get("relators", [])
        return GroupPresentation(
            int(data["generators"]),
            tuple(parse_word(r) if isinstance(r, str) else tuple(int(x) for x in r) for r in rels),
        )
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ValidationError("empty presentation")
    try:
        k = int(lines[0])
    except ValueError:
        raise ValidationError(f"first line must be the generator count, got {lines[0]!r}") from None
    return GroupPresentation(k, tuple(parse_word(ln) for ln in lines[1:]))


@dataclass
class MatrixRep:
    dim: int
    matrices: tuple[la.Matrix, ...]
    _inverses: tuple[la.Matrix, ...] = ()

    def __post_init__(self):
        mats = []
        for k, m in enumerate(self.matrices):
            m = la.matrix(m)
            if len(m) != self.dim or any(len(row) != self.dim for row in m):
                raise ValidationError(f"matrix of generator {k + 1} is not {self.dim}x{self.dim}")
            mats.append(m)
        invs = []
        for k, m in enumerate(mats):
            try:
                invs.append(la.inverse(m) if self.dim else [])
            except ZeroDivisionError:
                raise RepresentationError(f"matrix of generator {k + 1} is singular") from None
        self.matrices = tuple(mats)
        self._inverses = tuple(invs)

    def letter(self, x: int) -> la.Matrix:
        return self.matrices[x - 1] if x > 0 else self._inverses[-x - 1]

    def evaluate(self, word) -> la.Matrix:
        m = la.identity(self.dim)
        for x in word:
            m = la.matmul(m, self.letter(x), ncols=self.dim)
        return m

    def conjugate(self, p: la.Matrix) -> MatrixRep:
        """The isomorphic module p ρ p^{-1}."""
        pinv = la.inverse(p)
        return MatrixRep(self.dim, tuple(la.matmul(la.matmul(p, m), pinv) for m in self.matrices))

    def dual(self) -> MatrixRep:
        """Contragredient: g acts by the inverse transpose."""
        return MatrixRep(self.dim, tuple(la.transpose(inv, self.dim) for inv in self._inverses))


def trivial_rep(k: int, d: int = 1) -> MatrixRep:
    return MatrixRep(d, tuple(la.identity(d) for _ in range(k)))


def parse_rep(text: str | list) -> MatrixRep:
    """JSON array of square matrices, entries as rationals or strings ``"a/b"``."""
    data = json.loads(text) if isinstance(text, str) else text
    if isinstance(data, dict):
        data = data["matrices"]
    if not data:
        raise ValidationError("representation needs at least one matrix (or a 'dim' field)")
    try:
        mats = tuple(la.matrix(m) for m in data)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ValidationError(f"malformed matrix entry: {exc}") from exc
    return MatrixRep(len(mats[0]), mats)


def rep_to_json(rep: MatrixRep) -> list:
    return [[[la.format_fraction(v) for v in row] for row in m] for m in rep.matrices]


def check_relators(pres: GroupPresentation, rep: MatrixRep) -> None:
    if len(rep.matrices) != pres.generators:
        raise ValidationError(f"{len(rep.matrices)} matrices for {pres.generators} generators")
    ident = la.identity(rep.dim)
    for r in pres.relators:
        if rep.evaluate(r) != ident:
            raise RepresentationError(f"relator {format_word(r)!r} does not evaluate to the identity")


def fox_derivative(word, i: int, rep: MatrixRep) -> la.Matrix:
    """ρ(∂w/∂g_i) for the 1-based generator index ``i``."""
    d = rep.dim
    acc = la.zeros(d, d)
    prefix = la.identity(d)
    for x in word:
        nxt = la.matmul(prefix, rep.letter(x), ncols=d)
        if x == i:
            acc = la.add(acc, prefix)
        elif x == -i:
            acc = la.add(acc, la.scale(nxt, -1))
        prefix = nxt
    return acc


def fox_system(pres: GroupPresentation, rep: MatrixRep) -> la.Matrix:
    """Stacked Fox blocks, shape (#relators * d) x (k * d); its kernel is Z^1."""
    check_relators(pres, rep)
    d, k = rep.dim, pres.generators
    rows: la.Matrix = []
    for r in pres.relators:
        blocks = [fox_derivative(r, i, rep) for i in range(1, k + 1)]
        for a in range(d):
            rows.append([blocks[i][a][b] for i in range(k) for b in range(d)])
    return rows


@dataclass(frozen=True)
class CohomologyDims:
    z1: int
    b1: int
    h1: int
    h0: int

    def as_dict(self) -> dict:
        return {"z1": self.z1, "b1": self.b1, "h1": self.h1, "h0": self.h0}


def invariants_dim(rep: MatrixRep) -> int:
    d = rep.dim
    stacked = []
    for m in rep.matrices:
        stacked.extend(la.add(m, la.scale(la.identity(d), -1)))
    return d - la.rank(stacked) if stacked else d


def cohomology_dims(pres: GroupPresentation, rep: MatrixRep) -> CohomologyDims:
    system = fox_system(pres, rep)
    n = pres.generators * rep.dim
    z1 = n - la.rank(system) if system else n
    h0 = invariants_dim(rep)
    b1 = rep.dim - h0
    return CohomologyDims(z1=z1, b1=b1, h1=z1 - b1, h0=h0)


# ---- random genuine representations of surface groups ----------------------


def _random_invertible(rng: random.Random, d: int, spread: int = 3) -> la.Matrix:
    while True:
        m = [[Fraction(rng.randint(-spread, spread)) for _ in range(d)] for _ in range(d)]
        if la.det(m) != 0:
            return m


def random_surface_rep(rng: random.Random, g: int, d: int) -> MatrixRep:
    """A genuine representation of the genus-g surface group in GL(d, Q).

    Handles are paired as (A, B), (B, A), whose commutators cancel; an odd
    genus adds one handle (C, C^2) with trivial commutator.  The result is
    conjugated by a random invertible matrix so that no basis is special.
    """
    if g < 1 or d < 1:
        raise ValidationError("need g >= 1 and d >= 1")
    mats: list[la.Matrix] = []
    for _ in range(g // 2):
        a = _random_invertible(rng, d)
        b = _random_invertible(rng, d)
        mats += [a, b, b, a]
    if g % 2:
        c = _random_invertible(rng, d)
        mats += [c, la.matmul(c, c)]
    rep = MatrixRep(d, tuple(mats))
    return rep.conjugate(_random_invertible(rng, d))


def random_diagonal_rep(rng: random.Random, pres: GroupPresentation, d: int) -> MatrixRep:
    """Commuting diagonal matrices; a genuine rep of any presentation whose
    relators have zero exponent sum in every generator (e.g. surface groups)."""
    for r in pres.relators:
        for i in range(1, pres.generators + 1):
            if sum(1 if x == i else -1 if x == -i else 0 for x in r) != 0:
                raise ValidationError("diagonal reps need relators with zero exponent sums")
    mats = []
    for _ in range(pres.generators):
        diag = [Fraction(rng.choice((1, 2, 3)), rng.choice((1, 2))) * rng.choice((1, -1)) for _ in range(d)]
        mats.append([[diag[i] if i == j else Fraction(0) for j in range(d)] for i in range(d)])
    return MatrixRep(d, tuple(mats))
