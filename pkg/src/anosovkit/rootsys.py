"""Root systems of the simple Lie types.

Roots are integer vectors in the basis of simple roots.  Simple roots are
numbered as in Bourbaki; internally generator indices are 0-based, so the
Bourbaki root alpha_i has index ``i - 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from anosovkit.errors import InvalidTypeError

Root = tuple[int, ...]

_RANK_RULES = {
    "A": (lambda n: n >= 1, "type A needs rank n >= 1"),
    "B": (lambda n: n >= 2, "type B needs rank n >= 2"),
    "C": (lambda n: n >= 2, "type C needs rank n >= 2"),
    "D": (lambda n: n >= 3, "type D needs rank n >= 3"),
    "E": (lambda n: n in (6, 7, 8), "type E needs rank 6, 7 or 8"),
    "F": (lambda n: n == 4, "type F needs rank 4"),
    "G": (lambda n: n == 2, "type G needs rank 2"),
}

_TYPE_RE = re.compile(r"^\s*([A-Za-z])\s*(\d+)\s*$")


@dataclass(frozen=True, order=True)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _RANK_RULES:
            raise InvalidTypeError(f"unknown family {self.family!r}; expected one of A-G")
        ok, rule = _RANK_RULES[self.family]
        if not isinstance(self.rank, int) or not ok(self.rank):
            raise InvalidTypeError(f"{self.family}{self.rank}: {rule}")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def parse_type(text: str | SimpleType) -> SimpleType:
    """Parse ``"A3"``, ``"b2"``, ``"E8"`` ... into a :class:`SimpleType`."""
    if isinstance(text, SimpleType):
        return text
    m = _TYPE_RE.match(text)
    if not m:
        raise InvalidTypeError(f"cannot parse type string {text!r}; expected e.g. 'A3' or 'G2'")
    return SimpleType(m.group(1).upper(), int(m.group(2)))


def cartan_matrix(t: SimpleType) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix ``A[i][j] = <alpha_i^vee, alpha_j>`` in Bourbaki numbering."""
    n = t.rank
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2

    def link(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    f = t.family
    if f in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if f == "B":
            # alpha_n short
            a[n - 1][n - 2] = -2
        elif f == "C":
            # alpha_n long
            a[n - 2][n - 1] = -2
    elif f == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif f == "E":
        # 1-3-4-5-6-7-8 with 2 attached to 4
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif f == "F":
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif f == "G":
        # alpha_1 short, alpha_2 long
        link(0, 1, -3, -1)
    return tuple(tuple(row) for row in a)


def positive_root_count(t: SimpleType) -> int:
    """Closed-form |Phi+| for each type."""
    n = t.rank
    return {
        "A": n * (n + 1) // 2,
        "B": n * n,
        "C": n * n,
        "D": n * (n - 1),
        "E": {6: 36, 7: 63, 8: 120}.get(n, 0),
        "F": 24,
        "G": 6,
    }[t.family]


def reflect(root: Root, i: int, cartan) -> Root:
    """Apply the simple reflection s_i to a root given in simple-root coordinates."""
    pairing = sum(c * cartan[i][j] for j, c in enumerate(root))
    if pairing == 0:
        return root
    out = list(root)
    out[i] -= pairing
    return tuple(out)


@dataclass(frozen=True)
class RootSystem:
    simple_type: SimpleType
    cartan_matrix: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Root, ...]
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.simple_type.rank

    @property
    def simple_roots(self) -> tuple[Root, ...]:
        return self.positive_roots[: self.rank]

    @property
    def roots(self) -> tuple[Root, ...]:
        """Positive roots followed by their negatives, in matching order."""
        return self.positive_roots + tuple(tuple(-c for c in r) for r in self.positive_roots)

    def index(self, root: Root) -> int:
        """Index of a root (positive or negative) in :attr:`roots`."""
        if not self._index:
            self._index.update({r: k for k, r in enumerate(self.roots)})
        return self._index[tuple(root)]

    def __str__(self) -> str:
        return str(self.simple_type)


def build_root_system(t: SimpleType | str) -> RootSystem:
    """Close the simple roots under simple reflections, keeping positive roots.

    Every positive root is reached from a simple root by a chain of simple
    reflections that stays inside the positive roots, so the closure below
    is complete.
    """
    t = parse_type(t)
    cm = cartan_matrix(t)
    n = t.rank
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            for i in range(n):
                s = reflect(r, i, cm)
                if s not in seen and all(c >= 0 for c in s):
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    # height, then lexicographic with alpha_1 coefficient most significant
    # (descending), which puts alpha_1..alpha_n first in index order
    ordered = sorted(seen, key=lambda r: (sum(r), tuple(-c for c in r)))
    return RootSystem(t, cm, tuple(ordered))


def dim_lie_algebra(rs: RootSystem) -> int:
    return rs.rank + 2 * len(rs.positive_roots)


def _apply_matrix(m, v):
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


def longest_element_matrix(rs: RootSystem) -> tuple[tuple[int, ...], ...]:
    """Matrix of w0 on the simple-root basis (columns are w0(alpha_j)).

    Built by right-multiplying by any s_i that still sends alpha_i to a
    positive root; each step raises the length by one, so this stops at w0
    after |Phi+| steps without materializing the group.
    """
    n = rs.rank
    cm = rs.cartan_matrix
    # columns of w
    cols = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    steps = 0
    while True:
        for i in range(n):
            if all(c >= 0 for c in cols[i]):
                break
        else:
            break
        # (w s_i)(alpha_j) = w(alpha_j - A[i][j] alpha_i)
        wi = cols[i]
        cols = [
            tuple(cols[j][k] - cm[i][j] * wi[k] for k in range(n)) for j in range(n)
        ]
        steps += 1
    assert steps == len(rs.positive_roots)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def minus_w0_permutation(rs: RootSystem) -> tuple[int, ...]:
    """The diagram involution sigma with -w0(alpha_i) = alpha_sigma(i), 0-based."""
    m = longest_element_matrix(rs)
    n = rs.rank
    sigma = []
    for j in range(n):
        img = tuple(-m[i][j] for i in range(n))
        k = img.index(1)
        assert sum(img) == 1, "w0 must send simple roots to negative simple roots"
        sigma.append(k)
    return tuple(sigma)
