"""Finite Weyl groups with lengths, reflections and the strong Bruhat order.

Elements are stored as permutations of the root set (one ``bytes`` object
of length 256 per element, identity-padded past the last root so that
``bytes.translate`` composes them).  Ids are dense and assigned in BFS order
from the identity, so they are nondecreasing in length and id 0 is e.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from anosovkit.errors import ResourceLimitError
from anosovkit.rootsys import RootSystem, SimpleType, build_root_system, parse_type

DEFAULT_MAX_ORDER = 51840  # |W(E6)|


def weyl_group_order(t: SimpleType) -> int:
    n = t.rank
    f = t.family
    if f == "A":
        return math.factorial(n + 1)
    if f in "BC":
        return 2**n * math.factorial(n)
    if f == "D":
        return 2 ** (n - 1) * math.factorial(n)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600, ("F", 4): 1152, ("G", 2): 12}[
        (f, n)
    ]


@dataclass(frozen=True)
class WeylElement:
    id: int
    inversion_set: int  # bit k set iff positive root k is sent to a negative root
    length: int


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(eq=False)
class WeylGroup:
    root_system: RootSystem
    perms: tuple[bytes, ...]
    inversion_sets: tuple[int, ...]
    lengths: tuple[int, ...]
    words: tuple[tuple[int, ...], ...]
    right_mult: tuple[tuple[int, ...], ...]  # right_mult[i][x] = x s_i
    left_mult: tuple[tuple[int, ...], ...]  # left_mult[i][x] = s_i x
    reflections: tuple[int, ...]  # element id of the reflection in each positive root
    hasse_down: tuple[tuple[int, ...], ...]
    hasse_up: tuple[tuple[int, ...], ...]
    bruhat_below: tuple[int, ...]
    bruhat_above: tuple[int, ...]
    w0: int
    w0_left: tuple[int, ...]
    _by_perm: dict = field(repr=False, default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.lengths)

    @property
    def rank(self) -> int:
        return self.root_system.rank

    @property
    def identity(self) -> int:
        return 0

    def element(self, x: int) -> WeylElement:
        return WeylElement(x, self.inversion_sets[x], self.lengths[x])

    def simple(self, i: int) -> int:
        """Element id of the simple reflection with 0-based index ``i``."""
        return self.right_mult[i][0]

    def multiply(self, x: int, y: int) -> int:
        return self._by_perm[self.perms[y].translate(self.perms[x])]

    def inverse(self, x: int) -> int:
        y = 0
        for i in reversed(self.words[x]):
            y = self.right_mult[i][y]
        return y

    def from_word(self, word) -> int:
        x = 0
        for i in word:
            x = self.right_mult[i][x]
        return x

    def act_on_root(self, x: int, root_index: int) -> int:
        return self.perms[x][root_index]

    def leq(self, x: int, y: int) -> bool:
        return bool(self.bruhat_below[y] >> x & 1)

    def covers(self, y: int) -> frozenset[int]:
        return frozenset(self.hasse_down[y])

    def __eq__(self, other):
        if not isinstance(other, WeylGroup):
            return NotImplemented
        return self.state() == other.state()

    __hash__ = None

    def state(self) -> tuple:
        """Everything that defines the group, as plain comparable data."""
        return (
            str(self.root_system.simple_type),
            self.perms,
            self.inversion_sets,
            self.lengths,
            self.words,
            self.right_mult,
            self.left_mult,
            self.reflections,
            self.hasse_down,
            self.hasse_up,
            self.bruhat_below,
            self.bruhat_above,
            self.w0,
            self.w0_left,
        )


def _root_perms(rs: RootSystem) -> list[bytes]:
    from anosovkit.rootsys import reflect

    roots = rs.roots
    idx = {r: k for k, r in enumerate(roots)}
    out = []
    for i in range(rs.rank):
        img = [idx[reflect(r, i, rs.cartan_matrix)] for r in roots]
        out.append(bytes(img + list(range(len(roots), 256))))
    return out


def generate_weyl_group(rs: RootSystem | SimpleType | str, max_order: int = DEFAULT_MAX_ORDER) -> WeylGroup:
    """Materialize W by closure under simple reflections.

    Raises :class:`ResourceLimitError` before any allocation when the known
    order of W exceeds ``max_order``.
    """
    if not isinstance(rs, RootSystem):
        rs = build_root_system(parse_type(rs))
    expected = weyl_group_order(rs.simple_type)
    if expected > max_order:
        raise ResourceLimitError(
            f"|W({rs})| = {expected} exceeds max_order = {max_order}",
            progress={"expected_order": expected, "max_order": max_order},
        )
    n = rs.rank
    npos = len(rs.positive_roots)
    nroots = 2 * npos
    sperm = _root_perms(rs)
    # maps a root index to b"1" if negative else b"0"
    sign_table = bytes([0x30] * npos + [0x31] * npos + [0x30] * (256 - nroots))

    ident = bytes(range(256))
    perms = [ident]
    by_perm = {ident: 0}
    words: list[tuple[int, ...]] = [()]
    right = [[0] * expected for _ in range(n)]
    queue = deque([0])
    while queue:
        x = queue.popleft()
        px = perms[x]
        for i in range(n):
            py = sperm[i].translate(px)
            y = by_perm.get(py)
            if y is None:
                y = len(perms)
                perms.append(py)
                by_perm[py] = y
                words.append(words[x] + (i,))
                queue.append(y)
            right[i][x] = y
    assert len(perms) == expected, (len(perms), expected)

    left = [[by_perm[p.translate(sperm[i])] for p in perms] for i in range(n)]
    inv_sets = []
    lengths = []
    for p in perms:
        s = p[:npos].translate(sign_table)
        lengths.append(s.count(b"1"))
        inv_sets.append(int(s[::-1], 2) if npos else 0)

    reflections = [-1] * npos
    for i in range(n):
        reflections[i] = right[i][0]
    todo = deque(range(n))
    while todo:
        b = todo.popleft()
        for j in range(n):
            g = sperm[j][b]
            if g < npos and reflections[g] < 0:
                reflections[g] = left[j][right[j][reflections[b]]]
                todo.append(g)
    assert min(reflections) >= 0

    down: list[tuple[int, ...]] = []
    up: list[list[int]] = [[] for _ in perms]
    for y, py in enumerate(perms):
        ly = lengths[y]
        cov = []
        for b in _bits(inv_sets[y]):
            x = by_perm[perms[reflections[b]].translate(py)]
            if lengths[x] == ly - 1:
                cov.append(x)
                up[x].append(y)
        down.append(tuple(sorted(cov)))
    up_t = tuple(tuple(sorted(u)) for u in up)

    below = [0] * expected
    for y in range(expected):
        acc = 1 << y
        for x in down[y]:
            acc |= below[x]
        below[y] = acc
    above = [0] * expected
    for x in range(expected - 1, -1, -1):
        acc = 1 << x
        for y in up_t[x]:
            acc |= above[y]
        above[x] = acc

    tops = [x for x, l in enumerate(lengths) if l == npos]
    assert len(tops) == 1
    w0 = tops[0]
    p0 = perms[w0]
    w0_left = tuple(by_perm[p.translate(p0)] for p in perms)

    return WeylGroup(
        root_system=rs,
        perms=tuple(perms),
        inversion_sets=tuple(inv_sets),
        lengths=tuple(lengths),
        words=tuple(words),
        right_mult=tuple(tuple(r) for r in right),
        left_mult=tuple(tuple(r) for r in left),
        reflections=tuple(reflections),
        hasse_down=tuple(down),
        hasse_up=up_t,
        bruhat_below=tuple(below),
        bruhat_above=tuple(above),
        w0=w0,
        w0_left=w0_left,
        _by_perm=by_perm,
    )


def bruhat_leq(W: WeylGroup, x: int, y: int) -> bool:
    return W.leq(x, y)


def left_multiply_w0(W: WeylGroup, x: int) -> int:
    return W.w0_left[x]


def covers(W: WeylGroup, y: int) -> frozenset[int]:
    return W.covers(y)


def format_word(word, one_based: bool = True) -> str:
    """``(0, 1)`` -> ``"s1s2"``; the empty word is ``"e"``."""
    if not word:
        return "e"
    return "".join(f"s{i + 1 if one_based else i}" for i in word)
