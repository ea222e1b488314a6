"""Balanced ideals of type (P_A, F) in a Weyl group.

A membership set is an ``int`` bitset over element ids (bit x <=> x in I).
The enumerator is a backtracking search over the w0-pairs {x, w0 x}.  Each
decision is closed in one step: putting x into I forces the smallest
invariant ideal containing x (``down[x]``) in and its w0-image (``up[w0 x]``)
out, and both of those sets are already closed under every constraint, so
no fixpoint iteration is needed.

The brute-force oracle at the bottom shares none of this machinery.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from anosovkit.errors import ResourceLimitError, ValidationError
from anosovkit.flags import FlagConfiguration, format_theta
from anosovkit.rootsys import minus_w0_permutation

DEFAULT_NODE_LIMIT = 10**8
DEFAULT_RESULT_LIMIT = 10**6
BRUTE_FORCE_MAX_ORDER = 24
BRUTE_FORCE_MAX_PAIRS = 26


def bit_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_hex(mask: int, nbits: int) -> str:
    return format(mask, "0{}x".format(max(1, (nbits + 3) // 4)))


@dataclass(frozen=True, eq=False)
class BalancedIdeal:
    membership: int
    flag_config: FlagConfiguration = field(repr=False)
    length: int  # max l_D over I/W_D
    weyl_length: int  # max l over I, with no quotient taken
    codefect: int  # N - length

    @property
    def elements(self) -> list[int]:
        return bit_indices(self.membership)

    @property
    def hex(self) -> str:
        return to_hex(self.membership, self.flag_config.weyl.order)

    def __eq__(self, other):
        if not isinstance(other, BalancedIdeal):
            return NotImplemented
        return self.membership == other.membership and self.flag_config is other.flag_config

    def __hash__(self):
        return hash(self.membership)


@dataclass(frozen=True)
class ThickeningProfile:
    cosets: tuple[tuple[int, int], ...]  # (minimal representative id, l_D)
    histogram: tuple[tuple[int, int], ...]  # (Schubert dimension, number of cosets)

    @property
    def dims(self) -> list[int]:
        return sorted(d for _, d in self.cosets)

    @property
    def max_dim(self) -> int:
        return max(d for d, _ in self.histogram)


@dataclass(frozen=True)
class EnumerationResult:
    ideals: tuple[BalancedIdeal, ...]
    truncated: bool
    nodes: int

    def __iter__(self):
        return iter(self.ideals)

    def __len__(self):
        return len(self.ideals)

    def __getitem__(self, k):
        return self.ideals[k]


@dataclass(frozen=True)
class LengthExtremes:
    max_length: int | None
    min_length: int | None
    count: int

    @property
    def empty(self) -> bool:
        return self.count == 0


def closed_gens_A(fc: FlagConfiguration) -> tuple[int, ...]:
    """0-based theta_A together with its image under -w0.

    A balanced I is left W_A-invariant, hence so is its complement w0 I, so
    I is also invariant under w0 W_A w0.  For symmetric theta_A this adds
    nothing.
    """
    perm = minus_w0_permutation(fc.weyl.root_system)
    return tuple(sorted(set(fc.gens_A) | {perm[i] for i in fc.gens_A}))


def invariance_orbits(fc: FlagConfiguration, gens_A: tuple[int, ...] | None = None) -> list[int]:
    """Orbit label of every element under x -> a x b, a in W_A, b in W_D.

    The label is the smallest id in the double coset.
    """
    W = fc.weyl
    if gens_A is None:
        gens_A = fc.gens_A
    label = [-1] * W.order
    for x0 in range(W.order):
        if label[x0] >= 0:
            continue
        label[x0] = x0
        stack = [x0]
        while stack:
            x = stack.pop()
            for i in gens_A:
                y = W.left_mult[i][x]
                if label[y] < 0:
                    label[y] = x0
                    stack.append(y)
            for i in fc.gens_D:
                y = W.right_mult[i][x]
                if label[y] < 0:
                    label[y] = x0
                    stack.append(y)
    return label


def ideal_length(fc: FlagConfiguration, membership: int) -> tuple[int, int]:
    """(max l_D, max l) over the elements of ``membership``."""
    lD = fc.coset_length
    lW = fc.weyl.lengths
    best_d = best_w = -1
    for x in bit_indices(membership):
        if lD[x] > best_d:
            best_d = lD[x]
        if lW[x] > best_w:
            best_w = lW[x]
    return best_d, best_w


def make_balanced_ideal(fc: FlagConfiguration, membership: int) -> BalancedIdeal:
    ld, lw = ideal_length(fc, membership)
    return BalancedIdeal(membership, fc, ld, lw, fc.N - ld)


def is_ideal(fc: FlagConfiguration, membership: int) -> bool:
    """Identity, downward closure and both invariances (no balance)."""
    W = fc.weyl
    if membership >> W.order:
        return False
    if not membership & 1:
        return False
    for x in bit_indices(membership):
        if W.bruhat_below[x] & ~membership:
            return False
        for i in fc.gens_A:
            if not membership >> W.left_mult[i][x] & 1:
                return False
        for i in fc.gens_D:
            if not membership >> W.right_mult[i][x] & 1:
                return False
    return True


def is_balanced_ideal(fc: FlagConfiguration, membership: int) -> bool:
    W = fc.weyl
    if not is_ideal(fc, membership):
        return False
    image = 0
    for x in bit_indices(membership):
        image |= 1 << W.w0_left[x]
    full = (1 << W.order) - 1
    return image & membership == 0 and image | membership == full


class _Context:
    """Immutable search data; picklable so worker processes can rebuild it."""

    def __init__(self, fc: FlagConfiguration):
        W = fc.weyl
        n = W.order
        orbit = invariance_orbits(fc, closed_gens_A(fc))
        down_of: dict[int, int] = {}
        up_of: dict[int, int] = {}
        for x in range(n):
            o = orbit[x]
            down_of[o] = down_of.get(o, 0) | W.bruhat_below[x]
            up_of[o] = up_of.get(o, 0) | W.bruhat_above[x]
        self.n = n
        self.down = tuple(down_of[orbit[x]] for x in range(n))
        self.up = tuple(up_of[orbit[x]] for x in range(n))
        self.w0x = W.w0_left
        reps = set()
        for x in range(n):
            y = W.w0_left[x]
            reps.add(min((x, y), key=lambda z: (W.lengths[z], z)))
        self.order = tuple(sorted(reps, key=lambda z: (W.lengths[z], z)))
        self.full = (1 << n) - 1
        e, w0 = 0, W.w0
        self.root = (self.down[e], self.up[w0])


def _children(ctx: _Context, inc: int, exc: int, pos: int):
    """Next undecided pair position and the consistent child states."""
    decided = inc | exc
    order = ctx.order
    while pos < len(order) and decided >> order[pos] & 1:
        pos += 1
    if pos == len(order):  # every pair decided but states overlap: dead end
        return []
    x = order[pos]
    y = ctx.w0x[x]
    kids = []
    a, b = inc | ctx.down[x], exc | ctx.up[y]
    if not a & b:
        kids.append((a, b, pos + 1))
    a, b = inc | ctx.down[y], exc | ctx.up[x]
    if not a & b:
        kids.append((a, b, pos + 1))
    return kids


def _search(ctx: _Context, start, node_limit: int, result_limit: int | None):
    """Depth-first search from ``start``; include-branch first.

    Returns (memberships, nodes, status) with status in
    {"complete", "truncated", "node_limit"}.
    """
    found: list[int] = []
    nodes = 0
    if start[0] & start[1]:
        return found, nodes, "complete"
    stack = [start]
    full = ctx.full
    while stack:
        inc, exc, pos = stack.pop()
        nodes += 1
        if nodes > node_limit:
            return found, nodes, "node_limit"
        if inc | exc == full:
            found.append(inc)
            if result_limit is not None and len(found) >= result_limit:
                return found, nodes, "truncated"
            continue
        kids = _children(ctx, inc, exc, pos)
        stack.extend(reversed(kids))
    return found, nodes, "complete"


_WORKER_CTX: _Context | None = None


def _worker_init(ctx: _Context) -> None:
    global _WORKER_CTX
    _WORKER_CTX = ctx


def _worker_run(args):
    start, node_limit = args
    return _search(_WORKER_CTX, start, node_limit, None)


def _frontier(ctx: _Context, depth: int):
    """Expand the tree breadth-first ``depth`` levels; leaves reached early are kept."""
    level = [(*ctx.root, 0)]
    done: list[int] = []
    nodes = 0
    if ctx.root[0] & ctx.root[1]:
        return [], [], 0
    for _ in range(depth):
        nxt = []
        for inc, exc, pos in level:
            nodes += 1
            if inc | exc == ctx.full:
                done.append(inc)
                continue
            nxt.extend(_children(ctx, inc, exc, pos))
        level = nxt
    return level, done, nodes


def enumerate_balanced_ideals(
    fc: FlagConfiguration,
    limit: int | None = None,
    *,
    node_limit: int = DEFAULT_NODE_LIMIT,
    result_limit: int = DEFAULT_RESULT_LIMIT,
    threads: int = 1,
    split_depth: int = 6,
) -> EnumerationResult:
    """All balanced ideals of type (P_A, F), sorted by membership bitset.

    ``limit`` stops the search after that many ideals (the first ones in
    search order) and marks the result truncated.  Exceeding ``node_limit``
    or ``result_limit`` raises :class:`ResourceLimitError` whose ``partial``
    is a truncated :class:`EnumerationResult`.  With ``threads > 1`` the
    subtrees below ``split_depth`` run in worker processes; the output does
    not depend on the worker count.
    """
    if limit is not None and limit < 0:
        raise ValidationError("limit must be nonnegative")
    ctx = _Context(fc)
    if limit == 0:
        return EnumerationResult((), True, 0)
    cap = result_limit if limit is None else min(limit, result_limit)
    if threads <= 1 or limit is not None:
        found, nodes, status = _search(ctx, (*ctx.root, 0), node_limit, cap)
    else:
        level, found, nodes = _frontier(ctx, split_depth)
        status = "complete"
        with ProcessPoolExecutor(max_workers=threads, initializer=_worker_init, initargs=(ctx,)) as pool:
            for sub, k, st in pool.map(_worker_run, [(s, node_limit) for s in level]):
                found.extend(sub)
                nodes += k
        if nodes > node_limit:
            status = "node_limit"
        elif len(found) > cap:
            status = "truncated"
    found = sorted(set(found))
    limited = status == "node_limit" or (status == "truncated" and limit is None)
    result = EnumerationResult(
        tuple(make_balanced_ideal(fc, m) for m in found), status != "complete", nodes
    )
    if limited:
        what = "node limit" if status == "node_limit" else "result limit"
        raise ResourceLimitError(
            f"balanced-ideal search for {fc.label} stopped at the {what}",
            partial=result,
            progress={"nodes": nodes, "found": len(found), "node_limit": node_limit, "result_limit": result_limit},
        )
    return result


def max_min_ideal_length(fc: FlagConfiguration, **kwargs) -> LengthExtremes:
    ideals = enumerate_balanced_ideals(fc, **kwargs)
    if not ideals:
        return LengthExtremes(None, None, 0)
    lengths = [b.length for b in ideals]
    return LengthExtremes(max(lengths), min(lengths), len(lengths))


def codefect_ceiling(fc: FlagConfiguration) -> int:
    return fc.N // 2


def codefect_findings(ideals) -> list[dict]:
    """Ideals whose codefect N - l(I) exceeds floor(N/2), one record each."""
    out = []
    for b in ideals:
        ceiling = codefect_ceiling(b.flag_config)
        if b.codefect > ceiling:
            out.append(
                {
                    "configuration": b.flag_config.label,
                    "bitset": b.hex,
                    "N": b.flag_config.N,
                    "length": b.length,
                    "codefect": b.codefect,
                    "ceiling": ceiling,
                }
            )
    return out


def thickening_profile(b: BalancedIdeal) -> ThickeningProfile:
    fc = b.flag_config
    reps = sorted({fc.coset_rep[x] for x in b.elements})
    cosets = tuple((r, fc.weyl.lengths[r]) for r in reps)
    hist = Counter(d for _, d in cosets)
    return ThickeningProfile(cosets, tuple(sorted(hist.items())))


def ideal_record(b: BalancedIdeal) -> dict:
    return {
        "bitset": b.hex,
        "length": b.length,
        "weyl_length": b.weyl_length,
        "codefect": b.codefect,
        "coset_dims": thickening_profile(b).dims,
    }


def ideals_to_json(fc: FlagConfiguration, ideals) -> str:
    payload = {
        "type": str(fc.weyl.root_system),
        "theta_A": sorted(fc.theta_A),
        "theta_D": sorted(fc.theta_D),
        "N": fc.N,
        "order": fc.weyl.order,
        "ideals": [ideal_record(b) for b in ideals],
    }
    return json.dumps(payload, sort_keys=True, indent=2)


CSV_FIELDS = ["type", "theta_A", "theta_D", "N", "count", "min_length", "max_length", "truncated"]


def summary_row(fc: FlagConfiguration, result: EnumerationResult) -> dict:
    lengths = [b.length for b in result]
    return {
        "type": str(fc.weyl.root_system),
        "theta_A": format_theta(fc.theta_A),
        "theta_D": format_theta(fc.theta_D),
        "N": fc.N,
        "count": len(result),
        "min_length": min(lengths) if lengths else "",
        "max_length": max(lengths) if lengths else "",
        "truncated": int(result.truncated),
    }


def summaries_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


# --------------------------------------------------------------------------
# brute-force oracle


def brute_force_balanced_ideals(fc: FlagConfiguration, chunk_bits: int = 20) -> list[int]:
    """Balanced ideals by exhaustive filtering, as sorted membership ints.

    For |W| <= 24 every one of the 2^|W| subsets is tested.  Larger groups
    (up to 2 * BRUTE_FORCE_MAX_PAIRS elements) test every subset that picks
    exactly one element of each w0-pair.  Downward closure is checked
    through the Hasse diagram only, never through closure bitsets.
    """
    W = fc.weyl
    n = W.order
    covers = [(x, y) for y in range(n) for x in W.hasse_down[y]]
    left = [(x, W.left_mult[i][x]) for i in fc.gens_A for x in range(n)]
    right = [(x, W.right_mult[i][x]) for i in fc.gens_D for x in range(n)]
    pairs = sorted({(min(x, W.w0_left[x]), max(x, W.w0_left[x])) for x in range(n)})

    def bit(s, k):
        return (s >> np.uint64(k)) & np.uint64(1)

    def keep(s):
        s = s[bit(s, 0) == 1]
        for x, y in pairs:
            s = s[bit(s, x) != bit(s, y)]
        for a, b in left + right:
            s = s[bit(s, a) == bit(s, b)]
        for x, y in covers:
            s = s[(bit(s, y) == 0) | (bit(s, x) == 1)]
        return s

    out: list[int] = []
    if n <= BRUTE_FORCE_MAX_ORDER:
        total = 1 << n
        step = 1 << min(chunk_bits, n)
        for start in range(0, total, step):
            s = np.arange(start, min(start + step, total), dtype=np.uint64)
            out.extend(int(v) for v in keep(s))
        return sorted(out)
    m = len(pairs)
    if m > BRUTE_FORCE_MAX_PAIRS or n > 64:
        raise ResourceLimitError(f"brute force over {m} pairs is too large", progress={"pairs": m})
    lo = np.array([np.uint64(1) << np.uint64(x) for x, _ in pairs], dtype=np.uint64)
    hi = np.array([np.uint64(1) << np.uint64(y) for _, y in pairs], dtype=np.uint64)
    total = 1 << m
    step = 1 << min(chunk_bits, m)
    for start in range(0, total, step):
        choice = np.arange(start, min(start + step, total), dtype=np.uint64)
        s = np.zeros_like(choice)
        for k in range(m):
            c = (choice >> np.uint64(k)) & np.uint64(1)
            s |= np.where(c == 1, hi[k], lo[k])
        out.extend(int(v) for v in keep(s))
    return sorted(out)
