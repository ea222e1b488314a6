"""Independent reference computations used only by the tests.

Nothing here shares code with the package beyond the Cartan matrix: Weyl
group elements are integer matrices acting on the root lattice, Bruhat
order comes from the subword property, and balanced ideals are filtered
from explicit subsets.
"""

from __future__ import annotations

from itertools import product

import numpy as np


def simple_reflection_matrices(cartan) -> list[np.ndarray]:
    """s_i(α_j) = α_j - <α_i^∨, α_j> α_i, as matrices on simple-root coordinates."""
    n = len(cartan)
    mats = []
    for i in range(n):
        m = np.eye(n, dtype=np.int64)
        for j in range(n):
            m[i, j] -= cartan[i][j]
        mats.append(m)
    return mats


def word_matrix(word, mats, n) -> np.ndarray:
    m = np.eye(n, dtype=np.int64)
    for i in word:
        m = m @ mats[i]
    return m


def positive_roots_by_closure(cartan) -> set[tuple[int, ...]]:
    n = len(cartan)
    mats = simple_reflection_matrices(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    todo = list(simple)
    while todo:
        r = np.array(todo.pop())
        for m in mats:
            s = tuple(int(x) for x in m @ r)
            if all(x >= 0 for x in s) and s not in seen:
                seen.add(s)
                todo.append(s)
    return seen


def matrix_length(m: np.ndarray, positive_roots) -> int:
    """Number of positive roots sent to negative roots."""
    return sum(1 for r in positive_roots if (m @ np.array(r) <= 0).all())


def subword_bruhat_below(word, mats, n) -> set[bytes]:
    """Matrices (as bytes) of all subword products of a reduced word."""
    out = set()
    for mask in product((0, 1), repeat=len(word)):
        m = word_matrix([w for w, keep in zip(word, mask) if keep], mats, n)
        out.add(m.tobytes())
    return out
