"""Parabolic data, right cosets W/W_D and Schubert-cell dimensions.

Subsets of simple roots are given with 1-based Bourbaki labels; the empty
set stands for the Borel subgroup.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from anosovkit.errors import ValidationError
from anosovkit.weyl import WeylGroup

SYMMETRIC_CONDITION = (
    "P_A must be symmetric: its Weyl subgroup W_A has to be invariant under "
    "conjugation by the longest element w0 (equivalently theta_A is stable under -w0)"
)


def parse_theta(text: str | Iterable[int] | None) -> frozenset[int]:
    """Parse ``"1,3"`` (1-based labels) into a frozenset; ``""`` is the Borel."""
    if text is None:
        return frozenset()
    if isinstance(text, str):
        parts = [p.strip() for p in text.replace(" ", ",").split(",")]
        try:
            return frozenset(int(p) for p in parts if p)
        except ValueError:
            raise ValidationError(f"cannot parse simple-root subset {text!r}") from None
    return frozenset(int(i) for i in text)


def format_theta(theta: Iterable[int]) -> str:
    return ",".join(str(i) for i in sorted(theta))


def _check_theta(W: WeylGroup, theta: frozenset[int], name: str) -> None:
    bad = [i for i in theta if not 1 <= i <= W.rank]
    if bad:
        raise ValidationError(f"{name} contains labels {sorted(bad)} outside 1..{W.rank}")
    if len(theta) == W.rank:
        raise ValidationError(f"{name} = all simple roots gives P = G, which is not a proper parabolic")


def parabolic_subgroup(W: WeylGroup, theta: Iterable[int]) -> frozenset[int]:
    """Element ids of W_theta."""
    gens = [i - 1 for i in theta]
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for i in gens:
            y = W.right_mult[i][x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


def is_symmetric_parabolic(W: WeylGroup, theta: Iterable[int]) -> bool:
    theta = frozenset(theta)
    sub = parabolic_subgroup(W, theta)
    for i in theta:
        s = W.simple(i - 1)
        if W.multiply(W.multiply(W.w0, s), W.w0) not in sub:
            return False
    return True


@dataclass(eq=False)
class FlagConfiguration:
    weyl: WeylGroup
    theta_A: frozenset[int]
    theta_D: frozenset[int]
    coset_rep: tuple[int, ...]  # minimal representative of x W_D, per element
    cosets: tuple[int, ...]  # minimal representatives, increasing id
    coset_length: tuple[int, ...]  # l_D(x W_D), per element
    N: int
    symmetric: bool

    @property
    def gens_A(self) -> tuple[int, ...]:
        return tuple(sorted(i - 1 for i in self.theta_A))

    @property
    def gens_D(self) -> tuple[int, ...]:
        return tuple(sorted(i - 1 for i in self.theta_D))

    @property
    def label(self) -> str:
        return f"{self.weyl.root_system} pa={{{format_theta(self.theta_A)}}} pd={{{format_theta(self.theta_D)}}}"

    def coset_members(self, rep: int) -> tuple[int, ...]:
        return tuple(x for x, r in enumerate(self.coset_rep) if r == rep)


def _min_rep(W: WeylGroup, x: int, gens: tuple[int, ...]) -> int:
    lengths = W.lengths
    moved = True
    while moved:
        moved = False
        for i in gens:
            y = W.right_mult[i][x]
            if lengths[y] < lengths[x]:
                x = y
                moved = True
    return x


def build_flag_configuration(
    W: WeylGroup,
    theta_A: Iterable[int] | str | None = (),
    theta_D: Iterable[int] | str | None = (),
    *,
    allow_nonsymmetric: bool = False,
) -> FlagConfiguration:
    theta_A = parse_theta(theta_A)
    theta_D = parse_theta(theta_D)
    _check_theta(W, theta_A, "theta_A")
    _check_theta(W, theta_D, "theta_D")
    symmetric = is_symmetric_parabolic(W, theta_A)
    if not symmetric and not allow_nonsymmetric:
        raise ValidationError(
            f"theta_A = {{{format_theta(theta_A)}}} is not symmetric in {W.root_system}: {SYMMETRIC_CONDITION}"
        )
    gens = tuple(sorted(i - 1 for i in theta_D))
    reps = tuple(_min_rep(W, x, gens) for x in range(W.order))
    lengths = tuple(W.lengths[r] for r in reps)
    return FlagConfiguration(
        weyl=W,
        theta_A=theta_A,
        theta_D=theta_D,
        coset_rep=reps,
        cosets=tuple(sorted(set(reps))),
        coset_length=lengths,
        N=lengths[W.w0],
        symmetric=symmetric,
    )


def flag_dimension(fc: FlagConfiguration) -> int:
    return fc.N


def symmetric_subsets(W: WeylGroup) -> list[frozenset[int]]:
    """All proper symmetric subsets of simple roots, ordered by (size, labels)."""
    return [t for t in proper_subsets(W.rank) if is_symmetric_parabolic(W, t)]


def proper_subsets(rank: int) -> list[frozenset[int]]:
    out = []
    for mask in range((1 << rank) - 1):
        out.append(frozenset(i + 1 for i in range(rank) if mask >> i & 1))
    out.sort(key=lambda t: (len(t), sorted(t)))
    return out
