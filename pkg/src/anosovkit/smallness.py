"""k-smallness certificates, length-bound checks, classification sweeps and
moduli-space dimension formulas.

The criterion is one-directional: a thickened limit set is k-small when

    hdim Ξ < 2(N - ℓ(I)) - k,

so a missing certificate only means the criterion fails, never that the
pair is not k-small.  All comparisons are exact rationals.
"""

from __future__ import annotations

import json
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from anosovkit.errors import ResourceLimitError, ValidationError
from anosovkit.flags import (
    FlagConfiguration,
    build_flag_configuration,
    format_theta,
    proper_subsets,
    symmetric_subsets,
)
from anosovkit.ideals import (
    DEFAULT_NODE_LIMIT,
    BalancedIdeal,
    EnumerationResult,
    enumerate_balanced_ideals,
)
from anosovkit.rootsys import SimpleType, build_root_system, dim_lie_algebra, parse_type
from anosovkit.weyl import DEFAULT_MAX_ORDER, generate_weyl_group, weyl_group_order

SMALL_RANK_EXCLUSIONS = frozenset({"A1", "A2", "A3", "B2"})
HITCHIN_EXCLUSIONS = frozenset({"F4", "E6", "E7", "E8"})


@dataclass(frozen=True)
class HdimBound:
    """``hdim Ξ < value`` when ``strict``, otherwise ``hdim Ξ = value``."""

    value: Fraction
    strict: bool

    def __post_init__(self):
        v = Fraction(self.value)
        if v < 0:
            raise ValidationError("a Hausdorff-dimension bound must be >= 0")
        object.__setattr__(self, "value", v)

    def __str__(self) -> str:
        return f"hdim {'<' if self.strict else '='} {_fmt(self.value)}"

    def as_dict(self) -> dict:
        return {"value": _fmt(self.value), "strict": self.strict}


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---- presets -------------------------------------------------------------

_PRESET_RE = re.compile(r"^\s*([a-z0-9-]+)\s*(?:\(\s*(\d+)\s*\)|:\s*(\d+))?\s*$")


@lru_cache(maxsize=1)
def _preset_table() -> dict:
    text = resources.files("anosovkit").joinpath("presets/hdim.json").read_text(encoding="utf-8")
    return json.loads(text)["presets"]


def preset_names() -> list[str]:
    out = []
    for name, entry in sorted(_preset_table().items()):
        out.append(f"{name}({entry['parameter']})" if "parameter" in entry else name)
    return out


def load_preset(name: str) -> HdimBound:
    """``"qf"``, ``"hitchin"``, ``"son1-lattice(3)"`` (also ``son1-lattice:3``)."""
    m = _PRESET_RE.match(name)
    table = _preset_table()
    if not m or m.group(1) not in table:
        raise ValidationError(f"unknown preset {name!r}; known: {', '.join(preset_names())}")
    entry = table[m.group(1)]
    arg = m.group(2) or m.group(3)
    if "parameter" in entry:
        if arg is None:
            raise ValidationError(f"preset {m.group(1)!r} needs a parameter, e.g. {m.group(1)}(3)")
        n = int(arg)
        if n < entry.get("min_parameter", 0):
            raise ValidationError(f"preset {m.group(1)!r} needs {entry['parameter']} >= {entry['min_parameter']}")
        value = Fraction(entry["value"]["coefficient"]) * n + Fraction(entry["value"]["offset"])
    else:
        if arg is not None:
            raise ValidationError(f"preset {m.group(1)!r} takes no parameter")
        value = Fraction(entry["value"])
    return HdimBound(value, bool(entry["strict"]))


# ---- certificates --------------------------------------------------------


@dataclass(frozen=True)
class SmallnessCertificate:
    flag_config: str
    ideal: str
    hdim_bound: HdimBound
    k: int
    lambda_bound: Fraction  # 2ℓ(I) + h
    max_k: int

    def as_dict(self) -> dict:
        return {
            "certified": True,
            "flag_config": self.flag_config,
            "ideal": self.ideal,
            "hdim_bound": self.hdim_bound.as_dict(),
            "k": self.k,
            "lambda_bound": _fmt(self.lambda_bound),
            "max_k": self.max_k,
        }


@dataclass(frozen=True)
class SmallnessRefusal:
    flag_config: str
    ideal: str
    hdim_bound: HdimBound
    k: int
    failed_inequality: str
    max_k: int | None

    def as_dict(self) -> dict:
        return {
            "certified": False,
            "flag_config": self.flag_config,
            "ideal": self.ideal,
            "hdim_bound": self.hdim_bound.as_dict(),
            "k": self.k,
            "failed_inequality": self.failed_inequality,
            "max_k": "none" if self.max_k is None else self.max_k,
        }

    def __bool__(self) -> bool:
        return False


def _max_k(N: int, length: int, h: HdimBound) -> int | None:
    target = 2 * (N - length) - h.value
    k = math.floor(target) if h.strict else math.ceil(target) - 1
    return k if k >= 0 else None


def _holds(N: int, length: int, h: HdimBound, k: int) -> bool:
    rhs = 2 * (N - length) - k
    return h.value <= rhs if h.strict else h.value < rhs


def certify_k_small(
    fc: FlagConfiguration, ideal: BalancedIdeal, h: HdimBound, k: int
) -> SmallnessCertificate | SmallnessRefusal:
    if k < 0:
        raise ValidationError("k must be >= 0")
    N, length = fc.N, ideal.length
    mk = _max_k(N, length, h)
    if _holds(N, length, h, k):
        return SmallnessCertificate(fc.label, ideal.hex, h, k, 2 * length + h.value, mk)
    rhs = 2 * (N - length) - k
    rel = "<=" if h.strict else "<"
    why = (
        f"criterion fails: need {_fmt(h.value)} {rel} 2(N - l(I)) - k = 2({N} - {length}) - {k} = {rhs}"
    )
    return SmallnessRefusal(fc.label, ideal.hex, h, k, why, mk)


def max_certified_k(fc: FlagConfiguration, ideal: BalancedIdeal, h: HdimBound) -> int | None:
    """Largest certified k, or None when even k = 0 fails."""
    return _max_k(fc.N, ideal.length, h)


# ---- length bound ------------------------------------------------------------


@dataclass
class LengthBoundReport:
    type: str
    theta_A: str
    theta_D: str
    N: int
    bound: int
    count: int
    max_length: int | None
    min_length: int | None
    max_weyl_length: int | None
    passed: bool | None  # None: incomplete search without a violation
    complete: bool
    excluded_type: bool
    witness: dict | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def _length_report(fc: FlagConfiguration, ideals, complete: bool) -> LengthBoundReport:
    bound = fc.N - 3
    ideals = list(ideals)
    lengths = [b.length for b in ideals]
    witness = None
    bad = [b for b in ideals if b.length > bound]
    if bad:
        w = max(bad, key=lambda b: b.length)
        witness = {"bitset": w.hex, "length": w.length, "elements": w.elements}
    if bad:
        passed = False
    elif complete:
        passed = True
    else:
        passed = None
    return LengthBoundReport(
        type=str(fc.weyl.root_system),
        theta_A=format_theta(fc.theta_A),
        theta_D=format_theta(fc.theta_D),
        N=fc.N,
        bound=bound,
        count=len(ideals),
        max_length=max(lengths) if lengths else None,
        min_length=min(lengths) if lengths else None,
        max_weyl_length=max((b.weyl_length for b in ideals), default=None),
        passed=passed,
        complete=complete,
        excluded_type=str(fc.weyl.root_system) in SMALL_RANK_EXCLUSIONS,
        witness=witness,
    )


def verify_length_bound(fc: FlagConfiguration, **enum_kwargs) -> LengthBoundReport:
    """Check l(I) <= N - 3 over every balanced ideal; a failure carries a witness."""
    try:
        result = enumerate_balanced_ideals(fc, **enum_kwargs)
    except ResourceLimitError as exc:
        return _length_report(fc, exc.partial or (), False)
    return _length_report(fc, result, not result.truncated)


# ---- sweeps ----------------------------------------------------------------------

SELECTORS = ("borel", "symmetric", "all-symmetric-pairs")


def expand_types(types, rank_cap: int) -> list[SimpleType]:
    """Entries are full types ("B3") or families ("B"), the latter up to ``rank_cap``."""
    out = []
    for entry in types:
        entry = str(entry).strip()
        if len(entry) == 1 and entry.upper() in "ABCDEFG":
            fam = entry.upper()
            for n in range(1, rank_cap + 1):
                try:
                    out.append(parse_type(f"{fam}{n}"))
                except ValueError:
                    continue
        else:
            t = parse_type(entry)
            if t.rank <= rank_cap:
                out.append(t)
    seen = []
    for t in out:
        if t not in seen:
            seen.append(t)
    return seen


def _configurations(t: SimpleType, selector: str, W) -> list[tuple[frozenset, frozenset]]:
    if selector == "borel":
        return [(frozenset(), frozenset())]
    if selector == "symmetric":
        return [(a, frozenset()) for a in symmetric_subsets(W)]
    if selector == "all-symmetric-pairs":
        return [(a, d) for a in symmetric_subsets(W) for d in proper_subsets(W.rank)]
    raise ValidationError(f"unknown parabolic selector {selector!r}; use one of {', '.join(SELECTORS)}")


def annotations_for(type_name: str) -> list[str]:
    notes = []
    if type_name in SMALL_RANK_EXCLUSIONS:
        notes.append("excluded type: the l(I) <= N-3 bound needs G not of type A1, A2, A3, B2")
    if type_name in HITCHIN_EXCLUSIONS:
        notes.append("excluded type for the Hitchin bound (F4, E6, E7, E8)")
    return notes


@dataclass
class SweepRow:
    type: str
    theta_A: str
    theta_D: str
    N: int | None
    count: int | None
    count_is_lower_bound: bool
    min_length: int | None
    max_length: int | None
    all_certified: bool | None
    min_max_k: int | str | None
    status: str  # complete | resource_limited
    annotations: list[str] = field(default_factory=list)
    detail: str = ""

    @property
    def key(self) -> tuple:
        return (self.type, self.theta_A, self.theta_D)

    def as_dict(self) -> dict:
        return asdict(self)


def _row_from_ideals(fc, ideals, h, k, complete, detail="") -> SweepRow:
    lengths = [b.length for b in ideals]
    certified = [_holds(fc.N, b.length, h, k) for b in ideals]
    if not all(certified):
        all_cert = False
    else:
        all_cert = True if complete else None
    mks = [_max_k(fc.N, b.length, h) for b in ideals]
    if not mks:
        min_mk = None
    elif any(m is None for m in mks):
        min_mk = "none"
    else:
        min_mk = min(mks)
    name = str(fc.weyl.root_system)
    return SweepRow(
        type=name,
        theta_A=format_theta(fc.theta_A),
        theta_D=format_theta(fc.theta_D),
        N=fc.N,
        count=len(ideals),
        count_is_lower_bound=not complete,
        min_length=min(lengths) if lengths else None,
        max_length=max(lengths) if lengths else None,
        all_certified=all_cert,
        min_max_k=min_mk,
        status="complete" if complete else "resource_limited",
        annotations=annotations_for(name),
        detail=detail,
    )


@lru_cache(maxsize=8)
def _group(type_name: str, max_order: int):
    return generate_weyl_group(type_name, max_order=max_order)


def _run_row(args) -> SweepRow:
    type_name, theta_A, theta_D, h, k, max_order, node_limit, threads = args
    W = _group(type_name, max_order)
    fc = build_flag_configuration(W, theta_A, theta_D)
    try:
        res = enumerate_balanced_ideals(fc, node_limit=node_limit, threads=threads)
    except ResourceLimitError as exc:
        partial = exc.partial if isinstance(exc.partial, EnumerationResult) else ()
        return _row_from_ideals(fc, list(partial), h, k, False, str(exc))
    return _row_from_ideals(fc, list(res), h, k, True)


def _limited_row(t: SimpleType, detail: str) -> SweepRow:
    name = str(t)
    return SweepRow(name, "", "", None, None, True, None, None, None, None, "resource_limited",
                    annotations_for(name), detail)


def classification_sweep(
    types,
    rank_cap: int = 8,
    selector: str = "borel",
    h: HdimBound | None = None,
    k: int = 4,
    *,
    max_order: int = 1152,
    node_limit: int = DEFAULT_NODE_LIMIT,
    threads: int = 1,
) -> list[SweepRow]:
    """One row per (type, theta_A, theta_D); resource failures stay in-row."""
    if h is None:
        h = load_preset("qf")
    if k < 0:
        raise ValidationError("k must be >= 0")
    jobs = []
    rows: list[SweepRow] = []
    for t in expand_types(types, rank_cap):
        name = str(t)
        order = weyl_group_order(t)
        if order > max_order:
            rows.append(_limited_row(t, f"|W| = {order} exceeds max_order = {max_order}"))
            continue
        W = _group(name, max_order)
        for a, d in _configurations(t, selector, W):
            jobs.append((name, tuple(sorted(a)), tuple(sorted(d)), h, k, max_order, node_limit, 1))
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows.extend(pool.map(_run_row, jobs))
    else:
        for job in jobs:
            rows.append(_run_row(job[:-1] + (threads,)))
    order_of = {str(t): i for i, t in enumerate(expand_types(types, rank_cap))}
    rows.sort(key=lambda r: (order_of[r.type], _theta_key(r.theta_A), _theta_key(r.theta_D)))
    return rows


def _theta_key(text: str) -> tuple:
    labels = [int(x) for x in text.split(",") if x]
    return (len(labels), labels)


def sweep_limited(rows) -> bool:
    return any(r.status != "complete" for r in rows)


_COLUMNS = [
    ("type", "type"),
    ("theta_A", "pa"),
    ("theta_D", "pd"),
    ("N", "N"),
    ("count", "#I"),
    ("min_length", "min l"),
    ("max_length", "max l"),
    ("all_certified", "certified"),
    ("min_max_k", "min max_k"),
    ("status", "status"),
    ("annotations", "notes"),
]


def _cell(row: SweepRow, attr: str) -> str:
    v = getattr(row, attr)
    if attr == "count" and v is not None and row.count_is_lower_bound:
        return f">={v}"
    if attr in ("theta_A", "theta_D"):
        return "{" + v + "}"
    if attr == "annotations":
        return "; ".join(v)
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def format_table(rows) -> str:
    cells = [[head for _, head in _COLUMNS]] + [[_cell(r, a) for a, _ in _COLUMNS] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(_COLUMNS))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


# ---- moduli dimensions ---------------------------------------------------------


@dataclass(frozen=True)
class ModuliDimensions:
    genus: int
    type: str
    dim_g: int
    qf_surface: int  # complex dimension of quasi-Fuchsian space of S
    qf_group: int  # complex dimension of QF_S(G)
    hitchin_real: int  # real dimension of H_S(G)

    def as_dict(self) -> dict:
        return asdict(self)


def moduli_dimensions(g: int, rs) -> ModuliDimensions:
    if not isinstance(g, int) or g < 2:
        raise ValidationError(f"genus must be an integer >= 2, got {g!r}")
    if not hasattr(rs, "positive_roots"):
        rs = build_root_system(parse_type(rs))
    dim = dim_lie_algebra(rs)
    return ModuliDimensions(
        genus=g,
        type=str(rs),
        dim_g=dim,
        qf_surface=6 * g - 3,
        qf_group=6 * g - 6 + dim,
        hitchin_real=(2 * g - 2) * dim + 2 * dim,
    )


__all__ = [
    "DEFAULT_MAX_ORDER",
    "HdimBound",
    "LengthBoundReport",
    "ModuliDimensions",
    "SmallnessCertificate",
    "SmallnessRefusal",
    "SweepRow",
    "annotations_for",
    "certify_k_small",
    "classification_sweep",
    "expand_types",
    "format_table",
    "load_preset",
    "max_certified_k",
    "moduli_dimensions",
    "preset_names",
    "sweep_limited",
    "verify_length_bound",
]
