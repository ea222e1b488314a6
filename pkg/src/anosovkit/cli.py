"""Command-line frontend: ``anosovkit <command> ...``.

Default output is a human-readable table; ``--json`` prints a run report
whose ``payload`` validates against ``schemas/<command>.json``.  Exit codes:
0 success, 1 validation error, 2 resource-limited partial result.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from anosovkit import cache, grpcoh, homalg, smallness
from anosovkit import linalg as la
from anosovkit.errors import AnosovKitError, ResourceLimitError
from anosovkit.flags import build_flag_configuration, format_theta, symmetric_subsets
from anosovkit.ideals import (
    DEFAULT_NODE_LIMIT,
    DEFAULT_RESULT_LIMIT,
    codefect_findings,
    enumerate_balanced_ideals,
    ideal_record,
)
from anosovkit.rootsys import build_root_system, dim_lie_algebra, minus_w0_permutation, parse_type
from anosovkit.weyl import DEFAULT_MAX_ORDER, format_word, weyl_group_order

EXIT_OK, EXIT_VALIDATION, EXIT_LIMITED = 0, 1, 2
SMALLNESS_ACTIONS = ("certify", "max-k", "bound")
# options that change how a run executes or prints, not what it computes
_NON_CONFIG = {"json", "threads", "cache_dir", "func", "_table"}


class UsageError(AnosovKitError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunReport:
    command: list[str]
    config_hash: str
    wall_time: float
    payload: dict
    resource_limited: bool

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "config_hash": self.config_hash,
            "wall_time": self.wall_time,
            "payload": self.payload,
            "resource_limited": self.resource_limited,
        }


def payload_json(payload) -> str:
    """Canonical serialization used for determinism checks."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def config_hash(command: str, args: argparse.Namespace) -> str:
    cfg = {k: v for k, v in vars(args).items() if k not in _NON_CONFIG}
    cfg["command"] = command
    return hashlib.sha256(payload_json(cfg).encode()).hexdigest()[:16]


@lru_cache(maxsize=None)
def load_schema(command: str) -> dict:
    text = resources.files("anosovkit").joinpath(f"schemas/{command}.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_payload(command: str, payload: dict) -> None:
    jsonschema.validate(payload, load_schema(command))


# ---- shared helpers ----------------------------------------------------------


def _type_of(args) -> str:
    t = getattr(args, "type", None) or getattr(args, "type_pos", None)
    if not t:
        raise UsageError("a root-system type is required (e.g. A2, B3, G2)")
    return str(parse_type(t))


def _group(args, type_name: str):
    directory = getattr(args, "cache_dir", None)
    use = directory is not None or bool(os.environ.get(cache.ENV_VAR))
    return cache.get_group(type_name, max_order=args.max_order, directory=directory, use_cache=use)


def _flag_config(args):
    W = _group(args, _type_of(args))
    return build_flag_configuration(W, args.pa, args.pd, allow_nonsymmetric=getattr(args, "allow_nonsymmetric", False))


def _hdim(args) -> smallness.HdimBound:
    if args.preset and args.hdim is not None:
        raise UsageError("give either --preset or --hdim, not both")
    if args.preset:
        return smallness.load_preset(args.preset)
    if args.hdim is None:
        raise UsageError("an hdim bound is required: --preset NAME or --hdim VALUE [--strict]")
    try:
        value = Fraction(args.hdim)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse --hdim {args.hdim!r} as a rational") from None
    return smallness.HdimBound(value, args.strict)


def _config_fields(fc) -> dict:
    return {
        "type": str(fc.weyl.root_system),
        "theta_A": sorted(fc.theta_A),
        "theta_D": sorted(fc.theta_D),
        "N": fc.N,
        "order": fc.weyl.order,
    }


class _Limited(Exception):
    def __init__(self, payload):
        self.payload = payload


# ---- commands ----------------------------------------------------------------------


def cmd_weyl(args) -> dict:
    t = parse_type(_type_of(args))
    rs = build_root_system(t)
    order = weyl_group_order(t)
    payload = {
        "type": str(t),
        "rank": t.rank,
        "order": order,
        "positive_roots": len(rs.positive_roots),
        "w0_length": len(rs.positive_roots),
        "dim_g": dim_lie_algebra(rs),
        "minus_w0": [i + 1 for i in minus_w0_permutation(rs)],
        "cartan_matrix": [list(r) for r in rs.cartan_matrix],
        "symmetric_subsets": None,
    }
    if order <= args.max_order:
        W = _group(args, str(t))
        assert W.lengths[W.w0] == payload["w0_length"]
        payload["symmetric_subsets"] = [sorted(s) for s in symmetric_subsets(W)]
    return payload


def cmd_flags(args) -> dict:
    fc = _flag_config(args)
    W = fc.weyl
    cosets = [{"representative": format_word(W.words[r]), "dim": W.lengths[r]} for r in fc.cosets]
    cosets.sort(key=lambda c: (c["dim"], c["representative"]))
    return {**_config_fields(fc), "symmetric": fc.symmetric, "cosets": cosets}


def cmd_ideals(args) -> dict:
    fc = _flag_config(args)
    limited = False
    try:
        res = enumerate_balanced_ideals(
            fc,
            args.limit,
            node_limit=args.node_limit,
            result_limit=args.result_limit,
            threads=args.threads,
        )
    except ResourceLimitError as exc:
        res = exc.partial
        limited = True
    ideals = list(res) if res is not None else []
    lengths = [b.length for b in ideals]
    payload = {
        **_config_fields(fc),
        "count": len(ideals),
        "truncated": bool(res.truncated) if res is not None else True,
        "max_length": max(lengths) if lengths else None,
        "min_length": min(lengths) if lengths else None,
        "codefect_findings": codefect_findings(ideals),
    }
    if not (args.count_only or args.extremes_only):
        payload["ideals"] = [ideal_record(b) for b in ideals]
    if args.count_only:
        payload.pop("max_length")
        payload.pop("min_length")
    if limited:
        raise _Limited(payload)
    return payload


def _smallness_positionals(args):
    action, type_pos = "certify", None
    rest = list(args.rest)
    if rest and rest[0] in SMALLNESS_ACTIONS:
        action = rest.pop(0)
    if rest:
        type_pos = rest.pop(0)
    if rest:
        raise UsageError(f"unexpected arguments: {' '.join(rest)}")
    args.type_pos = type_pos
    return action


def cmd_smallness(args) -> dict:
    action = _smallness_positionals(args)
    fc = _flag_config(args)
    if action == "bound":
        report = smallness.verify_length_bound(fc, node_limit=args.node_limit, threads=args.threads)
        payload = {"action": action, **_config_fields(fc), "report": report.as_dict()}
        if not report.complete:
            raise _Limited(payload)
        return payload
    h = _hdim(args)
    limited = False
    try:
        ideals = list(enumerate_balanced_ideals(fc, node_limit=args.node_limit, threads=args.threads))
    except ResourceLimitError as exc:
        ideals = list(exc.partial or ())
        limited = True
    if args.ideal:
        want = args.ideal.lower().lstrip("0") or "0"
        ideals = [b for b in ideals if (b.hex.lstrip("0") or "0") == want]
        if not ideals and not limited:
            raise UsageError(f"{args.ideal!r} is not a balanced ideal of {fc.label}")
    rows = []
    for b in ideals:
        if action == "certify":
            rows.append(smallness.certify_k_small(fc, b, h, args.k).as_dict())
        else:
            mk = smallness.max_certified_k(fc, b, h)
            rows.append({"ideal": b.hex, "length": b.length, "max_k": "none" if mk is None else mk})
    payload = {
        "action": action,
        **_config_fields(fc),
        "hdim_bound": h.as_dict(),
        "results": rows,
    }
    if action == "certify":
        payload["k"] = args.k
        payload["all_certified"] = bool(rows) and all(r["certified"] for r in rows) and not limited
    if limited:
        raise _Limited(payload)
    return payload


def cmd_sweep(args) -> dict:
    types = [t for t in args.types.replace(" ", ",").split(",") if t]
    h = _hdim(args) if (args.preset or args.hdim is not None) else smallness.load_preset("qf")
    rows = smallness.classification_sweep(
        types,
        args.rank_cap,
        args.selector,
        h,
        args.k,
        max_order=args.max_order,
        node_limit=args.node_limit,
        threads=args.threads,
    )
    payload = {"hdim_bound": h.as_dict(), "k": args.k, "selector": args.selector, "rows": [r.as_dict() for r in rows]}
    args._table = smallness.format_table(rows)
    if smallness.sweep_limited(rows):
        raise _Limited(payload)
    return payload


def cmd_moduli(args) -> dict:
    if args.all_types:
        types = [str(t) for t in smallness.expand_types("ABCDEFG", args.rank_cap)]
    else:
        types = [_type_of(args)]
    rows = [smallness.moduli_dimensions(args.genus, t).as_dict() for t in types]
    return {"genus": args.genus, "rows": rows}


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_complex(args):
    if not args.input:
        raise UsageError("--input FILE is required (use - for stdin)")
    try:
        return homalg.from_json(_read_text(args.input))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.input}: invalid JSON ({exc.msg})") from None


def _dims_grid(dc, dims: dict) -> list[list[int]]:
    return [[dims[(p, q)] for q in range(dc.height)] for p in range(dc.width)]


def _mat(m) -> list[list[str]]:
    return [[la.format_fraction(v) for v in row] for row in m]


def cmd_homalg(args) -> dict:
    if args.action == "random":
        import random

        dc = homalg.random_double_complex(
            random.Random(args.seed), args.max_width, args.max_height, args.max_dim
        )
        return {"action": "random", "complex": json.loads(homalg.to_json(dc))}
    dc = _load_complex(args)
    if args.action == "validate":
        rep = homalg.validate(dc)
        return {"action": "validate", "ok": rep.ok, "violations": rep.violations}
    if args.action == "cohomology":
        dims = [homalg.total_cohomology(dc, k) for k in range(dc.max_degree + 1)]
        return {"action": "cohomology", "width": dc.width, "height": dc.height, "dims": dims}
    if args.action == "page":
        r = homalg.stable_page(dc) if args.r == "inf" else int(args.r)
        page = homalg.spectral_page(dc, args.direction, r, with_maps=args.maps)
        out = {
            "action": "page",
            "direction": args.direction,
            "r": args.r if args.r == "inf" else r,
            "dims": _dims_grid(dc, page.dims),
        }
        if args.maps:
            out["maps"] = [
                {"source": list(src), "target": list(page.target(*src)), "matrix": _mat(m)}
                for src, m in sorted(page.maps.items())
                if page.dims[src] and any(m)
            ]
        return out
    seq = homalg.ldt(dc, args.direction)
    return {
        "action": "ldt",
        "direction": args.direction,
        "first": {"position": list(seq.first_position), "dim": seq.first_dim},
        "h1": seq.h1_dim,
        "last": {"position": list(seq.last_position), "dim": seq.last_dim},
        "alpha": _mat(seq.alpha),
        "beta": _mat(seq.beta),
        "injective": seq.injective,
        "exact_at_h1": seq.exact_at_h1,
        "exact": seq.exact,
    }


def cmd_grpcoh(args) -> dict:
    sources = [args.presentation is not None, args.surface is not None, args.free is not None]
    if sum(sources) != 1:
        raise UsageError("give exactly one of --presentation FILE, --surface G, --free K")
    if args.presentation is not None:
        pres = grpcoh.parse_presentation(_read_text(args.presentation))
    elif args.surface is not None:
        pres = grpcoh.surface_group(args.surface)
    else:
        pres = grpcoh.free_group(args.free)
    if (args.rep is None) == (args.trivial is None):
        raise UsageError("give exactly one of --rep FILE or --trivial D")
    if args.rep is not None:
        try:
            rep = grpcoh.parse_rep(_read_text(args.rep))
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.rep}: invalid JSON ({exc.msg})") from None
    else:
        rep = grpcoh.trivial_rep(pres.generators, args.trivial)
    dims = grpcoh.cohomology_dims(pres, rep)
    return {
        "generators": pres.generators,
        "relators": [grpcoh.format_word(r) for r in pres.relators],
        "module_dim": rep.dim,
        **dims.as_dict(),
    }


def cmd_cache(args) -> dict:
    directory = args.cache_dir
    if args.action == "info":
        return {"action": "info", "directory": str(cache.cache_dir(directory)), "entries": cache.list_entries(directory)}
    if args.action == "clear":
        return {"action": "clear", "directory": str(cache.cache_dir(directory)), "removed": cache.clear(directory)}
    warmed = []
    for t in args.types:
        name = str(parse_type(t))
        W = cache.get_group(name, max_order=args.max_order, directory=directory, use_cache=True)
        again = cache.load_group(name, directory)
        warmed.append({"type": name, "order": W.order, "verified": again is not None and again == W})
    return {"action": "warm", "directory": str(cache.cache_dir(directory)), "entries": warmed}


# ---- parser --------------------------------------------------------------------------


def _add_type(p, positional=True):
    if positional:
        p.add_argument("type_pos", nargs="?", metavar="TYPE", help="root-system type, e.g. A2")
    p.add_argument("--type", help="root-system type (alternative to the positional)")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, help="refuse Weyl groups larger than this")


def _add_config(p, positional=True):
    _add_type(p, positional)
    p.add_argument("--pa", default="", help="theta_A as 1-based labels, e.g. '1,3'; empty = Borel")
    p.add_argument("--pd", default="", help="theta_D as 1-based labels; empty = complete flags")


def _add_search(p):
    p.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)
    p.add_argument("--threads", type=int, default=1, help="worker processes for the search")


def _add_hdim(p):
    p.add_argument("--preset", help="qf, hitchin or son1-lattice(n)")
    p.add_argument("--hdim", help="rational bound on hdim of the limit curve")
    p.add_argument("--strict", action="store_true", help="read --hdim as 'hdim < value' instead of '= value'")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="anosovkit", description="Balanced ideals, smallness certificates and exact cohomology.")
    parser.add_argument("--json", action="store_true", help="print a JSON run report")
    parser.add_argument("--cache-dir", help=f"Weyl group cache directory (default: ${cache.ENV_VAR})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("weyl", help="Weyl group summary")
    _add_type(p)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("flags", help="cosets W/W_D and Schubert dimensions")
    _add_config(p)
    p.add_argument("--allow-nonsymmetric", action="store_true")
    p.set_defaults(func=cmd_flags)

    p = sub.add_parser("ideals", help="enumerate balanced ideals")
    _add_config(p)
    _add_search(p)
    p.add_argument("--limit", type=int, help="stop after this many ideals")
    p.add_argument("--result-limit", type=int, default=DEFAULT_RESULT_LIMIT)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--count-only", action="store_true")
    g.add_argument("--extremes-only", action="store_true")
    p.set_defaults(func=cmd_ideals)

    p = sub.add_parser("smallness", help="k-smallness certificates [certify|max-k|bound]")
    p.add_argument("rest", nargs="*", metavar="[ACTION] [TYPE]")
    _add_config(p, positional=False)
    _add_search(p)
    _add_hdim(p)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--ideal", help="restrict to one ideal, by bitset hex")
    p.set_defaults(func=cmd_smallness)

    p = sub.add_parser("sweep", help="classification sweep over types and parabolics")
    p.add_argument("--types", default="A,B,C,D,G", help="comma list of types or families")
    p.add_argument("--rank-cap", type=int, default=4)
    p.add_argument("--selector", choices=smallness.SELECTORS, default="borel")
    p.add_argument("--max-order", type=int, default=1152)
    p.add_argument("--k", type=int, default=4)
    _add_search(p)
    _add_hdim(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("moduli", help="moduli-space dimensions")
    _add_type(p)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--all-types", action="store_true", help="every simple type up to --rank-cap")
    p.add_argument("--rank-cap", type=int, default=8)
    p.set_defaults(func=cmd_moduli)

    p = sub.add_parser("homalg", help="double complexes and spectral sequences")
    p.add_argument("action", choices=("validate", "cohomology", "page", "ldt", "random"))
    p.add_argument("--input", help="complex JSON file, or - for stdin")
    p.add_argument("--direction", choices=(homalg.VERTICAL, homalg.HORIZONTAL), default=homalg.VERTICAL)
    p.add_argument("--r", default="2", help="page index, or 'inf'")
    p.add_argument("--maps", action="store_true", help="include page differentials")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-width", type=int, default=4)
    p.add_argument("--max-height", type=int, default=4)
    p.add_argument("--max-dim", type=int, default=4)
    p.set_defaults(func=cmd_homalg)

    p = sub.add_parser("grpcoh", help="Z1, B1, H1, H0 via Fox calculus")
    p.add_argument("--presentation", help="presentation file")
    p.add_argument("--surface", type=int, metavar="G", help="closed surface group of genus G")
    p.add_argument("--free", type=int, metavar="K", help="free group of rank K")
    p.add_argument("--rep", help="JSON list of generator matrices")
    p.add_argument("--trivial", type=int, metavar="D", help="trivial module of dimension D")
    p.set_defaults(func=cmd_grpcoh)

    p = sub.add_parser("cache", help="inspect or fill the Weyl group cache")
    p.add_argument("action", choices=("info", "clear", "warm"))
    p.add_argument("types", nargs="*")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.set_defaults(func=cmd_cache)
    return parser


# ---- text rendering ------------------------------------------------------------------


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (str, int)):
        return str(v)
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return "{" + ",".join(str(x) for x in v) + "}" if v else "{}"
    if isinstance(v, dict) and all(not isinstance(x, (dict, list)) for x in v.values()):
        return ", ".join(f"{k}={_scalar(x)}" for k, x in v.items())
    return json.dumps(v)


def _table(rows: list[dict]) -> str:
    keys = list(rows[0])
    cells = [keys] + [[_scalar(r.get(k)) for k in keys] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(keys))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def render_text(payload: dict) -> str:
    out = []
    for key, v in payload.items():
        if isinstance(v, list) and v and all(isinstance(r, dict) for r in v):
            out.append(f"{key}:")
            out.append(_table(v))
        else:
            out.append(f"{key}: {_scalar(v)}")
    return "\n".join(out)


# ---- entry point ------------------------------------------------------------------------


def run(argv: list[str] | None = None) -> tuple[int, RunReport | None, str]:
    """Parse and execute; returns (exit code, report or None, error message)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    start = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        limited = False
        try:
            payload = args.func(args)
        except _Limited as lim:
            payload, limited = lim.payload, True
        validate_payload(args.command, payload)
    except ResourceLimitError as exc:
        return EXIT_LIMITED, None, str(exc)
    except (AnosovKitError, ValueError) as exc:
        return EXIT_VALIDATION, None, str(exc)
    report = RunReport(
        command=["anosovkit", *argv],
        config_hash=config_hash(args.command, args),
        wall_time=round(time.perf_counter() - start, 6),
        payload=payload,
        resource_limited=limited,
    )
    report._args = args
    return (EXIT_LIMITED if limited else EXIT_OK), report, ""


def main(argv: list[str] | None = None) -> int:
    code, report, err = run(argv)
    if report is None:
        print(f"error: {err}", file=sys.stderr)
        return code
    if report._args.json:
        print(json.dumps(report.as_dict(), sort_keys=True, indent=2, ensure_ascii=False))
    else:
        table = getattr(report._args, "_table", None)
        print(table if table is not None else render_text(report.payload))
        if report.resource_limited:
            print("note: resource limit reached; results are partial", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
