"""On-disk cache of generated Weyl groups.

One zlib-compressed JSON file per type, keyed by the type string and a
format version.  A loaded group compares equal to a freshly generated one;
any mismatch in version or type is treated as a miss.
"""

from __future__ import annotations

import json
import os
import zlib
from pathlib import Path

from anosovkit.rootsys import build_root_system, parse_type
from anosovkit.weyl import DEFAULT_MAX_ORDER, WeylGroup, generate_weyl_group

ENV_VAR = "ANOSOVKIT_CACHE_DIR"
FORMAT_VERSION = 1


def cache_dir(path: str | os.PathLike | None = None) -> Path:
    if path is not None:
        return Path(path)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "anosovkit"


def cache_path(type_name: str, directory=None) -> Path:
    return cache_dir(directory) / f"weyl-{type_name}-v{FORMAT_VERSION}.json.z"


def _encode(W: WeylGroup) -> bytes:
    nroots = len(W.root_system.roots)
    payload = {
        "format": FORMAT_VERSION,
        "type": str(W.root_system),
        "perms": [p[:nroots].hex() for p in W.perms],
        "inversion_sets": [format(m, "x") for m in W.inversion_sets],
        "lengths": list(W.lengths),
        "words": ["".join(chr(48 + i) for i in w) for w in W.words],
        "right_mult": [list(r) for r in W.right_mult],
        "left_mult": [list(r) for r in W.left_mult],
        "reflections": list(W.reflections),
        "hasse_down": [list(d) for d in W.hasse_down],
        "hasse_up": [list(u) for u in W.hasse_up],
        "bruhat_below": [format(m, "x") for m in W.bruhat_below],
        "bruhat_above": [format(m, "x") for m in W.bruhat_above],
        "w0": W.w0,
        "w0_left": list(W.w0_left),
    }
    return zlib.compress(json.dumps(payload, separators=(",", ":")).encode(), 6)


def _decode(blob: bytes, type_name: str) -> WeylGroup | None:
    data = json.loads(zlib.decompress(blob))
    if data.get("format") != FORMAT_VERSION or data.get("type") != type_name:
        return None
    rs = build_root_system(parse_type(type_name))
    nroots = len(rs.roots)
    pad = bytes(range(nroots, 256))
    perms = tuple(bytes.fromhex(p) + pad for p in data["perms"])
    return WeylGroup(
        root_system=rs,
        perms=perms,
        inversion_sets=tuple(int(m, 16) for m in data["inversion_sets"]),
        lengths=tuple(data["lengths"]),
        words=tuple(tuple(ord(c) - 48 for c in w) for w in data["words"]),
        right_mult=tuple(tuple(r) for r in data["right_mult"]),
        left_mult=tuple(tuple(r) for r in data["left_mult"]),
        reflections=tuple(data["reflections"]),
        hasse_down=tuple(tuple(d) for d in data["hasse_down"]),
        hasse_up=tuple(tuple(u) for u in data["hasse_up"]),
        bruhat_below=tuple(int(m, 16) for m in data["bruhat_below"]),
        bruhat_above=tuple(int(m, 16) for m in data["bruhat_above"]),
        w0=data["w0"],
        w0_left=tuple(data["w0_left"]),
        _by_perm={p: i for i, p in enumerate(perms)},
    )


def save_group(W: WeylGroup, directory=None) -> Path:
    path = cache_path(str(W.root_system), directory)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(_encode(W))
    tmp.replace(path)
    return path


def load_group(type_name: str, directory=None) -> WeylGroup | None:
    name = str(parse_type(type_name))
    path = cache_path(name, directory)
    if not path.exists():
        return None
    try:
        return _decode(path.read_bytes(), name)
    except (OSError, ValueError, KeyError, zlib.error):
        return None


def get_group(type_name: str, *, max_order: int = DEFAULT_MAX_ORDER, directory=None, use_cache: bool = True) -> WeylGroup:
    """Load from the cache when present, otherwise generate and store."""
    name = str(parse_type(type_name))
    if use_cache:
        W = load_group(name, directory)
        if W is not None:
            return W
    W = generate_weyl_group(name, max_order=max_order)
    if use_cache:
        try:
            save_group(W, directory)
        except OSError:
            pass  # read-only cache dir: just skip
    return W


def list_entries(directory=None) -> list[dict]:
    d = cache_dir(directory)
    if not d.exists():
        return []
    out = []
    for p in sorted(d.glob("weyl-*.json.z")):
        out.append({"file": p.name, "bytes": p.stat().st_size})
    return out


def clear(directory=None) -> int:
    n = 0
    for p in cache_dir(directory).glob("weyl-*.json.z"):
        p.unlink()
        n += 1
    return n
