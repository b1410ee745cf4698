"""Content-addressed on-disk cache of enumerated bases.

An entry for (kind, n, variant) is a JSON file whose name is the sha256 of the
key and the format version.  The payload stores the serialized items and a
digest of them; a digest or version mismatch triggers regeneration.  Labelled
objects on 1..n are stored as successor arrays (null for a root).
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from .errors import DomainError
from .species import (
    Aroma,
    AromaticForest,
    RootedTree,
    enumerate_aromas,
    enumerate_partial_maps,
    enumerate_unlabelled,
    rooted_tree_arrays,
)

FORMAT_VERSION = 1
log = logging.getLogger(__name__)


def _forests(n: int, variant: str) -> list:
    out = []
    for succ in enumerate_partial_maps(range(1, n + 1)):
        if variant == "noloop" and any(v == s for v, s in succ.items()):
            continue
        out.append(AromaticForest.from_partial_map(succ))
    return sorted(out, key=lambda f: f.sort_key)


def _tree_arrays(n: int, variant: str) -> list:
    return [[None if p is None else p + 1 for p in parent] for _, parent in rooted_tree_arrays(n)]


def _decode_succ(cls):
    def decode(arr):
        succ = {i: s for i, s in enumerate(arr, 1)}
        return cls.from_partial_map(succ) if cls is AromaticForest else cls._trusted(succ)

    return decode


# kind -> (builder(n, variant), decoder or None for plain strings); builders
# return objects or, for trees, successor arrays directly
BUILDERS = {
    "trees": (_tree_arrays, _decode_succ(RootedTree)),
    "aromas": (lambda n, v: enumerate_aromas(range(1, n + 1), 2 if v == "plus" else 1), _decode_succ(Aroma)),
    "forests": (_forests, _decode_succ(AromaticForest)),
    "unlabelled-trees": (lambda n, v: enumerate_unlabelled("tree", n), None),
    "unlabelled-aromas": (lambda n, v: enumerate_unlabelled("aroma+" if v == "plus" else "aroma", n), None),
}


def _serialize(items: list, labelled: bool) -> list:
    if not labelled:
        return list(items)
    out = []
    for x in items:
        if isinstance(x, list):
            out.append(x)
        elif isinstance(x, AromaticForest):
            succ = x.succ
            out.append([succ[i] for i in range(1, len(succ) + 1)])
        else:
            # arcs are sorted by label, so on labels 1..n they are the successor array
            out.append([s for _, s in x.arcs])
    return out


def _digest(items: list) -> str:
    return hashlib.sha256(json.dumps(items, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


class BasisCache:
    def __init__(self, directory=None):
        directory = directory or os.environ.get("AFL_CACHE_DIR") or Path.home() / ".cache" / "aromatic"
        self.directory = Path(directory)
        self.builds = 0

    def path(self, kind: str, n: int, variant: str) -> Path:
        key = json.dumps([kind, n, variant, FORMAT_VERSION])
        return self.directory / (hashlib.sha256(key.encode()).hexdigest() + ".json")

    def _encode(self, kind, n, variant, items) -> bytes:
        payload = {
            "format": FORMAT_VERSION,
            "kind": kind,
            "n": n,
            "variant": variant,
            "items": items,
            "digest": _digest(items),
        }
        return (json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n").encode()

    def _load(self, path: Path):
        try:
            payload = json.loads(path.read_bytes())
            if payload.get("format") != FORMAT_VERSION:
                raise ValueError("format version mismatch")
            items = payload["items"]
            if _digest(items) != payload["digest"]:
                raise ValueError("digest mismatch")
            return items
        except (OSError, ValueError, KeyError, TypeError) as exc:
            log.warning("regenerating cache entry %s: %s", path.name, exc)
            return None

    def get_raw(self, kind: str, n: int, variant: str = "") -> list:
        """Serialized items, from disk when valid, otherwise rebuilt and stored."""
        if kind not in BUILDERS:
            raise DomainError(f"unknown basis kind {kind!r}; choose from {sorted(BUILDERS)}")
        path = self.path(kind, n, variant)
        if path.exists():
            items = self._load(path)
            if items is not None:
                return items
        builder, decode = BUILDERS[kind]
        items = _serialize(builder(n, variant), decode is not None)
        self.builds += 1
        self.directory.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(self._encode(kind, n, variant, items))
        tmp.replace(path)
        return items

    def get(self, kind: str, n: int, variant: str = "") -> list:
        items = self.get_raw(kind, n, variant)
        decode = BUILDERS[kind][1]
        return [decode(x) for x in items] if decode else items


_default: BasisCache | None = None


def cache_get_or_build(kind: str, n: int, variant: str = "", cache_dir=None) -> list:
    global _default
    if cache_dir is not None:
        return BasisCache(cache_dir).get(kind, n, variant)
    if _default is None:
        _default = BasisCache()
    return _default.get(kind, n, variant)
