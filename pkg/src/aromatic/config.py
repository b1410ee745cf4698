"""Run configuration: CLI flags > AFL_* environment > key=value file > defaults."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields

from .errors import DomainError

DEFAULT_CAPS = {
    "dimensions": 7,
    "kernels": 6,
    "embedding": 5,
    "ce-homology": 4,
    "bicomplex": 4,
    "graph-complex": 5,
    "identities": 4,
    "characters": 4,
    "bseries": 4,
    "obstruction": 6,
    "properties": 2,
}


@dataclass
class Config:
    max_n: int | None = None
    seed: int = 1
    cache_dir: str | None = None
    dump_matrices: str | None = None
    parallel: bool = False
    json: str | None = None
    caps: dict = field(default_factory=lambda: dict(DEFAULT_CAPS))

    def cap(self, suite: str) -> int:
        return self.caps[suite]


def _coerce(name: str, value: str):
    if name in ("max_n", "seed"):
        return int(value)
    if name == "parallel":
        return value.strip().lower() in ("1", "true", "yes", "on")
    return value


def parse_config_file(path) -> dict:
    """Lines ``key = value``; ``#`` starts a comment; ``cap.<suite> = N`` sets a cap."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line or line.startswith("["):
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value.strip("\"'")
    return out


def _apply(cfg: Config, settings: dict) -> None:
    names = {f.name for f in fields(Config)} - {"caps"}
    for key, value in settings.items():
        if value is None:
            continue
        if key.startswith("cap."):
            suite = key[4:].replace("_", "-")
            if suite not in cfg.caps:
                raise DomainError(f"unknown cap {suite!r}")
            cfg.caps[suite] = int(value)
        elif key in names:
            setattr(cfg, key, _coerce(key, value) if isinstance(value, str) else value)
        else:
            raise DomainError(f"unknown config key {key!r}")


def load_config(cli: dict | None = None, path=None, environ=None) -> Config:
    environ = os.environ if environ is None else environ
    cfg = Config()
    path = path or environ.get("AFL_CONFIG")
    if path:
        _apply(cfg, parse_config_file(path))
    env = {}
    for key, value in environ.items():
        if not key.startswith("AFL_") or key == "AFL_CONFIG":
            continue
        name = key[4:].lower()
        if name.startswith("cap_"):
            name = "cap." + name[4:]
        env[name] = value
    _apply(cfg, env)
    _apply(cfg, cli or {})
    return cfg
