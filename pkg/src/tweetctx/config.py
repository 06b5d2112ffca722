"""Declarative run configuration loaded from YAML."""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import yaml

from .embeddings import Hyperparams
from .evaluation import MATCH_MODES


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Paths:
    corpus: Path
    work_dir: Path
    version_lists: Path
    training_corpus: Path | None = None
    truthset: Path | None = None
    annotators: tuple[Path, ...] = ()
    android_device_table: Path | None = None
    ios_devices: Path | None = None
    android_codenames: Path | None = None
    common_vocab: Path | None = None
    exclusions: Path | None = None
    spelling_exclusions: Path | None = None
    spellings: Path | None = None

    @property
    def lexicon_dir(self) -> Path:
        return self.work_dir / "lexicon"

    @property
    def model(self) -> Path:
        return self.work_dir / "model.bin"

    @property
    def harvested_spellings(self) -> Path:
        return self.work_dir / "spellings.json"

    @property
    def items(self) -> Path:
        return self.work_dir / "items.jsonl"

    @property
    def missing(self) -> Path:
        return self.work_dir / "missing.jsonl"


@dataclass(frozen=True)
class Config:
    paths: Paths
    support_handles: tuple[str, ...] = ()
    embeddings: Hyperparams = field(default_factory=Hyperparams)
    spelling_k: int = 10
    spelling_max_distance: float = 0.2
    previous_window: int = 1
    max_bare_digits: int = 4
    strict_bare_prefix: bool = True
    min_device_length: int = 5
    match_mode: str = "exact"

    def validate(self) -> None:
        self.embeddings.validate()
        if self.spelling_k < 1:
            raise ConfigError("spellings.k must be >= 1")
        if not 0.0 <= self.spelling_max_distance <= 2.0:
            raise ConfigError("spellings.max_distance must be within [0, 2]")
        if self.previous_window not in (1, 2):
            raise ConfigError("matching.previous_window must be 1 or 2")
        if self.max_bare_digits < 1:
            raise ConfigError("matching.max_bare_digits must be >= 1")
        if self.min_device_length < 1:
            raise ConfigError("lexicon.min_device_length must be >= 1")
        if self.match_mode not in MATCH_MODES:
            raise ConfigError(f"evaluation.match_mode must be one of {MATCH_MODES}")
        p = self.paths
        for f in fields(Paths):
            if f.name == "work_dir":
                continue
            value = getattr(p, f.name)
            for path in value if isinstance(value, tuple) else (value,):
                if path is not None and not path.exists():
                    raise ConfigError(f"paths.{f.name}: {path} does not exist")

    def override(self, **changes: Any) -> "Config":
        changes = {k: v for k, v in changes.items() if v is not None}
        emb = {k[len("embeddings_"):]: changes.pop(k) for k in list(changes) if k.startswith("embeddings_")}
        if "work_dir" in changes:
            changes["paths"] = replace(self.paths, work_dir=Path(changes.pop("work_dir")))
        cfg = replace(self, **changes)
        if emb:
            cfg = replace(cfg, embeddings=replace(cfg.embeddings, **emb))
        return cfg


_SECTIONS = {
    "spellings": {"k": "spelling_k", "max_distance": "spelling_max_distance"},
    "matching": {
        "previous_window": "previous_window",
        "max_bare_digits": "max_bare_digits",
        "strict_bare_prefix": "strict_bare_prefix",
    },
    "lexicon": {"min_device_length": "min_device_length"},
    "evaluation": {"match_mode": "match_mode"},
}


def load_config(path: str | Path, validate: bool = True) -> Config:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    base = path.parent

    def resolve(p):
        return p if p is None else (base / p).resolve()

    raw_paths = dict(raw.get("paths") or {})
    known = {f.name for f in fields(Paths)}
    unknown = set(raw_paths) - known
    if unknown:
        raise ConfigError(f"unknown paths entries: {sorted(unknown)}")
    for required in ("corpus", "work_dir", "version_lists"):
        if required not in raw_paths:
            raise ConfigError(f"paths.{required} is required")
    paths = {k: resolve(v) for k, v in raw_paths.items() if k != "annotators"}
    paths["annotators"] = tuple(resolve(p) for p in raw_paths.get("annotators") or ())

    kwargs: dict[str, Any] = {
        "paths": Paths(**paths),
        "support_handles": tuple(h.lower().lstrip("@") for h in raw.get("support_handles") or ()),
    }
    try:
        kwargs["embeddings"] = Hyperparams(**(raw.get("embeddings") or {}))
    except TypeError as exc:
        raise ConfigError(f"embeddings: {exc}") from exc
    for section, mapping in _SECTIONS.items():
        values = raw.get(section) or {}
        unknown = set(values) - set(mapping)
        if unknown:
            raise ConfigError(f"unknown {section} entries: {sorted(unknown)}")
        for key, attr in mapping.items():
            if key in values:
                kwargs[attr] = values[key]
    cfg = Config(**kwargs)
    if validate:
        cfg.validate()
    return cfg
