"""Keyword lists: platform code names, device names and version lists."""
from __future__ import annotations

import csv
import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import tokenize

PLATFORMS = ("ios", "android")
KINDS = ("system", "app")
IOS_PRODUCT_LINES = ("iphone", "ipad", "ipod touch", "apple tv", "apple watch")


class LexiconError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class VersionLabel:
    """Which list a version belongs to, e.g. ios/app/spotify or android/system."""

    platform: str
    kind: str
    app_name: str | None = None

    def __post_init__(self):
        if self.platform not in PLATFORMS:
            raise ValueError(f"unknown platform {self.platform!r}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if (self.kind == "app") != bool(self.app_name):
            raise ValueError("app_name is required for app lists and forbidden for system lists")

    def __str__(self) -> str:
        if self.kind == "app":
            return f"{self.app_name}-{self.platform}-app"
        return f"{self.platform}-system"

    @property
    def filename(self) -> str:
        parts = [self.kind, self.platform] + ([self.app_name] if self.app_name else [])
        return "_".join(parts) + ".txt"

    @classmethod
    def from_filename(cls, name: str) -> "VersionLabel":
        stem = Path(name).stem
        parts = stem.split("_", 2)
        if len(parts) < 2 or parts[0] not in KINDS or parts[1] not in PLATFORMS:
            raise LexiconError(f"version list file name {name!r} is not <app|system>_<platform>[_<app>].txt")
        kind, platform = parts[0], parts[1]
        app = parts[2] if len(parts) == 3 else None
        try:
            return cls(platform, kind, app)
        except ValueError as exc:
            raise LexiconError(f"{name}: {exc}") from exc

    @classmethod
    def parse(cls, text: str) -> "VersionLabel":
        """Inverse of ``str()``."""
        parts = text.split("-")
        if len(parts) == 2 and parts[1] == "system":
            return cls(parts[0], "system")
        if len(parts) >= 3 and parts[-1] == "app":
            return cls(parts[-2], "app", "-".join(parts[:-2]))
        raise ValueError(f"cannot parse version label {text!r}")


# Version lists and labels share one key type.
VersionListKey = VersionLabel


@dataclass(frozen=True, order=True)
class VersionString:
    components: tuple[int, ...]

    def __post_init__(self):
        if not self.components or any(c < 0 for c in self.components):
            raise ValueError("version needs at least one non-negative component")

    def __str__(self) -> str:
        return ".".join(map(str, self.components))

    def __len__(self) -> int:
        return len(self.components)

    @classmethod
    def parse(cls, text: str) -> "VersionString":
        text = text.strip()
        if not re.fullmatch(r"\d+(?:\.\d+)*", text):
            raise ValueError(f"not a dotted numeric version: {text!r}")
        return cls(tuple(int(c) for c in text.split(".")))


def normalize_entry(s: str) -> str:
    return " ".join(s.lower().split())


def read_list(path: str | Path) -> list[str]:
    """One entry per line; blank lines and ``#`` comments are skipped."""
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0]
            entry = normalize_entry(line)
            if entry:
                entries.append(entry)
    return entries


@dataclass
class Lexicon:
    platform_names: dict[str, set[str]] = field(default_factory=dict)
    device_names: dict[str, set[str]] = field(default_factory=dict)
    version_lists: dict[VersionLabel, set[VersionString]] = field(default_factory=dict)
    exclusions: set[str] = field(default_factory=set)

    def keywords(self) -> set[str]:
        return set().union(*self.platform_names.values(), *self.device_names.values())


def platform_names(android_codenames: Iterable[str] = ()) -> dict[str, set[str]]:
    return {
        "ios": {"ios"},
        "android": {"android"} | {normalize_entry(c) for c in android_codenames if c.strip()},
    }


# -- Android device filtering ------------------------------------------------

@dataclass
class FilterStage:
    name: str
    count: int
    removed: list[str]


@dataclass
class DeviceFilterResult:
    retained: set[str]
    stages: list[FilterStage]

    def counts(self) -> list[tuple[str, int]]:
        return [(s.name, s.count) for s in self.stages]


def read_device_table(path: str | Path) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"retail_branding", "marketing_name", "device", "model"} - set(reader.fieldnames or ())
        if missing:
            raise LexiconError(f"{path}: device table lacks columns {sorted(missing)}")
        return list(reader)


def corpus_vocabulary(tokenized: Iterable[Iterable[str]], max_ngram: int = 4) -> set[str]:
    """Unigrams plus space-joined contiguous n-grams up to ``max_ngram``."""
    vocab: set[str] = set()
    for tokens in tokenized:
        tokens = list(tokens)
        for n in range(1, max_ngram + 1):
            for i in range(len(tokens) - n + 1):
                vocab.add(" ".join(tokens[i : i + n]))
    return vocab


def filter_android_devices(
    rows: Iterable[Mapping[str, str]],
    corpus_vocab: set[str],
    common_vocab: set[str],
    exclusions: set[str],
    min_length: int = 5,
) -> DeviceFilterResult:
    """Reduce the supported-devices table to names worth matching in tweets.

    Stages, in order: unique marketing names; drop names shorter than
    ``min_length`` characters (spaces count); drop names that never occur in
    the corpus (multiword names must occur as a contiguous phrase, so
    ``corpus_vocab`` should contain n-grams, see :func:`corpus_vocabulary`);
    drop single-word names found in ``common_vocab``; drop ``exclusions``.
    """
    rows = list(rows)
    if not rows:
        raise LexiconError("empty android device table")

    def phrase(name: str) -> str:
        return " ".join(t.value for t in tokenize(name))

    common = {normalize_entry(w) for w in common_vocab}
    excluded = {normalize_entry(w) for w in exclusions}

    names = {normalize_entry(r.get("marketing_name") or "") for r in rows} - {""}
    stages = [FilterStage("unique", len(names), [])]

    def apply(name: str, keep) -> None:
        nonlocal names
        kept = {n for n in names if keep(n)}
        stages.append(FilterStage(name, len(kept), sorted(names - kept)))
        names = kept

    apply("min_length", lambda n: len(n) >= min_length)
    apply("in_corpus", lambda n: phrase(n) in corpus_vocab)
    apply("common_words", lambda n: " " in n or n not in common)
    apply("exclusions", lambda n: n not in excluded)
    return DeviceFilterResult(names, stages)


def build_ios_devices(raw: Iterable[str]) -> set[str]:
    return {normalize_entry(r) for r in raw if r.strip()} | set(IOS_PRODUCT_LINES)


# -- version lists ------------------------------------------------------------

def load_version_list(key: VersionLabel, path: str | Path) -> set[VersionString]:
    versions = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                versions.add(VersionString.parse(line))
            except ValueError as exc:
                raise LexiconError(f"{path}:{lineno}: {key}: {exc}") from exc
    return versions


def load_version_lists(directory: str | Path) -> dict[VersionLabel, set[VersionString]]:
    lists = {}
    for p in sorted(Path(directory).glob("*.txt")):
        key = VersionLabel.from_filename(p.name)
        lists[key] = load_version_list(key, p)
    return lists


def intersection_report(lexicon: Lexicon) -> dict[tuple[VersionLabel, VersionLabel], float]:
    """Directional overlap |A & B| / |A| in percent for every ordered pair."""
    lists = lexicon.version_lists
    if len(lists) < 2:
        raise LexiconError("intersection report needs at least two version lists")
    report = {}
    for a, b in itertools.permutations(sorted(lists), 2):
        va, vb = lists[a], lists[b]
        report[(a, b)] = 100.0 * len(va & vb) / len(va) if va else 0.0
    return report


# -- on-disk lexicon ------------------------------------------------------------

LEXICON_FILES = {
    "ios_devices": "ios_devices.txt",
    "android_devices": "android_devices.txt",
    "android_codenames": "android_codenames.txt",
}


def save_lexicon(lexicon: Lexicon, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    def dump(name: str, entries: Iterable[str]) -> None:
        (directory / name).write_text("".join(f"{e}\n" for e in sorted(entries)), encoding="utf-8")

    dump(LEXICON_FILES["ios_devices"], lexicon.device_names.get("ios", ()))
    dump(LEXICON_FILES["android_devices"], lexicon.device_names.get("android", ()))
    dump(LEXICON_FILES["android_codenames"], lexicon.platform_names.get("android", set()) - {"android"})


def load_lexicon(directory: str | Path, version_dir: str | Path | None = None) -> Lexicon:
    directory = Path(directory)
    for fname in LEXICON_FILES.values():
        if not (directory / fname).exists():
            raise LexiconError(f"lexicon file {directory / fname} missing; run build-lexicon first")
    return Lexicon(
        platform_names=platform_names(read_list(directory / LEXICON_FILES["android_codenames"])),
        device_names={
            "ios": set(read_list(directory / LEXICON_FILES["ios_devices"])),
            "android": set(read_list(directory / LEXICON_FILES["android_devices"])),
        },
        version_lists=load_version_lists(version_dir) if version_dir else {},
    )
