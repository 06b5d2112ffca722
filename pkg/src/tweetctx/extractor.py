"""Keyword/alternative-spelling patterns and platform/device extraction."""
from __future__ import annotations

import re
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .lexicon import Lexicon, VersionLabel

PLATFORM_TAGS = ("ios", "android", "unknown")


@dataclass(frozen=True)
class ContextItem:
    tweet_id: str
    item_type: str
    char_start: int
    char_end: int
    surface: str
    canonical: str
    platform_tag: str = "unknown"
    candidate_labels: frozenset[VersionLabel] = frozenset()
    conflicted: bool = False
    resolution: str | None = None

    @property
    def span(self) -> tuple[int, int]:
        return self.char_start, self.char_end

    def to_json(self) -> dict:
        d = asdict(self)
        d["candidate_labels"] = sorted(str(l) for l in self.candidate_labels)
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "ContextItem":
        d = dict(d)
        d["candidate_labels"] = frozenset(VersionLabel.parse(s) for s in d.get("candidate_labels", ()))
        return cls(**d)


@dataclass(frozen=True)
class PatternSet:
    item_type: str
    platform_tag: str
    alternatives: tuple[str, ...]
    canonical: Mapping[str, str] = field(compare=False, hash=False)

    @cached_property
    def regex(self) -> re.Pattern:
        body = "|".join(re.escape(a) for a in self.alternatives)
        # no letter/digit directly before; no letter/digit/"+" directly after
        return re.compile(rf"(?<![^\W_])(?:{body})(?![^\W_]|\+)")

    @property
    def pattern(self) -> str:
        return self.regex.pattern


def _normalize(s: str) -> str:
    return " ".join(s.lower().split())


def build_pattern_set(
    item_type: str,
    platform_tag: str,
    keywords: Iterable[str],
    alt_spellings: Mapping[str, Iterable[str]] | Iterable[str] = (),
) -> PatternSet:
    """Join keywords and their alternative spellings into one alternation.

    ``alt_spellings`` is either a keyword -> spellings map (spellings then map
    back to that keyword) or a flat iterable of extra alternatives that map to
    themselves. Alternatives are ordered longest first, ties lexicographic.
    """
    keywords = {_normalize(k) for k in keywords} - {""}
    if not keywords:
        raise ValueError(f"no keywords for {item_type}/{platform_tag} pattern set")
    canonical = {k: k for k in keywords}
    if isinstance(alt_spellings, Mapping):
        pairs = ((s, _normalize(kw)) for kw, spellings in alt_spellings.items() for s in spellings)
    else:
        pairs = ((s, None) for s in alt_spellings)
    # sorted so that a spelling claimed by two keywords resolves to the
    # lexicographically smaller keyword
    for spelling, kw in sorted(pairs, key=lambda p: (p[0], p[1] or "")):
        spelling = _normalize(spelling)
        if spelling and spelling not in canonical:
            canonical[spelling] = kw or spelling
    alternatives = tuple(sorted(canonical, key=lambda a: (-len(a), a)))
    return PatternSet(item_type, platform_tag, alternatives, canonical)


def find_all(pattern_set: PatternSet, text: str, tweet_id: str = "") -> list[ContextItem]:
    """All non-overlapping matches, left to right, longest alternative first."""
    return [
        ContextItem(
            tweet_id=tweet_id,
            item_type=pattern_set.item_type,
            char_start=m.start(),
            char_end=m.end(),
            surface=m.group(),
            canonical=pattern_set.canonical[m.group()],
            platform_tag=pattern_set.platform_tag,
        )
        for m in pattern_set.regex.finditer(text)
    ]


def resolve_overlaps(items: Iterable[ContextItem]) -> list[ContextItem]:
    """Keep the longer span when matches overlap; ties keep the earlier one."""
    ranked = sorted(
        enumerate(items),
        key=lambda p: (-(p[1].char_end - p[1].char_start), p[1].char_start, p[0]),
    )
    kept: list[ContextItem] = []
    for _, item in ranked:
        if all(item.char_end <= k.char_start or item.char_start >= k.char_end for k in kept):
            kept.append(item)
    return sorted(kept, key=lambda i: (i.char_start, i.char_end))


def _spellings_for(alt_spellings: Mapping[str, Iterable[str]], keywords: set[str]) -> dict[str, list[str]]:
    return {kw: list(s) for kw, s in alt_spellings.items() if _normalize(kw) in keywords}


def platform_device_patterns(lexicon: Lexicon, alt_spellings: Mapping[str, Iterable[str]] | None = None) -> list[PatternSet]:
    """Pattern sets in a fixed order: platform-ios, platform-android, device-ios, device-android."""
    alt_spellings = alt_spellings or {}
    sets = []
    for item_type, table in (("platform", lexicon.platform_names), ("device", lexicon.device_names)):
        for tag in ("ios", "android"):
            keywords = {_normalize(k) for k in table.get(tag, ())}
            if item_type == "platform":
                keywords.add(tag)
            if keywords:
                sets.append(build_pattern_set(item_type, tag, keywords, _spellings_for(alt_spellings, keywords)))
    return sets


def extract_platform_device(
    lexicon: Lexicon | None,
    alt_spellings: Mapping[str, Iterable[str]] | None,
    tweet,
    *,
    patterns: list[PatternSet] | None = None,
) -> list[ContextItem]:
    """Platform and device items of one tweet, sorted by position.

    ``tweet`` is a corpus Tweet or a normalized string. Pass ``patterns`` to
    reuse compiled pattern sets across tweets.
    """
    if patterns is None:
        patterns = platform_device_patterns(lexicon, alt_spellings)
    if isinstance(tweet, str):
        text, tweet_id = tweet, ""
    else:
        text, tweet_id = tweet.normalized, tweet.id
    found = [item for ps in patterns for item in find_all(ps, text, tweet_id)]
    return resolve_overlaps(found)
