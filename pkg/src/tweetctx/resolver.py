"""Per-conversation extraction, version conflict resolution and missing-item reports."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .corpus import ITEM_TYPES, Conversation, Tweet, tokenize
from .extractor import ContextItem, PatternSet, extract_platform_device, platform_device_patterns
from .lexicon import PLATFORMS, Lexicon, VersionLabel
from .versiontree import VersionTree, build_tree, is_conflicted, match, normalize_version_token


@dataclass(frozen=True)
class ConversationContext:
    conversation_id: str
    items: tuple[ContextItem, ...]
    platform_evidence: frozenset[str]
    missing: tuple[str, ...]
    account: str | None = None

    @property
    def actionable(self) -> bool:
        return not self.missing


def version_item_type(labels: Iterable[VersionLabel]) -> str:
    # Mixed kinds default to system: system lists are complete, app lists are not.
    kinds = {l.kind for l in labels}
    return "app_version" if kinds == {"app"} else "system_version"


def _platform_tag(labels: Iterable[VersionLabel]) -> str:
    platforms = {l.platform for l in labels}
    return platforms.pop() if len(platforms) == 1 else "unknown"


def platform_evidence(items: Iterable[ContextItem]) -> frozenset[str]:
    return frozenset(
        i.platform_tag
        for i in items
        if i.item_type in ("platform", "device") and not i.conflicted and i.platform_tag in PLATFORMS
    )


def resolve_conflicts(items: Iterable[ContextItem], evidence: Iterable[str]) -> list[ContextItem]:
    """Narrow conflicted version items using conversation-wide platform evidence.

    Only unambiguous evidence ({"ios"} or {"android"}) acts: labels of the
    other platform are dropped. Items are never emptied.
    """
    evidence = frozenset(evidence)
    out = []
    for item in items:
        if not item.conflicted or len(evidence) != 1:
            out.append(item)
            continue
        (platform,) = evidence
        kept = frozenset(l for l in item.candidate_labels if l.platform == platform)
        if not kept or kept == item.candidate_labels:
            out.append(item)
            continue
        out.append(
            replace(
                item,
                item_type=version_item_type(kept),
                candidate_labels=kept,
                conflicted=is_conflicted(kept),
                platform_tag=_platform_tag(kept),
                resolution=f"evidence:{platform}",
            )
        )
    return out


def missing_types(items: Iterable[ContextItem]) -> tuple[str, ...]:
    present = {i.item_type for i in items}
    return tuple(t for t in ITEM_TYPES if t not in present)


class ContextExtractor:
    """Holds compiled patterns and version trees for repeated extraction.

    Version trees are built per app: a conversation whose account names an
    app with version lists only sees that app's lists plus the system lists.
    """

    def __init__(
        self,
        lexicon: Lexicon,
        alt_spellings: Mapping[str, Iterable[str]] | None = None,
        *,
        tree: VersionTree | None = None,
        previous_window: int = 1,
        max_bare_digits: int = 4,
        strict_bare_prefix: bool = True,
    ):
        if previous_window not in (1, 2):
            raise ValueError("previous_window must be 1 or 2")
        self.lexicon = lexicon
        self.patterns: list[PatternSet] = platform_device_patterns(lexicon, alt_spellings)
        self.previous_window = previous_window
        self.max_bare_digits = max_bare_digits
        self.strict_bare_prefix = strict_bare_prefix
        self._fixed_tree = tree
        self._trees: dict[str | None, VersionTree] = {}

    @property
    def apps(self) -> set[str]:
        return {k.app_name for k in self.lexicon.version_lists if k.app_name}

    def tree_for(self, app: str | None = None) -> VersionTree:
        if self._fixed_tree is not None:
            return self._fixed_tree
        # accounts inferred from support handles look like "spotifycares"
        key = next((a for a in sorted(self.apps, key=len, reverse=True) if app and app.startswith(a)), None)
        if key not in self._trees:
            lists = {
                k: v for k, v in self.lexicon.version_lists.items() if key is None or k.app_name in (None, key)
            }
            self._trees[key] = build_tree(lists)
        return self._trees[key]

    def extract_tweet(self, tweet: Tweet, tree: VersionTree | None = None) -> list[ContextItem]:
        tree = tree if tree is not None else self.tree_for(tweet.account)
        text = tweet.normalized
        items = extract_platform_device(None, None, tweet, patterns=self.patterns)
        taken = [(i.char_start, i.char_end) for i in items]

        def free(start: int, end: int) -> bool:
            return all(end <= s or start >= e for s, e in taken)

        tokens = tokenize(text)
        for idx, tok in enumerate(tokens):
            vt = normalize_version_token(tok.value, PLATFORMS, self.max_bare_digits, self.strict_bare_prefix)
            if vt is None:
                continue
            previous = [t.value for t in reversed(tokens[max(0, idx - self.previous_window) : idx])]
            if vt.platform_prefix:
                start, end = tok.char_start, tok.char_start + len(vt.platform_prefix)
                if free(start, end):
                    items.append(
                        ContextItem(tweet.id, "platform", start, end, text[start:end], vt.platform_prefix, vt.platform_prefix)
                    )
                    taken.append((start, end))
                previous = [vt.platform_prefix] + previous[: self.previous_window - 1]
            start, end = tok.char_start + vt.start, tok.char_start + vt.end
            if not free(start, end):
                continue
            m = match(tree, vt.version, previous)
            if m is None:
                continue
            labels = m.candidate_labels
            items.append(
                ContextItem(
                    tweet_id=tweet.id,
                    item_type=version_item_type(labels),
                    char_start=start,
                    char_end=end,
                    surface=text[start:end],
                    canonical=str(m.matched_version),
                    platform_tag=_platform_tag(labels),
                    candidate_labels=labels,
                    conflicted=m.conflicted,
                )
            )
            taken.append((start, end))
        return sorted(items, key=lambda i: (i.char_start, i.char_end))

    def extract_conversation(self, conv: Conversation) -> ConversationContext:
        tree = self.tree_for(conv.account)
        items = [item for t in conv.user_tweets for item in self.extract_tweet(t, tree)]
        evidence = platform_evidence(items)
        items = resolve_conflicts(items, evidence)
        return ConversationContext(
            conversation_id=conv.id,
            items=tuple(items),
            platform_evidence=evidence,
            missing=missing_types(items),
            account=conv.account,
        )


def extract_conversation(
    conv: Conversation,
    lexicon: Lexicon,
    alt_spellings: Mapping[str, Iterable[str]] | None = None,
    tree: VersionTree | None = None,
    **options,
) -> ConversationContext:
    return ContextExtractor(lexicon, alt_spellings, tree=tree, **options).extract_conversation(conv)


def missing_report(ctx: ConversationContext) -> dict:
    return {
        "conversation_id": ctx.conversation_id,
        "actionable": ctx.actionable,
        "missing": list(ctx.missing),
        "items": [
            {
                "tweet_id": i.tweet_id,
                "item_type": i.item_type,
                "canonical": i.canonical,
                "surface": i.surface,
                "platform_tag": i.platform_tag,
                "conflicted": i.conflicted,
                "resolution": i.resolution,
            }
            for i in ctx.items
        ],
    }
