"""Multi-label version trie and the token-to-version matcher."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .lexicon import PLATFORMS, VersionLabel, VersionString

# Leading prefixes that may introduce a bare integer ("v7", "ios12").
VERSION_PREFIXES = frozenset({"v", "ver", "version"})

_VERSION_HEAD = re.compile(r"[0-9]+(?:\.[0-9]+)*")


class Node:
    __slots__ = ("children", "labels", "listed")

    def __init__(self):
        self.children: dict[int, Node] = {}
        self.labels: set[VersionLabel] = set()  # labels of this prefix and everything below
        self.listed: set[VersionLabel] = set()  # labels whose list contains exactly this version

    def __eq__(self, other):
        if not isinstance(other, Node):
            return NotImplemented
        return self.labels == other.labels and self.listed == other.listed and self.children == other.children


class VersionTree:
    def __init__(self):
        self.root = Node()

    def add(self, version: VersionString, label: VersionLabel) -> None:
        node = self.root
        for comp in version.components:
            node = node.children.setdefault(comp, Node())
            node.labels.add(label)
        node.listed.add(label)

    def node_count(self) -> int:
        count, stack = 0, [self.root]
        while stack:
            node = stack.pop()
            count += len(node.children)
            stack.extend(node.children.values())
        return count

    def find(self, version: VersionString) -> Node | None:
        node = self.root
        for comp in version.components:
            node = node.children.get(comp)
            if node is None:
                return None
        return node

    def __eq__(self, other):
        return isinstance(other, VersionTree) and self.root == other.root


def build_tree(version_lists: Mapping[VersionLabel, Iterable[VersionString]]) -> VersionTree:
    tree = VersionTree()
    for label, versions in version_lists.items():
        for version in versions:
            tree.add(version, label)
    return tree


@dataclass(frozen=True)
class VersionToken:
    """A token that looks like a version; offsets are relative to the token."""

    platform_prefix: str | None
    version: VersionString
    start: int
    end: int


def normalize_version_token(
    token: str,
    platforms: Iterable[str] = PLATFORMS,
    max_bare_digits: int = 4,
    strict_bare_prefix: bool = True,
) -> VersionToken | None:
    """Pull a dotted version out of a token such as "v8.4.17" or "ios12".

    Leading non-digits are dropped (kept as ``platform_prefix`` when they name
    a platform); anything after the leading dotted number ("arm7" in
    "8.1.13arm7") is dropped. Bare integers longer than ``max_bare_digits`` are
    rejected. With ``strict_bare_prefix`` a bare integer behind a letter prefix
    that is neither a platform nor "v"/"version" ("s5", "g4") is rejected too.
    """
    first = next((i for i, ch in enumerate(token) if "0" <= ch <= "9"), None)
    if first is None:
        return None
    m = _VERSION_HEAD.match(token, first)
    head = m.group()
    lead = token[:first]
    prefix = lead if lead in set(platforms) else None
    if "." not in head:
        if len(head) > max_bare_digits:
            return None
        if strict_bare_prefix and lead and prefix is None and lead not in VERSION_PREFIXES:
            return None
    try:
        version = VersionString(tuple(int(c) for c in head.split(".")))
    except ValueError:
        return None
    return VersionToken(prefix, version, first, m.end())


@dataclass(frozen=True)
class VersionMatch:
    matched_version: VersionString
    input_depth: int
    candidate_labels: frozenset[VersionLabel]
    ancestor_fallback: bool
    before_pruning: frozenset[VersionLabel] = field(default=frozenset(), compare=False)
    pruned_by: tuple[str, ...] = field(default=(), compare=False)

    @property
    def conflicted(self) -> bool:
        return is_conflicted(self.candidate_labels)


def is_conflicted(labels: Iterable[VersionLabel]) -> bool:
    """More than one platform or more than one kind among the labels."""
    labels = list(labels)
    return len({l.platform for l in labels}) > 1 or len({l.kind for l in labels}) > 1


def prune(
    labels: Iterable[VersionLabel],
    ancestor_fallback: bool,
    previous_tokens: Sequence[str] = (),
) -> tuple[frozenset[VersionLabel], tuple[str, ...]]:
    """Apply the completeness rule, then the previous-token rule.

    System version lists are complete, so a version only reachable through
    ancestor fallback cannot be a system version. If both system labels
    survive and one of ``previous_tokens`` (nearest first) names a platform,
    the match collapses to that platform's system label.
    """
    labels = set(labels)
    applied = []
    if ancestor_fallback:
        kept = {l for l in labels if l.kind != "system"}
        if kept != labels:
            applied.append("completeness")
        labels = kept
    systems = {l for l in labels if l.kind == "system"}
    if len(systems) > 1:
        platform = next((t for t in previous_tokens if t in PLATFORMS), None)
        if platform is not None:
            labels = {l for l in systems if l.platform == platform}
            applied.append(f"previous_token:{platform}")
    return frozenset(labels), tuple(applied)


def match(
    tree: VersionTree,
    version: VersionString,
    previous_token: str | Sequence[str] = "",
) -> VersionMatch | None:
    """Match a version against the tree.

    Full descent returns the final node's labels. If the input is deeper than
    the tree, the deepest visited node that is itself a listed version is
    selected instead and only its listed labels are candidates.
    ``previous_token`` may be a single token or a nearest-first sequence.
    """
    previous = (previous_token,) if isinstance(previous_token, str) else tuple(previous_token)
    node = tree.root
    best: tuple[int, Node] | None = None
    depth = 0
    for comp in version.components:
        child = node.children.get(comp)
        if child is None:
            break
        node, depth = child, depth + 1
        if node.listed:
            best = (depth, node)

    if depth == len(version.components):
        selected, labels, fallback = depth, node.labels, False
    elif best is not None:
        selected, labels, fallback = best[0], best[1].listed, True
    else:
        return None
    candidates, applied = prune(labels, fallback, previous)
    if not candidates:
        return None
    return VersionMatch(
        matched_version=VersionString(version.components[:selected]),
        input_depth=len(version.components),
        candidate_labels=candidates,
        ancestor_fallback=fallback,
        before_pruning=frozenset(labels),
        pruned_by=applied,
    )
