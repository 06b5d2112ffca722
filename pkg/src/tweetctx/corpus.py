"""Tweet/conversation ingestion, text normalization and tokenization."""
from __future__ import annotations

import json
import re
import unicodedata
from collections import defaultdict
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

ITEM_TYPES = ("platform", "device", "app_version", "system_version")

# Characters stripped from token edges.
EDGE_PUNCT = frozenset(",.!?:;'\"`()[]{}‘’“”…")


class IngestionError(ValueError):
    """Raised for malformed corpus or truthset input."""


@dataclass(frozen=True)
class Tweet:
    id: str
    text: str
    normalized: str
    created_at: datetime
    conversation_id: str
    author_id: str
    is_reply: bool = False
    is_support: bool = False
    account: str | None = None


@dataclass(frozen=True)
class Conversation:
    id: str
    tweets: tuple[Tweet, ...]

    @property
    def user_tweets(self) -> tuple[Tweet, ...]:
        return tuple(t for t in self.tweets if not t.is_support)

    @property
    def account(self) -> str | None:
        for t in self.tweets:
            if t.account:
                return t.account
        return None


@dataclass(frozen=True)
class TruthLabel:
    tweet_id: str
    item_type: str
    start: int
    end: int
    surface: str


class Token(NamedTuple):
    value: str
    char_start: int
    char_end: int


def _lower(raw: str) -> str:
    # str.lower() can expand a character (U+0130 -> "i" + combining dot);
    # keep the base letter so normalization never grows the string.
    out = []
    for ch in raw:
        low = ch.lower()
        out.append(low if len(low) == 1 else low[0])
    return "".join(out)


def _mention_pattern(handles: Iterable[str]) -> re.Pattern | None:
    handles = sorted({h.lower().lstrip("@") for h in handles if h.strip("@ ")}, key=lambda h: (-len(h), h))
    if not handles:
        return None
    alts = "|".join(re.escape(h) for h in handles)
    return re.compile(rf"@(?:{alts})(?!\w)")


def normalize_text(raw: str, support_handles: Iterable[str] = ()) -> str:
    """Lowercase, drop support-account mentions, collapse all whitespace.

    >>> normalize_text("@SpotifyCares My app\\ncrashes  on iOS", {"spotifycares"})
    'my app crashes on ios'
    """
    text = _lower(raw)
    pattern = _mention_pattern(support_handles)
    if pattern is not None:
        while True:
            stripped = pattern.sub("", text)
            if stripped == text:
                break
            text = stripped
    return " ".join(text.split())


def tokenize(text: str) -> list[Token]:
    """Split normalized text into tokens with offsets.

    Whitespace separates chunks; punctuation is stripped from chunk edges.
    Punctuation that sits directly before a token starting with a digit
    (the "(" in "(8.1") is kept as its own one-character token so the version
    matcher sees it as the previous token. Other bare punctuation is dropped.
    """
    tokens: list[Token] = []
    pending: list[Token] = []  # punctuation waiting to see what follows
    for m in re.finditer(r"\S+", text):
        chunk, base = m.group(), m.start()
        if all(ch in EDGE_PUNCT or unicodedata.category(ch).startswith("P") for ch in chunk):
            pending = [Token(ch, base + i, base + i + 1) for i, ch in enumerate(chunk)]
            continue
        lo, hi = 0, len(chunk)
        while lo < hi and chunk[lo] in EDGE_PUNCT:
            lo += 1
        while hi > lo and chunk[hi - 1] in EDGE_PUNCT:
            hi -= 1
        pending.extend(Token(chunk[i], base + i, base + i + 1) for i in range(lo))
        core = chunk[lo:hi]
        if core[0].isdigit():
            tokens.extend(pending)
        pending = []
        tokens.append(Token(core, base + lo, base + hi))
    return tokens


def _parse_time(value: str, where: str) -> datetime:
    try:
        ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    except (TypeError, ValueError, AttributeError) as exc:
        raise IngestionError(f"{where}: bad created_at {value!r}") from exc
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def _iter_jsonl(path: Path) -> Iterator[tuple[int, dict]]:
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, 1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise IngestionError(f"{path}:{lineno}: invalid UTF-8") from exc
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestionError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise IngestionError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, obj


def _check_utf8(text: str, tweet_id: str) -> None:
    try:
        text.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise IngestionError(f"tweet {tweet_id}: text is not valid UTF-8") from exc


def _infer_account(tweets: list[Tweet], handles: Iterable[str]) -> str | None:
    pattern = _mention_pattern(handles)
    if pattern is None:
        return None
    for t in tweets:
        m = pattern.search(t.text.lower())
        if m:
            return m.group()[1:]
    return None


def load_conversations(path: str | Path, support_handles: Iterable[str] = ()) -> list[Conversation]:
    """Read one-tweet-per-line JSONL and group tweets into conversations.

    Conversations come back in order of first appearance; tweets within a
    conversation are sorted by (created_at, id).
    """
    path = Path(path)
    support_handles = tuple(support_handles)
    seen: set[str] = set()
    groups: dict[str, list[Tweet]] = defaultdict(list)
    for lineno, obj in _iter_jsonl(path):
        where = f"{path}:{lineno}"
        try:
            tid = str(obj["id"])
            text = obj["text"]
            conv = str(obj["conversation_id"])
            author = str(obj["author_id"])
            created = obj["created_at"]
        except KeyError as exc:
            raise IngestionError(f"{where}: missing field {exc.args[0]!r}") from exc
        if not tid:
            raise IngestionError(f"{where}: empty tweet id")
        if not conv:
            raise IngestionError(f"{where}: tweet {tid} has empty conversation_id")
        if not isinstance(text, str):
            raise IngestionError(f"{where}: tweet {tid} text is not a string")
        if tid in seen:
            raise IngestionError(f"{where}: duplicate tweet id {tid}")
        seen.add(tid)
        _check_utf8(text, tid)
        groups[conv].append(
            Tweet(
                id=tid,
                text=text,
                normalized=normalize_text(text, support_handles),
                created_at=_parse_time(created, where),
                conversation_id=conv,
                author_id=author,
                is_reply=bool(obj.get("is_reply", False)),
                is_support=bool(obj.get("is_support", False)),
                account=obj.get("account") or None,
            )
        )

    conversations = []
    for cid, tweets in groups.items():
        tweets.sort(key=lambda t: (t.created_at, t.id))
        account = next((t.account for t in tweets if t.account), None) or _infer_account(tweets, support_handles)
        if account:
            tweets = [t if t.account else _with_account(t, account) for t in tweets]
        conversations.append(Conversation(cid, tuple(tweets)))
    return conversations


def _with_account(tweet: Tweet, account: str) -> Tweet:
    return replace(tweet, account=account)


def index_tweets(conversations: Iterable[Conversation]) -> dict[str, Tweet]:
    return {t.id: t for c in conversations for t in c.tweets}


def load_truthset(path: str | Path, tweets: dict[str, Tweet] | dict[str, str]) -> list[TruthLabel]:
    """Load span labels and validate them against normalized tweet text.

    ``tweets`` maps tweet id to a Tweet or directly to its normalized text.
    """
    path = Path(path)
    labels = []
    for lineno, obj in _iter_jsonl(path):
        where = f"{path}:{lineno}"
        try:
            label = TruthLabel(
                tweet_id=str(obj["tweet_id"]),
                item_type=obj["item_type"],
                start=int(obj["start"]),
                end=int(obj["end"]),
                surface=obj["surface"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise IngestionError(f"{where}: malformed label ({exc})") from exc
        if label.item_type not in ITEM_TYPES:
            raise IngestionError(f"{where}: unknown item_type {label.item_type!r}")
        if label.tweet_id not in tweets:
            raise IngestionError(f"{where}: label references unknown tweet {label.tweet_id}")
        entry = tweets[label.tweet_id]
        text = entry.normalized if isinstance(entry, Tweet) else entry
        if not 0 <= label.start < label.end <= len(text):
            raise IngestionError(
                f"{where}: tweet {label.tweet_id} label {label.item_type} "
                f"[{label.start}, {label.end}) out of range for text of length {len(text)}"
            )
        if text[label.start : label.end] != label.surface:
            raise IngestionError(
                f"{where}: tweet {label.tweet_id} label {label.item_type} surface "
                f"{label.surface!r} != text slice {text[label.start:label.end]!r}"
            )
        labels.append(label)
    return labels


def write_jsonl(path: str | Path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
