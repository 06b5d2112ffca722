"""Scoring against the truthset, inter-coder agreement and dataset figures."""
from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import ITEM_TYPES, Conversation, TruthLabel
from .extractor import ContextItem

COMBINED = "combined"
MATCH_MODES = ("exact", "overlap")
PLATFORM_NOTE = (
    "platform precision is biased upward when the truthset was sampled for "
    "conversations mentioning a platform"
)


class EvalError(ValueError):
    pass


@dataclass
class EvalCell:
    item_type: str
    account: str
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def items(self) -> int:
        return self.tp + self.fn

    @property
    def precision(self) -> float | None:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else None

    @property
    def recall(self) -> float | None:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else None

    def counts(self) -> tuple[int, int, int, int]:
        return self.tp, self.fp, self.fn, self.tn


def _spans_match(a: tuple[int, int], b: tuple[int, int], mode: str) -> bool:
    if mode == "exact":
        return a == b
    return a[0] < b[1] and b[0] < a[1]


def _greedy_pairs(preds: list[tuple[int, int]], golds: list[tuple[int, int]], mode: str) -> int:
    order = lambda s: (s[0], -(s[1] - s[0]))  # noqa: E731 - leftmost, then longest
    used = [False] * len(golds)
    golds_sorted = sorted(range(len(golds)), key=lambda i: order(golds[i]))
    matched = 0
    for p in sorted(preds, key=order):
        for gi in golds_sorted:
            if not used[gi] and _spans_match(p, golds[gi], mode):
                used[gi] = True
                matched += 1
                break
    return matched


def score(
    predictions: Iterable[ContextItem],
    labels: Iterable[TruthLabel],
    tweet_accounts: Mapping[str, str],
    match_mode: str = "exact",
) -> list[EvalCell]:
    """Per-type, per-account TP/FP/FN/TN plus a combined row per type.

    ``tweet_accounts`` lists every evaluated tweet (id -> account); tweets
    without labels or predictions still count towards true negatives.
    """
    if match_mode not in MATCH_MODES:
        raise EvalError(f"match_mode must be one of {MATCH_MODES}")
    pred_spans: dict[tuple[str, str], list[tuple[int, int]]] = defaultdict(list)
    gold_spans: dict[tuple[str, str], list[tuple[int, int]]] = defaultdict(list)
    for p in predictions:
        if p.tweet_id not in tweet_accounts:
            raise EvalError(f"prediction for tweet {p.tweet_id} which is not in the evaluated tweet set")
        pred_spans[(p.tweet_id, p.item_type)].append((p.char_start, p.char_end))
    for g in labels:
        if g.tweet_id not in tweet_accounts:
            raise EvalError(f"label for tweet {g.tweet_id} which is not in the evaluated tweet set")
        gold_spans[(g.tweet_id, g.item_type)].append((g.start, g.end))

    accounts = sorted({str(a) for a in tweet_accounts.values()})
    cells = {(t, a): EvalCell(t, a) for t in ITEM_TYPES for a in accounts}
    for tweet_id, account in tweet_accounts.items():
        for t in ITEM_TYPES:
            cell = cells[(t, str(account))]
            preds, golds = pred_spans.get((tweet_id, t), []), gold_spans.get((tweet_id, t), [])
            if not preds and not golds:
                cell.tn += 1
                continue
            hit = _greedy_pairs(preds, golds, match_mode)
            cell.tp += hit
            cell.fp += len(preds) - hit
            cell.fn += len(golds) - hit

    out = []
    for t in ITEM_TYPES:
        rows = [cells[(t, a)] for a in accounts]
        combined = EvalCell(t, COMBINED)
        for r in rows:
            combined.tp += r.tp
            combined.fp += r.fp
            combined.fn += r.fn
            combined.tn += r.tn
        out.extend(rows)
        out.append(combined)
    return out


def _fmt(x: float | None) -> str:
    return "n/a" if x is None else f"{x:.2f}"


def write_csv(cells: Iterable[EvalCell], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["type", "account", "tp", "fp", "fn", "tn", "precision", "recall"])
        for c in cells:
            w.writerow([c.item_type, c.account, c.tp, c.fp, c.fn, c.tn, _fmt(c.precision), _fmt(c.recall)])


def read_csv(path: str | Path) -> list[EvalCell]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [
            EvalCell(r["type"], r["account"], int(r["tp"]), int(r["fp"]), int(r["fn"]), int(r["tn"]))
            for r in csv.DictReader(fh)
        ]


def render_table(cells: Iterable[EvalCell]) -> str:
    header = ["Type", "Account", "# Items", "TP", "FP", "FN", "TN", "Precision", "Recall"]
    rows = []
    for c in cells:
        prec = _fmt(c.precision) + ("*" if c.item_type == "platform" and c.precision is not None else "")
        rows.append([c.item_type, c.account, c.items, c.tp, c.fp, c.fn, c.tn, prec, _fmt(c.recall)])
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    line = lambda r: "  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip()  # noqa: E731
    out = [line(header), "-" * len(line(header))]
    last_type = None
    for r in rows:
        if last_type is not None and r[0] != last_type:
            out.append("")
        out.append(line(r))
        last_type = r[0]
    out.append("")
    out.append(f"* {PLATFORM_NOTE}")
    return "\n".join(out) + "\n"


def cohens_kappa(coder_a: Mapping[str, bool], coder_b: Mapping[str, bool]) -> float:
    """Cohen's kappa for two coders' binary per-tweet judgements."""
    if not coder_a or not coder_b:
        raise EvalError("kappa needs at least one judged tweet")
    if set(coder_a) != set(coder_b):
        raise EvalError("coders judged different tweet sets")
    n = len(coder_a)
    both_yes = sum(1 for k in coder_a if coder_a[k] and coder_b[k])
    both_no = sum(1 for k in coder_a if not coder_a[k] and not coder_b[k])
    a_yes = sum(1 for v in coder_a.values() if v) / n
    b_yes = sum(1 for v in coder_b.values() if v) / n
    p_o = (both_yes + both_no) / n
    p_e = a_yes * b_yes + (1 - a_yes) * (1 - b_yes)
    if p_e == 1.0:
        return 1.0
    return (p_o - p_e) / (1 - p_e)


def coder_judgements(labels: Iterable[TruthLabel], tweet_ids: Iterable[str]) -> dict[str, bool]:
    """Per tweet: did the coder mark any context item?"""
    marked = {l.tweet_id for l in labels}
    return {t: t in marked for t in tweet_ids}


@dataclass(frozen=True)
class DatasetStats:
    tweets: int
    users: int
    conversations: int
    span_hours: float
    tweets_per_hour: float | None
    conversations_per_hour: float | None
    support_fraction: float | None


def dataset_stats(conversations: Iterable[Conversation]) -> DatasetStats:
    conversations = list(conversations)
    tweets = [t for c in conversations for t in c.tweets]
    if tweets:
        times = [t.created_at for t in tweets]
        span = (max(times) - min(times)).total_seconds() / 3600.0
    else:
        span = 0.0
    return DatasetStats(
        tweets=len(tweets),
        users=len({t.author_id for t in tweets}),
        conversations=len(conversations),
        span_hours=span,
        tweets_per_hour=len(tweets) / span if span > 0 else None,
        conversations_per_hour=len(conversations) / span if span > 0 else None,
        support_fraction=sum(t.is_support for t in tweets) / len(tweets) if tweets else None,
    )


def dataset_stats_by_account(conversations: Iterable[Conversation]) -> dict[str, DatasetStats]:
    conversations = list(conversations)
    groups: dict[str, list[Conversation]] = defaultdict(list)
    for c in conversations:
        groups[c.account or "unknown"].append(c)
    out = {a: dataset_stats(cs) for a, cs in sorted(groups.items())}
    out["all"] = dataset_stats(conversations)
    return out
