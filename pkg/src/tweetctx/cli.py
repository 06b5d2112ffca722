"""Command line entry point: build-lexicon, train, extract, evaluate, stats."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from . import embeddings as emb
from .config import Config, ConfigError, load_config
from .corpus import IngestionError, index_tweets, load_conversations, load_truthset, tokenize, write_jsonl
from .evaluation import (
    EvalError,
    coder_judgements,
    cohens_kappa,
    dataset_stats_by_account,
    render_table,
    score,
    write_csv,
)
from .extractor import ContextItem
from .lexicon import (
    Lexicon,
    LexiconError,
    build_ios_devices,
    corpus_vocabulary,
    filter_android_devices,
    intersection_report,
    load_lexicon,
    load_version_lists,
    platform_names,
    read_device_table,
    read_list,
    save_lexicon,
)
from .resolver import ContextExtractor, missing_report

log = logging.getLogger("tweetctx")


class CommandError(RuntimeError):
    pass


def _require(path: Path | None, what: str) -> Path:
    if path is None:
        raise CommandError(f"{what} is not configured")
    if not path.exists():
        raise CommandError(f"{what} {path} does not exist")
    return path


def _training_tokens(cfg: Config) -> list[list[str]]:
    source = cfg.paths.training_corpus or cfg.paths.corpus
    convs = load_conversations(source, cfg.support_handles)
    # the tokenizer keeps "(" before numbers for the version matcher; training wants words only
    return [
        [t.value for t in tokenize(tw.normalized) if any(ch.isalnum() for ch in t.value)]
        for c in convs
        for tw in c.tweets
    ]


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def cmd_build_lexicon(cfg: Config) -> Lexicon:
    p = cfg.paths
    rows = read_device_table(_require(p.android_device_table, "android device table"))
    vocab = corpus_vocabulary(_training_tokens(cfg))
    common = set(read_list(p.common_vocab)) if p.common_vocab else set()
    exclusions = set(read_list(p.exclusions)) if p.exclusions else set()
    result = filter_android_devices(rows, vocab, common, exclusions, cfg.min_device_length)
    ios = build_ios_devices(read_list(_require(p.ios_devices, "ios device list")))
    codenames = read_list(p.android_codenames) if p.android_codenames else []
    lexicon = Lexicon(
        platform_names=platform_names(codenames),
        device_names={"ios": ios, "android": result.retained},
        version_lists=load_version_lists(p.version_lists),
        exclusions=exclusions,
    )
    p.work_dir.mkdir(parents=True, exist_ok=True)
    save_lexicon(lexicon, p.lexicon_dir)
    _write_json(
        p.work_dir / "filter_report.json",
        {"stages": [asdict(s) for s in result.stages], "ios_devices": len(ios), "android_codenames": len(codenames)},
    )
    if len(lexicon.version_lists) >= 2:
        report = intersection_report(lexicon)
        _write_json(
            p.work_dir / "version_intersections.json",
            [{"a": str(a), "b": str(b), "percent": round(v, 2)} for (a, b), v in report.items()],
        )
    for stage in result.stages:
        print(f"android devices after {stage.name}: {stage.count}")
    print(f"ios devices: {len(ios)}; platform names: {sum(map(len, lexicon.platform_names.values()))}")
    return lexicon


def cmd_train(cfg: Config) -> emb.WordVectorModel:
    p = cfg.paths
    model = emb.train(_training_tokens(cfg), cfg.embeddings)
    p.work_dir.mkdir(parents=True, exist_ok=True)
    model.save(p.model)
    print(f"vocabulary size: {len(model)}")
    if (p.lexicon_dir / "ios_devices.txt").exists():
        lexicon = load_lexicon(p.lexicon_dir)
        excluded = set(read_list(p.spelling_exclusions)) if p.spelling_exclusions else set()
        scored = emb.harvest_spellings(
            model, lexicon.keywords(), cfg.spelling_k, cfg.spelling_max_distance, excluded
        )
        emb.save_spellings({kw: found for kw, found in scored.items() if found}, p.harvested_spellings)
        _write_json(
            p.work_dir / "spellings_scored.json",
            {kw: {w: round(d, 4) for w, d in sorted(found.items())} for kw, found in sorted(scored.items()) if found},
        )
        found = [v for v in scored.values() if v]
        print(f"alternative spellings: {sum(map(len, found))} for {len(found)} keywords")
    else:
        log.warning("no lexicon in %s; skipping alternative spellings", p.lexicon_dir)
    return model


def _spellings_path(cfg: Config) -> Path:
    if cfg.paths.spellings is not None:
        return cfg.paths.spellings
    return _require(cfg.paths.harvested_spellings, "alternative spellings (run train first)")


def cmd_extract(cfg: Config):
    p = cfg.paths
    try:
        lexicon = load_lexicon(p.lexicon_dir, p.version_lists)
    except LexiconError as exc:
        raise CommandError(str(exc)) from exc
    spellings = emb.load_spellings(_spellings_path(cfg))
    extractor = ContextExtractor(
        lexicon,
        spellings,
        previous_window=cfg.previous_window,
        max_bare_digits=cfg.max_bare_digits,
        strict_bare_prefix=cfg.strict_bare_prefix,
    )
    contexts = [extractor.extract_conversation(c) for c in load_conversations(p.corpus, cfg.support_handles)]
    p.work_dir.mkdir(parents=True, exist_ok=True)
    write_jsonl(p.items, (i.to_json() for ctx in contexts for i in ctx.items))
    write_jsonl(p.missing, (missing_report(ctx) for ctx in contexts))
    items = [i for ctx in contexts for i in ctx.items]
    for i in items:
        if i.resolution:
            log.info("tweet %s: version %s resolved by %s", i.tweet_id, i.surface, i.resolution)
    resolved = sum(1 for i in items if i.resolution)
    conflicted = sum(1 for i in items if i.conflicted)
    actionable = sum(1 for ctx in contexts if ctx.actionable)
    print(
        f"conversations: {len(contexts)}; items: {len(items)}; "
        f"resolved conflicts: {resolved}; unresolved: {conflicted}; actionable: {actionable}"
    )
    return contexts


def read_items(path: Path) -> list[ContextItem]:
    with open(path, encoding="utf-8") as fh:
        return [ContextItem.from_json(json.loads(line)) for line in fh if line.strip()]


def cmd_evaluate(cfg: Config):
    p = cfg.paths
    conversations = load_conversations(p.corpus, cfg.support_handles)
    tweets = index_tweets(conversations)
    user_tweets = {t.id: (t.account or "unknown") for c in conversations for t in c.user_tweets}
    labels = load_truthset(_require(p.truthset, "truthset"), tweets)
    predictions = read_items(_require(p.items, "extraction output (run extract first)"))
    cells = score(predictions, labels, user_tweets, cfg.match_mode)
    write_csv(cells, p.work_dir / "eval.csv")
    table = render_table(cells)
    (p.work_dir / "eval.txt").write_text(table, encoding="utf-8")
    print(table, end="")
    if p.annotators:
        if len(p.annotators) != 2:
            raise CommandError("paths.annotators needs exactly two label files")
        a, b = (coder_judgements(load_truthset(f, tweets), user_tweets) for f in p.annotators)
        kappa = cohens_kappa(a, b)
        _write_json(p.work_dir / "kappa.json", {"kappa": kappa, "tweets": len(user_tweets)})
        print(f"cohen's kappa: {kappa:.3f}")
    return cells


def cmd_stats(cfg: Config):
    stats = dataset_stats_by_account(load_conversations(cfg.paths.corpus, cfg.support_handles))
    cfg.paths.work_dir.mkdir(parents=True, exist_ok=True)
    _write_json(cfg.paths.work_dir / "stats.json", {k: asdict(v) for k, v in stats.items()})
    for account, s in stats.items():
        tph = "n/a" if s.tweets_per_hour is None else f"{s.tweets_per_hour:.2f}"
        cph = "n/a" if s.conversations_per_hour is None else f"{s.conversations_per_hour:.2f}"
        sup = "n/a" if s.support_fraction is None else f"{100 * s.support_fraction:.2f}%"
        print(
            f"{account}: tweets={s.tweets} users={s.users} conversations={s.conversations} "
            f"tweets/h={tph} conversations/h={cph} by support={sup}"
        )
    return stats


COMMANDS = {
    "build-lexicon": cmd_build_lexicon,
    "train": cmd_train,
    "extract": cmd_extract,
    "evaluate": cmd_evaluate,
    "stats": cmd_stats,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tweetctx", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("-c", "--config", required=True, type=Path, help="YAML config file")
        sp.add_argument("--work-dir", type=Path, help="override paths.work_dir")
        sp.add_argument("-v", "--verbose", action="store_true")
        if name == "train":
            sp.add_argument("--seed", type=int)
            sp.add_argument("--workers", type=int)
            sp.add_argument("--max-distance", type=float)
        if name == "extract":
            sp.add_argument("--previous-window", type=int, choices=(1, 2))
        if name == "evaluate":
            sp.add_argument("--match-mode", choices=("exact", "overlap"))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config).override(
            work_dir=args.work_dir,
            embeddings_seed=getattr(args, "seed", None),
            embeddings_workers=getattr(args, "workers", None),
            spelling_max_distance=getattr(args, "max_distance", None),
            previous_window=getattr(args, "previous_window", None),
            match_mode=getattr(args, "match_mode", None),
        )
        cfg.validate()
        COMMANDS[args.command](cfg)
    except (ConfigError, CommandError, IngestionError, LexiconError, EvalError, emb.EmbeddingError) as exc:
        print(f"tweetctx {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
