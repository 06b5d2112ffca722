from __future__ import annotations

import json
from pathlib import Path

import pytest

from tweetctx import embeddings as emb
from tweetctx.cli import _training_tokens
from tweetctx.config import load_config
from tweetctx.corpus import load_conversations
from tweetctx.lexicon import (
    Lexicon,
    build_ios_devices,
    corpus_vocabulary,
    filter_android_devices,
    load_version_lists,
    platform_names,
    read_device_table,
    read_list,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
LISTS = FIXTURES / "lists"
HANDLES = ("spotifycares", "snapchatsupport", "netflixhelps")


@pytest.fixture(scope="session")
def fixture_config(tmp_path_factory):
    cfg = load_config(FIXTURES / "config.yaml")
    return cfg.override(work_dir=tmp_path_factory.mktemp("work"))


@pytest.fixture(scope="session")
def training_tokens(fixture_config):
    return _training_tokens(fixture_config)


@pytest.fixture(scope="session")
def device_filter(training_tokens):
    return filter_android_devices(
        read_device_table(LISTS / "android_devices.csv"),
        corpus_vocabulary(training_tokens),
        set(read_list(LISTS / "common_words.txt")),
        set(read_list(LISTS / "exclusions.txt")),
    )


@pytest.fixture(scope="session")
def lexicon(device_filter):
    return Lexicon(
        platform_names=platform_names(read_list(LISTS / "android_codenames.txt")),
        device_names={
            "ios": build_ios_devices(read_list(LISTS / "ios_devices.txt")),
            "android": device_filter.retained,
        },
        version_lists=load_version_lists(LISTS / "versions"),
        exclusions=set(read_list(LISTS / "exclusions.txt")),
    )


@pytest.fixture(scope="session")
def spellings():
    return emb.load_spellings(FIXTURES / "spellings.json")


@pytest.fixture(scope="session")
def model(fixture_config, training_tokens):
    return emb.train(training_tokens, fixture_config.embeddings)


@pytest.fixture(scope="session")
def conversations():
    return load_conversations(FIXTURES / "conversations.jsonl", HANDLES)


def write_lines(path: Path, rows) -> Path:
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return path


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(report, "user_properties", ()))
            if "criterion" in props and report.when == "call":
                lines.append((int(props["criterion"].split()[0]), "PASS" if outcome == "passed" else "FAIL", props["criterion"]))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, status, name in sorted(lines):
            terminalreporter.write_line(f"{status}  criterion {name}")
