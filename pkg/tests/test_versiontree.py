import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tweetctx.lexicon import VersionLabel, VersionString
from tweetctx.versiontree import (
    VersionTree,
    build_tree,
    is_conflicted,
    match,
    normalize_version_token,
    prune,
)

from oracles import LABEL_POOL, PREVIOUS, random_instance, scan_match

V = VersionString.parse
IOS_SYS = VersionLabel("ios", "system")
AND_SYS = VersionLabel("android", "system")
SNAP_IOS = VersionLabel("ios", "app", "snapchat")
SNAP_AND = VersionLabel("android", "app", "snapchat")
SPOT_IOS = VersionLabel("ios", "app", "spotify")
SPOT_AND = VersionLabel("android", "app", "spotify")


@pytest.fixture
def fig5_tree():
    return build_tree(
        {
            SNAP_IOS: {V("8.0.1"), V("10.50.0")},
            SNAP_AND: {V("8.0.1"), V("10.50.1.0")},
            IOS_SYS: {V("8.0.1"), V("8.0"), V("12.1.4")},
            AND_SYS: {V("8.0.0"), V("9")},
        }
    )


def test_ancestor_fallback_drops_system(fig5_tree):
    m = match(fig5_tree, V("8.0.1.785"), "version")
    assert m.matched_version == V("8.0.1")
    assert m.input_depth == 4
    assert m.ancestor_fallback
    assert m.candidate_labels == {SNAP_IOS, SNAP_AND}
    assert m.before_pruning == {SNAP_IOS, SNAP_AND, IOS_SYS}
    assert m.pruned_by == ("completeness",)
    assert m.conflicted


def test_exact_match_keeps_everything_below(fig5_tree):
    m = match(fig5_tree, V("8.0.1"))
    assert not m.ancestor_fallback
    assert m.candidate_labels == {SNAP_IOS, SNAP_AND, IOS_SYS}
    # an unlisted interior node still carries its descendants' labels
    assert match(fig5_tree, V("8")).candidate_labels == {SNAP_IOS, SNAP_AND, IOS_SYS, AND_SYS}


def test_previous_token_collapses_systems(fig5_tree):
    m = match(fig5_tree, V("8.0"), "android")
    assert m.candidate_labels == {AND_SYS}
    assert m.pruned_by == ("previous_token:android",)
    assert match(fig5_tree, V("8.0"), "ios").candidate_labels == {IOS_SYS}
    assert match(fig5_tree, V("8.0"), "(").candidate_labels == {SNAP_IOS, SNAP_AND, IOS_SYS, AND_SYS}
    # nearest platform token in a window wins
    assert match(fig5_tree, V("8.0"), ["version", "ios"]).candidate_labels == {IOS_SYS}


def test_previous_token_needs_both_systems(fig5_tree):
    m = match(fig5_tree, V("12.1.4"), "android")
    assert m.candidate_labels == {IOS_SYS}
    assert m.pruned_by == ()


def test_fallback_to_system_only_is_no_match(fig5_tree):
    # 12.1.4.2 falls back to 12.1.4, which only the complete ios list holds
    assert match(fig5_tree, V("12.1.4.2")) is None


def test_no_common_prefix(fig5_tree):
    assert match(fig5_tree, V("99")) is None
    assert match(VersionTree(), V("1")) is None


def test_fallback_skips_unlisted_ancestors(fig5_tree):
    # 10.50 is a trie node but not a listed version; 10.50.7 has no listed ancestor
    assert match(fig5_tree, V("10.50.7")) is None
    m = match(fig5_tree, V("10.50.1.0.3"))
    assert m.matched_version == V("10.50.1.0") and m.candidate_labels == {SNAP_AND}


def test_prune_rules():
    assert prune({IOS_SYS, SNAP_IOS}, True, ()) == (frozenset({SNAP_IOS}), ("completeness",))
    assert prune({IOS_SYS, AND_SYS, SNAP_IOS}, False, ("ios",)) == (frozenset({IOS_SYS}), ("previous_token:ios",))
    assert prune({IOS_SYS, AND_SYS}, False, ("",)) == (frozenset({IOS_SYS, AND_SYS}), ())


def test_is_conflicted():
    assert is_conflicted({SNAP_IOS, SNAP_AND})
    assert is_conflicted({SNAP_IOS, IOS_SYS})
    assert not is_conflicted({SPOT_IOS, SNAP_IOS})
    assert not is_conflicted({AND_SYS})
    assert not is_conflicted(set())


def test_tree_shares_prefixes():
    tree = build_tree({SPOT_IOS: {V("8.4.74"), V("8.4.61")}, SPOT_AND: {V("8.4.74")}})
    assert tree.node_count() == 4  # 8, 8.4, 8.4.74, 8.4.61
    node = tree.find(V("8.4.74"))
    assert node.labels == {SPOT_IOS, SPOT_AND} and node.listed == {SPOT_IOS, SPOT_AND}
    assert tree.find(V("8.4")).listed == set()
    assert tree.find(V("8.5")) is None


@settings(max_examples=300)
@given(st.randoms(use_true_random=False))
def test_tree_matches_linear_scan(rng):
    lists, version, previous = random_instance(rng)
    expected = scan_match(lists, version, previous)
    got = match(build_tree(lists), version, previous)
    if expected is None:
        assert got is None
    else:
        assert (got.matched_version, got.candidate_labels, got.ancestor_fallback) == expected


@settings(max_examples=100)
@given(st.randoms(use_true_random=False))
def test_tree_independent_of_insertion_order(rng):
    lists, version, previous = random_instance(rng)
    pairs = [(label, v) for label, vs in lists.items() for v in vs]
    a, b = VersionTree(), VersionTree()
    for label, v in pairs:
        a.add(v, label)
    rng.shuffle(pairs)
    for label, v in pairs:
        b.add(v, label)
    assert a == b
    assert match(a, version, previous) == match(b, version, previous)


def test_labels_are_prefix_closed():
    rng = random.Random(3)
    for _ in range(200):
        lists, _, _ = random_instance(rng)
        tree = build_tree(lists)
        for label, vs in lists.items():
            for v in vs:
                for n in range(1, len(v.components) + 1):
                    assert label in tree.find(VersionString(v.components[:n])).labels


@pytest.mark.parametrize(
    "token, prefix, version, span",
    [
        ("v8.4.17", None, "8.4.17", (1, 7)),
        ("ios12", "ios", "12", (3, 5)),
        ("8.1.13arm7", None, "8.1.13", (0, 6)),
        ("8.0.1.785", None, "8.0.1.785", (0, 9)),
        ("android9", "android", "9", (7, 8)),
        ("version7", None, "7", (7, 8)),
        ("12.1.4", None, "12.1.4", (0, 6)),
        ("2019", None, "2019", (0, 4)),
        ("s9.1", None, "9.1", (1, 4)),
    ],
)
def test_normalize_version_token(token, prefix, version, span):
    vt = normalize_version_token(token)
    assert (vt.platform_prefix, str(vt.version), (vt.start, vt.end)) == (prefix, version, span)


@pytest.mark.parametrize("token", ["12345", "s5", "g4", "abc", "", "xz3", "٣"])
def test_normalize_version_token_rejects(token):
    assert normalize_version_token(token) is None


def test_bare_prefix_rule_is_optional():
    assert str(normalize_version_token("s5", strict_bare_prefix=False).version) == "5"
    assert normalize_version_token("123456", max_bare_digits=6) is not None


@given(st.text(max_size=12))
def test_normalize_version_token_total(token):
    vt = normalize_version_token(token)
    if vt is not None:
        assert token[vt.start : vt.end] == str(vt.version)


def test_oracle_pool_sanity():
    assert len(LABEL_POOL) == 6 and "ios" in PREVIOUS
