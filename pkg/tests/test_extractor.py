import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tweetctx.extractor import (
    ContextItem,
    build_pattern_set,
    extract_platform_device,
    find_all,
    platform_device_patterns,
    resolve_overlaps,
)
from tweetctx.lexicon import VersionLabel


def extract(lexicon, spellings, text):
    return [(i.item_type, i.surface, i.canonical, i.platform_tag) for i in extract_platform_device(lexicon, spellings, text)]


def test_alternatives_longest_first():
    ps = build_pattern_set("device", "ios", {"iphone xr", "iphone 7"})
    assert ps.alternatives == ("iphone xr", "iphone 7")
    ps = build_pattern_set("device", "android", {"galaxy s8", "galaxy s8+"})
    assert ps.alternatives == ("galaxy s8+", "galaxy s8")
    ps = build_pattern_set("device", "ios", {"ipad", "ipod"}, {"ipad": ["i-pad"]})
    assert ps.alternatives == ("i-pad", "ipad", "ipod")
    assert ps.canonical["i-pad"] == "ipad"


def test_pattern_set_needs_keywords():
    with pytest.raises(ValueError):
        build_pattern_set("device", "ios", [" "])


def test_shared_spelling_goes_to_smaller_keyword():
    ps = build_pattern_set("device", "ios", {"iphone 8", "iphone 8 plus"}, {"iphone 8 plus": ["i8"], "iphone 8": ["i8"]})
    assert ps.canonical["i8"] == "iphone 8"


@pytest.mark.parametrize(
    "text, surfaces",
    [
        ("my galaxy s8+ broke", ["galaxy s8+"]),
        ("my galaxy s8 broke", ["galaxy s8"]),
        ("galaxy s80 is not a thing", []),
        ("mygalaxy s8", []),
        ("(galaxy s8)", ["galaxy s8"]),
        ("galaxy s8_x", ["galaxy s8"]),
        ("galaxy s8, galaxy s8+", ["galaxy s8", "galaxy s8+"]),
    ],
)
def test_word_boundaries(text, surfaces):
    ps = build_pattern_set("device", "android", {"galaxy s8", "galaxy s8+"})
    assert [i.surface for i in find_all(ps, text)] == surfaces


def test_plus_is_part_of_a_word():
    ps = build_pattern_set("device", "android", {"galaxy s8"})
    assert find_all(ps, "galaxy s8+ here") == []


def test_quoted_tweets(lexicon, spellings):
    assert extract(lexicon, spellings, "the error occurs on my iphone 6 and ipad mini.") == [
        ("device", "iphone 6", "iphone 6", "ios"),
        ("device", "ipad mini", "ipad mini", "ios"),
    ]
    assert extract(lexicon, spellings, "android version 8.0.0 galaxy s8 plus for t-mobile") == [
        ("platform", "android", "android", "android"),
        ("device", "galaxy s8", "galaxy s8", "android"),
    ]
    assert extract(lexicon, spellings, "running lolipop") == [("platform", "lolipop", "lollipop", "android")]
    assert extract(lexicon, spellings, "xperia xz3 running android") == [
        ("device", "xperia xz3", "xperia xz3", "android"),
        ("platform", "android", "android", "android"),
    ]
    assert extract(lexicon, spellings, "worked fine on my iphone and laptop, just not on my s5.") == [
        ("device", "iphone", "iphone", "ios"),
    ]


def test_alternative_spellings_map_back(lexicon, spellings):
    assert extract(lexicon, spellings, "my iphone6+ and iphone8plus") == [
        ("device", "iphone6+", "iphone 6 plus", "ios"),
        ("device", "iphone8plus", "iphone 8 plus", "ios"),
    ]
    # without spellings these are missed
    assert extract(lexicon, {}, "my iphone6+ and iphone8plus") == []


def test_spellings_for_unknown_keywords_are_ignored(lexicon):
    assert extract(lexicon, {"windows phone": ["winphone"]}, "my winphone") == []


def test_pattern_order(lexicon):
    sets = platform_device_patterns(lexicon)
    assert [(s.item_type, s.platform_tag) for s in sets] == [
        ("platform", "ios"),
        ("platform", "android"),
        ("device", "ios"),
        ("device", "android"),
    ]


def test_resolve_overlaps_prefers_longer():
    a = ContextItem("t", "device", 3, 9, "pixel ", "pixel")
    b = ContextItem("t", "device", 3, 12, "pixel 2 xl", "pixel 2 xl")
    c = ContextItem("t", "platform", 20, 27, "android", "android")
    assert resolve_overlaps([a, b, c]) == [b, c]
    # equal lengths: the earlier one stays
    d = ContextItem("t", "device", 5, 11, "xxxxxx", "x")
    assert resolve_overlaps([d, a]) == [a]


@given(st.lists(st.sampled_from(["iphone", "iphone 6", "iphone 6 plus", "ipad", "ios", "android", "the", "6", "plus"]), max_size=12))
def test_matches_are_disjoint_and_on_boundaries(lexicon, spellings, words):
    text = " ".join(words)
    items = extract_platform_device(lexicon, spellings, text)
    for a, b in zip(items, items[1:]):
        assert a.char_end <= b.char_start
    for i in items:
        assert text[i.char_start : i.char_end] == i.surface
        assert i.char_start == 0 or not text[i.char_start - 1].isalnum()


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz +", max_size=30), st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=5))
def test_adding_a_spelling_keeps_longer_matches(text, spelling):
    base = build_pattern_set("device", "ios", {"iphone 6 plus", "iphone 6"})
    more = build_pattern_set("device", "ios", {"iphone 6 plus", "iphone 6"}, {"iphone 6": [spelling]})
    longer = [i.span for i in find_all(base, text) if i.canonical == "iphone 6 plus"]
    assert set(longer) <= {i.span for i in find_all(more, text)}


def test_context_item_json_round_trip():
    item = ContextItem(
        "t1",
        "app_version",
        10,
        16,
        "8.4.74",
        "8.4.74",
        "android",
        frozenset({VersionLabel("android", "app", "spotify")}),
        False,
        "evidence:android",
    )
    assert item.to_json()["candidate_labels"] == ["spotify-android-app"]
    assert ContextItem.from_json(item.to_json()) == item


def test_regex_is_anchored_on_escaped_alternatives():
    ps = build_pattern_set("device", "ios", {"ipad pro 9.7"})
    assert find_all(ps, "ipad pro 9x7") == []
    assert re.escape("9.7") in ps.pattern
