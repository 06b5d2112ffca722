import pytest
from hypothesis import given
from hypothesis import strategies as st

from tweetctx.lexicon import (
    IOS_PRODUCT_LINES,
    Lexicon,
    LexiconError,
    VersionLabel,
    VersionString,
    build_ios_devices,
    corpus_vocabulary,
    filter_android_devices,
    intersection_report,
    load_lexicon,
    load_version_list,
    load_version_lists,
    platform_names,
    read_device_table,
    read_list,
    save_lexicon,
)

from conftest import LISTS


def rows(*names):
    return [{"retail_branding": "x", "marketing_name": n, "device": "d", "model": "m"} for n in names]


def test_fixture_filter_stage_counts(device_filter):
    assert device_filter.counts() == [
        ("unique", 30),
        ("min_length", 25),
        ("in_corpus", 20),
        ("common_words", 17),
        ("exclusions", 16),
    ]
    removed = {s.name: s.removed for s in device_filter.stages}
    assert removed["min_length"] == ["1610", "g6", "one", "q7", "v"]
    assert removed["in_corpus"] == ["galaxy j7 crown", "galaxy s7 edge", "mate 20 pro", "nokia 7.1", "redmi note 5"]
    assert removed["common_words"] == ["power", "smart", "stream"]
    assert removed["exclusions"] == ["horizon"]
    assert {"galaxy s9", "galaxy s8", "galaxy s8+", "xperia xz3", "htc one"} <= device_filter.retained
    assert "galaxy s8 plus" not in device_filter.retained


def test_filter_stages_monotone_and_nested(device_filter):
    counts = [s.count for s in device_filter.stages]
    assert counts == sorted(counts, reverse=True)
    for stage in device_filter.stages[1:]:
        assert stage.removed == sorted(stage.removed)
    assert all(len(n) >= 5 for n in device_filter.retained)


@given(
    st.lists(st.sampled_from(["v", "q7", "galaxy s9", "Galaxy S9", "horizon", "smart", "pixel 2", "moto g4 play"])),
    st.sets(st.sampled_from(["galaxy s9", "horizon", "smart", "pixel 2", "moto g4"])),
)
def test_filter_is_deterministic_and_monotone(names, vocab):
    if not names:
        return
    vocab = corpus_vocabulary([v.split() for v in vocab])
    a = filter_android_devices(rows(*names), vocab, {"smart"}, {"horizon"})
    b = filter_android_devices(rows(*reversed(names)), vocab, {"smart"}, {"horizon"})
    assert a.counts() == b.counts() and a.retained == b.retained
    assert [c for _, c in a.counts()] == sorted((c for _, c in a.counts()), reverse=True)
    assert not a.retained & {"horizon", "smart", "v", "q7"}


def test_multiword_names_need_the_whole_phrase():
    vocab = corpus_vocabulary([["my", "galaxy", "s8", "broke"], ["a", "mate", "20"]])
    result = filter_android_devices(rows("galaxy s8", "galaxy s7", "mate 20 pro", "mate 20"), vocab, set(), set())
    assert result.retained == {"galaxy s8", "mate 20"}


def test_common_words_only_drop_single_words():
    vocab = corpus_vocabulary([["smart", "tv", "smart"]])
    result = filter_android_devices(rows("smart", "smart tv"), vocab, {"smart", "tv"}, set())
    assert result.retained == {"smart tv"}


def test_min_length_counts_spaces():
    vocab = corpus_vocabulary([["lg", "g6"]])
    assert filter_android_devices(rows("lg g6"), vocab, set(), set()).retained == {"lg g6"}
    assert filter_android_devices(rows("lg g6"), vocab, set(), set(), min_length=6).retained == set()


def test_empty_device_table():
    with pytest.raises(LexiconError):
        filter_android_devices([], set(), set(), set())


def test_device_table_needs_columns(tmp_path):
    (tmp_path / "t.csv").write_text("brand,name\nx,y\n")
    with pytest.raises(LexiconError, match="marketing_name"):
        read_device_table(tmp_path / "t.csv")


def test_ios_devices():
    raw = read_list(LISTS / "ios_devices.txt")
    assert len(raw) == 51
    assert len(build_ios_devices(raw)) == 56
    assert len(build_ios_devices(raw + ["iPhone"])) == 56
    assert build_ios_devices([]) == set(IOS_PRODUCT_LINES)


def test_platform_names():
    names = platform_names(read_list(LISTS / "android_codenames.txt"))
    assert names["ios"] == {"ios"}
    assert {"android", "lollipop", "kitkat", "petit four"} <= names["android"]
    assert len(names["android"]) == 16
    assert platform_names([]) == {"ios": {"ios"}, "android": {"android"}}


@pytest.mark.parametrize("text, components", [("12.1.4", (12, 1, 4)), ("8.0.1", (8, 0, 1)), ("9", (9,))])
def test_version_string(text, components):
    v = VersionString.parse(text)
    assert v.components == components and str(v) == text


@pytest.mark.parametrize("text", ["1.1a", "A1.0", "", "1..2", "-1", "+1.0", "1.0."])
def test_version_string_rejects(text):
    with pytest.raises(ValueError):
        VersionString.parse(text)


def test_load_version_list_reports_line(tmp_path):
    path = tmp_path / "system_ios.txt"
    path.write_text("12.1.4\n12.1.4\n\n1.1a\n")
    with pytest.raises(LexiconError, match=":4"):
        load_version_list(VersionLabel("ios", "system"), path)
    path.write_text("12.1.4\n12.1.4\n8.0.1\n")
    assert load_version_list(VersionLabel("ios", "system"), path) == {
        VersionString((12, 1, 4)),
        VersionString((8, 0, 1)),
    }


@pytest.mark.parametrize(
    "name, label, text",
    [
        ("system_ios.txt", VersionLabel("ios", "system"), "ios-system"),
        ("app_android_spotify.txt", VersionLabel("android", "app", "spotify"), "spotify-android-app"),
        ("app_ios_my_app.txt", VersionLabel("ios", "app", "my_app"), "my_app-ios-app"),
    ],
)
def test_version_label_names(name, label, text):
    assert VersionLabel.from_filename(name) == label
    assert label.filename == name
    assert str(label) == text
    assert VersionLabel.parse(text) == label


@pytest.mark.parametrize("name", ["system.txt", "app_ios.txt", "system_windows.txt", "system_ios_x.txt", "beta_ios.txt"])
def test_version_label_bad_filenames(name):
    with pytest.raises(LexiconError):
        VersionLabel.from_filename(name)


def test_version_label_invariants():
    with pytest.raises(ValueError):
        VersionLabel("ios", "app")
    with pytest.raises(ValueError):
        VersionLabel("ios", "system", "spotify")


def test_fixture_version_lists():
    lists = load_version_lists(LISTS / "versions")
    assert len(lists) == 8
    v801 = VersionString((8, 0, 1))
    holders = {str(k) for k, vs in lists.items() if v801 in vs}
    assert holders == {"snapchat-ios-app", "snapchat-android-app", "ios-system"}


def test_intersection_report():
    a, b, c = VersionLabel("ios", "app", "n"), VersionLabel("android", "app", "n"), VersionLabel("ios", "system")
    shared = {VersionString((i,)) for i in range(8)}
    lex = Lexicon(
        version_lists={
            a: shared | {VersionString((100, i)) for i in range(216)},
            b: shared | {VersionString((200, i)) for i in range(2)},
            c: {VersionString((300,))},
        }
    )
    report = intersection_report(lex)
    assert report[(a, b)] == pytest.approx(100 * 8 / 224)
    assert round(report[(a, b)], 2) == 3.57
    assert report[(b, a)] == pytest.approx(80.0)
    assert report[(a, c)] == 0.0
    same = Lexicon(version_lists={a: shared, b: set(shared)})
    assert intersection_report(same)[(a, b)] == 100.0
    with pytest.raises(LexiconError):
        intersection_report(Lexicon(version_lists={a: shared}))


def test_lexicon_round_trip(tmp_path, lexicon):
    save_lexicon(lexicon, tmp_path / "lex")
    loaded = load_lexicon(tmp_path / "lex", LISTS / "versions")
    assert loaded.platform_names == lexicon.platform_names
    assert loaded.device_names == lexicon.device_names
    assert loaded.version_lists == lexicon.version_lists
    with pytest.raises(LexiconError, match="build-lexicon"):
        load_lexicon(tmp_path / "missing")


def test_read_list_skips_comments(tmp_path):
    (tmp_path / "l.txt").write_text("# header\nGalaxy  S9\n\n pixel 2 # trailing\n")
    assert read_list(tmp_path / "l.txt") == ["galaxy s9", "pixel 2"]
