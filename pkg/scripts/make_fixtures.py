"""Write the labelled 50-tweet fixture: conversations, truthset, annotator files.

Labels are given by surface string and located in the normalized tweet text,
so offsets always agree with what the loader produces.

    python scripts/make_fixtures.py [--out-dir fixtures]
"""
from __future__ import annotations

import argparse
import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

from tweetctx.corpus import normalize_text

ROOT = Path(__file__).resolve().parents[1]
HANDLES = {"spotify": "SpotifyCares", "snapchat": "Snapchatsupport", "netflix": "Netflixhelps"}

P, D, A, S = "platform", "device", "app_version", "system_version"
SUPPORT = "support"

# account -> conversations; a conversation is a list of (author, text, labels).
# A label is (type, surface) or (type, surface, occurrence).
CONVERSATIONS: list[tuple[str, list]] = [
    ("spotify", [
        ("u01", "I can't open playlists shared via WhatsApp on my iPhone XR, iOS 12.1.4, Spotify 8.4.61",
         [(D, "iphone xr"), (P, "ios"), (S, "12.1.4"), (A, "8.4.61")]),
        (SUPPORT, "@u01 Hey, help's here! Does this happen with other playlists too?", []),
    ]),
    ("spotify", [
        ("u02", "@SpotifyCares The app widget has died and is now a rectangular black hole. "
                "Xperia xz3 running Android", [(D, "xperia xz3"), (P, "android")]),
        (SUPPORT, "@u02 Sorry to hear that. Which app version are you on?", []),
        ("u02", "@SpotifyCares i'm on 8.4.61 from the play store", [(A, "8.4.61")]),
    ]),
    ("spotify", [
        ("u03", "@SpotifyCares The error occurs on my HTC One with Android installed.",
         [(D, "htc one"), (P, "android")]),
        (SUPPORT, "@u03 Thanks. Can you tell us the app version?", []),
        ("u03", "@SpotifyCares I'm on version 8.4.74", [(A, "8.4.74")]),
    ]),
    ("spotify", [
        ("u04", "android version 8.0.0 galaxy s8 plus for t-mobile",
         [(P, "android"), (S, "8.0.0"), (D, "galaxy s8 plus")]),
    ]),
    ("spotify", [("u05", "The error occurs on my iPhone 6 and iPad Mini.", [(D, "iphone 6"), (D, "ipad mini")])]),
    ("spotify", [("u06", "still running lolipop on my old tablet, app crashes at launch", [(P, "lolipop")])]),
    ("spotify", [
        ("u07", "worked fine on my iPhone and laptop, just not on my s5.", [(D, "iphone"), (D, "s5")]),
    ]),
    ("spotify", [
        ("u08", "Spotify keeps logging me out on my Pixel 2 XL (Android 9)",
         [(D, "pixel 2 xl"), (P, "android"), (S, "9")]),
    ]),
    ("spotify", [
        ("u09", "on android (8.1 pixel xl) the queue disappears", [(P, "android"), (S, "8.1"), (D, "pixel xl")]),
    ]),
    ("spotify", [
        ("u10", "App 8.4.74 crashes on ios 12.1 every time I skip a song", [(A, "8.4.74"), (P, "ios"), (S, "12.1")]),
    ]),
    ("spotify", [("u11", "@SpotifyCares ios12 broke the lock screen controls", [(P, "ios"), (S, "12")])]),
    ("spotify", [
        ("u12", "@SpotifyCares v8.4.17 won't let me download on my Galaxy S9", [(A, "8.4.17"), (D, "galaxy s9")]),
    ]),
    ("spotify", [("u13", "the desktop app is fine but the phone app is not", [])]),
    ("spotify", [("u14", "Love the new Discover Weekly!!!", [])]),
    ("spotify", [("u15", "my moto g4 keeps skipping songs on kitkat", [(D, "moto g4"), (P, "kitkat")])]),
    ("spotify", [
        ("u16", "Spotify 8.1.13arm7 on my Galaxy Note8 has no sound", [(A, "8.1.13"), (D, "galaxy note8")]),
    ]),
    ("spotify", [
        ("u17", "Podcasts won't play on my iphone6+ with iOS 11.4", [(D, "iphone6+"), (P, "ios"), (S, "11.4")]),
    ]),
    ("spotify", [("u18", "shuffle is broken on my iphone8plus", [(D, "iphone8plus")])]),
    ("spotify", [("u19", "offline mode fails on oreo, galaxy s8+", [(P, "oreo"), (D, "galaxy s8+")])]),
    ("spotify", [("u20", "nothing plays after updating to android 8.0.0", [(P, "android"), (S, "8.0.0")])]),
    ("spotify", [
        ("u21", "my apple watch lost the controls after ios 12.1.3", [(D, "apple watch"), (P, "ios"), (S, "12.1.3")]),
    ]),
    ("spotify", [("u22", "the lyrics feature is gone on my pixel 3", [(D, "pixel 3")])]),
    ("spotify", [
        ("u23", "@SpotifyCares search returns nothing", []),
        (SUPPORT, "@u23 Sorry about that! Which version of the app are you running?", []),
        ("u23", "@SpotifyCares it happens on 8.4.59 as well", [(A, "8.4.59")]),
    ]),
    ("spotify", [("u24", "songs skip on my galaxy s6 and galaxy s5", [(D, "galaxy s6"), (D, "galaxy s5")])]),
    ("spotify", [("u25", "mate 20 shows a blank home screen", [(D, "mate 20")])]),
    ("spotify", [
        ("u26", "zenfone 5 bluetooth drops with marshmallow", [(D, "zenfone 5"), (P, "marshmallow")]),
    ]),
    ("spotify", [("u27", "@SpotifyCares my daily mix hasn't updated in a week", [])]),
    ("spotify", [
        ("u28", "@SpotifyCares galaxy s8 running nougat, version 8.4.74",
         [(D, "galaxy s8"), (P, "nougat"), (A, "8.4.74")]),
    ]),
    ("spotify", [
        ("u29", "@SpotifyCares ipod touch stopped syncing after 12.1.4", [(D, "ipod touch"), (S, "12.1.4")]),
    ]),
    ("spotify", [
        ("u30", "@SpotifyCares app won't open", []),
        (SUPPORT, "@u30 Sorry to hear that. Which device are you using?", []),
        ("u30", "@SpotifyCares an iphone 7 plus on ios 11.4.1", [(D, "iphone 7 plus"), (P, "ios"), (S, "11.4.1")]),
    ]),
    ("snapchat", [
        ("u31", "@Snapchatsupport version 8.0.1.785 won't open the camera", [(A, "8.0.1.785")]),
        (SUPPORT, "@u31 Thanks for letting us know, we're looking into it.", []),
    ]),
    ("snapchat", [
        ("u32", "@Snapchatsupport filters are gone on my iPad Air since iOS 12", [(D, "ipad air"), (P, "ios"), (S, "12")]),
    ]),
    ("snapchat", [
        ("u33", "@Snapchatsupport the app crashes on android 7.1.2 with my galaxy s7",
         [(P, "android"), (S, "7.1.2"), (D, "galaxy s7")]),
    ]),
    ("snapchat", [
        ("u34", "@Snapchatsupport snaps fail to send, snapchat 10.50.0 on iphone 7", [(A, "10.50.0"), (D, "iphone 7")]),
    ]),
    ("snapchat", [("u35", "@Snapchatsupport my friends list is empty", [])]),
    ("snapchat", [("u36", "@Snapchatsupport lenses lag on my pixel 2", [(D, "pixel 2")])]),
    ("snapchat", [("u37", "@Snapchatsupport snapchat 10.49.0 drains my battery", [(A, "10.49.0")])]),
    ("snapchat", [
        ("u38", "@Snapchatsupport my galaxy s8 freezes on the camera screen", [(D, "galaxy s8")]),
    ]),
    ("netflix", [
        ("u39", "@Netflixhelps downloads vanish on my ipad pro, netflix 11.2.0", [(D, "ipad pro"), (A, "11.2.0")]),
    ]),
    ("netflix", [
        ("u40", "@Netflixhelps subtitles out of sync on android 6.0.1", [(P, "android"), (S, "6.0.1")]),
    ]),
    ("netflix", [
        ("u41", "@Netflixhelps netflix 6.26.0 stuck at 99% on galaxy s9", [(A, "6.26.0"), (D, "galaxy s9")]),
    ]),
    ("netflix", [("u42", "@Netflixhelps the apple tv app logs me out constantly", [(D, "apple tv")])]),
    ("netflix", [("u43", "@Netflixhelps can't cast from my phone", [])]),
    ("netflix", [("u44", "@Netflixhelps episodes won't download on iOS", [(P, "ios")])]),
    ("netflix", [("u45", "@Netflixhelps running 11.1.0 on my iphone 8", [(A, "11.1.0"), (D, "iphone 8")])]),
    ("netflix", [("u46", "@Netflixhelps 2 episodes in and the app freezes", [])]),
]

# Second coder (by author): misses every label of two users, marks "phone" for a third.
CODER_B_SKIPS = {"u05", "u12"}
CODER_B_EXTRA = ("u13", "device", "phone")


def locate(text: str, surface: str, occurrence: int = 0) -> tuple[int, int]:
    start = -1
    for _ in range(occurrence + 1):
        start = text.find(surface, start + 1)
        if start < 0:
            raise ValueError(f"{surface!r} (occurrence {occurrence}) not in {text!r}")
    return start, start + len(surface)


def build() -> tuple[list[dict], list[dict]]:
    handles = [h.lower() for h in HANDLES.values()]
    start = datetime(2019, 1, 15, 9, 0, tzinfo=timezone.utc)
    tweets, labels = [], []
    n = 0
    for ci, (account, turns) in enumerate(CONVERSATIONS):
        conv_id = None
        for ti, (author, text, tweet_labels) in enumerate(turns):
            n += 1
            tid = f"f{n:03d}0"
            conv_id = conv_id or tid
            support = author == SUPPORT
            tweets.append(
                {
                    "id": tid,
                    "text": text,
                    "created_at": (start + timedelta(minutes=7 * ci + 2 * ti)).isoformat(),
                    "conversation_id": conv_id,
                    "author_id": HANDLES[account] if support else author,
                    "is_reply": tid != conv_id,
                    "is_support": support,
                    "account": account,
                }
            )
            normalized = normalize_text(text, handles)
            for item_type, surface, *occ in tweet_labels:
                s, e = locate(normalized, surface, *occ)
                labels.append({"tweet_id": tid, "item_type": item_type, "start": s, "end": e, "surface": surface})
    return tweets, labels


def coder_b(tweets: list[dict], labels: list[dict]) -> list[dict]:
    author = {t["id"]: t["author_id"] for t in tweets}
    out = [l for l in labels if author[l["tweet_id"]] not in CODER_B_SKIPS]
    who, item_type, surface = CODER_B_EXTRA
    tid, text = next((t["id"], t["text"]) for t in tweets if t["author_id"] == who)
    text = normalize_text(text, [h.lower() for h in HANDLES.values()])
    s, e = locate(text, surface)
    out.append({"tweet_id": tid, "item_type": item_type, "start": s, "end": e, "surface": surface})
    return out


def write_jsonl(path: Path, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in rows:
            fh.write(json.dumps(r, ensure_ascii=False) + "\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path, default=ROOT / "fixtures")
    args = ap.parse_args()
    tweets, labels = build()
    user = [t for t in tweets if not t["is_support"]]
    write_jsonl(args.out_dir / "conversations.jsonl", tweets)
    write_jsonl(args.out_dir / "truthset.jsonl", labels)
    write_jsonl(args.out_dir / "annotator_a.jsonl", labels)
    write_jsonl(args.out_dir / "annotator_b.jsonl", coder_b(tweets, labels))
    print(f"{len(tweets)} tweets ({len(user)} by users), {len(labels)} labels")


if __name__ == "__main__":
    main()
