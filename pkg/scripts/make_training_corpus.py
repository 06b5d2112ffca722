"""Generate the synthetic 2,000-tweet training corpus in fixtures/.

Device and platform names are drawn into a fixed set of complaint templates.
Informal spellings ("iphone8plus", "iphone6+", "lolipop") are drawn into the
same templates as the names they stand for, so they share contexts.

    python scripts/make_training_corpus.py [--out fixtures/training_corpus.jsonl]
"""
from __future__ import annotations

import argparse
import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
N_TWEETS = 2000
SEED = 20190115

TEMPLATES = [
    "my {d} keeps crashing when i open the app",
    "the app freezes on my {d} since the last update",
    "cant log in on my {d} any help",
    "playlists wont load on my {d}",
    "audio stutters on my {d} every few seconds",
    "the widget is broken on my {d} again",
    "downloads disappear from my {d} overnight",
    "notifications stopped working on my {d}",
    "screen goes black on my {d} when i play a video",
    "just got a new {d} and the app wont open",
    "i reinstalled the app on my {d} and it still crashes",
    "is anyone else having issues with the {d} version",
]
PLATFORM_TEMPLATES = [
    "the app crashes on {p} since the update",
    "running {p} and the app keeps freezing",
    "updated to {p} and now nothing loads",
    "does the app still support {p}",
    "after the {p} update the widget is gone",
    "login loop on {p} please fix",
]
SUPPORT = [
    "hey, help's here! can you let us know the app version you're running?",
    "sorry to hear that. which device and system version are you using?",
    "thanks for reaching out. can you try reinstalling the app?",
    "we're looking into it. can you dm us your account email?",
]
NOISE = [
    "i love this app so much",
    "this is the greatest app i've ever used",
    "cant wait for the new season",
    "my playlist is on fire today",
    "watching a show about how to bake a pie",
    "i bake a pie every sunday",
    "we bake bread and pie at the weekend",
    "event horizon is my favourite movie",
    "the horizon looks great tonight",
    "i bought a smart tv and a power bank",
    "stream this album right now",
    "the stream keeps buffering on the smart tv",
    "plus one for dark mode",
    "go watch it now",
]

# Per-family context phrases; a family's informal spellings share them.
FAMILY_CONTEXT = {
    "iphone 8 plus": ["portrait mode blurs everything", "wireless charging pad gets hot", "the glass back cracked"],
    "iphone 6 plus": ["the phone is bent again", "home button stopped clicking", "touch disease on the screen"],
    "iphone xr": ["face id fails in the dark", "the notch hides the clock", "liquid retina looks dim"],
    "galaxy s8": ["bixby button opens by accident", "infinity display edge touches", "samsung pay not working"],
    "lollipop": ["material design looks odd", "battery saver kicks in early", "the old runtime is slow"],
    "pie": ["gesture navigation is confusing", "adaptive battery kills the app", "digital wellbeing timer"],
}
FAMILY_OF = {
    "iphone8plus": "iphone 8 plus", "iphone 8 plus": "iphone 8 plus",
    "iphone 6 plus": "iphone 6 plus", "iphone6+": "iphone 6 plus", "iphone6plus": "iphone 6 plus",
    "iphone xr": "iphone xr",
    "galaxy s8": "galaxy s8", "galaxy s8+": "galaxy s8",
    "lollipop": "lollipop", "lolipop": "lollipop", "lollypop": "lollipop",
    "pie": "pie", "android pie": "pie",
}

# (name, weight)
DEVICES = [
    ("iphone 8 plus", 40), ("iphone8plus", 40),
    ("iphone 6 plus", 30), ("iphone6+", 30), ("iphone6plus", 12),
    ("iphone 7", 25), ("iphone 7 plus", 15), ("iphone xr", 20), ("iphone x", 15),
    ("iphone 6", 20), ("iphone 8", 15), ("iphone", 40), ("ipad", 20), ("ipad mini", 10),
    ("ipad air", 8), ("ipod touch", 6), ("apple watch", 6), ("apple tv", 8),
    ("galaxy s9", 20), ("galaxy s8", 20), ("galaxy s8+", 10), ("galaxy s7", 10),
    ("galaxy s5", 8), ("galaxy s6", 8), ("galaxy note8", 8),
    ("pixel 2", 15), ("pixel 2 xl", 8), ("pixel xl", 8), ("pixel 3", 10),
    ("moto g4", 8), ("xperia xz3", 8), ("htc one", 8), ("zenfone 5", 6), ("mate 20", 5),
]
PLATFORMS = [
    ("android", 80), ("ios", 80), ("ios 12", 20), ("android 9", 10),
    ("lollipop", 12), ("lolipop", 10), ("lollypop", 6), ("kitkat", 8), ("oreo", 12),
    ("nougat", 10), ("marshmallow", 10), ("pie", 10), ("android pie", 8),
]


def weighted(rng: random.Random, pairs):
    names, weights = zip(*pairs)
    return rng.choices(names, weights=weights, k=1)[0]


def generate(n: int = N_TWEETS, seed: int = SEED) -> list[dict]:
    rng = random.Random(seed)
    start = datetime(2019, 1, 1, tzinfo=timezone.utc)
    tweets = []
    for i in range(n):
        r = rng.random()
        support = False
        if r < 0.55:
            name = weighted(rng, DEVICES)
            text = rng.choice(TEMPLATES).format(d=name)
        elif r < 0.80:
            name = weighted(rng, PLATFORMS)
            text = rng.choice(PLATFORM_TEMPLATES).format(p=name)
        elif r < 0.90:
            text, support = rng.choice(SUPPORT), True
        else:
            text = rng.choice(NOISE)
        if r < 0.80 and name in FAMILY_OF and rng.random() < 0.7:
            text += ", " + rng.choice(FAMILY_CONTEXT[FAMILY_OF[name]])
        if not support and rng.random() < 0.3:
            text = "@SpotifyCares " + text
        tweets.append(
            {
                "id": f"t{i:05d}",
                "text": text,
                "created_at": (start + timedelta(minutes=3 * i)).isoformat(),
                "conversation_id": f"t{i:05d}" if not support else f"t{max(i - 1, 0):05d}",
                "author_id": "support" if support else f"u{rng.randrange(400):04d}",
                "is_reply": support,
                "is_support": support,
                "account": "spotify",
            }
        )
    return tweets


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=ROOT / "fixtures" / "training_corpus.jsonl")
    ap.add_argument("-n", type=int, default=N_TWEETS)
    args = ap.parse_args()
    with open(args.out, "w", encoding="utf-8") as fh:
        for t in generate(args.n):
            fh.write(json.dumps(t) + "\n")
    print(f"wrote {args.n} tweets to {args.out}")


if __name__ == "__main__":
    main()
