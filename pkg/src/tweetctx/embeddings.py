"""Subword word vectors trained on the tweet corpus, neighbor queries and
alternative-spelling harvesting.

Training is delegated to gensim's FastText (skip-gram, negative sampling).
The trained arrays are copied into :class:`WordVectorModel`, which owns query
vectors, exact nearest-neighbor search and persistence.

Model file layout (all integers little-endian)::

    b"TWCTXVEC1\\n"                     magic
    uint64                              header length in bytes
    header                              UTF-8 JSON: hyperparams, words, counts, shapes
    float32[n_words * dim]              word vectors, row-major
    float32[bucket_count * dim]         character n-gram bucket vectors, row-major
"""
from __future__ import annotations

import json
import logging
import struct
from dataclasses import asdict, dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

log = logging.getLogger(__name__)

MAGIC = b"TWCTXVEC1\n"


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class Hyperparams:
    dim: int = 300
    window: int = 5
    min_count: int = 5
    epochs: int = 10
    ngram_min: int = 3
    ngram_max: int = 6
    bucket_count: int = 2**21
    learning_rate: float = 0.05
    negative_samples: int = 5
    seed: int = 1
    workers: int = 1

    def validate(self) -> None:
        problems = []
        if self.dim <= 0:
            problems.append("dim must be > 0")
        if self.window < 1:
            problems.append("window must be >= 1")
        if self.min_count < 1:
            problems.append("min_count must be >= 1")
        if self.epochs < 1:
            problems.append("epochs must be >= 1")
        if not 1 <= self.ngram_min <= self.ngram_max:
            problems.append("need 1 <= ngram_min <= ngram_max")
        if self.bucket_count < 1:
            problems.append("bucket_count must be >= 1")
        if not 0 < self.learning_rate:
            problems.append("learning_rate must be > 0")
        if self.negative_samples < 1:
            problems.append("negative_samples must be >= 1")
        if self.workers < 1:
            problems.append("workers must be >= 1")
        if problems:
            raise EmbeddingError("; ".join(problems))


class Neighbor(NamedTuple):
    word: str
    cosine_distance: float


class WordVectorModel:
    def __init__(
        self,
        hyperparams: Hyperparams,
        words: Sequence[str],
        counts: Sequence[int],
        word_vectors: np.ndarray,
        bucket_vectors: np.ndarray,
    ):
        self.hyperparams = hyperparams
        self.words = list(words)
        self.counts = list(counts)
        self.vocab = {w: i for i, w in enumerate(self.words)}
        self.vectors = np.ascontiguousarray(word_vectors, dtype=np.float32)
        self.subword_buckets = np.ascontiguousarray(bucket_vectors, dtype=np.float32)
        if self.vectors.shape != (len(self.words), hyperparams.dim):
            raise EmbeddingError(f"word vector shape {self.vectors.shape} does not match vocab/dim")
        if self.subword_buckets.shape != (hyperparams.bucket_count, hyperparams.dim):
            raise EmbeddingError(f"bucket table shape {self.subword_buckets.shape} does not match hyperparams")

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.vocab

    def ngram_buckets(self, word: str) -> list[int]:
        from gensim.models.fasttext import ft_ngram_hashes

        hp = self.hyperparams
        return list(ft_ngram_hashes(word, hp.ngram_min, hp.ngram_max, hp.bucket_count))

    def query_vector(self, word: str) -> np.ndarray:
        """Mean of the word's own vector (if in vocab) and its n-gram buckets."""
        rows = [self.subword_buckets[b].astype(np.float64) for b in self.ngram_buckets(word)]
        if word in self.vocab:
            rows.append(self.vectors[self.vocab[word]].astype(np.float64))
        if not rows:
            return np.zeros(self.hyperparams.dim)
        return np.mean(rows, axis=0)

    def phrase_vector(self, phrase: str) -> np.ndarray:
        parts = phrase.split()
        if not parts:
            raise EmbeddingError("empty phrase")
        return np.mean([self.query_vector(p) for p in parts], axis=0)

    @cached_property
    def _unit_matrix(self) -> np.ndarray:
        m = np.array([self.query_vector(w) for w in self.words], dtype=np.float64).reshape(len(self.words), -1)
        norms = np.linalg.norm(m, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        return m / norms

    def save(self, path: str | Path) -> None:
        header = {
            "format": 1,
            "hyperparams": asdict(self.hyperparams),
            "words": self.words,
            "counts": self.counts,
            "dtype": "<f4",
            "vectors_shape": list(self.vectors.shape),
            "buckets_shape": list(self.subword_buckets.shape),
        }
        blob = json.dumps(header, sort_keys=True, ensure_ascii=False, separators=(",", ":")).encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<Q", len(blob)))
            fh.write(blob)
            fh.write(self.vectors.astype("<f4").tobytes(order="C"))
            fh.write(self.subword_buckets.astype("<f4").tobytes(order="C"))

    @classmethod
    def load(cls, path: str | Path) -> "WordVectorModel":
        with open(path, "rb") as fh:
            if fh.read(len(MAGIC)) != MAGIC:
                raise EmbeddingError(f"{path}: not a word vector model file")
            try:
                (size,) = struct.unpack("<Q", fh.read(8))
                header = json.loads(fh.read(size).decode("utf-8"))
                hp = Hyperparams(**header["hyperparams"])
            except (struct.error, ValueError, KeyError, TypeError) as exc:
                raise EmbeddingError(f"{path}: corrupt model header ({exc})") from exc

            def read(shape):
                n = int(np.prod(shape))
                raw = fh.read(4 * n)
                if len(raw) != 4 * n:
                    raise EmbeddingError(f"{path}: truncated model file")
                return np.frombuffer(raw, dtype="<f4").reshape(shape)

            vectors = read(header["vectors_shape"])
            buckets = read(header["buckets_shape"])
        return cls(hp, header["words"], header["counts"], vectors, buckets)


def train(tokenized_tweets: Iterable[Sequence[str]], hyperparams: Hyperparams = Hyperparams()) -> WordVectorModel:
    """Skip-gram with negative sampling over word and character n-gram vectors.

    Deterministic for a fixed seed when ``hyperparams.workers == 1``.
    """
    from gensim.models.fasttext import FastText

    hyperparams.validate()
    sentences = [list(t) for t in tokenized_tweets]
    sentences = [s for s in sentences if s]
    if not sentences:
        raise EmbeddingError("empty training corpus")
    hp = hyperparams
    ft = FastText(
        sg=1,
        vector_size=hp.dim,
        window=hp.window,
        min_count=hp.min_count,
        min_n=hp.ngram_min,
        max_n=hp.ngram_max,
        bucket=hp.bucket_count,
        alpha=hp.learning_rate,
        negative=hp.negative_samples,
        seed=hp.seed,
        workers=hp.workers,
    )
    ft.build_vocab(corpus_iterable=sentences)
    if len(ft.wv) == 0:
        raise EmbeddingError(f"no token occurs at least min_count={hp.min_count} times")
    ft.train(corpus_iterable=sentences, total_examples=len(sentences), epochs=hp.epochs)
    wv = ft.wv
    words = list(wv.index_to_key)
    counts = [int(wv.get_vecattr(w, "count")) for w in words]
    model = WordVectorModel(hp, words, counts, wv.vectors_vocab, wv.vectors_ngrams)
    if not (np.isfinite(model.vectors).all() and np.isfinite(model.subword_buckets).all()):
        raise EmbeddingError("training diverged: non-finite vectors")
    log.info("trained word vectors: %d words, dim %d", len(words), hp.dim)
    return model


def cosine_distance(model: WordVectorModel, a: str, b: str) -> float:
    va, vb = model.phrase_vector(a), model.phrase_vector(b)
    na, nb = np.linalg.norm(va), np.linalg.norm(vb)
    if na == 0 or nb == 0:
        return 1.0
    return float(1.0 - np.dot(va, vb) / (na * nb))


def nearest(model: WordVectorModel, phrase: str, k: int = 10) -> list[Neighbor]:
    """Exact top-``k`` vocabulary words by cosine distance to the phrase vector.

    Multiword phrases use the mean of the per-word query vectors; the
    phrase's own words are never returned. Ties break by vocabulary order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    q = model.phrase_vector(phrase)
    norm = np.linalg.norm(q)
    sims = model._unit_matrix @ (q / norm) if norm > 0 else np.zeros(len(model))
    dist = np.clip(1.0 - sims, 0.0, 2.0)
    own = [model.vocab[w] for w in set(phrase.split()) if w in model.vocab]
    dist[own] = np.inf
    order = np.lexsort((np.arange(len(dist)), dist))
    out = []
    for i in order[:k]:
        if not np.isfinite(dist[i]):
            break
        out.append(Neighbor(model.words[i], float(dist[i])))
    return out


def harvest_spellings(
    model: WordVectorModel,
    keywords: Iterable[str],
    k: int = 10,
    max_distance: float = 0.2,
    exclusions: Iterable[str] = (),
) -> dict[str, dict[str, float]]:
    """keyword -> {spelling: distance}; each spelling kept for one keyword only.

    A spelling found for several keywords goes to the keyword it is closest
    to, ties to the lexicographically smaller keyword.
    """
    excluded = set(exclusions)
    raw: dict[str, dict[str, float]] = {}
    for kw in sorted(set(keywords)):
        raw[kw] = {
            n.word: n.cosine_distance
            for n in nearest(model, kw, k)
            if n.cosine_distance <= max_distance and n.word not in excluded and n.word != kw
        }
    owner: dict[str, tuple[float, str]] = {}
    for kw, found in raw.items():
        for word, d in found.items():
            if word not in owner or (d, kw) < owner[word]:
                owner[word] = (d, kw)
    return {kw: {w: d for w, d in found.items() if owner[w][1] == kw} for kw, found in raw.items()}


def alternative_spellings(
    model: WordVectorModel,
    keywords: Iterable[str],
    k: int = 10,
    max_distance: float = 0.2,
    exclusions: Iterable[str] = (),
) -> dict[str, set[str]]:
    harvested = harvest_spellings(model, keywords, k, max_distance, exclusions)
    return {kw: set(found) for kw, found in harvested.items()}


def save_spellings(spellings: Mapping[str, Iterable[str]], path: str | Path) -> None:
    data = {kw: sorted(s) for kw, s in sorted(spellings.items())}
    Path(path).write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def load_spellings(path: str | Path) -> dict[str, set[str]]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict) or not all(isinstance(v, list) for v in data.values()):
        raise EmbeddingError(f"{path}: expected a JSON object mapping keyword -> [spellings]")
    return {kw: set(v) for kw, v in data.items()}
