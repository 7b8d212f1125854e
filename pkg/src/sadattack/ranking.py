"""Zero-query word ranking.

Each word gets two scores before the target is ever queried:

* an importance score, the L2 distance between the sentence embedding with
  and without the word, and
* a tokenization instability score, the mean token-count ratio between
  restyled copies of the word and the word itself.

The ranking key is ``alpha * importance + beta * instability``.
"""

from __future__ import annotations

import functools
import json
import math
import zlib
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Iterable, Protocol, Sequence

import numpy as np

from .glyphs import BASE_CHARS, GlyphTable
from .text import SentenceView
from .tokenizers import Tokenizer, bundled_bpe, fragmentation_ratio


class Embedder(Protocol):
    dimension: int

    def embed(self, text: str) -> np.ndarray: ...


class HashedNgramEmbedder:
    """Bag of hashed character n-grams.

    Each whitespace-separated word is padded as ``<word>`` and cut into n-grams
    (3 to 5 characters by default); n-grams are hashed into ``dimension``
    buckets with CRC-32.  Bucket counts get ``1 + log(count)`` weighting, are
    multiplied by an optional per-bucket idf vector, and the result is
    L2-normalized.  The empty string embeds to the zero vector.
    """

    def __init__(self, dimension: int = 512, ngram_range: tuple[int, int] = (3, 5),
                 idf: np.ndarray | None = None):
        if dimension <= 0:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        self.ngram_range = ngram_range
        if idf is not None:
            idf = np.asarray(idf, dtype=np.float64)
            if idf.shape != (dimension,):
                raise ValueError(f"idf must have shape ({dimension},)")
        self.idf = idf
        self._word_cache: dict[str, Counter] = {}

    def _word_buckets(self, word: str) -> Counter:
        hit = self._word_cache.get(word)
        if hit is not None:
            return hit
        padded = f"<{word}>"
        lo, hi = self.ngram_range
        buckets: Counter = Counter()
        for n in range(lo, hi + 1):
            for i in range(len(padded) - n + 1):
                gram = padded[i:i + n].encode("utf-8")
                buckets[zlib.crc32(gram) % self.dimension] += 1
        if not buckets:
            # words shorter than the smallest n still need a footprint
            buckets[zlib.crc32(padded.encode("utf-8")) % self.dimension] += 1
        self._word_cache[word] = buckets
        return buckets

    def counts(self, text: str) -> Counter:
        total: Counter = Counter()
        for word in text.split():
            total.update(self._word_buckets(word))
        return total

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dimension)
        for bucket, count in self.counts(text).items():
            vec[bucket] = 1.0 + math.log(count)
        if self.idf is not None:
            vec *= self.idf
        norm = np.linalg.norm(vec)
        return vec / norm if norm > 0 else vec

    def fit_idf(self, documents: Iterable[str]) -> HashedNgramEmbedder:
        """A copy of this embedder with smoothed idf fitted on ``documents``."""
        df = np.zeros(self.dimension)
        n_docs = 0
        for doc in documents:
            n_docs += 1
            for bucket in self.counts(doc):
                df[bucket] += 1
        idf = np.log((1 + n_docs) / (1 + df)) + 1.0
        return HashedNgramEmbedder(self.dimension, self.ngram_range, idf)


@functools.lru_cache(maxsize=None)
def default_embedder() -> HashedNgramEmbedder:
    """The built-in embedder, with idf fitted on the bundled corpora."""
    from .corpus import bundled_corpus

    docs = [r.text for r in bundled_corpus("sentiment")] + [r.text for r in bundled_corpus("translation")]
    return HashedNgramEmbedder().fit_idf(docs)


@dataclass(frozen=True)
class RankingConfig:
    alpha: float = 0.5
    beta: float = 0.5
    m: int = 3
    seed: int = 42

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0 or self.alpha + self.beta <= 0:
            raise ValueError("alpha and beta must be non-negative with a positive sum")
        if self.m < 1:
            raise ValueError("m must be at least 1")

    @classmethod
    def from_dict(cls, data: dict) -> RankingConfig:
        unknown = set(data) - {"alpha", "beta", "m", "seed"}
        if unknown:
            raise ValueError(f"unknown ranking keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> RankingConfig:
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class VulnerabilityScore:
    word_index: int
    word: str
    ais: float
    tis: float
    v: float


def ais(embedder: Embedder, sentence: SentenceView, word_index: int) -> float:
    """Importance of one word: embedding distance after deleting it."""
    full = embedder.embed(sentence.text)
    reduced = embedder.embed(sentence.without(word_index))
    return float(np.linalg.norm(full - reduced))


def applicable_families(word: str, table: GlyphTable, families: Sequence[str] | None = None) -> list[str]:
    pool = table.families if families is None else families
    return [f for f in pool if table.covers(word, f)]


def sample_families(word: str, word_index: int, table: GlyphTable, config: RankingConfig,
                    families: Sequence[str] | None = None) -> list[str]:
    """``m`` distinct families for one word, drawn from a stream seeded by
    ``(seed, word_index)`` alone."""
    pool = applicable_families(word, table, families)
    if not pool:
        return []
    rng = np.random.default_rng([config.seed, word_index])
    picks = rng.choice(len(pool), size=min(config.m, len(pool)), replace=False)
    return [pool[i] for i in picks]


def tis(tokenizer: Tokenizer, table: GlyphTable, sentence: SentenceView, word_index: int,
        config: RankingConfig, families: Sequence[str] | None = None) -> float:
    """Mean fragmentation ratio of sampled restylings of one word, each
    tokenized in isolation.  Words without an ASCII letter score 1.0."""
    word = sentence.words[word_index]
    if not any(c in BASE_CHARS and c.isalpha() for c in word):
        return 1.0
    chosen = sample_families(word, word_index, table, config, families)
    if not chosen:
        return 1.0
    original = tokenizer.tokenize(word)
    ratios = [fragmentation_ratio(tokenizer.tokenize(table.style_word(word, f)), original) for f in chosen]
    return sum(ratios) / len(ratios)


def rank_words(sentence: SentenceView, embedder: Embedder | None = None, tokenizer: Tokenizer | None = None,
               table: GlyphTable | None = None, config: RankingConfig | None = None,
               families: Sequence[str] | None = None) -> list[VulnerabilityScore]:
    """Score every word and sort by descending ``v``; ties keep word order.

    Never touches a target model.
    """
    from .glyphs import build_default_tables

    if len(sentence) == 0:
        raise ValueError("cannot rank a sentence with no words")
    embedder = embedder or default_embedder()
    tokenizer = tokenizer or bundled_bpe()
    table = table or build_default_tables()
    config = config or RankingConfig()

    full = embedder.embed(sentence.text)
    words = sentence.words
    scores = []
    for i in range(len(sentence)):
        a = float(np.linalg.norm(full - embedder.embed(sentence.without(i))))
        t = tis(tokenizer, table, sentence, i, config, families)
        scores.append(VulnerabilityScore(i, words[i], a, t, config.alpha * a + config.beta * t))
    return sorted(scores, key=lambda s: -s.v)
