"""Concrete target models.

Two built-in oracles make the tokenizer failure modes concrete: a WordPiece
lexicon classifier, whose sentiment evidence vanishes once styled words
collapse to ``[UNK]``, and a word-by-word dictionary translator that copies
unknown (styled) words through.  :class:`NormalizationDefense` folds styled
text back to ASCII before the wrapped model sees it, and :class:`HttpTarget`
fronts any JSON-over-HTTP service.
"""

from __future__ import annotations

import dataclasses
import json
import socket
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

from .attack import CLASSIFICATION, TRANSLATION, Prediction, TargetModel
from .errors import MalformedResponse, TargetUnavailable
from .glyphs import GlyphTable, build_default_tables, normalize
from .text import pretokenize
from .tokenizers import WordPieceVocab, bundled_wordpiece, wordpiece_tokenize


def read_tsv(path: str | Path) -> list[tuple[str, str]]:
    rows = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected two tab-separated fields")
        rows.append((parts[0], parts[1]))
    return rows


class LexiconClassifier(TargetModel):
    """Sums per-token sentiment weights over a WordPiece tokenization.

    Positive sum -> ``positive``, negative -> ``negative``, zero -> ``neutral``.
    The unknown token always weighs zero.
    """

    kind = CLASSIFICATION

    def __init__(self, vocab: WordPieceVocab, weights: Mapping[str, float],
                 labels: tuple[str, str, str] = ("positive", "negative", "neutral")):
        super().__init__()
        self.vocab = vocab
        self.weights = {k: float(v) for k, v in weights.items() if k != vocab.unk_token}
        self.labels = labels
        self.declared_tokenizer = vocab

    @classmethod
    def from_files(cls, vocab_path, lexicon_path) -> LexiconClassifier:
        return cls(WordPieceVocab.load(vocab_path), {t: float(w) for t, w in read_tsv(lexicon_path)})

    def score(self, text: str) -> float:
        return sum(self.weights.get(tok, 0.0) for tok in wordpiece_tokenize(self.vocab, text).tokens)

    def _predict(self, text: str) -> Prediction:
        s = self.score(text)
        pos, neg, neutral = self.labels
        return Prediction(label=pos if s > 0 else neg if s < 0 else neutral)


def classify_lexicon(model: LexiconClassifier, text: str) -> Prediction:
    return model.query(text)


class DictionaryTranslator(TargetModel):
    """Word-by-word lookup (case-insensitive); unknown words are copied verbatim."""

    kind = TRANSLATION

    def __init__(self, mapping: Mapping[str, str]):
        super().__init__()
        self.mapping = {k.lower(): v for k, v in mapping.items()}

    @classmethod
    def from_file(cls, path) -> DictionaryTranslator:
        return cls(dict(read_tsv(path)))

    def translate(self, text: str) -> str:
        words = [text[a:b] for a, b in pretokenize(text)]
        return " ".join(self.mapping.get(w.lower(), w) for w in words)

    def _predict(self, text: str) -> Prediction:
        return Prediction(text=self.translate(text))


def translate_dictionary(model: DictionaryTranslator, text: str) -> Prediction:
    return model.query(text)


class NormalizationDefense(TargetModel):
    """Folds styled codepoints back to their base characters, then asks ``inner``.

    One outer query is one query on this wrapper's counter; the inner model
    keeps its own count.
    """

    def __init__(self, inner: TargetModel, table: GlyphTable | None = None):
        super().__init__()
        self.inner = inner
        self.table = table or build_default_tables()
        self.kind = inner.kind
        self.declared_tokenizer = inner.declared_tokenizer
        self.concurrent = inner.concurrent

    def _predict(self, text: str) -> Prediction:
        folded, _ = normalize(text, self.table)
        return self.inner.query(folded)

    def session(self) -> NormalizationDefense:
        return NormalizationDefense(self.inner.session(), self.table)


def wrap_normalization_defense(inner: TargetModel, table: GlyphTable | None = None) -> NormalizationDefense:
    return NormalizationDefense(inner, table)


@dataclass(frozen=True)
class HttpTargetSpec:
    """How to reach an external model.

    ``template`` is the request body with a ``{{text}}`` placeholder, which is
    replaced by the JSON-escaped input.  ``field`` is a dot path into the JSON
    response.
    """

    url: str
    template: str = '{"text": "{{text}}"}'
    field: str = "label"
    timeout_ms: int = 10000
    retries: int = 2
    concurrent: bool = False
    kind: str = CLASSIFICATION
    headers: Mapping[str, str] = dataclasses.field(default_factory=dict)
    min_interval_ms: int = 0
    backoff_ms: int = 200

    def __post_init__(self):
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if self.retries < 0:
            raise ValueError("retries must be non-negative")
        if self.kind not in (CLASSIFICATION, TRANSLATION):
            raise ValueError(f"unknown target kind {self.kind!r}")

    @classmethod
    def from_dict(cls, data: dict) -> HttpTargetSpec:
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> HttpTargetSpec:
        return cls.from_dict(json.loads(text))


def render_request(template: str, text: str) -> bytes:
    return template.replace("{{text}}", json.dumps(text, ensure_ascii=False)[1:-1]).encode("utf-8")


def extract_field(payload, path: str):
    node = payload
    for key in path.split("."):
        if isinstance(node, dict) and key in node:
            node = node[key]
        elif isinstance(node, list) and key.isdigit() and int(key) < len(node):
            node = node[int(key)]
        else:
            raise MalformedResponse(f"response has no field {path!r}")
    return node


def query_http(spec: HttpTargetSpec, text: str) -> Prediction:
    """POST one input; retries transport failures with exponential backoff."""
    body = render_request(spec.template, text)
    headers = {"Content-Type": "application/json", **spec.headers}
    last_error: Exception | None = None
    for attempt in range(spec.retries + 1):
        if attempt:
            time.sleep(spec.backoff_ms / 1000 * 2 ** (attempt - 1))
        req = urllib.request.Request(spec.url, data=body, headers=headers, method="POST")
        try:
            with urllib.request.urlopen(req, timeout=spec.timeout_ms / 1000) as resp:
                raw = resp.read()
            break
        except urllib.error.HTTPError as exc:
            last_error = exc
            if exc.code < 500:
                raise TargetUnavailable(f"{spec.url} answered HTTP {exc.code}") from None
        except (urllib.error.URLError, socket.timeout, ConnectionError, TimeoutError) as exc:
            last_error = exc
    else:
        raise TargetUnavailable(f"{spec.url} unreachable after {spec.retries + 1} attempts: {last_error}")
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError:
        raise MalformedResponse(f"{spec.url} did not return JSON") from None
    value = extract_field(payload, spec.field)
    if spec.kind == CLASSIFICATION:
        return Prediction(label=str(value))
    return Prediction(text=str(value))


class HttpTarget(TargetModel):
    def __init__(self, spec: HttpTargetSpec):
        super().__init__()
        self.spec = spec
        self.kind = spec.kind
        self.concurrent = spec.concurrent
        self._last_call = 0.0

    def _predict(self, text: str) -> Prediction:
        if self.spec.min_interval_ms:
            wait = self._last_call + self.spec.min_interval_ms / 1000 - time.monotonic()
            if wait > 0:
                time.sleep(wait)
        try:
            return query_http(self.spec, text)
        finally:
            self._last_call = time.monotonic()


def _data(name: str):
    return resources.files("sadattack") / "data" / name


def bundled_lexicon_classifier() -> LexiconClassifier:
    with resources.as_file(_data("lexicon.tsv")) as p:
        weights = {t: float(w) for t, w in read_tsv(p)}
    return LexiconClassifier(bundled_wordpiece(), weights)


def bundled_translator() -> DictionaryTranslator:
    with resources.as_file(_data("dictionary.tsv")) as p:
        return DictionaryTranslator.from_file(p)
