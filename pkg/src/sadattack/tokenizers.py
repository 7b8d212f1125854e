"""Reference WordPiece and byte-level BPE tokenizers.

Both split text with :func:`sadattack.text.pretokenize` first, so word
indices line up with :class:`~sadattack.text.SentenceView`.  Token spans are
UTF-8 byte offsets into the input; whitespace belongs to no token.

WordPiece maps a word containing any unmatchable character to a single
unknown token, which is why a styled word collapses to ``[UNK]``.  Byte BPE
never fails: bytes that no merge covers stay one token each, which is why a
styled word explodes into several sub-tokens.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Protocol

from .errors import EmptyOriginal
from .text import char_to_byte_offsets, pretokenize


@dataclass(frozen=True)
class Tokenization:
    tokens: tuple[str, ...]
    ids: tuple[int, ...]
    spans: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.tokens)


class Tokenizer(Protocol):
    def tokenize(self, text: str) -> Tokenization: ...


def fragmentation_ratio(styled: Tokenization, original: Tokenization) -> float:
    """Token count of ``styled`` over token count of ``original``."""
    if len(original) == 0:
        raise EmptyOriginal("original tokenization has no tokens")
    return len(styled) / len(original)


# --------------------------------------------------------------------------
# WordPiece


def _lower_keep_length(word: str) -> str:
    return "".join(c.lower() if len(c.lower()) == 1 else c for c in word)


@dataclass(frozen=True)
class WordPieceVocab:
    """Token -> id map for greedy longest-match-first WordPiece."""

    entries: dict[str, int]
    unk_token: str = "[UNK]"
    max_word_chars: int = 100
    prefix: str = "##"
    lowercase: bool = True

    def __post_init__(self):
        if self.unk_token not in self.entries:
            raise ValueError(f"unk token {self.unk_token!r} missing from vocab")
        for tok in self.entries:
            if not tok or tok == self.prefix:
                raise ValueError(f"empty vocab entry {tok!r}")
            if self.prefix in tok[len(self.prefix) if tok.startswith(self.prefix) else 0:]:
                raise ValueError(f"continuation marker inside entry {tok!r}")

    @classmethod
    def from_tokens(cls, tokens: Iterable[str], **kwargs) -> WordPieceVocab:
        entries: dict[str, int] = {}
        for tok in tokens:
            entries.setdefault(tok, len(entries))
        return cls(entries, **kwargs)

    @classmethod
    def load(cls, path: str | Path, **kwargs) -> WordPieceVocab:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        entries = {}
        for i, tok in enumerate(lines):
            if tok:
                entries.setdefault(tok, i)
        return cls(entries, **kwargs)

    def tokenize(self, text: str) -> Tokenization:
        return wordpiece_tokenize(self, text)


def _wordpiece_word(vocab: WordPieceVocab, word: str) -> list[tuple[str, int, int]] | None:
    """Greedy longest-match pieces as ``(token, char_start, char_end)``; None when
    some position cannot be matched."""
    if len(word) > vocab.max_word_chars:
        return None
    pieces = []
    start = 0
    while start < len(word):
        end = len(word)
        while end > start:
            piece = word[start:end]
            if start > 0:
                piece = vocab.prefix + piece
            if piece in vocab.entries:
                pieces.append((piece, start, end))
                break
            end -= 1
        else:
            return None
        start = end
    return pieces


def wordpiece_tokenize(vocab: WordPieceVocab, text: str) -> Tokenization:
    offs = char_to_byte_offsets(text)
    tokens, ids, spans = [], [], []
    for a, b in pretokenize(text):
        word = text[a:b]
        if vocab.lowercase:
            word = _lower_keep_length(word)
        pieces = _wordpiece_word(vocab, word)
        if pieces is None:
            tokens.append(vocab.unk_token)
            ids.append(vocab.entries[vocab.unk_token])
            spans.append((offs[a], offs[b]))
            continue
        for piece, s, e in pieces:
            tokens.append(piece)
            ids.append(vocab.entries[piece])
            spans.append((offs[a + s], offs[a + e]))
    return Tokenization(tuple(tokens), tuple(ids), tuple(spans))


# --------------------------------------------------------------------------
# Byte-level BPE

_HEX_BYTE = re.compile(r"<0x([0-9A-Fa-f]{2})>")


def byte_to_symbol(b: int) -> str:
    """Printable ASCII stands for itself; anything else (and ``<``) is ``<0xNN>``."""
    if 0x21 <= b <= 0x7E and b != 0x3C:
        return chr(b)
    return f"<0x{b:02X}>"


def bytes_to_symbols(bs: bytes) -> str:
    return "".join(byte_to_symbol(b) for b in bs)


def symbols_to_bytes(sym: str) -> bytes:
    out = bytearray()
    i = 0
    while i < len(sym):
        m = _HEX_BYTE.match(sym, i)
        if m:
            out.append(int(m.group(1), 16))
            i = m.end()
        else:
            out.extend(sym[i].encode("ascii"))
            i += 1
    return bytes(out)


@dataclass(frozen=True)
class BpeModel:
    """Ordered merge list over a 256-symbol byte alphabet.

    Token ids: bytes are ``0..255``; the token produced by merge ``r`` is ``256 + r``.
    """

    merges: tuple[tuple[bytes, bytes], ...]
    ranks: dict[tuple[bytes, bytes], int] = field(init=False, repr=False, compare=False)
    vocab: dict[bytes, int] = field(init=False, repr=False, compare=False)
    _cache: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vocab = {bytes([b]): b for b in range(256)}
        ranks = {}
        for rank, (left, right) in enumerate(self.merges):
            if left not in vocab or right not in vocab:
                raise ValueError(f"merge {rank} uses a part that no earlier rule derives")
            if (left, right) in ranks:
                raise ValueError(f"merge {rank} repeats an earlier rule")
            ranks[(left, right)] = rank
            vocab.setdefault(left + right, 256 + rank)
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "vocab", vocab)
        object.__setattr__(self, "_cache", {})

    @classmethod
    def load(cls, path: str | Path) -> BpeModel:
        return cls.from_lines(Path(path).read_text(encoding="utf-8").splitlines())

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> BpeModel:
        merges = []
        for line in lines:
            if not line.strip() or line.startswith("#"):
                continue
            left, right = line.split()
            merges.append((symbols_to_bytes(left), symbols_to_bytes(right)))
        return cls(tuple(merges))

    def dumps(self) -> str:
        return "".join(f"{bytes_to_symbols(a)} {bytes_to_symbols(b)}\n" for a, b in self.merges)

    def encode_word(self, word: bytes) -> tuple[bytes, ...]:
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        parts = [bytes([b]) for b in word]
        while len(parts) > 1:
            best = None
            for pair in zip(parts, parts[1:]):
                r = self.ranks.get(pair)
                if r is not None and (best is None or r < best[0]):
                    best = (r, pair)
            if best is None:
                break
            left, right = best[1]
            merged = []
            i = 0
            while i < len(parts):
                if i + 1 < len(parts) and parts[i] == left and parts[i + 1] == right:
                    merged.append(left + right)
                    i += 2
                else:
                    merged.append(parts[i])
                    i += 1
            parts = merged
        result = tuple(parts)
        self._cache[word] = result
        return result

    def tokenize(self, text: str) -> Tokenization:
        return bpe_tokenize(self, text)


def bpe_tokenize(model: BpeModel, text: str) -> Tokenization:
    offs = char_to_byte_offsets(text)
    tokens, ids, spans = [], [], []
    for a, b in pretokenize(text):
        pos = offs[a]
        for piece in model.encode_word(text[a:b].encode("utf-8")):
            tokens.append(bytes_to_symbols(piece))
            ids.append(model.vocab[piece])
            spans.append((pos, pos + len(piece)))
            pos += len(piece)
    return Tokenization(tuple(tokens), tuple(ids), tuple(spans))


# --------------------------------------------------------------------------
# Bundled models


def _data_path(name: str):
    return resources.files("sadattack") / "data" / name


@functools.lru_cache(maxsize=None)
def bundled_wordpiece() -> WordPieceVocab:
    with resources.as_file(_data_path("wordpiece_vocab.txt")) as p:
        return WordPieceVocab.load(p)


@functools.lru_cache(maxsize=None)
def bundled_bpe() -> BpeModel:
    with resources.as_file(_data_path("bpe_merges.txt")) as p:
        return BpeModel.load(p)
