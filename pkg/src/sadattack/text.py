"""Word segmentation shared by the tokenizers, the ranker and the attacks."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

# Unicode whitespace separates words; each ASCII punctuation mark is its own word.
# Styled codepoints are never split points.
_PUNCT = r"!-/:-@\[-`{-~"
_WORD_RE = re.compile(rf"[^\s{_PUNCT}]+|[{_PUNCT}]")


def pretokenize(text: str) -> list[tuple[int, int]]:
    """Return ``(start, end)`` character spans of the words in ``text``."""
    return [m.span() for m in _WORD_RE.finditer(text)]


def char_to_byte_offsets(text: str) -> list[int]:
    """Map every character offset (including ``len(text)``) to its UTF-8 byte offset."""
    offsets = [0]
    total = 0
    for ch in text:
        total += len(ch.encode("utf-8"))
        offsets.append(total)
    return offsets


@dataclass(frozen=True)
class SentenceView:
    """A sentence plus the spans of its words.

    Spans are character offsets into ``text``; ``byte_spans`` gives the same
    spans in UTF-8 bytes.
    """

    text: str
    spans: tuple[tuple[int, int], ...]

    @classmethod
    def from_text(cls, text: str) -> SentenceView:
        return cls(text, tuple(pretokenize(text)))

    @property
    def words(self) -> list[str]:
        return [self.text[a:b] for a, b in self.spans]

    def __len__(self) -> int:
        return len(self.spans)

    @property
    def byte_spans(self) -> list[tuple[int, int]]:
        offs = char_to_byte_offsets(self.text)
        return [(offs[a], offs[b]) for a, b in self.spans]

    def without(self, index: int) -> str:
        """The sentence with word ``index`` deleted.

        Runs of whitespace left behind collapse to one space and the ends are
        trimmed.
        """
        a, b = self.spans[index]
        joined = self.text[:a] + " " + self.text[b:]
        return " ".join(joined.split())

    def replace_words(self, replacements: Mapping[int, str]) -> str:
        """Swap the words at the given indices, leaving every other character alone."""
        pieces = []
        cursor = 0
        for i in sorted(replacements):
            a, b = self.spans[i]
            pieces.append(self.text[cursor:a])
            pieces.append(replacements[i])
            cursor = b
        pieces.append(self.text[cursor:])
        return "".join(pieces)
