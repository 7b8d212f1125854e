import json

import pytest
from hypothesis import given, strategies as st

from sadattack.corpus import bundled_corpus, iter_records, read_corpus
from sadattack.text import SentenceView, char_to_byte_offsets, pretokenize


def test_pretokenize_isolates_punctuation():
    text = "Hello, world!  It's 𝕨𝕖𝕖𝕜"
    assert [text[a:b] for a, b in pretokenize(text)] == ["Hello", ",", "world", "!", "It", "'", "s", "𝕨𝕖𝕖𝕜"]


def test_byte_offsets():
    assert char_to_byte_offsets("a𝕨b") == [0, 1, 5, 6]
    view = SentenceView.from_text("a 𝕨 b")
    assert view.byte_spans == [(0, 1), (2, 6), (7, 8)]


def test_without_repairs_whitespace():
    view = SentenceView.from_text("  the   movie was  ")
    assert view.without(1) == "the was"
    assert SentenceView.from_text("solo").without(0) == ""


def test_replace_words_keeps_layout():
    view = SentenceView.from_text("a  b,\tc")
    assert view.replace_words({0: "X", 3: "Y"}) == "X  b,\tY"


@given(st.text(max_size=40))
def test_spans_are_ordered_and_non_whitespace(text):
    spans = pretokenize(text)
    assert all(a < b <= c for (a, b), (c, _) in zip(spans, spans[1:]))
    assert all(not text[a:b].isspace() and text[a:b] for a, b in spans)
    assert "".join(text[a:b] for a, b in spans) == "".join(text.split())


def test_bundled_corpora():
    sent = bundled_corpus("sentiment")
    trans = bundled_corpus("translation")
    assert len(sent) == 200 and len(trans) == 100
    assert {r.label for r in sent} == {"positive", "negative"}
    assert all(r.reference for r in trans)
    assert len({r.id for r in sent}) == 200


def test_iter_records_errors():
    good = json.dumps({"id": "a", "text": "hi", "extra": 1})
    rec = next(iter_records([good]))
    assert rec.meta == {"extra": 1}
    with pytest.raises(ValueError, match="line 2"):
        list(iter_records([good, "{nope"]))
    with pytest.raises(ValueError, match="duplicate"):
        list(iter_records([good, good]))
    with pytest.raises(ValueError, match="line 1"):
        list(iter_records([json.dumps({"id": "a", "text": "  "})]))


def test_read_corpus_from_path(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id": "1", "text": "x"}\n\n{"id": "2", "text": "y", "label": "p"}\n', encoding="utf-8")
    assert [r.id for r in read_corpus(path)] == ["1", "2"]
    assert len(list(read_corpus("translation"))) == 100
