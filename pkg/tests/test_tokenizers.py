import itertools
import string

import pytest
from hypothesis import given, settings, strategies as st

from sadattack.errors import EmptyOriginal
from sadattack.glyphs import MATH_FAMILIES, build_default_tables
from sadattack.text import pretokenize
from sadattack.tokenizers import (BpeModel, Tokenization, WordPieceVocab, bpe_tokenize, bundled_bpe,
                                  bundled_wordpiece, bytes_to_symbols, fragmentation_ratio, symbols_to_bytes,
                                  wordpiece_tokenize)

TINY = WordPieceVocab.from_tokens(["[UNK]", "the", "cat", "s", "##s", "##at", "c"])


def toks(t: Tokenization):
    return list(t.tokens)


# WordPiece

def test_wordpiece_basic():
    assert toks(TINY.tokenize("cats")) == ["cat", "##s"]
    assert toks(TINY.tokenize("The cat")) == ["the", "cat"]
    assert TINY.tokenize("").tokens == ()
    assert TINY.tokenize("cats").ids == (2, 4)


def test_wordpiece_whole_word_unk():
    # "cx" matches "c" and then fails on "x": the whole word becomes one [UNK].
    assert toks(TINY.tokenize("cx cat")) == ["[UNK]", "cat"]
    assert toks(TINY.tokenize("ⓒat")) == ["[UNK]"]


def test_wordpiece_max_word_chars():
    vocab = WordPieceVocab.from_tokens(["[UNK]", "a", "##a"], max_word_chars=5)
    assert toks(vocab.tokenize("aaaaa")) == ["a", "##a", "##a", "##a", "##a"]
    assert toks(vocab.tokenize("aaaaaa")) == ["[UNK]"]


def test_wordpiece_spans_are_bytes():
    t = TINY.tokenize("ⓒ cats")
    assert t.spans == ((0, 3), (4, 7), (7, 8))


def test_wordpiece_vocab_validation():
    with pytest.raises(ValueError):
        WordPieceVocab.from_tokens(["the"])
    with pytest.raises(ValueError):
        WordPieceVocab.from_tokens(["[UNK]", "a##b"])


def brute_force_wordpiece(vocab, word):
    """Longest-match-first by exhaustive search: the segmentation (if any) in
    which every piece is the longest vocab entry available at its position."""
    def entry(piece, first):
        return piece if first else "##" + piece

    n = len(word)
    for cuts in itertools.chain.from_iterable(
            itertools.combinations(range(1, n), k) for k in range(n)):
        bounds = (0, *cuts, n)
        pieces = []
        ok = True
        for a, b in zip(bounds, bounds[1:]):
            if entry(word[a:b], a == 0) not in vocab.entries:
                ok = False
                break
            if any(entry(word[a:c], a == 0) in vocab.entries for c in range(b + 1, n + 1)):
                ok = False
                break
            pieces.append(entry(word[a:b], a == 0))
        if ok:
            return pieces
    return ["[UNK]"]


pieces = st.text(alphabet="abc", min_size=1, max_size=3)


@settings(max_examples=300)
@given(st.lists(st.tuples(pieces, st.booleans()), max_size=12),
       st.text(alphabet="abc", min_size=1, max_size=7))
def test_wordpiece_matches_brute_force(entries, word):
    vocab = WordPieceVocab.from_tokens(["[UNK]"] + [("##" if cont else "") + p for p, cont in entries])
    assert toks(vocab.tokenize(word)) == brute_force_wordpiece(vocab, word)


def test_bundled_wordpiece_mechanism():
    vocab = bundled_wordpiece()
    table = build_default_tables()
    in_vocab = [w for w in vocab.entries if w.isalpha() and w.isascii()]
    assert len(in_vocab) > 1000
    for word in in_vocab[:300]:
        assert toks(vocab.tokenize(word)) == [word]
        for i, ch in enumerate(word):
            for fam in table.families:
                styled = word[:i] + table.style(ch, fam) + word[i + 1:]
                assert toks(vocab.tokenize(styled)) == ["[UNK]"], (word, fam)


# Byte-level BPE

WEEK = BpeModel(((b"w", b"e"), (b"we", b"e"), (b"wee", b"k")))


def test_bpe_merges_to_one_token():
    t = WEEK.tokenize("week")
    assert toks(t) == ["week"] and t.ids == (258,)


def test_bpe_styled_week_falls_back_to_bytes():
    styled = build_default_tables().style_word("week", "MathDoubleStruck")
    t = WEEK.tokenize(styled)
    assert len(t) == 16
    assert fragmentation_ratio(t, WEEK.tokenize("week")) == 16.0


def test_bpe_single_byte_and_empty():
    assert toks(WEEK.tokenize("x")) == ["x"]
    assert WEEK.tokenize("").tokens == ()
    assert WEEK.tokenize("   ").tokens == ()


def test_bpe_rank_order_decides():
    model = BpeModel(((b"b", b"c"), (b"a", b"b")))
    assert toks(model.tokenize("abc")) == ["a", "bc"]
    model = BpeModel(((b"a", b"b"), (b"b", b"c")))
    assert toks(model.tokenize("abc")) == ["ab", "c"]


def test_bpe_model_validation():
    with pytest.raises(ValueError):
        BpeModel(((b"we", b"e"),))
    with pytest.raises(ValueError):
        BpeModel(((b"a", b"b"), (b"a", b"b")))


def test_symbol_escaping_round_trip():
    raw = bytes(range(256))
    sym = bytes_to_symbols(raw)
    assert symbols_to_bytes(sym) == raw
    assert bytes_to_symbols(b"ab<") == "ab<0x3C>"
    assert bytes_to_symbols(b" \xf0") == "<0x20><0xF0>"


def test_merges_file_round_trip():
    model = bundled_bpe()
    assert len(model.merges) == 1000
    again = BpeModel.from_lines(model.dumps().splitlines())
    assert again.merges == model.merges


def reference_bpe(merges, word: bytes):
    """Walk the merge list in rank order, restarting after every applied merge."""
    parts = [bytes([b]) for b in word]
    changed = True
    while changed:
        changed = False
        for left, right in merges:
            positions = [i for i in range(len(parts) - 1) if parts[i] == left and parts[i + 1] == right]
            if not positions:
                continue
            out, i = [], 0
            while i < len(parts):
                if i < len(parts) - 1 and parts[i] == left and parts[i + 1] == right:
                    out.append(left + right)
                    i += 2
                else:
                    out.append(parts[i])
                    i += 1
            parts = out
            changed = True
            break
    return tuple(parts)


@settings(max_examples=200)
@given(st.text(alphabet=string.ascii_lowercase, min_size=1, max_size=14))
def test_bundled_bpe_matches_reference(word):
    model = bundled_bpe()
    assert model.encode_word(word.encode()) == reference_bpe(model.merges, word.encode())


@given(st.text(max_size=30))
def test_bpe_is_total_and_tiles_non_whitespace(text):
    model = bundled_bpe()
    t = bpe_tokenize(model, text)
    data = text.encode("utf-8")
    assert len(t) <= len(data)
    covered = set()
    for (a, b), tok in zip(t.spans, t.tokens):
        assert data[a:b] == symbols_to_bytes(tok)
        covered.update(range(a, b))
    expected = set()
    for a, b in pretokenize(text):
        start = len(text[:a].encode())
        expected.update(range(start, start + len(text[a:b].encode())))
    assert covered == expected


def test_math_styling_fragments_at_least_fourfold():
    model = bundled_bpe()
    table = build_default_tables()
    for word in ["week", "movie", "wonderful", "the", "days"]:
        base = len(model.tokenize(word))
        for fam in MATH_FAMILIES:
            assert len(model.tokenize(table.style_word(word, fam))) >= 4 * base


# Fragmentation ratio

def test_fragmentation_ratio_cases():
    one = WEEK.tokenize("week")
    assert fragmentation_ratio(one, one) == 1.0
    unk = TINY.tokenize("ⓒat")
    assert fragmentation_ratio(unk, TINY.tokenize("cat")) == 1.0
    with pytest.raises(EmptyOriginal):
        fragmentation_ratio(one, WEEK.tokenize(""))


VOCAB_WORDS = sorted(w for w in bundled_wordpiece().entries if w.isalpha() and w.isascii())


@given(st.sampled_from(VOCAB_WORDS), st.sampled_from(sorted(build_default_tables().families)))
def test_wordpiece_never_fragments_styled_words(word, family):
    vocab = bundled_wordpiece()
    styled = build_default_tables().style_word(word, family)
    assert fragmentation_ratio(vocab.tokenize(styled), wordpiece_tokenize(vocab, word)) == 1.0


def test_letterlike_aliases_are_three_bytes():
    # Reserved math-alphabet slots fall back to the BMP Letterlike Symbols block,
    # so a single-letter word there fragments 3x rather than 4x.
    table = build_default_tables()
    model = bundled_bpe()
    assert len(model.tokenize(table.style_word("I", "MathScript"))) == 3
    assert len(model.tokenize(table.style_word("a", "MathScript"))) == 4
