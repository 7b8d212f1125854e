"""Styled letters look familiar to people and foreign to tokenizers.

Run with ``python demos/01_styled_text_and_tokenizers.py``.
"""

from sadattack.glyphs import SubstitutionPlan, build_default_tables, normalize, substitute
from sadattack.text import SentenceView
from sadattack.tokenizers import bundled_bpe, bundled_wordpiece, fragmentation_ratio

table = build_default_tables()
print("families:", ", ".join(table.families))

# %% One word, every family
for family in table.families:
    print(f"{family:>22}  {table.style_word('week', family)}")

# %% Restyle the third word of a sentence
view = SentenceView.from_text("how many days are there in a week")
styled = substitute(view, SubstitutionPlan.uniform([2], "RegionalIndicator"), table)
print(styled)
folded, runs = normalize(styled, table)
print("folded back:", folded, runs)

# %% What the two tokenizers make of it
bpe, wp = bundled_bpe(), bundled_wordpiece()
for word in ["week", table.style_word("week", "MathDoubleStruck"), table.style_word("week", "Fullwidth")]:
    b, w = bpe.tokenize(word), wp.tokenize(word)
    print(f"{word!r:>12}  bpe={len(b):>2} tokens  wordpiece={list(w.tokens)}")

ratio = fragmentation_ratio(bpe.tokenize(table.style_word("week", "MathDoubleStruck")), bpe.tokenize("week"))
print("byte-BPE fragmentation of double-struck 'week':", ratio)
