"""Which words should be restyled first?  Ranking costs no target queries."""

import numpy as np

from sadattack.ranking import RankingConfig, rank_words
from sadattack.text import SentenceView
from sadattack.tokenizers import bundled_wordpiece

view = SentenceView.from_text("How many DAYS are there in a WEEK")


def show(title, scores):
    print(title)
    for s in scores:
        print(f"  {s.word:>6}  ais={s.ais:.3f}  tis={s.tis:6.2f}  v={s.v:6.3f}")


show("default weights, byte-BPE", rank_words(view))
show("importance only", rank_words(view, config=RankingConfig(alpha=1.0, beta=0.0)))
# Under WordPiece every styled word is a single [UNK], so TIS is flat and
# importance decides the order.
show("default weights, WordPiece", rank_words(view, tokenizer=bundled_wordpiece()))

# %% Scaling both weights keeps the order
orders = {tuple(s.word_index for s in rank_words(view, config=RankingConfig(alpha=c, beta=c)))
          for c in np.geomspace(0.1, 10, 5)}
print("distinct orders across scalings:", len(orders))
