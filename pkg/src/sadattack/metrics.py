"""Attack evaluation metrics: sentence BLEU and chrF, their relative drops,
embedding similarity, and corpus aggregation."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import EmptyReference, ZeroBaseline
from .text import pretokenize

BLEU_ORDER = 4
CHRF_ORDER = 6
CHRF_BETA = 2


def _is_cjk(ch: str) -> bool:
    cp = ord(ch)
    return (
        0x4E00 <= cp <= 0x9FFF or 0x3400 <= cp <= 0x4DBF or 0xF900 <= cp <= 0xFAFF
        or 0x3040 <= cp <= 0x30FF or 0x20000 <= cp <= 0x2A6DF or 0x3000 <= cp <= 0x303F
        or 0xFF00 <= cp <= 0xFF0F
    )


def bleu_tokens(text: str) -> list[str]:
    """Whitespace words with ASCII punctuation isolated; CJK split per character."""
    out = []
    for a, b in pretokenize(text):
        word = text[a:b]
        buf = ""
        for ch in word:
            if _is_cjk(ch):
                if buf:
                    out.append(buf)
                    buf = ""
                out.append(ch)
            else:
                buf += ch
        if buf:
            out.append(buf)
    return out


def _ngrams(tokens: list, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate: str, reference: str) -> float:
    """Sentence BLEU-4 with brevity penalty.

    Unigram precision is unsmoothed; orders 2-4 use add-one smoothing on both
    the match count and the candidate n-gram count.
    """
    ref = bleu_tokens(reference)
    if not ref:
        raise EmptyReference("BLEU reference is empty")
    cand = bleu_tokens(candidate)
    if not cand:
        return 0.0
    log_p = 0.0
    for n in range(1, BLEU_ORDER + 1):
        c_ngrams = _ngrams(cand, n)
        matches = sum((c_ngrams & _ngrams(ref, n)).values())
        total = sum(c_ngrams.values())
        if n == 1:
            if matches == 0:
                return 0.0
            p = matches / total
        else:
            p = (matches + 1) / (total + 1)
        log_p += math.log(p) / BLEU_ORDER
    bp = 1.0 if len(cand) > len(ref) else math.exp(1 - len(ref) / len(cand))
    return bp * math.exp(log_p)


def _char_ngrams(text: str, n: int) -> Counter:
    return Counter(text[i:i + n] for i in range(len(text) - n + 1))


def chrf(candidate: str, reference: str) -> float:
    """Character n-gram F-score, orders 1-6, beta = 2, whitespace ignored.

    Precision and recall are averaged over the orders for which both strings
    have at least one n-gram.
    """
    ref = "".join(reference.split())
    if not ref:
        raise EmptyReference("chrF reference is empty")
    hyp = "".join(candidate.split())
    prec_sum = rec_sum = 0.0
    orders = 0
    for n in range(1, CHRF_ORDER + 1):
        h, r = _char_ngrams(hyp, n), _char_ngrams(ref, n)
        h_total, r_total = sum(h.values()), sum(r.values())
        if h_total == 0 or r_total == 0:
            continue
        common = sum((h & r).values())
        prec_sum += common / h_total
        rec_sum += common / r_total
        orders += 1
    if orders == 0:
        return 0.0
    p, r = prec_sum / orders, rec_sum / orders
    if p + r == 0:
        return 0.0
    b2 = CHRF_BETA ** 2
    return (1 + b2) * p * r / (b2 * p + r)


def relative_drop(base: float, adversarial: float) -> float:
    """``(base - adversarial) / base``; undefined for a zero baseline."""
    if base == 0:
        raise ZeroBaseline("baseline score is zero")
    return (base - adversarial) / base


def _relative_drop(metric, reference: str, original: str, adversarial: str) -> float:
    base = metric(original, reference)
    if base == 0:
        raise ZeroBaseline(f"{metric.__name__} of the original translation is zero")
    return relative_drop(base, metric(adversarial, reference))


def rd_bleu(reference: str, original_translation: str, adversarial_translation: str) -> float:
    """Relative BLEU drop of the adversarial translation; negative if it improved."""
    return _relative_drop(bleu, reference, original_translation, adversarial_translation)


def rd_chrf(reference: str, original_translation: str, adversarial_translation: str) -> float:
    return _relative_drop(chrf, reference, original_translation, adversarial_translation)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        return 0.0
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def similarity(embedder, a: str, b: str) -> float:
    """Cosine similarity of two texts under ``embedder``; 0 if either embeds to zero."""
    return cosine(embedder.embed(a), embedder.embed(b))


@dataclass(frozen=True)
class CorpusReport:
    asr: float
    mean_sim: float
    mean_queries: float
    mean_rdbleu: float | None
    mean_rdchrf: float | None
    errored: int
    evaluated: int
    successes: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def render_table(self) -> str:
        cols = [("ASR(%)", f"{100 * self.asr:.2f}"), ("Sim", f"{self.mean_sim:.3f}"),
                ("Query", f"{self.mean_queries:.2f}")]
        if self.mean_rdbleu is not None:
            cols.append(("RDBLEU", f"{self.mean_rdbleu:.2f}"))
        if self.mean_rdchrf is not None:
            cols.append(("RDchrF", f"{self.mean_rdchrf:.2f}"))
        cols += [("N", str(self.evaluated)), ("Errored", str(self.errored))]
        widths = [max(len(h), len(v)) for h, v in cols]
        head = "  ".join(h.rjust(w) for (h, _), w in zip(cols, widths))
        body = "  ".join(v.rjust(w) for (_, v), w in zip(cols, widths))
        return f"{head}\n{body}\n"


def _mean(values: list[float]) -> float | None:
    return math.fsum(values) / len(values) if values else None


def aggregate(outcomes: Iterable) -> CorpusReport:
    """Fold outcome digests (``AttackOutcome`` objects or their dicts) into a report.

    Errored samples are counted but left out of every mean and of the ASR
    denominator.  Relative drops average over the samples where they are defined.
    """
    digests: list[Mapping] = [o if isinstance(o, Mapping) else o.to_dict() for o in outcomes]
    if not digests:
        raise ValueError("aggregate needs at least one outcome")
    ok = [d for d in digests if not d.get("errored")]
    errored = len(digests) - len(ok)
    if not ok:
        return CorpusReport(0.0, 0.0, 0.0, None, None, errored, 0, 0)
    successes = sum(1 for d in ok if d["success"])
    rdb = [d["rd_bleu"] for d in ok if d.get("rd_bleu") is not None]
    rdc = [d["rd_chrf"] for d in ok if d.get("rd_chrf") is not None]
    return CorpusReport(
        asr=successes / len(ok),
        mean_sim=_mean([d["similarity"] for d in ok]),
        mean_queries=_mean([float(d["queries"]) for d in ok]),
        mean_rdbleu=_mean(rdb),
        mean_rdchrf=_mean(rdc),
        errored=errored,
        evaluated=len(ok),
        successes=successes,
    )
