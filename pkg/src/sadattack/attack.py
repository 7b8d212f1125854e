"""Black-box style attacks.

``sad_strong`` restyles every word and spends exactly one query.
``sad_light`` restyles words one at a time in vulnerability order, trying
each family of ``family_order`` on the newly added word, and stops at the
first success or after ``budget`` queries.

The prediction on the clean input is the harness's job (see
:func:`run_attack`); it is not charged to the attack budget.
"""

from __future__ import annotations

import abc
import json
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .errors import MissingReference, TargetUnavailable, ZeroBaseline
from .glyphs import GlyphTable, SubstitutionPlan, build_default_tables, substitute
from .metrics import rd_bleu, rd_chrf, similarity
from .ranking import Embedder, RankingConfig, default_embedder, rank_words
from .text import SentenceView
from .tokenizers import Tokenizer

CLASSIFICATION = "classification"
TRANSLATION = "translation"


@dataclass(frozen=True)
class Prediction:
    """Exactly one of ``label`` (classification) or ``text`` (translation) is set."""

    label: str | None = None
    text: str | None = None
    confidence: float | None = None

    def __post_init__(self):
        if (self.label is None) == (self.text is None):
            raise ValueError("a prediction carries either a label or a translation, not both")
        if self.label is not None and not self.label:
            raise ValueError("empty label")
        if self.confidence is not None and not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")

    @property
    def kind(self) -> str:
        return CLASSIFICATION if self.label is not None else TRANSLATION

    def to_dict(self) -> dict:
        if self.label is not None:
            d = {"label": self.label}
            if self.confidence is not None:
                d["confidence"] = self.confidence
            return d
        return {"text": self.text}

    @classmethod
    def from_dict(cls, data: dict) -> Prediction:
        return cls(label=data.get("label"), text=data.get("text"), confidence=data.get("confidence"))


class TargetModel(abc.ABC):
    """A model we may only query.

    Every :meth:`query` call adds exactly one to :attr:`query_count`, however
    many transport attempts the adapter makes underneath.
    """

    kind: str = CLASSIFICATION
    declared_tokenizer: Tokenizer | None = None
    concurrent: bool = True

    def __init__(self):
        self._count = 0
        self._lock = threading.Lock()

    @property
    def query_count(self) -> int:
        return self._count

    def query(self, text: str) -> Prediction:
        with self._lock:
            self._count += 1
        return self._predict(text)

    @abc.abstractmethod
    def _predict(self, text: str) -> Prediction: ...

    def session(self) -> TargetModel:
        """A fresh handle on the same model with its own zeroed counter."""
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        TargetModel.__init__(clone)
        return clone


DEFAULT_FAMILIES = ("RegionalIndicator", "MathDoubleStruck", "Fullwidth")


@dataclass(frozen=True)
class AttackConfig:
    mode: str = "light"
    budget: int = 25
    family_order: tuple[str, ...] = DEFAULT_FAMILIES
    tau: float = 0.5
    ranking: RankingConfig = field(default_factory=RankingConfig)
    allow_pseudo_reference: bool = True

    def __post_init__(self):
        if self.mode not in ("light", "strong"):
            raise ValueError(f"mode must be 'light' or 'strong', not {self.mode!r}")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if not self.family_order:
            raise ValueError("family_order must not be empty")
        if not 0.0 < self.tau <= 1.0:
            raise ValueError("tau must lie in (0, 1]")
        object.__setattr__(self, "family_order", tuple(self.family_order))

    @classmethod
    def from_dict(cls, data: dict) -> AttackConfig:
        data = dict(data)
        kwargs = {}
        for key, name in (("mode", "mode"), ("budget", "budget"), ("tau", "tau"),
                          ("families", "family_order"), ("allow_pseudo_reference", "allow_pseudo_reference")):
            if key in data:
                kwargs[name] = data.pop(key)
        if "ranking" in data:
            kwargs["ranking"] = RankingConfig.from_dict(data.pop("ranking"))
        if data:
            raise ValueError(f"unknown attack config keys: {sorted(data)}")
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> AttackConfig:
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {
            "mode": self.mode, "budget": self.budget, "tau": self.tau,
            "families": list(self.family_order), "ranking": self.ranking.to_dict(),
            "allow_pseudo_reference": self.allow_pseudo_reference,
        }


@dataclass
class Trial:
    plan: dict[int, str]
    text: str
    prediction: Prediction | None

    def to_dict(self) -> dict:
        return {
            "plan": {str(k): v for k, v in sorted(self.plan.items())},
            "text": self.text,
            "prediction": None if self.prediction is None else self.prediction.to_dict(),
        }


@dataclass
class AttackOutcome:
    original: str
    adversarial: str
    success: bool
    queries: int
    mode: str
    original_prediction: Prediction
    final_prediction: Prediction | None
    similarity: float
    perturbed: list[int]
    trace: list[Trial]
    errored: bool = False
    error: str | None = None
    reference: str | None = None
    pseudo_reference: bool = False
    rd_bleu: float | None = None
    rd_chrf: float | None = None
    id: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "mode": self.mode,
            "original": self.original,
            "adversarial": self.adversarial,
            "success": self.success,
            "errored": self.errored,
            "error": self.error,
            "queries": self.queries,
            "original_prediction": self.original_prediction.to_dict(),
            "final_prediction": None if self.final_prediction is None else self.final_prediction.to_dict(),
            "similarity": self.similarity,
            "perturbed": self.perturbed,
            "reference": self.reference,
            "pseudo_reference": self.pseudo_reference,
            "rd_bleu": self.rd_bleu,
            "rd_chrf": self.rd_chrf,
            "trace": [t.to_dict() for t in self.trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


def success_predicate(kind: str, original: Prediction, candidate: Prediction, reference: str | None = None,
                      tau: float = 0.5, allow_pseudo_reference: bool = True) -> bool:
    """Did the candidate prediction count as a successful attack?

    Classification: the label changed.  Translation: the relative chrF drop of
    the candidate against the reference reaches ``tau``.  Without a reference
    the original translation stands in for it, if permitted.  A zero-scoring
    original translation can never yield a success.
    """
    if original.kind != kind or candidate.kind != kind:
        raise ValueError(f"prediction kinds do not match {kind!r}")
    if kind == CLASSIFICATION:
        return original.label != candidate.label
    if reference is None:
        if not allow_pseudo_reference:
            raise MissingReference("translation success needs a reference")
        reference = original.text
    if not reference.strip():
        return False
    try:
        return rd_chrf(reference, original.text, candidate.text) >= tau
    except ZeroBaseline:
        return False


def _plan_for(word: str, table: GlyphTable, families: Sequence[str]) -> str | None:
    for fam in families:
        if table.covers(word, fam):
            return fam
    return None


def _finish(outcome: AttackOutcome, embedder: Embedder) -> AttackOutcome:
    outcome.similarity = similarity(embedder, outcome.original, outcome.adversarial)
    pred = outcome.final_prediction
    if pred is not None and pred.kind == TRANSLATION and not outcome.errored:
        ref = outcome.reference if outcome.reference is not None else outcome.original_prediction.text
        outcome.pseudo_reference = outcome.reference is None
        if ref and ref.strip():
            for name, fn in (("rd_bleu", rd_bleu), ("rd_chrf", rd_chrf)):
                try:
                    setattr(outcome, name, fn(ref, outcome.original_prediction.text, pred.text))
                except ZeroBaseline:
                    setattr(outcome, name, None)
    return outcome


def _check_sentence(sentence: SentenceView):
    if len(sentence) == 0:
        raise ValueError("cannot attack a sentence with no words")


def sad_strong(target: TargetModel, sentence: SentenceView, table: GlyphTable, config: AttackConfig,
               original: Prediction, reference: str | None = None,
               embedder: Embedder | None = None) -> AttackOutcome:
    """Restyle every word with its first covering family and query once."""
    _check_sentence(sentence)
    embedder = embedder or default_embedder()
    plan = {}
    for i, word in enumerate(sentence.words):
        fam = _plan_for(word, table, config.family_order)
        if fam is not None:
            plan[i] = fam
    text = substitute(sentence, SubstitutionPlan(plan), table)
    outcome = AttackOutcome(
        original=sentence.text, adversarial=text, success=False, queries=0, mode="strong",
        original_prediction=original, final_prediction=None, similarity=0.0,
        perturbed=sorted(plan), trace=[], reference=reference,
    )
    start = target.query_count
    try:
        pred = target.query(text)
    except TargetUnavailable as exc:
        outcome.errored, outcome.error = True, str(exc)
        outcome.queries = target.query_count - start
        outcome.trace.append(Trial(plan, text, None))
        return _finish(outcome, embedder)
    outcome.queries = target.query_count - start
    outcome.trace.append(Trial(plan, text, pred))
    outcome.final_prediction = pred
    outcome.success = text != sentence.text and success_predicate(
        target.kind, original, pred, reference, config.tau, config.allow_pseudo_reference)
    return _finish(outcome, embedder)


def sad_light(target: TargetModel, sentence: SentenceView, table: GlyphTable, config: AttackConfig,
              original: Prediction, reference: str | None = None, embedder: Embedder | None = None,
              tokenizer: Tokenizer | None = None) -> AttackOutcome:
    """Grow the restyled word set one ranked word at a time.

    For the newly added word each family in ``family_order`` that covers it
    costs one query; once they are all spent the word keeps its first covering
    family and the next word joins.  Words nothing can restyle are skipped for
    free.  Returns the first success, otherwise the last trial.
    """
    _check_sentence(sentence)
    embedder = embedder or default_embedder()
    tokenizer = tokenizer or target.declared_tokenizer
    ranked = rank_words(sentence, embedder, tokenizer, table, config.ranking)
    words = sentence.words

    outcome = AttackOutcome(
        original=sentence.text, adversarial=sentence.text, success=False, queries=0, mode="light",
        original_prediction=original, final_prediction=None, similarity=0.0,
        perturbed=[], trace=[], reference=reference,
    )
    start = target.query_count
    committed: dict[int, str] = {}
    for score in ranked:
        idx = score.word_index
        fams = [f for f in config.family_order if table.covers(words[idx], f)]
        if not fams:
            continue
        for fam in fams:
            if len(outcome.trace) >= config.budget:
                break
            plan = {**committed, idx: fam}
            text = substitute(sentence, SubstitutionPlan(plan), table)
            try:
                pred = target.query(text)
            except TargetUnavailable as exc:
                outcome.trace.append(Trial(plan, text, None))
                outcome.errored, outcome.error = True, str(exc)
                outcome.queries = target.query_count - start
                return _finish(outcome, embedder)
            outcome.trace.append(Trial(plan, text, pred))
            outcome.adversarial, outcome.final_prediction, outcome.perturbed = text, pred, sorted(plan)
            if text != sentence.text and success_predicate(
                    target.kind, original, pred, reference, config.tau, config.allow_pseudo_reference):
                outcome.success = True
                outcome.queries = target.query_count - start
                return _finish(outcome, embedder)
        else:
            committed[idx] = fams[0]
            continue
        break
    outcome.queries = target.query_count - start
    return _finish(outcome, embedder)


def run_attack(target: TargetModel, text: str, config: AttackConfig | None = None,
               table: GlyphTable | None = None, reference: str | None = None,
               original: Prediction | None = None, embedder: Embedder | None = None,
               tokenizer: Tokenizer | None = None, record_id: str | None = None) -> AttackOutcome:
    """Harness entry point: fetch the clean prediction (unless given), then attack.

    The clean query is not part of the reported query count.  Transport
    failures on the clean query produce an errored outcome.
    """
    config = config or AttackConfig()
    table = table or build_default_tables()
    embedder = embedder or default_embedder()
    sentence = SentenceView.from_text(text)
    _check_sentence(sentence)
    if original is None:
        try:
            original = target.query(text)
        except TargetUnavailable as exc:
            placeholder = Prediction(label="?") if target.kind == CLASSIFICATION else Prediction(text="")
            return AttackOutcome(
                original=text, adversarial=text, success=False, queries=0, mode=config.mode,
                original_prediction=placeholder, final_prediction=None, similarity=1.0, perturbed=[],
                trace=[], errored=True, error=str(exc), reference=reference, id=record_id,
            )
    if config.mode == "strong":
        outcome = sad_strong(target, sentence, table, config, original, reference, embedder)
    else:
        outcome = sad_light(target, sentence, table, config, original, reference, embedder, tokenizer)
    outcome.id = record_id
    return outcome

