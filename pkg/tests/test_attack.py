import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from sadattack import attack as attack_mod
from sadattack.attack import (CLASSIFICATION, TRANSLATION, AttackConfig, Prediction, TargetModel, run_attack,
                              sad_light, sad_strong, success_predicate)
from sadattack.corpus import bundled_corpus
from sadattack.errors import MissingReference, TargetUnavailable
from sadattack.glyphs import build_default_tables, normalize
from sadattack.targets import NormalizationDefense, bundled_lexicon_classifier, bundled_translator
from sadattack.text import SentenceView
from tests.conftest import ConstantTarget, StyledCountTarget

POS, NEG = Prediction(label="positive"), Prediction(label="negative")
LONG = "the plot was slow but the cast made every scene feel warm and alive"


def test_prediction_validation():
    with pytest.raises(ValueError):
        Prediction()
    with pytest.raises(ValueError):
        Prediction(label="a", text="b")
    with pytest.raises(ValueError):
        Prediction(label="a", confidence=1.5)
    p = Prediction(label="x", confidence=0.25)
    assert Prediction.from_dict(p.to_dict()) == p and p.kind == CLASSIFICATION
    assert Prediction(text="").kind == TRANSLATION


def test_config_round_trip_and_validation():
    cfg = AttackConfig(mode="strong", budget=7, family_order=("Fullwidth",), tau=0.3)
    assert AttackConfig.from_json(json.dumps(cfg.to_dict())) == cfg
    for bad in ({"mode": "medium"}, {"budget": 0}, {"families": []}, {"tau": 0}, {"bogus": 1}):
        with pytest.raises(ValueError):
            AttackConfig.from_dict(bad)


def test_success_predicate_classification():
    assert success_predicate(CLASSIFICATION, POS, POS) is False
    assert success_predicate(CLASSIFICATION, POS, NEG) is True
    with pytest.raises(ValueError):
        success_predicate(CLASSIFICATION, POS, Prediction(text="x"))


def test_success_predicate_threshold(monkeypatch):
    orig, cand = Prediction(text="a"), Prediction(text="b")
    monkeypatch.setattr(attack_mod, "rd_chrf", lambda ref, o, c: 0.62)
    assert success_predicate(TRANSLATION, orig, cand, "ref", tau=0.5)
    monkeypatch.setattr(attack_mod, "rd_chrf", lambda ref, o, c: 0.49)
    assert not success_predicate(TRANSLATION, orig, cand, "ref", tau=0.5)


def test_success_predicate_references():
    orig, cand = Prediction(text="le chat"), Prediction(text="xyz")
    assert success_predicate(TRANSLATION, orig, cand, None)
    with pytest.raises(MissingReference):
        success_predicate(TRANSLATION, orig, cand, None, allow_pseudo_reference=False)
    # the original translation shares nothing with the reference: zero baseline, never a success
    assert not success_predicate(TRANSLATION, Prediction(text="qqq"), cand, "le chat")


def test_strong_flips_lexicon_classifier(table):
    clf = bundled_lexicon_classifier()
    text = "the movie was wonderful"
    original = clf.query(text)
    assert original.label == "positive"
    out = sad_strong(clf, SentenceView.from_text(text), table, AttackConfig(mode="strong"), original)
    assert out.perturbed == [0, 1, 2, 3]
    assert out.queries == 1 and out.success
    assert out.final_prediction.label == "neutral"


def test_strong_rejects_empty_sentence(table):
    with pytest.raises(ValueError):
        sad_strong(ConstantTarget(), SentenceView.from_text("   "), table, AttackConfig(), POS)


def test_strong_breaks_dictionary_translation():
    rec = bundled_corpus("translation")[0]
    out = run_attack(bundled_translator(), rec.text, AttackConfig(mode="strong"), reference=rec.reference)
    assert out.success and out.queries == 1
    assert out.rd_chrf >= 0.5 and out.pseudo_reference is False


def test_light_succeeds_on_first_word(table):
    clf = bundled_lexicon_classifier()
    out = run_attack(clf, "the movie was wonderful", AttackConfig())
    assert out.success and out.queries == 1
    assert out.perturbed == [3]


def test_light_budget_one_needing_two_words(table):
    target = StyledCountTarget(2, table)
    out = run_attack(target, "good solid fun", AttackConfig(budget=1))
    assert not out.success and out.queries == 1 and len(out.trace) == 1


def test_light_needs_second_word(table):
    target = StyledCountTarget(2, table)
    out = run_attack(target, "good solid fun", AttackConfig())
    assert out.success
    # three families for the first word, then one for the second
    assert out.queries == 4 and len(out.perturbed) == 2


def test_unbeatable_target_spends_whole_budget(table):
    target = NormalizationDefense(ConstantTarget(), table)
    out = run_attack(target, LONG, AttackConfig(budget=25))
    assert not out.success and out.queries == 25 and len(out.trace) == 25


def test_unbeatable_short_sentence_runs_out_of_trials(table):
    out = run_attack(ConstantTarget(), "two words", AttackConfig(budget=25))
    assert not out.success and out.queries == 6


def test_harness_query_not_charged():
    target = ConstantTarget()
    out = run_attack(target, "one two three", AttackConfig(mode="strong"))
    assert out.queries == 1 and target.query_count == 2


class Flaky(TargetModel):
    def __init__(self, fail_after):
        super().__init__()
        self.fail_after = fail_after

    def _predict(self, text):
        if self.query_count > self.fail_after:
            raise TargetUnavailable("down")
        return POS


def test_transport_failure_marks_errored():
    out = run_attack(Flaky(1), "one two three", AttackConfig())
    assert out.errored and not out.success and out.queries == 1
    out = run_attack(Flaky(1), "one two three", AttackConfig(mode="strong"))
    assert out.errored and out.queries == 1
    out = run_attack(Flaky(0), "one two three", AttackConfig())
    assert out.errored and out.queries == 0


def test_success_requires_a_change(table):
    class Always(TargetModel):
        def _predict(self, text):
            return Prediction(label=str(self.query_count))
    out = run_attack(Always(), "!!! ???", AttackConfig(mode="strong"))
    assert out.adversarial == out.original and not out.success


def test_punctuation_only_sentence_light(table):
    out = run_attack(ConstantTarget(), "?!", AttackConfig())
    assert out.queries == 0 and not out.success


class HashTarget(TargetModel):
    """Deterministic pseudo-random labels keyed by the input text."""

    def _predict(self, text):
        return Prediction(label=random.Random(text).choice(["a", "a", "a", "b"]))


WORDS = sorted({w for r in bundled_corpus("sentiment") for w in r.text.split()}) + ["42", "!", "x7"]


def canonical(text, outcome, table):
    view = SentenceView.from_text(text)
    fams = outcome.trace[-1].plan if outcome.trace else {}
    return view.replace_words({i: w.lower() for i, w in enumerate(view.words)
                               if i in fams and table.is_single_case(fams[i])})


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(WORDS), min_size=1, max_size=12), st.integers(1, 30),
       st.sampled_from(["light", "strong"]))
def test_attack_laws(words, budget, mode):
    table = build_default_tables()
    text = " ".join(words)
    target = HashTarget()
    out = run_attack(target, text, AttackConfig(mode=mode, budget=budget))
    assert out.queries == len(out.trace) == target.query_count - 1
    if mode == "strong":
        assert out.queries == 1
    else:
        assert out.queries <= budget
    if out.success:
        assert out.adversarial != text
    assert normalize(out.adversarial, table)[0] == canonical(text, out, table)
    plans = [set(t.plan) for t in out.trace]
    assert all(a <= b for a, b in zip(plans, plans[1:]))
    assert all(len(b - a) <= 1 for a, b in zip(plans, plans[1:]))


def test_reporting_is_reproducible():
    rec = bundled_corpus("translation")[3]
    runs = [run_attack(bundled_translator(), rec.text, AttackConfig(), reference=rec.reference, record_id=rec.id)
            for _ in range(2)]
    assert runs[0].to_json() == runs[1].to_json()
    data = json.loads(runs[0].to_json())
    assert data["id"] == rec.id and data["trace"][0]["text"]


def test_session_counters_are_independent():
    base = ConstantTarget()
    a, b = base.session(), base.session()
    a.query("x")
    assert (a.query_count, b.query_count, base.query_count) == (1, 0, 0)


def test_light_uses_declared_tokenizer(monkeypatch, table):
    seen = []
    real = attack_mod.rank_words

    def spy(sentence, embedder, tokenizer, *args, **kw):
        seen.append(tokenizer)
        return real(sentence, embedder, tokenizer, *args, **kw)

    monkeypatch.setattr(attack_mod, "rank_words", spy)
    clf = bundled_lexicon_classifier()
    run_attack(clf, "a fine film", AttackConfig())
    assert seen == [clf.vocab]
