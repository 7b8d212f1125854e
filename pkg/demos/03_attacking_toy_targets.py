"""Strong and light attacks against the bundled toy targets, with and without
the normalization defense."""

from sadattack.attack import AttackConfig, run_attack
from sadattack.corpus import bundled_corpus
from sadattack.metrics import aggregate
from sadattack.targets import NormalizationDefense, bundled_lexicon_classifier, bundled_translator

sentiment = bundled_corpus("sentiment")
translation = bundled_corpus("translation")
classifier = bundled_lexicon_classifier()
translator = bundled_translator()

# %% One sample in detail
out = run_attack(classifier, sentiment[0].text, AttackConfig(mode="light"))
print(out.original, "->", out.adversarial)
print("label", out.original_prediction.label, "->", out.final_prediction.label, f"after {out.queries} queries")

# %% Corpus tables
runs = {
    "classifier / strong": (classifier, sentiment, "strong"),
    "classifier / light": (classifier, sentiment, "light"),
    "defended / strong": (NormalizationDefense(classifier), sentiment, "strong"),
    "translator / strong": (translator, translation, "strong"),
    "translator / light": (translator, translation, "light"),
}
for name, (target, corpus, mode) in runs.items():
    outcomes = [run_attack(target.session(), r.text, AttackConfig(mode=mode), reference=r.reference)
                for r in corpus]
    print(f"\n{name}")
    print(aggregate(outcomes).render_table(), end="")
