"""Regenerate the bundled data files under src/sadattack/data/.

Run from the repository root:

    python scripts/build_data.py

Everything is derived from the word lists below with a fixed seed, so the
output is byte-identical across runs.  The BPE trainer here is development
tooling only; the package itself just loads the merges.
"""

import collections
import json
import random
from pathlib import Path

from sadattack.text import pretokenize
from sadattack.tokenizers import BpeModel

OUT = Path(__file__).resolve().parents[1] / "src" / "sadattack" / "data"
SEED = 20240917
N_MERGES = 1000

POSITIVE = {
    "wonderful": 2.0, "great": 1.5, "excellent": 2.0, "brilliant": 2.0, "delightful": 1.5,
    "superb": 2.0, "charming": 1.0, "moving": 1.0, "beautiful": 1.5, "fantastic": 2.0,
    "enjoyable": 1.0, "clever": 1.0, "funny": 1.0, "gripping": 1.5, "stunning": 1.5,
    "touching": 1.0, "fresh": 0.5, "memorable": 1.0, "masterful": 2.0, "heartfelt": 1.0,
    "lovely": 1.5, "engaging": 1.0, "inspiring": 1.5, "powerful": 1.0, "impressive": 1.5,
    "solid": 0.5, "witty": 1.0, "good": 1.0, "amazing": 2.0, "perfect": 2.0,
    "loved": 2.0, "enjoyed": 1.5, "adored": 2.0, "recommend": 1.0, "best": 1.5,
}
NEGATIVE = {
    "terrible": -2.0, "awful": -2.0, "boring": -1.5, "dull": -1.5, "horrible": -2.0,
    "bad": -1.0, "weak": -1.0, "tedious": -1.5, "clumsy": -1.0, "bland": -1.0,
    "painful": -1.5, "dreadful": -2.0, "mediocre": -1.0, "poor": -1.0, "forgettable": -1.0,
    "lifeless": -1.5, "annoying": -1.5, "messy": -1.0, "predictable": -0.5, "disappointing": -1.5,
    "pointless": -1.5, "stale": -1.0, "shallow": -1.0, "flat": -0.5, "ugly": -1.0,
    "tiresome": -1.5, "worst": -2.0, "lousy": -1.5, "silly": -0.5, "hated": -2.0,
    "disliked": -1.5, "regret": -1.0, "waste": -1.5,
}
NOUNS = [
    "movie", "film", "story", "plot", "acting", "cast", "script", "ending", "soundtrack",
    "score", "dialogue", "direction", "pacing", "sequel", "director", "performance",
    "premise", "finale", "characters", "scenes", "music", "visuals", "comedy", "drama",
    "thriller", "documentary", "show", "episode", "series", "book", "novel", "animation",
]
INTENS = ["really", "truly", "quite", "very", "so", "simply", "absolutely", "rather", "just", "fairly"]
POS_ADJ = [w for w in POSITIVE if w not in {"loved", "enjoyed", "adored", "recommend", "best"}]
NEG_ADJ = [w for w in NEGATIVE if w not in {"hated", "disliked", "regret", "waste"}]

SENT_TEMPLATES = [
    "the {n} was {i} {a} .",
    "what a {a} {n} !",
    "this {n} is {a} and {a2} .",
    "my friends found the {n} {a} .",
    "honestly , the {n} felt {i} {a} .",
    "a {a} {n} from start to finish .",
    "the {n} and the {n2} were both {a} .",
    "{i} {a} {n} with a {a2} {n2} .",
    "we thought the {n} was {a} .",
    "The {n} is {i} {a} , and the {n2} is {a2} .",
    "overall a {i} {a} {n} .",
    "it has a {a} {n} and {a2} {n2} .",
]
POS_VERB_TEMPLATES = [
    "we {v} this {n} , it was {a} .",
    "you will {v2} the {a} {n} .",
]
NEG_VERB_TEMPLATES = [
    "we {v} this {n} , it was {a} .",
    "this {n} is a {w} of time , {a} and {a2} .",
]

# Toy English -> French dictionary: one target word per source word, ASCII only.
DICTIONARY = {
    "the": "le", "a": "un", "an": "un", "this": "ce", "that": "ca", "my": "mon", "your": "ton",
    "our": "notre", "their": "leur", "his": "son", "her": "sa",
    "cat": "chat", "dog": "chien", "house": "maison", "car": "voiture", "book": "livre",
    "city": "ville", "river": "riviere", "tree": "arbre", "garden": "jardin", "school": "ecole",
    "teacher": "professeur", "student": "etudiant", "friend": "ami", "mother": "mere",
    "father": "pere", "child": "enfant", "bread": "pain", "water": "eau", "wine": "vin",
    "coffee": "cafe", "table": "table", "chair": "chaise", "window": "fenetre", "door": "porte",
    "street": "rue", "train": "train", "station": "gare", "morning": "matin", "evening": "soir",
    "night": "nuit", "day": "jour", "days": "jours", "week": "semaine", "weeks": "semaines",
    "year": "annee", "month": "mois", "hour": "heure", "hours": "heures", "time": "temps",
    "letter": "lettre", "music": "musique", "film": "film", "song": "chanson", "sea": "mer",
    "sun": "soleil", "moon": "lune", "rain": "pluie", "snow": "neige", "bird": "oiseau",
    "is": "est", "are": "sont", "was": "etait", "were": "etaient", "has": "a", "have": "ont",
    "eats": "mange", "drinks": "boit", "reads": "lit", "writes": "ecrit", "sees": "voit",
    "likes": "aime", "opens": "ouvre", "closes": "ferme", "takes": "prend", "finds": "trouve",
    "big": "grand", "small": "petit", "red": "rouge", "blue": "bleu", "green": "vert",
    "white": "blanc", "black": "noir", "old": "vieux", "new": "nouveau", "beautiful": "beau",
    "happy": "heureux", "sad": "triste", "cold": "froid", "hot": "chaud", "long": "long",
    "quiet": "calme", "early": "tot", "late": "tard",
    "in": "dans", "on": "sur", "under": "sous", "with": "avec", "near": "pres", "for": "pour",
    "from": "de", "to": "a", "and": "et", "or": "ou", "but": "mais", "very": "tres",
    "how": "comment", "many": "combien", "there": "la", "here": "ici", "today": "aujourdhui",
    "tomorrow": "demain", "every": "chaque", "always": "toujours", "never": "jamais",
    "we": "nous", "they": "ils", "she": "elle", "he": "il", "you": "vous",
}
TR_NOUNS = [
    "cat", "dog", "house", "car", "book", "city", "river", "tree", "garden", "school", "teacher",
    "student", "friend", "mother", "father", "child", "bread", "water", "wine", "coffee", "table",
    "chair", "window", "door", "street", "train", "station", "letter", "song", "bird",
]
TR_ADJ = ["big", "small", "red", "blue", "green", "white", "black", "old", "new", "beautiful",
          "happy", "sad", "cold", "hot", "long", "quiet"]
TR_VERBS = ["eats", "drinks", "reads", "writes", "sees", "likes", "opens", "closes", "takes", "finds"]
TR_DET = ["the", "a", "my", "your", "our", "their", "his", "her", "this"]
TR_PREP = ["in", "on", "under", "with", "near"]
TR_TIME = ["today", "tomorrow", "every morning", "every evening", "every night", "every day"]
TR_TEMPLATES = [
    "{d} {adj} {n} is {p} {d2} {n2}",
    "{d} {n} {v} {d2} {adj} {n2} {t}",
    "{d} {n} and {d2} {n2} are {adj}",
    "{pro} {v} {d} {n} {p} {d2} {n2}",
    "{d} {n} was very {adj} {t}",
    "how many {pl} are there {p} {d} {n2}",
]

EXTRA_WORDS = (
    "how many days are there in a week what when where who why which time year people way "
    "thing man woman life child world school state family student group country problem hand "
    "part place case number point government company system program question work night home "
    "water room mother area money story fact month lot right study book eye job word business "
    "issue side kind head house service friend father power hour game line end member law car "
    "city community name president team minute idea kid body information back parent face others "
    "level office door health person art war history party result change morning reason research "
    "girl guy moment air teacher force education about after again against almost also always "
    "among another answer around because become before begin behind believe between both bring "
    "build call carry certain children close color common complete could country cover cross "
    "different during early earth enough even example family farm feel few field figure final "
    "follow food foot form found four friend full general give government ground grow half happen "
    "heard help high hold horse important inside island keep knowledge language large laugh learn "
    "leave light listen little machine maybe measure might minute mountain music nature nothing "
    "notice object often order paper pattern picture piece plane plant please possible product "
    "provide pull question quickly reach ready record remember rest river round science second "
    "several should simple since slowly something sometimes sound special stand start stood strong "
    "surface system think though thought thousand through together toward travel true understand "
    "until usually voice weather whole without wonder would write yellow young"
).split()


def build_sentiment(rng):
    records = []
    seen = set()
    while len(records) < 200:
        polarity = "positive" if len(records) % 2 == 0 else "negative"
        adjs = POS_ADJ if polarity == "positive" else NEG_ADJ
        pool = SENT_TEMPLATES + (POS_VERB_TEMPLATES if polarity == "positive" else NEG_VERB_TEMPLATES)
        tpl = rng.choice(pool)
        a, a2 = rng.sample(adjs, 2)
        n, n2 = rng.sample(NOUNS, 2)
        fill = dict(a=a, a2=a2, n=n, n2=n2, i=rng.choice(INTENS))
        if polarity == "positive":
            fill.update(v=rng.choice(["loved", "enjoyed", "adored"]), v2="recommend")
        else:
            fill.update(v=rng.choice(["hated", "disliked"]), w="waste")
        text = tpl.format(**fill)
        if text in seen:
            continue
        seen.add(text)
        records.append({"id": f"sst-{len(records):03d}", "text": text, "label": polarity})
    return records


def _tr(word):
    if word in DICTIONARY:
        return DICTIONARY[word]
    raise KeyError(word)


def build_translation(rng):
    records = []
    seen = set()
    records.append(("how many days are there in a week", None))
    while len(records) < 100:
        tpl = rng.choice(TR_TEMPLATES)
        d, d2 = rng.choice(TR_DET), rng.choice(TR_DET)
        n, n2 = rng.sample(TR_NOUNS, 2)
        text = tpl.format(
            d=d, d2=d2, n=n, n2=n2, adj=rng.choice(TR_ADJ), p=rng.choice(TR_PREP),
            v=rng.choice(TR_VERBS), t=rng.choice(TR_TIME), pro=rng.choice(["she", "he"]),
            pl=rng.choice(["days", "weeks", "hours"]),
        )
        if text in seen:
            continue
        seen.add(text)
        records.append((text, None))
    out = []
    for i, (text, _) in enumerate(records):
        words = [text[a:b] for a, b in pretokenize(text)]
        ok = all(w.lower() in DICTIONARY for w in words)
        if not ok:
            missing = [w for w in words if w.lower() not in DICTIONARY]
            raise SystemExit(f"untranslatable words {missing} in {text!r}")
        ref = " ".join(_tr(w.lower()) for w in words)
        out.append({"id": f"opus-{i:03d}", "text": text, "reference": ref})
    return out


def train_bpe(texts, n_merges):
    freqs = collections.Counter()
    for t in texts:
        for a, b in pretokenize(t):
            freqs[t[a:b].encode("utf-8")] += 1
    words = {w: [bytes([c]) for c in w] for w in freqs}
    merges = []
    for _ in range(n_merges):
        pairs = collections.Counter()
        for w, parts in words.items():
            for pair in zip(parts, parts[1:]):
                pairs[pair] += freqs[w]
        if not pairs:
            break
        best = min(pairs, key=lambda p: (-pairs[p], p))
        merges.append(best)
        left, right = best
        for w, parts in words.items():
            merged, i = [], 0
            while i < len(parts):
                if i + 1 < len(parts) and parts[i] == left and parts[i + 1] == right:
                    merged.append(left + right)
                    i += 2
                else:
                    merged.append(parts[i])
                    i += 1
            words[w] = merged
    return BpeModel(tuple(merges))


def build_wordpiece(texts, bpe):
    specials = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    chars = [chr(c) for c in range(0x21, 0x7F)]
    lower = [c for c in chars if not c.isupper()]
    tokens = specials + lower + ["##" + c for c in lower if c.isalnum()]
    words = sorted({t[a:b].lower() for t in texts for a, b in pretokenize(t)})
    tokens += words
    pieces = sorted({(a + b).decode("ascii").lower() for a, b in bpe.merges})
    tokens += [p for p in pieces if p.isalnum()]
    tokens += ["##" + p for p in pieces if p.isalnum()]
    for suffix in ["s", "es", "ed", "ing", "ly", "er", "est", "ness", "ful", "less", "ment", "ion"]:
        tokens.append("##" + suffix)
    seen, out = set(), []
    for t in tokens:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def main():
    rng = random.Random(SEED)
    sentiment = build_sentiment(rng)
    translation = build_translation(rng)

    texts = [r["text"] for r in sentiment] + [r["text"] for r in translation]
    texts += [r["reference"] for r in translation] + [" ".join(EXTRA_WORDS)]
    for t in texts:
        t.encode("ascii")
    bpe = train_bpe(texts, N_MERGES)
    vocab = build_wordpiece(texts + [" ".join(POSITIVE), " ".join(NEGATIVE)], bpe)

    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "sentiment.jsonl", "w", encoding="utf-8") as f:
        for r in sentiment:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")
    with open(OUT / "translation.jsonl", "w", encoding="utf-8") as f:
        for r in translation:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")
    (OUT / "bpe_merges.txt").write_text(bpe.dumps(), encoding="utf-8")
    (OUT / "wordpiece_vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    lex = {**POSITIVE, **NEGATIVE}
    (OUT / "lexicon.tsv").write_text("".join(f"{w}\t{v}\n" for w, v in sorted(lex.items())), encoding="utf-8")
    (OUT / "dictionary.tsv").write_text(
        "".join(f"{s}\t{t}\n" for s, t in sorted(DICTIONARY.items())), encoding="utf-8"
    )
    print(f"sentiment={len(sentiment)} translation={len(translation)} "
          f"merges={len(bpe.merges)} wordpiece={len(vocab)}")


if __name__ == "__main__":
    main()
