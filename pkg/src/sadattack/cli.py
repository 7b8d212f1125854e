"""Command-line front end.

    sadattack stylize --family RegionalIndicator --words 3 "how many days"
    sadattack rank "How many DAYS are there in a WEEK"
    sadattack attack --corpus sentiment --target lexicon --mode strong
    sadattack tokens --tokenizer bpe "week"
    sadattack eval outcomes.jsonl
    sadattack tables

Data goes to standard output, diagnostics to standard error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .attack import AttackConfig, TargetModel, run_attack
from .corpus import read_corpus
from .errors import InvalidPlan, SadError
from .glyphs import GlyphTable, SubstitutionPlan, load_table, substitute
from .metrics import aggregate
from .ranking import RankingConfig, default_embedder, rank_words
from .targets import (HttpTarget, HttpTargetSpec, NormalizationDefense, bundled_lexicon_classifier,
                      bundled_translator)
from .text import SentenceView
from .tokenizers import bundled_bpe, bundled_wordpiece

OVERRIDES_ENV = "SAD_GLYPH_OVERRIDES"


def _table() -> GlyphTable:
    return load_table(os.environ.get(OVERRIDES_ENV) or None)


def _read_text(args) -> str:
    if args.file:
        return Path(args.file).read_text(encoding="utf-8").rstrip("\n")
    if args.text is None:
        return sys.stdin.read().rstrip("\n")
    return args.text


def _load_config(args) -> dict:
    if not getattr(args, "config", None):
        return {}
    path = Path(args.config)
    return json.loads(path.read_text(encoding="utf-8") if path.exists() else args.config)


def _parse_words(spec: str, n: int) -> list[int]:
    if spec == "all":
        return list(range(n))
    if spec == "none":
        return []
    out = []
    for part in spec.split(","):
        i = int(part)
        if not 1 <= i <= n:
            raise InvalidPlan(f"word {i} out of range 1..{n}")
        out.append(i - 1)
    return out


def cmd_stylize(args) -> int:
    table = _table()
    if args.family not in table.groups:
        print(f"error: unknown font family {args.family!r}; known: {', '.join(table.families)}",
              file=sys.stderr)
        return 2
    text = _read_text(args)
    view = SentenceView.from_text(text)
    try:
        words = _parse_words(args.words, len(view))
        print(substitute(view, SubstitutionPlan.uniform(words, args.family), table))
    except (InvalidPlan, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _ranking_config(args) -> RankingConfig:
    data = _load_config(args)
    data = data.get("ranking", data)
    for key in ("alpha", "beta", "m"):
        if getattr(args, key, None) is not None:
            data[key] = getattr(args, key)
    if args.seed is not None:
        data["seed"] = args.seed
    return RankingConfig.from_dict(data)


def _tokenizer(name: str):
    return bundled_wordpiece() if name == "wordpiece" else bundled_bpe()


def cmd_rank(args) -> int:
    config = _ranking_config(args)
    view = SentenceView.from_text(_read_text(args))
    if len(view) == 0:
        print("error: no words to rank", file=sys.stderr)
        return 1
    scores = rank_words(view, default_embedder(), _tokenizer(args.tokenizer), _table(), config)
    print(f"# alpha={config.alpha} beta={config.beta} m={config.m} seed={config.seed} tokenizer={args.tokenizer}")
    width = max(len("word"), *(len(s.word) for s in scores))
    print(f"{'rank':>4}  {'idx':>3}  {'word':<{width}}  {'AIS':>8}  {'TIS':>8}  {'V':>8}")
    for r, s in enumerate(scores, 1):
        print(f"{r:>4}  {s.word_index + 1:>3}  {s.word:<{width}}  {s.ais:8.4f}  {s.tis:8.4f}  {s.v:8.4f}")
    return 0


def build_target(name: str, table: GlyphTable) -> TargetModel:
    """``lexicon``, ``dictionary``, either with a ``+defense`` suffix, or a path
    to an HTTP target spec (JSON)."""
    base, _, suffix = name.partition("+")
    if base == "lexicon":
        target: TargetModel = bundled_lexicon_classifier()
    elif base == "dictionary":
        target = bundled_translator()
    else:
        target = HttpTarget(HttpTargetSpec.from_json(Path(base).read_text(encoding="utf-8")))
    if suffix == "defense":
        target = NormalizationDefense(target, table)
    elif suffix:
        raise ValueError(f"unknown target suffix {suffix!r}")
    return target


def _attack_config(args) -> AttackConfig:
    data = _load_config(args)
    if args.mode:
        data["mode"] = args.mode
    if args.budget is not None:
        data["budget"] = args.budget
    if args.tau is not None:
        data["tau"] = args.tau
    if args.families:
        data["families"] = args.families.split(",")
    ranking = dict(data.get("ranking", {}))
    if args.seed is not None:
        ranking["seed"] = args.seed
    if ranking:
        data["ranking"] = ranking
    return AttackConfig.from_dict(data)


def _run_record(target: TargetModel, record, config, table, embedder) -> dict:
    try:
        out = run_attack(target.session(), record.text, config, table, reference=record.reference,
                         embedder=embedder, record_id=record.id)
        return out.to_dict()
    except (SadError, ValueError) as exc:
        return {"id": record.id, "errored": True, "error": f"{type(exc).__name__}: {exc}"}


def cmd_attack(args) -> int:
    table = _table()
    try:
        config = _attack_config(args)
        target = build_target(args.target, table)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    embedder = default_embedder()
    jobs = args.jobs if target.concurrent else 1
    if args.jobs > 1 and not target.concurrent:
        print("warning: target does not allow concurrent sessions; running with --jobs 1", file=sys.stderr)

    digests = []
    records = read_corpus(args.corpus)
    try:
        if jobs <= 1:
            for rec in records:
                d = _run_record(target, rec, config, table, embedder)
                digests.append(_digest(d))
                print(json.dumps(d, ensure_ascii=False), flush=True)
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                while chunk := list(itertools.islice(records, jobs * 4)):
                    for d in pool.map(lambda r: _run_record(target, r, config, table, embedder), chunk):
                        digests.append(_digest(d))
                        print(json.dumps(d, ensure_ascii=False), flush=True)
    except (ValueError, OSError) as exc:
        print(f"error: corpus: {exc}", file=sys.stderr)
        return 1
    if not digests:
        print("error: corpus is empty", file=sys.stderr)
        return 1
    report = aggregate(digests)
    print(json.dumps({"report": report.to_dict()}, sort_keys=True))
    if args.table:
        print(report.render_table(), file=sys.stderr, end="")
    return 0 if report.evaluated >= 1 else 1


_DIGEST_KEYS = ("success", "errored", "queries", "similarity", "rd_bleu", "rd_chrf")


def _digest(d: dict) -> dict:
    return {k: d.get(k) for k in _DIGEST_KEYS}


def cmd_tokens(args) -> int:
    text = _read_text(args)
    tok = _tokenizer(args.tokenizer).tokenize(text)
    for t, i, (a, b) in zip(tok.tokens, tok.ids, tok.spans):
        print(f"{t}\t{i}\t{a}\t{b}")
    return 0


def cmd_eval(args) -> int:
    digests = []
    with open(args.outcomes, encoding="utf-8") if args.outcomes != "-" else sys.stdin as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                if "report" in d:
                    continue
                if not d.get("errored"):
                    for key in ("success", "queries", "similarity"):
                        if key not in d:
                            raise ValueError(f"missing key {key!r}")
                digests.append(_digest(d))
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                print(f"error: line {lineno}: {exc}", file=sys.stderr)
                return 1
    if not digests:
        print("error: no outcomes", file=sys.stderr)
        return 1
    report = aggregate(digests)
    if args.format == "table":
        print(report.render_table(), end="")
    else:
        print(json.dumps({"report": report.to_dict()}, sort_keys=True))
    return 0


def cmd_tables(args) -> int:
    sys.stdout.write(_table().dump())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sadattack", description="Stylistic-font adversarial attacks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def shared(p, text=True):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", help="JSON document or path to one")
        p.add_argument("--jobs", type=int, default=1)
        if text:
            p.add_argument("text", nargs="?")
            p.add_argument("--file")

    p = sub.add_parser("stylize", help="restyle selected words")
    shared(p)
    p.add_argument("--family", required=True)
    p.add_argument("--words", default="all", help="'all', 'none' or 1-based indices like 1,3")
    p.set_defaults(func=cmd_stylize)

    p = sub.add_parser("rank", help="vulnerability scores per word")
    shared(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--tokenizer", choices=["bpe", "wordpiece"], default="bpe")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("attack", help="attack every record of a corpus")
    shared(p, text=False)
    p.add_argument("--corpus", required=True, help="JSONL path, or 'sentiment' / 'translation'")
    p.add_argument("--target", default="lexicon")
    p.add_argument("--mode", choices=["light", "strong"])
    p.add_argument("--budget", type=int)
    p.add_argument("--tau", type=float)
    p.add_argument("--families", help="comma-separated family order")
    p.add_argument("--table", action="store_true", help="also print a summary table to stderr")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("tokens", help="show a tokenization with byte spans")
    shared(p)
    p.add_argument("--tokenizer", choices=["bpe", "wordpiece"], default="bpe")
    p.set_defaults(func=cmd_tokens)

    p = sub.add_parser("eval", help="recompute the report from outcome JSONL")
    shared(p, text=False)
    p.add_argument("outcomes")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("tables", help="dump the glyph tables")
    shared(p, text=False)
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
