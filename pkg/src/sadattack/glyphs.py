"""Stylistic font tables and the character substitution built on them.

A :class:`GlyphTable` maps every (base character, font family) pair to a
styled codepoint sequence that renders like the base character but is a
different codepoint, and maps the styled forms back again.  The built-in
families cover the Mathematical Alphanumeric Symbols block, regional
indicator symbols, circled, squared and parenthesized letters, and the
fullwidth forms.

Example:
    >>> table = build_default_tables()
    >>> view = SentenceView.from_text("how many days")
    >>> substitute(view, SubstitutionPlan({2: "RegionalIndicator"}), table)
    'how many 🇩🇦🇾🇸'
"""

from __future__ import annotations

import enum
import functools
import string
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import GlyphTableError, InvalidPlan
from .text import SentenceView

BASE_CHARS = frozenset(string.ascii_letters + string.digits)


class Group(enum.Enum):
    MATH = "M"
    REGIONAL = "R"
    CIRCLED = "O"
    SQUARED = "Q"
    OTHER = "V"


class FontFamily(str, enum.Enum):
    MathBold = "MathBold"
    MathItalic = "MathItalic"
    MathScript = "MathScript"
    MathDoubleStruck = "MathDoubleStruck"
    MathFraktur = "MathFraktur"
    MathSansBold = "MathSansBold"
    MathMonospace = "MathMonospace"
    RegionalIndicator = "RegionalIndicator"
    CircledLetters = "CircledLetters"
    SquaredLetters = "SquaredLetters"
    Fullwidth = "Fullwidth"
    ParenthesizedLetters = "ParenthesizedLetters"

    def __str__(self) -> str:
        return self.value


FAMILY_GROUP: Mapping[str, Group] = MappingProxyType(
    {
        FontFamily.MathBold: Group.MATH,
        FontFamily.MathItalic: Group.MATH,
        FontFamily.MathScript: Group.MATH,
        FontFamily.MathDoubleStruck: Group.MATH,
        FontFamily.MathFraktur: Group.MATH,
        FontFamily.MathSansBold: Group.MATH,
        FontFamily.MathMonospace: Group.MATH,
        FontFamily.RegionalIndicator: Group.REGIONAL,
        FontFamily.CircledLetters: Group.CIRCLED,
        FontFamily.SquaredLetters: Group.SQUARED,
        FontFamily.Fullwidth: Group.OTHER,
        FontFamily.ParenthesizedLetters: Group.OTHER,
    }
)

MATH_FAMILIES = tuple(f.value for f, g in FAMILY_GROUP.items() if g is Group.MATH)

# (first uppercase, first lowercase, first digit); None where the block has no such run.
_BLOCK_STARTS = {
    FontFamily.MathBold: (0x1D400, 0x1D41A, 0x1D7CE),
    FontFamily.MathItalic: (0x1D434, 0x1D44E, None),
    FontFamily.MathScript: (0x1D49C, 0x1D4B6, None),
    FontFamily.MathFraktur: (0x1D504, 0x1D51E, None),
    FontFamily.MathDoubleStruck: (0x1D538, 0x1D552, 0x1D7D8),
    FontFamily.MathSansBold: (0x1D5D4, 0x1D5EE, 0x1D7EC),
    FontFamily.MathMonospace: (0x1D670, 0x1D68A, 0x1D7F6),
    FontFamily.CircledLetters: (0x24B6, 0x24D0, None),
    FontFamily.Fullwidth: (0xFF21, 0xFF41, 0xFF10),
}

# Single-case families: both cases of a letter share one styled form.
_SINGLE_CASE_STARTS = {
    FontFamily.RegionalIndicator: 0x1F1E6,
    FontFamily.SquaredLetters: 0x1F130,
    FontFamily.ParenthesizedLetters: 0x249C,
}

# Reserved points in the Mathematical Alphanumeric Symbols block; the glyphs
# live in Letterlike Symbols.
_LETTERLIKE_ALIASES = {
    FontFamily.MathItalic: {"h": 0x210E},
    FontFamily.MathScript: {
        "B": 0x212C, "E": 0x2130, "F": 0x2131, "H": 0x210B, "I": 0x2110,
        "L": 0x2112, "M": 0x2133, "R": 0x211B,
        "e": 0x212F, "g": 0x210A, "o": 0x2134,
    },
    FontFamily.MathFraktur: {"C": 0x212D, "H": 0x210C, "I": 0x2111, "R": 0x211C, "Z": 0x2128},
    FontFamily.MathDoubleStruck: {
        "C": 0x2102, "H": 0x210D, "N": 0x2115, "P": 0x2119, "Q": 0x211A,
        "R": 0x211D, "Z": 0x2124,
    },
}


@dataclass(frozen=True)
class GlyphTable:
    """Immutable bidirectional map between base characters and styled forms.

    ``forward`` is keyed by ``(base_char, family_id)``; ``reverse`` maps a styled
    form to ``(base_char, family_id)``, where the base character of a single-case
    family is the lowercase letter.
    """

    forward: Mapping[tuple[str, str], str]
    reverse: Mapping[str, tuple[str, str]]
    coverage: Mapping[str, frozenset[str]]
    groups: Mapping[str, Group]
    _max_form_len: int = field(default=1, repr=False, compare=False)

    @property
    def families(self) -> tuple[str, ...]:
        return tuple(self.groups)

    def style(self, char: str, family: str) -> str | None:
        return self.forward.get((char, family))

    def is_single_case(self, family: str) -> bool:
        cov = self.coverage[family]
        return any(
            c.islower() and c.upper() in cov
            and self.forward[(c, family)] == self.forward[(c.upper(), family)]
            for c in cov
        )

    def covers(self, word: str, family: str) -> bool:
        """True when ``family`` covers every ASCII letter of ``word`` and changes
        at least one of its characters."""
        cov = self.coverage.get(family, frozenset())
        letters_ok = all(c in cov for c in word if c in BASE_CHARS and c.isalpha())
        return letters_ok and any(c in cov for c in word)

    def style_word(self, word: str, family: str) -> str:
        """Restyle one word. Digits without a form in ``family`` stay as they are."""
        cov = self.coverage.get(family)
        if cov is None:
            raise InvalidPlan(f"unknown font family {family!r}")
        out = []
        for c in word:
            if c in cov:
                out.append(self.forward[(c, family)])
            elif c in BASE_CHARS and c.isalpha():
                raise InvalidPlan(f"family {family} has no form for {c!r} in {word!r}")
            else:
                out.append(c)
        return "".join(out)

    def dump(self) -> str:
        """Serialize the table in the override-file format."""
        lines = [f"# {len(self.forward)} mappings across {len(self.groups)} families"]
        for (base, family), form in sorted(self.forward.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            cps = " ".join(f"{ord(ch):04X}" for ch in form)
            lines.append(f"{family} {base} {cps}")
        return "\n".join(lines) + "\n"


def _default_forward() -> dict[tuple[str, str], str]:
    fwd: dict[tuple[str, str], str] = {}
    for fam, (upper, lower, digit) in _BLOCK_STARTS.items():
        aliases = _LETTERLIKE_ALIASES.get(fam, {})
        for i, (uc, lc) in enumerate(zip(string.ascii_uppercase, string.ascii_lowercase)):
            fwd[(uc, fam.value)] = chr(aliases.get(uc, upper + i))
            fwd[(lc, fam.value)] = chr(aliases.get(lc, lower + i))
        if digit is not None:
            for i, d in enumerate(string.digits):
                fwd[(d, fam.value)] = chr(digit + i)
    for fam, start in _SINGLE_CASE_STARTS.items():
        for i, (uc, lc) in enumerate(zip(string.ascii_uppercase, string.ascii_lowercase)):
            fwd[(uc, fam.value)] = fwd[(lc, fam.value)] = chr(start + i)
    return fwd


def _compile(forward: Mapping[tuple[str, str], str], groups: Mapping[str, Group]) -> GlyphTable:
    reverse: dict[str, tuple[str, str]] = {}
    coverage: dict[str, set[str]] = {fam: set() for fam in groups}
    for (base, family), form in forward.items():
        if base not in BASE_CHARS:
            raise GlyphTableError(f"base character {base!r} is outside the standard alphabet")
        if not form or any(ch in BASE_CHARS for ch in form):
            raise GlyphTableError(f"styled form for ({base!r}, {family}) overlaps the standard alphabet")
        coverage[family].add(base)
        prev = reverse.get(form)
        if prev is None:
            reverse[form] = (base, family)
            continue
        prev_base, prev_family = prev
        # Sharing a form is only legal for the two cases of one letter in one family.
        if prev_family != family or prev_base.lower() != base.lower():
            raise GlyphTableError(
                f"styled form {form!r} claimed by ({prev_base!r}, {prev_family}) and ({base!r}, {family})"
            )
        reverse[form] = (base.lower(), family)

    table = GlyphTable(
        forward=MappingProxyType(dict(forward)),
        reverse=MappingProxyType(reverse),
        coverage=MappingProxyType({f: frozenset(c) for f, c in coverage.items()}),
        groups=MappingProxyType(dict(groups)),
        _max_form_len=max((len(k) for k in reverse), default=1),
    )
    for (base, family), form in table.forward.items():
        back, fam = table.reverse[form]
        if fam != family or back not in (base, base.lower()):
            raise GlyphTableError(f"round trip broken for ({base!r}, {family})")
    return table


@functools.lru_cache(maxsize=None)
def build_default_tables() -> GlyphTable:
    """The built-in table: twelve families, total over a-z and A-Z."""
    groups = {f.value: g for f, g in FAMILY_GROUP.items()}
    return _compile(_default_forward(), groups)


def parse_overrides(lines: Iterable[str]) -> list[tuple[str, str, str]]:
    """Parse override lines ``<family_id> <base_char> <hex codepoints...>``."""
    entries = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 3:
            raise GlyphTableError(f"override line {lineno}: expected family, base char and codepoints")
        family, base, *hexes = parts
        try:
            form = "".join(chr(int(h, 16)) for h in hexes)
        except ValueError as exc:
            raise GlyphTableError(f"override line {lineno}: bad codepoint ({exc})") from None
        entries.append((family, base, form))
    return entries


def with_overrides(table: GlyphTable, entries: Iterable[tuple[str, str, str]]) -> GlyphTable:
    """Merge override entries over ``table``; later entries win.

    A family id not already in the table starts a new family in the "other" group.
    """
    forward = dict(table.forward)
    groups = dict(table.groups)
    for family, base, form in entries:
        groups.setdefault(family, Group.OTHER)
        forward[(base, family)] = form
    return _compile(forward, groups)


def load_table(override_path: str | Path | None = None) -> GlyphTable:
    table = build_default_tables()
    if override_path is None:
        return table
    text = Path(override_path).read_text(encoding="utf-8")
    return with_overrides(table, parse_overrides(text.splitlines()))


def variants(c: str, table: GlyphTable) -> list[tuple[str, str]]:
    """Every ``(family_id, styled_form)`` defined for the base character ``c``."""
    if c not in BASE_CHARS:
        return []
    return [(fam, table.forward[(c, fam)]) for fam in table.families if (c, fam) in table.forward]


@dataclass(frozen=True)
class SubstitutionPlan:
    """Which words to restyle, and with which family each."""

    assignment: Mapping[int, str]

    @property
    def word_indices(self) -> frozenset[int]:
        return frozenset(self.assignment)

    @classmethod
    def uniform(cls, indices: Iterable[int], family: str) -> SubstitutionPlan:
        return cls({i: family for i in indices})


def substitute(view: SentenceView, plan: SubstitutionPlan, table: GlyphTable) -> str:
    """Apply ``plan`` to ``view``; everything outside the planned words is untouched."""
    n = len(view)
    for i in plan.assignment:
        if not 0 <= i < n:
            raise InvalidPlan(f"word index {i} out of range for {n} words")
    words = view.words
    return view.replace_words({i: table.style_word(words[i], fam) for i, fam in plan.assignment.items()})


@dataclass(frozen=True)
class StyledRun:
    offset: int
    length: int
    family: str


def _scan(text: str, table: GlyphTable):
    """Yield ``(offset, length, base, family)`` for every styled form in ``text``,
    longest match first; unmatched characters yield ``family=None``."""
    i = 0
    longest = table._max_form_len
    while i < len(text):
        for size in range(min(longest, len(text) - i), 0, -1):
            hit = table.reverse.get(text[i:i + size])
            if hit is not None:
                yield i, size, hit[0], hit[1]
                i += size
                break
        else:
            yield i, 1, text[i], None
            i += 1


def detect_styled(text: str, table: GlyphTable) -> list[StyledRun]:
    """Maximal runs of adjacent styled characters that share a family."""
    runs: list[StyledRun] = []
    for offset, size, _, family in _scan(text, table):
        if family is None:
            continue
        last = runs[-1] if runs else None
        if last is not None and last.family == family and last.offset + last.length == offset:
            runs[-1] = StyledRun(last.offset, last.length + size, family)
        else:
            runs.append(StyledRun(offset, size, family))
    return runs


def normalize(text: str, table: GlyphTable) -> tuple[str, list[StyledRun]]:
    """Fold styled characters back to their base characters.

    Returns the folded text and the styled runs that were replaced (offsets
    refer to the input).  Codepoints the table does not know pass through.
    """
    out = [base for _, _, base, _ in _scan(text, table)]
    return "".join(out), detect_styled(text, table)

