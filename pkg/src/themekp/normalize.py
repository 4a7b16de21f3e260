"""Keyphrase normalization: semantic mapping, stem grouping, Other filtering, themes.

A phrase goes through, in order:

1. lowercase, trim, collapse whitespace;
2. exact lookup in the variant -> canonical map (so multi-word phrases such
   as "precipitated withdrawal" are never split when they are listed);
3. if the phrase is already a canonical it is returned unchanged;
4. stem grouping: a one-word phrase is replaced by the canonical whose
   stem group it falls in; in longer phrases each word is replaced by the
   canonical unigram sharing its stem, when there is one;
5. exact lookup again on the result, else the result itself.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from importlib import resources

from .textproc.stemmer import stem

logger = logging.getLogger(__name__)


class Theme(enum.Enum):
    TreatmentOptions = "Treatment Options"
    SubstanceDependencyRecovery = "Substance Dependency & Recovery"
    MedicalHistory = "Medical History"
    PsychophysicalEffects = "Psychophysical Effects"
    Others = "Others"

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def parse(cls, name: str) -> "Theme":
        """Accept either the member name or the display label."""
        key = name.strip()
        if key in cls.__members__:
            return cls[key]
        for t in cls:
            if t.value.lower() == key.lower():
                return t
        raise ValueError(f"unknown theme {name!r}")


class TableError(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("invalid normalization table:\n  " + "\n  ".join(problems))
        self.problems = problems


def clean(phrase: str) -> str:
    return " ".join(phrase.lower().split())


def _stem_groups(unigrams: dict[str, str]) -> dict[str, str]:
    """stem -> canonical, for word -> canonical pairs; stems claimed by two canonicals are dropped."""
    groups: dict[str, str] = {}
    clashes = set()
    for word, canonical in sorted(unigrams.items()):
        s = stem(word)
        if groups.get(s, canonical) != canonical:
            clashes.add(s)
        groups.setdefault(s, canonical)
    for s in clashes:
        logger.debug("stem %r is shared by several canonicals; not grouped", s)
        del groups[s]
    return groups


@dataclass
class NormalizationTable:
    semantic_map: dict[str, str] = field(default_factory=dict)
    other_set: frozenset = frozenset()
    theme_map: dict[str, Theme] = field(default_factory=dict)

    def __post_init__(self):
        self.semantic_map = {clean(k): clean(v) for k, v in self.semantic_map.items()}
        self.other_set = frozenset(clean(p) for p in self.other_set)
        self.theme_map = {clean(k): v for k, v in self.theme_map.items()}
        problems = validate(self.semantic_map, self.other_set, self.theme_map)
        if problems:
            raise TableError(problems)
        self.canonicals = frozenset(self.semantic_map.values()) | self.other_set | set(self.theme_map)
        canon_uni = {c: c for c in self.canonicals if " " not in c}
        # single-word phrases may also reach a canonical through a listed variant
        all_uni = dict(canon_uni)
        all_uni.update({v: c for v, c in self.semantic_map.items() if " " not in v})
        self._word_groups = _stem_groups(canon_uni)
        self._unigram_groups = _stem_groups(all_uni)

    def normalize(self, phrase: str) -> tuple[str, bool]:
        return normalize_phrase(phrase, self)


def validate(semantic_map, other_set, theme_map, lines: dict | None = None) -> list[str]:
    """Check the table invariants; ``lines`` maps (kind, arg1) to a source line number."""
    lines = lines or {}

    def at(kind, key):
        n = lines.get((kind, key))
        return f"line {n}: " if n else ""

    problems = []
    for variant, canonical in semantic_map.items():
        if canonical in semantic_map and semantic_map[canonical] != canonical:
            problems.append(f"{at('map', variant)}{variant!r} -> {canonical!r}, but "
                            f"{at('map', canonical)}{canonical!r} -> {semantic_map[canonical]!r} "
                            f"(canonicals must be fixed points)")
        if variant in theme_map and variant != canonical:
            problems.append(f"{at('theme', variant)}{variant!r} has a theme but is mapped to {canonical!r}")
    for p in sorted(other_set & set(theme_map)):
        problems.append(f"{at('other', p)}{p!r} is both Other and themed ({at('theme', p)}{theme_map[p].name})")
    for canonical in sorted(set(semantic_map.values())):
        if canonical not in theme_map and canonical not in other_set:
            problems.append(f"canonical {canonical!r} has no theme")
    return problems


def load_table(path) -> NormalizationTable:
    """Read a ``kind<TAB>arg1[<TAB>arg2]`` table; '#' starts a comment."""
    semantic_map: dict[str, str] = {}
    other: set[str] = set()
    themes: dict[str, Theme] = {}
    lines: dict[tuple[str, str], int] = {}
    problems = []
    with open(path, encoding="utf-8") as fh:
        for n, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].rstrip("\r\n")
            if not line.strip():
                continue
            cols = [c.strip() for c in line.split("\t")]
            kind = cols[0].lower()
            if kind == "map" and len(cols) == 3:
                v, c = clean(cols[1]), clean(cols[2])
                if v in semantic_map and semantic_map[v] != c:
                    problems.append(f"line {n}: {v!r} -> {c!r} conflicts with "
                                    f"line {lines[('map', v)]}: {v!r} -> {semantic_map[v]!r}")
                    continue
                semantic_map[v] = c
                lines.setdefault(("map", v), n)
            elif kind == "other" and len(cols) == 2:
                p = clean(cols[1])
                other.add(p)
                lines.setdefault(("other", p), n)
            elif kind == "theme" and len(cols) == 3:
                p = clean(cols[1])
                try:
                    t = Theme.parse(cols[2])
                except ValueError as exc:
                    problems.append(f"line {n}: {exc}")
                    continue
                if p in themes and themes[p] != t:
                    problems.append(f"line {n}: {p!r} themed {t.name}, but line "
                                    f"{lines[('theme', p)]} says {themes[p].name}")
                    continue
                themes[p] = t
                lines.setdefault(("theme", p), n)
            else:
                problems.append(f"line {n}: cannot parse {line!r}")
    # an identity row only declares a canonical
    semantic_map = {v: c for v, c in semantic_map.items() if v != c}
    problems += validate(semantic_map, other, themes, lines)
    if problems:
        raise TableError(problems)
    return NormalizationTable(semantic_map, frozenset(other), themes)


def seed_table() -> NormalizationTable:
    """The bundled table of published mappings and theme examples."""
    with resources.as_file(resources.files("themekp") / "data" / "seed_table.tsv") as p:
        return load_table(p)


def normalize_phrase(phrase: str, table: NormalizationTable) -> tuple[str, bool]:
    """Map a phrase to its canonical form; the flag says whether it is an Other phrase."""
    p = clean(phrase)
    if p in table.semantic_map:
        p = table.semantic_map[p]
    elif p not in table.canonicals and p:
        words = p.split(" ")
        if len(words) == 1:
            p = table._unigram_groups.get(stem(p), p)
        else:
            p = " ".join(table._word_groups.get(stem(w), w) for w in words)
        p = table.semantic_map.get(p, p)
    return p, p in table.other_set


def normalize_set(phrases, table: NormalizationTable, drop_other: bool = True) -> set[str]:
    out = set()
    for ph in phrases:
        canonical, is_other = normalize_phrase(ph, table)
        if canonical and not (drop_other and is_other):
            out.add(canonical)
    return out


def normalize_list(phrases, table: NormalizationTable, drop_other: bool = True) -> list[str]:
    """Like normalize_set but keeps first-seen order (for ranked output)."""
    seen = {}
    for ph in phrases:
        canonical, is_other = normalize_phrase(ph, table)
        if canonical and not (drop_other and is_other):
            seen.setdefault(canonical, None)
    return list(seen)


def assign_theme(canonical: str, table: NormalizationTable) -> Theme:
    return table.theme_map.get(clean(canonical), Theme.Others)
