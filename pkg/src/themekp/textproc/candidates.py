"""Noun-phrase candidate selection: maximal ADJ* (NOUN|PROPN)+ runs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .stemmer import stem
from .tokenize import Token


@dataclass(frozen=True)
class Grammar:
    modifiers: frozenset = frozenset({"ADJ"})
    heads: frozenset = frozenset({"NOUN", "PROPN"})


NOUN_PHRASE = Grammar()


@dataclass
class CandidatePhrase:
    """One distinct candidate in a document, keyed by its stem form.

    ``occurrences`` holds the ``[i, j)`` token ranges of every match in
    document order; ``token_range`` is the first of them.
    """

    surface: str
    stem_form: str
    words: tuple[str, ...]
    stems: tuple[str, ...]
    first_offset: int
    occurrences: list[tuple[int, int]] = field(default_factory=list)
    sentence_ids: list[int] = field(default_factory=list)

    @property
    def token_range(self) -> tuple[int, int]:
        return self.occurrences[0]

    @property
    def doc_freq(self) -> int:
        return len(self.occurrences)

    @property
    def positions(self) -> list[int]:
        """Token index of the first word of each occurrence."""
        return [i for i, _ in self.occurrences]

    @property
    def phrase(self) -> str:
        return self.surface.lower()


def match_spans(tags: list[str], grammar: Grammar = NOUN_PHRASE) -> list[tuple[int, int]]:
    """Leftmost-longest non-overlapping grammar matches over one tag sequence."""
    spans = []
    n = len(tags)
    i = 0
    while i < n:
        j = i
        while j < n and tags[j] in grammar.modifiers:
            j += 1
        k = j
        while k < n and tags[k] in grammar.heads:
            k += 1
        if k > j:
            spans.append((i, k))
            i = k
        else:
            i += 1
    return spans


def extract_candidates(tokens: list[Token], grammar: Grammar = NOUN_PHRASE) -> list[CandidatePhrase]:
    """Candidates in order of first occurrence; repeats of a stem form are merged."""
    by_stem: dict[str, CandidatePhrase] = {}
    start = 0
    n = len(tokens)
    while start < n:
        end = start
        sid = tokens[start].sentence_index
        while end < n and tokens[end].sentence_index == sid:
            end += 1
        tags = [t.pos for t in tokens[start:end]]
        for i, j in match_spans(tags, grammar):
            span = tokens[start + i:start + j]
            words = tuple(t.lower for t in span)
            stems = tuple(stem(w) for w in words)
            key = " ".join(stems)
            cand = by_stem.get(key)
            if cand is None:
                cand = CandidatePhrase(
                    surface=" ".join(t.surface for t in span),
                    stem_form=key,
                    words=words,
                    stems=stems,
                    first_offset=span[0].start,
                )
                by_stem[key] = cand
            cand.occurrences.append((start + i, start + j))
            cand.sentence_ids.append(sid)
        start = end
    return list(by_stem.values())
