"""Whitespace/punctuation tokenizer with sentence indices and character spans."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

TAGS = ("ADJ", "NOUN", "PROPN", "VERB", "ADV", "PRON", "DET", "ADP", "NUM", "PUNCT", "OTHER")

# numbers keep decimal/time separators ("0.5", "9:30"), words keep inner
# apostrophes/hyphens ("i'm", "self-taper"); every other non-space
# character becomes its own token
_TOKEN_RE = re.compile(r"\d+(?:[.,:]\d+)+|\w+(?:['’\-]\w+)*|[^\w\s]")
_SENT_END = frozenset(".!?")


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int
    sentence_index: int
    pos: str = "OTHER"

    @property
    def lower(self) -> str:
        return self.surface.lower()

    @property
    def char_span(self) -> tuple[int, int]:
        return (self.start, self.end)

    def with_pos(self, pos: str) -> "Token":
        if pos not in TAGS:
            raise ValueError(f"unknown tag {pos!r}")
        return replace(self, pos=pos)


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens; the gaps between spans are pure whitespace.

    A sentence ends after a run of ``.``/``!``/``?`` tokens and at every line
    break, so a post title is always its own sentence.
    """
    tokens: list[Token] = []
    sent = 0
    pending_break = False
    last_end = 0
    for m in _TOKEN_RE.finditer(text):
        gap = text[last_end:m.start()]
        if tokens and ("\n" in gap or (pending_break and m.group() not in _SENT_END)):
            sent += 1
            pending_break = False
        tok = m.group()
        tokens.append(Token(tok, m.start(), m.end(), sent))
        if tok in _SENT_END:
            pending_break = True
        last_end = m.end()
    return tokens


def sentences(tokens: list[Token]) -> list[list[Token]]:
    out: list[list[Token]] = []
    for tok in tokens:
        while len(out) <= tok.sentence_index:
            out.append([])
        out[tok.sentence_index].append(tok)
    return [s for s in out if s]


def read_pretagged(path_or_lines) -> tuple[str, list[Token]]:
    """Load a pre-tagged TSV (``surface<TAB>pos``, blank line between sentences).

    Returns the reconstructed text (tokens joined by single spaces, sentences
    by newlines) and the tagged tokens with spans into that text.
    """
    if isinstance(path_or_lines, (str, bytes)) or hasattr(path_or_lines, "__fspath__"):
        with open(path_or_lines, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    else:
        lines = list(path_or_lines)
    tokens: list[Token] = []
    parts: list[str] = []
    pos = 0
    sent = 0
    in_sentence = False
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            if in_sentence:
                sent += 1
                in_sentence = False
            continue
        fields = line.split("\t")
        if len(fields) != 2 or fields[1] not in TAGS or not fields[0]:
            raise ValueError(f"line {lineno}: expected 'surface<TAB>TAG', got {line!r}")
        surface, tag = fields
        if parts:
            sep = " " if in_sentence else "\n"
            parts.append(sep)
            pos += 1
        parts.append(surface)
        tokens.append(Token(surface, pos, pos + len(surface), sent, tag))
        pos += len(surface)
        in_sentence = True
    return "".join(parts), tokens
