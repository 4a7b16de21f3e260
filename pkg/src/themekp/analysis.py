"""Corpus analytics over normalized annotations: frequency, co-occurrence, engagement.

Everything counts at post level: a phrase present twice in a post counts once.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .normalize import Theme


def _sorted_counts(counts: Counter) -> list[tuple[str, int]]:
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


@dataclass
class FrequencyTable:
    counts: list[tuple[str, int]]             # best first, ties by phrase
    themes: dict[str, Theme]

    def as_dict(self) -> dict[str, int]:
        return dict(self.counts)

    def theme_breakdown(self) -> dict[Theme, int]:
        """Distinct phrases per theme."""
        out = {t: 0 for t in Theme}
        for phrase, _ in self.counts:
            out[self.themes[phrase]] += 1
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["phrase", "theme", "posts"])
        for phrase, n in self.counts:
            w.writerow([phrase, self.themes[phrase].name, n])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"counts": [{"phrase": p, "theme": self.themes[p].name, "posts": n}
                                      for p, n in self.counts],
                           "themes": {t.name: n for t, n in self.theme_breakdown().items()}},
                          indent=2) + "\n"


def frequency(annotated, theme: Theme | None = None) -> FrequencyTable:
    """Number of posts whose gold set contains each canonical phrase."""
    counts: Counter = Counter()
    themes = {}
    for ap in annotated:
        for phrase in set(ap.gold_normalized):
            t = ap.theme_of[phrase]
            if theme is not None and t != theme:
                continue
            counts[phrase] += 1
            themes.setdefault(phrase, t)
    return FrequencyTable(_sorted_counts(counts), themes)


@dataclass
class CooccurrenceMatrix:
    phrases: list[str]
    counts: np.ndarray            # symmetric, zero diagonal

    def __post_init__(self):
        self._index = {p: i for i, p in enumerate(self.phrases)}
        if not np.array_equal(self.counts, self.counts.T):
            raise AssertionError("co-occurrence matrix is not symmetric")

    def get(self, a: str, b: str) -> int:
        if a not in self._index or b not in self._index:
            return 0
        return int(self.counts[self._index[a], self._index[b]])

    def pairs(self) -> list[tuple[str, str, int]]:
        """Non-zero unordered pairs, largest first."""
        iu = np.triu_indices(len(self.phrases), k=1)
        out = [(self.phrases[i], self.phrases[j], int(self.counts[i, j]))
               for i, j in zip(*iu) if self.counts[i, j]]
        return sorted(out, key=lambda t: (-t[2], t[0], t[1]))

    def total(self) -> int:
        return int(np.triu(self.counts, k=1).sum())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([""] + self.phrases)
        for p, row in zip(self.phrases, self.counts):
            w.writerow([p] + [int(x) for x in row])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"phrases": self.phrases,
                           "pairs": [{"a": a, "b": b, "posts": n} for a, b, n in self.pairs()]},
                          indent=2) + "\n"


def cooccurrence(annotated) -> CooccurrenceMatrix:
    """Posts in which each unordered pair of distinct canonical phrases appears together."""
    posts = [sorted(set(ap.gold_normalized)) for ap in annotated]
    phrases = sorted({p for ps in posts for p in ps})
    index = {p: i for i, p in enumerate(phrases)}
    m = np.zeros((len(phrases), len(phrases)), dtype=np.int64)
    for ps in posts:
        for a, b in combinations(ps, 2):
            i, j = index[a], index[b]
            m[i, j] += 1
            m[j, i] += 1
    return CooccurrenceMatrix(phrases, m)


@dataclass
class EngagementRow:
    phrase: str
    occurrences: int
    total_comments: int
    total_upvotes: int

    @property
    def avg_comments(self) -> float:
        return float(Fraction(self.total_comments, self.occurrences))

    @property
    def avg_upvotes(self) -> float:
        return float(Fraction(self.total_upvotes, self.occurrences))


@dataclass
class EngagementScores:
    rows: list[EngagementRow]

    def get(self, phrase: str) -> EngagementRow | None:
        return next((r for r in self.rows if r.phrase == phrase), None)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["phrase", "posts", "avg_comments", "avg_upvotes"])
        for r in self.rows:
            w.writerow([r.phrase, r.occurrences, repr(r.avg_comments), repr(r.avg_upvotes)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps([{"phrase": r.phrase, "posts": r.occurrences, "avg_comments": r.avg_comments,
                            "avg_upvotes": r.avg_upvotes} for r in self.rows], indent=2) + "\n"


def engagement(annotated, corpus) -> EngagementScores:
    """Mean comments and mean upvotes over the posts mentioning each phrase.

    Comments and upvotes are kept as two separate scores; posts missing
    from ``corpus`` are ignored.
    """
    posts = corpus.by_id()
    occ: Counter = Counter()
    comments: Counter = Counter()
    upvotes: Counter = Counter()
    for ap in annotated:
        post = posts.get(ap.post_id)
        if post is None:
            continue
        for phrase in set(ap.gold_normalized):
            occ[phrase] += 1
            comments[phrase] += post.num_comments
            upvotes[phrase] += post.upvotes
    rows = [EngagementRow(p, n, comments[p], upvotes[p]) for p, n in _sorted_counts(occ)]
    return EngagementScores(rows)
