"""Statistical rankers: TfIdf over a document-frequency index, and YAKE."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from ..textproc.stopwords import STOPWORDS
from .base import check_k, top_k


@dataclass
class DocumentFrequencyIndex:
    df: dict[str, int] = field(default_factory=dict)
    n_docs: int = 0

    def get(self, stem_form: str) -> int:
        # unseen phrases count as appearing in one document
        return self.df.get(stem_form, 1)

    def to_dict(self) -> dict:
        return {"n_docs": self.n_docs, "df": dict(sorted(self.df.items()))}

    @classmethod
    def from_dict(cls, d: dict) -> "DocumentFrequencyIndex":
        return cls(dict(d["df"]), int(d["n_docs"]))


def build_df_index(documents: Iterable, extractor: Callable | None = None) -> DocumentFrequencyIndex:
    """Count, for every candidate stem form, the documents that contain it.

    ``documents`` yields whatever ``extractor`` accepts (posts, texts...);
    the extractor returns that document's candidate list.  Without an
    extractor each item must already be a candidate list.
    """
    df: Counter = Counter()
    n = 0
    for doc in documents:
        cands = extractor(doc) if extractor is not None else doc
        df.update({c.stem_form for c in cands})
        n += 1
    if n == 0:
        raise ValueError("cannot build a document-frequency index from an empty corpus")
    return DocumentFrequencyIndex(dict(df), n)


def tfidf_scores(candidates, index: DocumentFrequencyIndex) -> list[float]:
    return [c.doc_freq * math.log(index.n_docs / index.get(c.stem_form)) for c in candidates]


def tfidf_rank(candidates, index: DocumentFrequencyIndex, k: int):
    check_k(k)
    return top_k(candidates, tfidf_scores(candidates, index), k)


# -- YAKE --------------------------------------------------------------------

@dataclass
class YakeConfig:
    window: int = 1
    stopwords: frozenset = STOPWORDS


@dataclass
class _TermStats:
    tf: int = 0
    tf_upper: int = 0      # capitalised, not sentence-initial
    tf_acronym: int = 0    # all caps
    sentences: set = field(default_factory=set)


def _term_key(word: str) -> str:
    return word.lower()


def yake_term_scores(tokens, config: YakeConfig | None = None) -> dict[str, float]:
    """Single-term YAKE weights (lower is more important), keyed by lowercase term."""
    config = config or YakeConfig()
    stats: dict[str, _TermStats] = defaultdict(_TermStats)
    left: dict[str, Counter] = defaultdict(Counter)
    right: dict[str, Counter] = defaultdict(Counter)
    n_sent = (tokens[-1].sentence_index + 1) if tokens else 0

    block: list[str] = []
    prev_sid = None
    first_in_sentence = True
    for tok in tokens:
        if tok.sentence_index != prev_sid:
            block = []
            first_in_sentence = True
            prev_sid = tok.sentence_index
        if tok.pos in ("PUNCT", "NUM"):
            block = []
            continue
        key = _term_key(tok.surface)
        st = stats[key]
        st.tf += 1
        st.sentences.add(tok.sentence_index)
        s = tok.surface
        if s.isupper() and len(s) > 1:
            st.tf_acronym += 1
        elif s[:1].isupper() and not first_in_sentence:
            st.tf_upper += 1
        first_in_sentence = False
        for prev in block[-config.window:]:
            right[prev][key] += 1
            left[key][prev] += 1
        block.append(key)

    if not stats:
        return {}
    valid = [st.tf for t, st in stats.items() if t not in config.stopwords] or [st.tf for st in stats.values()]
    mean_tf = float(np.mean(valid))
    std_tf = float(np.std(valid))
    max_tf = max(st.tf for st in stats.values())

    scores = {}
    for term, st in stats.items():
        lsum = sum(left[term].values())
        rsum = sum(right[term].values())
        dl = len(left[term]) / lsum if lsum else 0.0
        dr = len(right[term]) / rsum if rsum else 0.0
        rel = 1.0 + (dl + dr) * st.tf / max_tf
        case = max(st.tf_upper, st.tf_acronym) / (1.0 + math.log(st.tf))
        pos = math.log(math.log(3.0 + float(np.median(sorted(st.sentences)))))
        freq = st.tf / (mean_tf + std_tf)
        spread = len(st.sentences) / n_sent
        scores[term] = (rel * pos) / (case + freq / rel + spread / rel)
    return scores


def yake_candidate_score(words, tf: int, term_scores: dict[str, float],
                         stopwords=STOPWORDS) -> float:
    """Aggregate term weights into a phrase weight: prod(S) / (tf * (1 + sum(S)))."""
    prod = 1.0
    total = 0.0
    for w in words:
        key = _term_key(w)
        if key in stopwords:
            continue
        s = term_scores[key]
        prod *= s
        total += s
    return prod / (tf * (1.0 + total))


def yake_rank(tokens, candidates, k: int, window: int = 1, config: YakeConfig | None = None):
    """Rank candidates by YAKE weight, best (lowest weight) first.

    The reported ``score`` is ``1 / (1 + weight)`` so that, like every other
    ranker, scores decrease down the list.
    """
    check_k(k)
    config = config or YakeConfig(window=window)
    terms = yake_term_scores(tokens, config)
    weights = [yake_candidate_score(c.words, c.doc_freq, terms, config.stopwords) for c in candidates]
    return top_k(candidates, [1.0 / (1.0 + w) for w in weights], k)
