"""Independent reference implementations used as test oracles.

They share no code with the package beyond plain data (tokens, tags,
candidate positions) and favour obviousness over speed: dense matrices,
explicit loops, recomputation from scratch.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

import numpy as np

TAG_LETTER = {"ADJ": "A", "NOUN": "N", "PROPN": "P"}


def regex_spans(tags: list[str]) -> list[tuple[int, int]]:
    """Maximal ADJ*(NOUN|PROPN)+ runs found by a regex over one letter per tag."""
    s = "".join(TAG_LETTER.get(t, "x") for t in tags)
    return [m.span() for m in re.finditer(r"A*[NP]+", s)]


def dense_pagerank(W: np.ndarray, bias=None, d: float = 0.85, tol: float = 1e-8,
                   max_iter: int = 1000) -> np.ndarray:
    """Power iteration on a dense column-stochastic matrix.

    Column j of M holds node j's out-weights divided by their sum; a node
    with no out-weight redistributes by ``bias``.
    """
    n = W.shape[0]
    b = np.full(n, 1.0 / n) if bias is None else np.asarray(bias, dtype=float)
    M = np.zeros((n, n))
    for j in range(n):
        total = W[j].sum()
        M[:, j] = W[j] / total if total > 0 else b
    G = d * M + (1 - d) * np.outer(b, np.ones(n))
    s = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        new = G @ s
        done = np.max(np.abs(new - s)) < tol
        s = new
        if done:
            break
    return s


def exact_pagerank(W: np.ndarray, bias=None, d: float = 0.85) -> np.ndarray:
    """Fixed point by a direct linear solve."""
    n = W.shape[0]
    b = np.full(n, 1.0 / n) if bias is None else np.asarray(bias, dtype=float)
    M = np.zeros((n, n))
    for j in range(n):
        total = W[j].sum()
        M[:, j] = W[j] / total if total > 0 else b
    return np.linalg.solve(np.eye(n) - d * M, (1 - d) * b)


def order(items):
    """items: (phrase, score, first_offset); best first under the shared tie-break."""
    return [p for p, _, _ in sorted(items, key=lambda t: (-round(t[1], 10), t[2], t[0]))]


# -- statistical --------------------------------------------------------------------

def tfidf_order(doc_candidates: list, all_docs: list) -> list[str]:
    n = len(all_docs)
    items = []
    for c in doc_candidates:
        df = sum(1 for cands in all_docs if any(x.stem_form == c.stem_form for x in cands))
        items.append((c.phrase, len(c.occurrences) * math.log(n / df), c.first_offset))
    return order(items)


# -- word graphs ----------------------------------------------------------------------

def word_graph(tokens, stem, window: int = 2):
    """Dense co-occurrence matrix over stems of ADJ/NOUN/PROPN tokens."""
    nodes = []
    for t in tokens:
        if t.pos in ("ADJ", "NOUN", "PROPN"):
            s = stem(t.surface.lower())
            if s not in nodes:
                nodes.append(s)
    W = np.zeros((len(nodes), len(nodes)))
    for i, a in enumerate(tokens):
        for j, b in enumerate(tokens):
            if not (0 < j - i < window):
                continue
            if a.sentence_index != b.sentence_index:
                continue
            if a.pos in ("ADJ", "NOUN", "PROPN") and b.pos in ("ADJ", "NOUN", "PROPN"):
                x, y = nodes.index(stem(a.surface.lower())), nodes.index(stem(b.surface.lower()))
                if x != y:
                    W[x, y] += 1
                    W[y, x] += 1
    return nodes, W


def textrank_order(tokens, candidates, stem, window=2, positional=False):
    nodes, W = word_graph(tokens, stem, window)
    bias = None
    if positional:
        bias = np.zeros(len(nodes))
        for pos, t in enumerate(tokens, start=1):
            if t.pos in ("ADJ", "NOUN", "PROPN"):
                bias[nodes.index(stem(t.surface.lower()))] += 1.0 / pos
        bias /= bias.sum()
    s = dense_pagerank(W, bias, tol=1e-8)
    items = [(c.phrase, sum(s[nodes.index(x)] for x in c.stems), c.first_offset) for c in candidates]
    return order(items)


# -- topics -----------------------------------------------------------------------------

def _jaccard(a, b) -> float:
    a, b = set(a.stems), set(b.stems)
    return len(a & b) / len(a | b)


def naive_clusters(candidates, threshold=0.25):
    """Average linkage recomputed from scratch at every step."""
    clusters = [[i] for i in range(len(candidates))]
    while len(clusters) > 1:
        best, pair = -1.0, None
        for x in range(len(clusters)):
            for y in range(x + 1, len(clusters)):
                sims = [_jaccard(candidates[i], candidates[j]) for i in clusters[x] for j in clusters[y]]
                avg = sum(sims) / len(sims)
                if avg > best:
                    best, pair = avg, (x, y)
        if best < threshold:
            break
        x, y = pair
        clusters[x] = sorted(clusters[x] + clusters[y])
        del clusters[y]
    return sorted(clusters)


def _recip(a, b) -> float:
    return sum(1.0 / abs(p - q) for p in a.positions for q in b.positions)


def topicrank_order(candidates, threshold=0.25):
    topics = naive_clusters(candidates, threshold)
    n = len(topics)
    W = np.zeros((n, n))
    for x in range(n):
        for y in range(n):
            if x != y:
                W[x, y] = sum(_recip(candidates[i], candidates[j]) for i in topics[x] for j in topics[y])
    s = dense_pagerank(W, tol=1e-8)
    items = []
    for t, members in enumerate(topics):
        first = min(members, key=lambda i: candidates[i].first_offset)
        items.append((candidates[first].phrase, s[t], candidates[first].first_offset))
    return order(items)


def multipartite_matrix(candidates, topics, alpha=1.1):
    n = len(candidates)
    topic = {}
    for t, members in enumerate(topics):
        for i in members:
            topic[i] = t
    W = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j and topic[i] != topic[j]:
                W[i, j] = _recip(candidates[i], candidates[j])
    base = W.copy()
    for members in topics:
        if len(members) < 2:
            continue
        first = min(members, key=lambda i: candidates[i].positions[0])
        factor = alpha * math.exp(1.0 / (candidates[first].positions[0] + 1))
        for end in range(n):
            if base[first, end] > 0:
                boost = sum(base[v, end] for v in members if v != first)
                W[end, first] += boost * factor
    return W


def multipartite_order(candidates, threshold=0.25, alpha=1.1):
    topics = naive_clusters(candidates, threshold)
    s = dense_pagerank(multipartite_matrix(candidates, topics, alpha), tol=1e-8)
    return order([(c.phrase, s[i], c.first_offset) for i, c in enumerate(candidates)])


# -- metrics -----------------------------------------------------------------------------

def prf_fractions(pred, gold):
    pred, gold = set(pred), set(gold)
    tp = len(pred & gold)
    p = Fraction(tp, len(pred)) if pred else Fraction(int(not gold))
    r = Fraction(tp, len(gold)) if gold else Fraction(int(not pred))
    f = 2 * p * r / (p + r) if p + r else Fraction(0)
    return p, r, f
