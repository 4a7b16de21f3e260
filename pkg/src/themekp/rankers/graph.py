"""Graph rankers built on one biased-PageRank engine.

TextRank and PositionRank score words on a co-occurrence graph and sum word
scores over each candidate.  TopicRank clusters candidates into topics and
ranks the topics; MultipartiteRank ranks candidates on a directed graph that
only links candidates of different topics.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from ..textproc.stemmer import stem
from .base import check_k, top_k

logger = logging.getLogger(__name__)

ELIGIBLE_POS = frozenset({"ADJ", "NOUN", "PROPN"})


@dataclass
class WordGraph:
    """Weighted graph over indexed nodes; undirected unless ``directed``."""

    nodes: list = field(default_factory=list)
    directed: bool = False
    edges: dict = field(default_factory=dict)

    def __post_init__(self):
        self._index = {n: i for i, n in enumerate(self.nodes)}

    def add_node(self, node) -> int:
        if node not in self._index:
            self._index[node] = len(self.nodes)
            self.nodes.append(node)
        return self._index[node]

    def index(self, node) -> int:
        return self._index[node]

    def __len__(self):
        return len(self.nodes)

    def add_edge(self, i: int, j: int, weight: float = 1.0) -> None:
        if i == j:
            raise ValueError("self-loops are not allowed")
        if not weight > 0:
            raise ValueError(f"edge weights must be positive, got {weight}")
        if not self.directed and i > j:
            i, j = j, i
        self.edges[(i, j)] = self.edges.get((i, j), 0.0) + weight

    def weight(self, i: int, j: int) -> float:
        if not self.directed and i > j:
            i, j = j, i
        return self.edges.get((i, j), 0.0)

    def matrix(self) -> sparse.csr_matrix:
        """Adjacency matrix; entry (i, j) is the weight of the edge i -> j."""
        n = len(self.nodes)
        rows, cols, vals = [], [], []
        for (i, j), w in self.edges.items():
            rows.append(i); cols.append(j); vals.append(w)
            if not self.directed:
                rows.append(j); cols.append(i); vals.append(w)
        return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=float)


@dataclass
class PageRankConfig:
    damping: float = 0.85
    tolerance: float = 1e-8
    max_iter: int = 1000
    bias: np.ndarray | None = None

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")
        if self.bias is not None:
            b = np.asarray(self.bias, dtype=float)
            if (b < 0).any() or abs(b.sum() - 1.0) > 1e-9:
                raise ValueError("bias must be non-negative and sum to 1")
            self.bias = b


@dataclass
class PageRankResult:
    scores: np.ndarray
    iterations: int
    converged: bool


def pagerank(graph: WordGraph, config: PageRankConfig | None = None) -> PageRankResult:
    """Iterate s <- (1-d) b + d M s to a fixed point.

    M follows out-edges in proportion to their weight.  A node without
    out-edges hands its mass back according to the bias vector, which keeps
    the scores a probability distribution.  Hitting ``max_iter`` is logged
    and reported, not raised.
    """
    config = config or PageRankConfig()
    n = len(graph)
    if n == 0:
        raise ValueError("pagerank needs a non-empty graph")
    bias = np.full(n, 1.0 / n) if config.bias is None else config.bias
    if bias.shape != (n,):
        raise ValueError(f"bias has {bias.shape[0]} entries for {n} nodes")

    adj = graph.matrix()
    out = np.asarray(adj.sum(axis=1)).ravel()
    dangling = out == 0
    inv = np.divide(1.0, out, out=np.zeros(n), where=~dangling)
    trans_t = (sparse.diags(inv) @ adj).T.tocsr()
    d = config.damping

    s = np.full(n, 1.0 / n)
    for it in range(1, config.max_iter + 1):
        new = (1.0 - d) * bias + d * (trans_t @ s + s[dangling].sum() * bias)
        delta = np.abs(new - s).max()
        s = new
        if delta < config.tolerance:
            return PageRankResult(s, it, True)
    logger.warning("pagerank did not converge in %d iterations", config.max_iter)
    return PageRankResult(s, config.max_iter, False)


# -- word graphs ---------------------------------------------------------------

def build_word_graph(tokens, window: int = 2) -> WordGraph:
    """Co-occurrence graph over the stems of ADJ/NOUN/PROPN words.

    Two eligible words are linked once per co-occurrence inside a window of
    ``window`` consecutive tokens of the same sentence.
    """
    g = WordGraph()
    keys = []
    for tok in tokens:
        if tok.pos in ELIGIBLE_POS:
            keys.append(g.add_node(stem(tok.lower)))
        else:
            keys.append(None)
    for i, a in enumerate(keys):
        if a is None:
            continue
        for j in range(i + 1, min(i + window, len(tokens))):
            if tokens[j].sentence_index != tokens[i].sentence_index:
                break
            b = keys[j]
            if b is not None and b != a:
                g.add_edge(a, b, 1.0)
    return g


def _sum_word_scores(graph: WordGraph, scores, candidates) -> list[float]:
    return [float(sum(scores[graph.index(s)] for s in c.stems)) for c in candidates]


def textrank(tokens, candidates, k: int, window: int = 2, config: PageRankConfig | None = None):
    check_k(k)
    graph = build_word_graph(tokens, window)
    if len(graph) == 0 or not candidates:
        return []
    res = pagerank(graph, config)
    return top_k(candidates, _sum_word_scores(graph, res.scores, candidates), k)


def position_bias(tokens, graph: WordGraph) -> np.ndarray:
    """Sum of 1/position (1-based token index) over each word's occurrences."""
    weights = np.zeros(len(graph))
    for pos, tok in enumerate(tokens, start=1):
        if tok.pos in ELIGIBLE_POS:
            weights[graph.index(stem(tok.lower))] += 1.0 / pos
    return weights / weights.sum()


def positionrank(tokens, candidates, k: int, window: int = 2, damping: float = 0.85):
    check_k(k)
    graph = build_word_graph(tokens, window)
    if len(graph) == 0 or not candidates:
        return []
    res = pagerank(graph, PageRankConfig(damping=damping, bias=position_bias(tokens, graph)))
    return top_k(candidates, _sum_word_scores(graph, res.scores, candidates), k)


# -- topics ----------------------------------------------------------------------

def stem_jaccard(a, b) -> float:
    sa, sb = set(a.stems), set(b.stems)
    return len(sa & sb) / len(sa | sb)


def cluster_topics(candidates, threshold: float = 0.25) -> list[list[int]]:
    """Average-linkage agglomerative clustering on stem-set Jaccard similarity.

    Clusters keep merging while the best average similarity between two
    clusters is at least ``threshold``.  Returns lists of candidate indices,
    each sorted, ordered by their smallest member.
    """
    n = len(candidates)
    # pairwise similarity sums between clusters; average = sum / (|a| * |b|)
    sums = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            sums[i, j] = sums[j, i] = stem_jaccard(candidates[i], candidates[j])
    sizes = np.ones(n)
    alive = np.ones(n, dtype=bool)
    members = {i: [i] for i in range(n)}
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    while alive.sum() > 1:
        avg = np.where(upper & alive[:, None] & alive[None, :],
                       sums / np.outer(sizes, sizes), -np.inf)
        a, b = np.unravel_index(np.argmax(avg), avg.shape)
        if avg[a, b] < threshold:
            break
        sums[a, :] += sums[b, :]
        sums[:, a] += sums[:, b]
        sums[a, a] = 0.0
        sizes[a] += sizes[b]
        alive[b] = False
        members[a] = sorted(members[a] + members.pop(b))
    clusters = list(members.values())
    return sorted(clusters, key=lambda c: c[0])


def _reciprocal_distance(ca, cb) -> float:
    return sum(1.0 / abs(p - q) for p in ca.positions for q in cb.positions)


def topic_graph(candidates, topics) -> WordGraph:
    g = WordGraph(list(range(len(topics))))
    for a in range(len(topics)):
        for b in range(a + 1, len(topics)):
            w = sum(_reciprocal_distance(candidates[i], candidates[j])
                    for i in topics[a] for j in topics[b])
            if w > 0:
                g.add_edge(a, b, w)
    return g


def topicrank(candidates, k: int, threshold: float = 0.25, config: PageRankConfig | None = None):
    """One keyphrase per topic: its earliest-occurring member, scored by the topic."""
    check_k(k)
    if not candidates:
        return []
    topics = cluster_topics(candidates, threshold)
    res = pagerank(topic_graph(candidates, topics), config)
    reps, scores = [], []
    for t, members in enumerate(topics):
        reps.append(min((candidates[i] for i in members), key=lambda c: c.first_offset))
        scores.append(float(res.scores[t]))
    return top_k(reps, scores, k)


def multipartite_graph(candidates, topics, alpha: float = 1.1) -> WordGraph:
    """Directed candidate graph with the first-occurrence weight adjustment.

    For every topic with several members, edges pointing *into* its earliest
    candidate gain ``alpha * exp(1 / position)`` times the weight the other
    members send to the same neighbour; ``position`` is the 1-based token
    index of that candidate's first occurrence.
    """
    topic_of = {}
    for t, members in enumerate(topics):
        for i in members:
            topic_of[i] = t
    n = len(candidates)
    g = WordGraph(list(range(n)), directed=True)
    for i in range(n):
        for j in range(i + 1, n):
            if topic_of[i] == topic_of[j]:
                continue
            w = _reciprocal_distance(candidates[i], candidates[j])
            if w > 0:
                g.add_edge(i, j, w)
                g.add_edge(j, i, w)

    base = dict(g.edges)
    boosts: dict[tuple[int, int], float] = defaultdict(float)
    for members in topics:
        if len(members) < 2:
            continue
        first = min(members, key=lambda i: candidates[i].positions[0])
        position = candidates[first].positions[0] + 1
        factor = alpha * math.exp(1.0 / position)
        for end in range(n):
            if (first, end) not in base:
                continue
            boost = sum(base.get((v, end), 0.0) for v in members if v != first)
            if boost > 0:
                boosts[(end, first)] += boost * factor
    for (src, dst), extra in boosts.items():
        g.add_edge(src, dst, extra)
    return g


def multipartiterank(candidates, k: int, alpha: float = 1.1, threshold: float = 0.25,
                     config: PageRankConfig | None = None):
    check_k(k)
    if not candidates:
        return []
    topics = cluster_topics(candidates, threshold)
    res = pagerank(multipartite_graph(candidates, topics, alpha), config)
    return top_k(candidates, [float(x) for x in res.scores], k)
