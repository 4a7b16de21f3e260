"""
Graph rankers on one PageRank engine
====================================

TextRank, PositionRank, TopicRank and MultipartiteRank all run the same
biased PageRank.  This demo checks the engine against a direct linear solve
and then compares the four rankers on one post.
"""

import numpy as np

from themekp.rankers import (WordGraph, cluster_topics, multipartiterank, pagerank, positionrank,
                             textrank, topicrank)
from themekp.textproc import analyze

###############################################################################
# A triangle with one heavy edge.  The iteration stops once no score moves
# by more than 1e-8, so it lands within about that distance of the fixed
# point.

g = WordGraph(["a", "b", "c"])
g.add_edge(0, 1, 1.0)
g.add_edge(1, 2, 3.0)
g.add_edge(0, 2, 1.0)
res = pagerank(g)
W = g.matrix().toarray()
M = (W / W.sum(axis=1, keepdims=True)).T
exact = np.linalg.solve(np.eye(3) - 0.85 * M, np.full(3, 0.15 / 3))
print("iterations", res.iterations, "scores", res.scores.round(6), "gap", np.abs(res.scores - exact).max())

###############################################################################
# Four rankers, one post.

text = ("Precipitated withdrawal is brutal. I took the first dose of suboxone too early and "
        "precipitated withdrawal hit within an hour. Chills, sweats and severe anxiety.")
doc = analyze(text)
for name, ranked in [
    ("textrank", textrank(doc.tokens, doc.candidates, 5)),
    ("positionrank", positionrank(doc.tokens, doc.candidates, 5)),
    ("topicrank", topicrank(doc.candidates, 5)),
    ("multipartite", multipartiterank(doc.candidates, 5)),
]:
    print(f"{name:<13}", ", ".join(r.phrase for r in ranked))

###############################################################################
# TopicRank groups candidates whose stem sets overlap enough; each topic
# contributes its earliest phrase.

for members in cluster_topics(doc.candidates):
    print([doc.candidates[i].phrase for i in members])
