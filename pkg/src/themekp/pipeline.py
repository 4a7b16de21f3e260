"""Run a ranker over every post of a corpus."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .corpus import document_text
from .rankers import (METHODS, PageRankConfig, build_df_index, embed_rank, multipartiterank,
                      positionrank, textrank, tfidf_rank, topicrank, yake_rank)
from .textproc import analyze


@dataclass
class RankParams:
    window: int = 2
    yake_window: int = 1
    damping: float = 0.85
    threshold: float = 0.25
    alpha: float = 1.1


def rank_document(doc, method: str, k: int, *, df_index=None, provider=None,
                  params: RankParams | None = None):
    params = params or RankParams()
    cands = doc.candidates
    pr = PageRankConfig(damping=params.damping)
    if method == "tfidf":
        return tfidf_rank(cands, df_index, k)
    if method == "yake":
        return yake_rank(doc.tokens, cands, k, window=params.yake_window)
    if method == "textrank":
        return textrank(doc.tokens, cands, k, window=params.window, config=pr)
    if method == "positionrank":
        return positionrank(doc.tokens, cands, k, window=params.window, damping=params.damping)
    if method == "topicrank":
        return topicrank(cands, k, threshold=params.threshold, config=pr)
    if method == "multipartite":
        return multipartiterank(cands, k, alpha=params.alpha, threshold=params.threshold, config=pr)
    if method == "embed":
        if provider is None:
            raise ValueError("the embed method needs an embedding provider")
        return embed_rank(doc.text, cands, provider, k)
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def rank_corpus(corpus, method: str, k: int, *, provider=None, params: RankParams | None = None,
                jobs: int = 1) -> list[dict]:
    """One ``{post_id, method, keyphrases}`` record per post, in corpus order."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    posts = list(corpus)

    def prepare(post):
        return analyze(document_text(post))

    def run(pool_map):
        docs = list(pool_map(prepare, posts))
        df_index = build_df_index([d.candidates for d in docs]) if method == "tfidf" and docs else None

        def one(args):
            post, doc = args
            ranked = rank_document(doc, method, k, df_index=df_index, provider=provider, params=params)
            return {"post_id": post.id, "method": method,
                    "keyphrases": [r.to_record() for r in ranked]}
        return list(pool_map(one, zip(posts, docs)))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return run(pool.map)
    return run(map)
