"""Keyphrase rankers.  Every ranker returns ``RankedKeyphrase`` lists, best first."""

from .base import RankedKeyphrase, check_k, sort_key, top_k
from .statistical import (DocumentFrequencyIndex, YakeConfig, build_df_index, tfidf_rank,
                          tfidf_scores, yake_candidate_score, yake_rank, yake_term_scores)
from .graph import (PageRankConfig, PageRankResult, WordGraph, build_word_graph, cluster_topics,
                    multipartite_graph, multipartiterank, pagerank, position_bias, positionrank,
                    stem_jaccard, textrank, topic_graph, topicrank)
from .embedding import (EmbeddingError, FileVectorProvider, HttpVectorProvider, cosine,
                        embed_rank, file_vector_provider, http_vector_provider)

METHODS = ("tfidf", "yake", "textrank", "topicrank", "positionrank", "multipartite", "embed")
