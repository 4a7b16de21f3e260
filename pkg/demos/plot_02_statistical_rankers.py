"""
TfIdf and YAKE
==============

Two rankers that need no graph: TfIdf against a document-frequency index
built over the corpus, and YAKE, which scores words from in-document
statistics alone.
"""

from importlib import resources

from themekp.corpus import document_text, filter_irrelevant, load_corpus
from themekp.rankers import build_df_index, tfidf_rank, yake_rank
from themekp.textproc import analyze

corpus = filter_irrelevant(load_corpus(resources.files("themekp") / "data" / "mini" / "corpus.jsonl"))
docs = [analyze(document_text(p)) for p in corpus]

###############################################################################
# The index counts, for each candidate stem form, how many posts contain it.

index = build_df_index([d.candidates for d in docs])
print(index.n_docs, "documents;", "suboxone appears in", index.get("suboxon"), "of them")

###############################################################################
# TfIdf rewards phrases repeated in this post but rare across the corpus.

doc = docs[0]
for r in tfidf_rank(doc.candidates, index, 5):
    print(f"tfidf {r.rank}. {r.phrase:<20} {r.score:.3f}")

###############################################################################
# YAKE reports 1 / (1 + weight) so that, like the other rankers, a higher
# score is better.

for r in yake_rank(doc.tokens, doc.candidates, 5):
    print(f"yake  {r.rank}. {r.phrase:<20} {r.score:.3f}")
