"""
Agreement and scoring
=====================

Inter-annotator agreement by Jaccard index, then F1@k for every ranker on
the synthetic corpus.
"""

from importlib import resources

from themekp.corpus import load_annotations, load_corpus, filter_irrelevant
from themekp.evaluation import avg_jaccard, evaluate_at_k, f1_at_k_table, gold_set, jaccard, prf
from themekp.normalize import seed_table
from themekp.pipeline import rank_corpus
from themekp.rankers import METHODS, file_vector_provider

data = resources.files("themekp") / "data"

###############################################################################
# Two annotators, two posts.

print(jaccard({"craving", "heroin", "clean", "suboxone"}, {"suboxone", "craving", "heroin"}))
print(avg_jaccard(load_annotations(data / "agreement_example.jsonl")).average)

###############################################################################
# Precision and recall are exact fractions underneath.

r = prf({"heroin", "kratom", "tea"}, {"heroin", "kratom", "relapse", "clinic"})
print(r.precision_q, r.recall_q, r.f1_q)

###############################################################################
# F1@k on normalized phrases, macro-averaged over posts.

table = seed_table()
annotated = load_annotations(data / "mini" / "annotations.jsonl")
gold = {a.post_id: gold_set(a, "union", table) for a in annotated}
corpus = filter_irrelevant(load_corpus(data / "mini" / "corpus.jsonl"))
provider = file_vector_provider(data / "mini" / "vectors.txt")
results = {}
for method in METHODS:
    recs = rank_corpus(corpus, method, 15, provider=provider)
    preds = {r["post_id"]: [k["phrase"] for k in r["keyphrases"]] for r in recs}
    results[method] = evaluate_at_k(preds, gold, (5, 10, 15), table)
print(f1_at_k_table(results))
