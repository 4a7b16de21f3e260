"""
What the annotations say
========================

Phrase frequency per theme, co-occurring pairs, and engagement of posts
mentioning each phrase.
"""

from importlib import resources

from themekp.analysis import cooccurrence, engagement, frequency
from themekp.corpus import load_annotations, load_corpus
from themekp.normalize import Theme

mini = resources.files("themekp") / "data" / "mini"
annotated = load_annotations(mini / "annotations.jsonl")

freq = frequency(annotated)
print(freq.counts[:8])
print({t.label: n for t, n in freq.theme_breakdown().items()})
print(frequency(annotated, Theme.TreatmentOptions).counts[:5])

###############################################################################
# The most frequent pairs.

for a, b, n in cooccurrence(annotated).pairs()[:5]:
    print(f"{a} + {b}: {n} posts")

###############################################################################
# Mean comments and mean upvotes are kept as two separate scores.

for row in engagement(annotated, load_corpus(mini / "corpus.jsonl")).rows[:5]:
    print(f"{row.phrase:<12} posts={row.occurrences} comments={row.avg_comments:.1f} upvotes={row.avg_upvotes:.1f}")
