"""
Loading posts and extracting candidate phrases
==============================================

Read the bundled synthetic corpus, drop the posts nobody should annotate,
and look at what the text processor turns a post into.
"""

from importlib import resources

from themekp.corpus import document_text, filter_irrelevant, load_corpus
from themekp.textproc import analyze

mini = resources.files("themekp") / "data" / "mini"
raw = load_corpus(mini / "corpus.jsonl")
corpus = filter_irrelevant(raw)
print(f"{len(raw)} posts read, {len(corpus)} kept")

###############################################################################
# Deleted, removed, link-only and poll posts are gone.

kept = {p.id for p in corpus}
print("dropped:", [p.id for p in raw if p.id not in kept])

###############################################################################
# A ranker sees the title and body joined by a newline.  Tokens carry
# character offsets, a sentence index and a part-of-speech tag.

post = corpus.posts[0]
doc = analyze(document_text(post))
for tok in doc.tokens[:12]:
    print(f"{tok.surface:>10}  {tok.pos:<6} sentence {tok.sentence_index}  chars {tok.start}-{tok.end}")

###############################################################################
# Candidates are maximal ADJ* (NOUN|PROPN)+ runs.  Repeats with the same
# stems merge into one candidate with several occurrences.

for c in doc.candidates:
    print(f"{c.phrase:<22} stems={c.stem_form!r:<20} occurrences={c.doc_freq}")
