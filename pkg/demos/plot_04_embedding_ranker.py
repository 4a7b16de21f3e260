"""
Ranking by embedding similarity
===============================

The embedding ranker scores each candidate by its cosine similarity to the
whole post.  Any object with ``embed(text) -> vector`` and a ``name`` works
as a provider; here we use the bundled toy word-vector file.
"""

from importlib import resources

from themekp.rankers import cosine, embed_rank, file_vector_provider
from themekp.textproc import analyze

provider = file_vector_provider(resources.files("themekp") / "data" / "mini" / "vectors.txt")
print(len(provider.vectors), "words,", provider.dimension, "dimensions")

###############################################################################
# A phrase vector is the mean of its known word vectors.

print("cosine(heroin, fentanyl) =", round(cosine(provider.embed("heroin"), provider.embed("fentanyl")), 4))

text = "Kratom helped with withdrawal aches during my taper. Kratom tea every morning."
doc = analyze(text)
for r in embed_rank(text, doc.candidates, provider, 5):
    print(f"{r.rank}. {r.phrase:<18} {r.score:.4f}")

###############################################################################
# A live service is used the same way; requests are cached by text hash
# and retried on 429 and 5xx.  Here a fake transport stands in for it.

import json
from themekp.rankers import HttpVectorProvider


def fake_service(url, body, headers):
    texts = json.loads(body)["texts"]
    return 200, json.dumps({"vectors": [[len(t), t.count("e") + 1.0] for t in texts]}).encode()


svc = HttpVectorProvider("http://localhost/embed", transport=fake_service)
embed_rank(text, doc.candidates, svc, 3)
print("requests after the first ranking:", svc.requests)
embed_rank(text, doc.candidates, svc, 3)
print("requests after the second ranking:", svc.requests)
