"""
Prompting a chat model, offline
===============================

Prompts are built from templates; responses come from recorded transcripts,
so this runs without a network or an API key.
"""

from importlib import resources

from themekp.corpus import filter_irrelevant, load_annotations, load_corpus
from themekp.evaluation import gold_set, prediction_count_stats
from themekp.llm import (LlmClient, TranscriptStore, aggregate_runs, load_templates, parse_response,
                         render_prompt, run_extraction)
from themekp.normalize import seed_table

mini = resources.files("themekp") / "data" / "mini"
corpus = filter_irrelevant(load_corpus(mini / "corpus.jsonl"))
templates = load_templates()
print(sorted(templates))

###############################################################################
# A random few-shot template draws its examples from a fixed pool.  The draw
# depends only on the seed string, so the prompt is reproducible.

t = templates["fancy_few_shot_random"].with_shots(2)
prompt = render_prompt(t, corpus.posts[0], "0:0:m01")
print(prompt[:400], "...")

###############################################################################
# Model output arrives in many shapes; the parser accepts lists, bullets and
# comma-separated lines.

print(parse_response("Sure! ['suboxone', 'cravings']"))
print(parse_response("- suboxone\n- cravings"))

###############################################################################
# Five replayed runs, scored against normalized gold sets.

client = LlmClient(store=TranscriptStore(mini / "transcripts.jsonl"), replay=True)
runs = run_extraction(list(corpus), templates["basic"], client, n_runs=5)
table = seed_table()
gold = {a.post_id: gold_set(a, "union", table) for a in load_annotations(mini / "annotations.jsonl")}
agg = aggregate_runs(runs, gold, table)
print("mean P/R/F1: %.3f %.3f %.3f" % (agg.mean.precision, agg.mean.recall, agg.mean.f1))
print("predictions per post (mean, sd):", prediction_count_stats(
    [p for r in runs for p in r.predictions.values()]))
