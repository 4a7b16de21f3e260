import time
import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from themekp.corpus import filter_irrelevant, load_annotations, load_corpus
from themekp.normalize import seed_table
from themekp.textproc import analyze

DATA = Path(str(resources.files("themekp") / "data"))
MINI = DATA / "mini"

FIVE_DOCS = [
    "Started suboxone last month after years of heroin. The cravings fade slowly. "
    "My doctor keeps the suboxone dose steady while the cravings settle.",
    "Precipitated withdrawal is brutal. I took the first dose of suboxone too early and "
    "precipitated withdrawal hit within an hour. Chills, sweats and severe anxiety.",
    "Kratom helped with withdrawal aches during my taper. Kratom tea every morning, "
    "then a slow suboxone taper with my clinic.",
    "Chronic pain after major surgery made the methadone clinic necessary. "
    "Methadone dose changes need patience. Chronic pain still flares at night.",
    "Poppy pods and kratom were my bridge before treatment. Now the clinic handles "
    "my suboxone and naloxone is in my bag.",
]


@pytest.fixture(scope="session")
def five_docs():
    return [analyze(t) for t in FIVE_DOCS]


@pytest.fixture(scope="session")
def table():
    return seed_table()


@pytest.fixture(scope="session")
def mini_corpus():
    return filter_irrelevant(load_corpus(MINI / "corpus.jsonl"))


@pytest.fixture(scope="session")
def mini_annotations():
    return load_annotations(MINI / "annotations.jsonl")


def theme_miss_fixture():
    """Annotated posts plus predictions with 59/111 Medical History and 57/136
    Psychophysical Effects gold occurrences missed."""
    from themekp.corpus import AnnotatedPost
    from themekp.normalize import Theme

    annotated, predictions = [], {}
    plan = [(Theme.MedicalHistory, 111, 59), (Theme.PsychophysicalEffects, 136, 57),
            (Theme.TreatmentOptions, 10, 0)]
    n = 0
    for theme, gold, missed in plan:
        for i in range(gold):
            pid = f"{theme.name}-{i}"
            phrase = f"{theme.name.lower()} phrase {i % 7}"
            annotated.append(AnnotatedPost(pid, [frozenset({phrase})], frozenset({phrase}),
                                           {phrase: theme}))
            predictions[pid] = [] if i < missed else [phrase]
            n += 1
    return annotated, predictions


PIPELINE_METHODS = ("tfidf", "yake", "textrank", "topicrank", "positionrank", "multipartite", "embed")


def run_pipeline(out):
    """ingest -> rank -> llm replay -> normalize -> eval -> analyze into ``out``; returns exit codes."""
    from themekp.cli import main

    out.mkdir(parents=True, exist_ok=True)
    codes = [main(["--quiet", "ingest", str(MINI / "corpus.jsonl"), "--out", str(out / "posts.jsonl")])]
    for m in PIPELINE_METHODS:
        extra = ["--vectors", str(MINI / "vectors.txt")] if m == "embed" else []
        codes.append(main(["rank", str(out / "posts.jsonl"), "--method", m, "--k", "15",
                           "--out", str(out / f"rank_{m}.jsonl")] + extra))
    codes.append(main(["llm", str(out / "posts.jsonl"), "--template", "basic", "--replay",
                       str(MINI / "transcripts.jsonl"), "--out", str(out / "llm_basic.jsonl")]))
    ranked = "".join((out / f"rank_{m}.jsonl").read_text() for m in PIPELINE_METHODS)
    (out / "rank_all.jsonl").write_text(ranked)
    gold = str(MINI / "annotations.jsonl")
    codes.append(main(["normalize", str(out / "rank_all.jsonl"), "--out", str(out / "rank_norm.jsonl")]))
    codes.append(main(["eval", str(out / "rank_all.jsonl"), "--gold", gold, "--normalize", "seed",
                       "--out", str(out / "eval_rank.txt")]))
    codes.append(main(["eval", str(out / "llm_basic.jsonl"), "--gold", gold, "--normalize", "seed",
                       "--format", "json", "--out", str(out / "eval_llm.json")]))
    for what in ("freq", "cooccur", "agreement"):
        codes.append(main(["analyze", gold, "--what", what, "--format", "json",
                           "--out", str(out / f"analyze_{what}.json")]))
    codes.append(main(["analyze", gold, "--what", "engagement", "--corpus", str(out / "posts.jsonl"),
                       "--format", "csv", "--out", str(out / "analyze_engagement.csv")]))
    codes.append(main(["analyze", gold, "--what", "theme-miss", "--predictions", str(out / "llm_basic.jsonl"),
                       "--table", "seed", "--format", "json", "--out", str(out / "analyze_theme_miss.json")]))
    return codes


# -- acceptance report ---------------------------------------------------------------------

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}
_SESSION_START = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    elapsed = time.perf_counter() - _SESSION_START
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[n]
        if n == 10:
            ok = ok and elapsed < 120
            detail += f"; suite wall time {elapsed:.1f}s (limit 120s)"
        tr.write_line(f"{'PASS' if ok else 'FAIL'} [{n:2d}] {name}: {detail}")
