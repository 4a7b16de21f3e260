import json
from fractions import Fraction

import pytest

from conftest import MINI
from themekp.corpus import Post
from themekp.evaluation import prediction_count_stats
from themekp.llm import (ExtractionRun, LlmClient, LlmConfig, LlmConfigError, LlmError,
                         PromptTemplate, RateLimiter, TemplateError, TranscriptStore,
                         aggregate_runs, combine_theme_runs, load_templates, parse_response,
                         render_prompt, run_extraction)
from themekp.normalize import Theme

POST = Post(id="p1", title="Day 3", body="Cravings are bad on suboxone.")


@pytest.fixture(scope="module")
def templates():
    return load_templates()


# -- templates ------------------------------------------------------------------------

def test_all_styles_ship(templates):
    styles = {t.style for t in templates.values()}
    assert styles == {"basic", "guided", "theme_specific"}
    assert {t.theme for t in templates.values() if t.style == "theme_specific"} == set(Theme) - {Theme.Others}


def test_render_contains_post_and_examples(templates):
    text = render_prompt(templates["fancy_few_shot_3"], POST)
    assert "Cravings are bad on suboxone." in text and "Day 3" in text
    assert text.count("Example ") == 3
    assert "{post}" not in text and "{examples}" not in text


def test_guided_template_names_themes(templates):
    text = render_prompt(templates["fancy"], POST)
    for name in ("Treatment Options", "Substance Dependency & Recovery", "Medical History",
                 "Psychophysical Effects"):
        assert name in text


def test_random_examples_depend_on_seed_only(templates):
    t = templates["fancy_few_shot_random"].with_shots(4)
    a = render_prompt(t, POST, "0:1:p1")
    assert a == render_prompt(t, POST, "0:1:p1")
    assert a.count("Example ") == 4
    others = {render_prompt(t, POST, f"0:{r}:p1") for r in range(6)}
    assert len(others) > 1
    with pytest.raises(TemplateError):
        t.with_shots(99)
    with pytest.raises(TemplateError):
        templates["basic"].with_shots(2)


@pytest.mark.parametrize("kwargs", [
    dict(style="basic", body_template="no placeholder"),
    dict(style="basic", body_template="{post} {mystery}"),
    dict(style="bogus", body_template="{post}"),
    dict(style="basic", body_template="{post}", shots=2),
    dict(style="guided", body_template="{post}"),
    dict(style="theme_specific", body_template="{post}"),
    dict(style="basic", body_template="{post", shots=0),
])
def test_invalid_templates_rejected(kwargs):
    with pytest.raises(TemplateError):
        PromptTemplate(id="t", **kwargs)


# -- parsing ---------------------------------------------------------------------------

@pytest.mark.parametrize("text,expected", [
    ("['heroin', 'kratom']", ["heroin", "kratom"]),
    ('Keyphrases: ["heroin", "kratom", "heroin"]', ["heroin", "kratom"]),
    ("[heroin, kratom tea]", ["heroin", "kratom tea"]),
    ("- heroin\n- kratom", ["heroin", "kratom"]),
    ("1. heroin\n2) kratom", ["heroin", "kratom"]),
    ("heroin\nkratom", ["heroin", "kratom"]),
    ("heroin, kratom", ["heroin", "kratom"]),
    ("[]", []),
    ("I cannot help with that", []),
    ("", []),
])
def test_parse_response(text, expected):
    assert parse_response(text) == expected


# -- client -------------------------------------------------------------------------------

def ok(content):
    return 200, json.dumps({"choices": [{"message": {"content": content}}]}).encode()


def test_missing_key_is_config_error(monkeypatch):
    monkeypatch.delenv("LLM_API_KEY", raising=False)
    with pytest.raises(LlmConfigError):
        LlmClient(LlmConfig())


def test_bad_config_values():
    with pytest.raises(LlmConfigError):
        LlmConfig(n_runs=0)
    with pytest.raises(LlmConfigError):
        LlmConfig(temperature=-1)


def test_retry_after_429_and_transcript_written(tmp_path):
    answers = [(429, b"slow down"), ok("['heroin']")]
    sleeps = []
    store = TranscriptStore(tmp_path / "t.jsonl")
    client = LlmClient(LlmConfig(rate_limit=0, backoff=2.0), store, api_key="k",
                       transport=lambda *a: answers.pop(0), sleep=sleeps.append)
    assert client.call("prompt", "basic", "p1", 0) == "['heroin']"
    assert client.requests == 2 and sleeps == [2.0]
    reloaded = TranscriptStore(tmp_path / "t.jsonl")
    assert reloaded.get("basic", "p1", 0)["response"] == "['heroin']"


def test_gives_up_and_hard_errors():
    client = LlmClient(LlmConfig(rate_limit=0, max_retries=2), api_key="k",
                       transport=lambda *a: (503, b""), sleep=lambda s: None)
    with pytest.raises(LlmError, match="giving up"):
        client.call("p", "basic", "p1", 0)
    assert client.requests == 3
    client = LlmClient(LlmConfig(rate_limit=0), api_key="k", transport=lambda *a: (400, b"bad"),
                       sleep=lambda s: None)
    with pytest.raises(LlmError, match="400"):
        client.call("p", "basic", "p1", 0)


def test_replay_never_uses_transport():
    def boom(*a):
        raise AssertionError("network touched")
    store = TranscriptStore()
    store.add("basic", "p1", 0, "prompt", "['a']")
    client = LlmClient(store=store, replay=True, transport=boom)
    assert client.call("ignored", "basic", "p1", 0) == "['a']"
    with pytest.raises(LlmError):
        client.call("ignored", "basic", "p2", 0)


def test_rate_limiter_spaces_requests():
    t = [0.0]
    slept = []

    def sleep(s):
        slept.append(s)
        t[0] += s
    lim = RateLimiter(2.0, clock=lambda: t[0], sleep=sleep)
    for _ in range(3):
        lim.wait()
    assert slept == [0.5, 0.5]


# -- runs ---------------------------------------------------------------------------------

def test_replay_end_to_end_is_deterministic(templates, mini_corpus):
    store = TranscriptStore(MINI / "transcripts.jsonl")
    outs = []
    for _ in range(2):
        client = LlmClient(store=store, replay=True)
        runs = run_extraction(list(mini_corpus), templates["basic"], client, n_runs=5)
        outs.append(json.dumps([r.to_records() for r in runs]))
    assert outs[0] == outs[1]
    assert len(json.loads(outs[0])) == 5


def test_live_run_records_transcripts(templates):
    client = LlmClient(LlmConfig(rate_limit=0), api_key="k", transport=lambda *a: ok("- heroin"),
                       sleep=lambda s: None)
    runs = run_extraction([POST], templates["basic"], client, n_runs=2, jobs=2)
    assert [r.predictions for r in runs] == [{"p1": ["heroin"]}] * 2
    assert len(client.store) == 2


def hand_runs():
    preds = [({"a", "b"}, {"c"}), ({"a"}, {"c", "d"}), ({"x"}, set()), ({"a", "b", "x"}, {"c"}),
             ({"b"}, {"d"})]
    return [ExtractionRun(i, "t", {"p1": sorted(a), "p2": sorted(b)}) for i, (a, b) in enumerate(preds)]


def test_aggregate_matches_hand_computation():
    # per run (P, R, F1): (1,1,1) (3/4,3/4,2/3) (0,0,0) (5/6,1,9/10) (1/2,1/4,1/3)
    agg = aggregate_runs(hand_runs(), {"p1": {"a", "b"}, "p2": {"c"}})
    assert agg.mean.precision_q == Fraction(37, 60)
    assert agg.mean.recall_q == Fraction(3, 5)
    assert agg.mean.f1_q == Fraction(29, 50)
    assert [r.f1_q for r in agg.per_run] == [1, Fraction(2, 3), 0, Fraction(9, 10), Fraction(1, 3)]


def test_aggregate_rejects_mismatched_runs():
    runs = hand_runs()
    del runs[1].predictions["p2"]
    with pytest.raises(ValueError):
        aggregate_runs(runs, {"p1": {"a"}, "p2": {"c"}})


def test_combine_theme_runs_is_union():
    a = ExtractionRun(0, "t1", {"p1": ["heroin", "kratom"]})
    b = ExtractionRun(0, "t2", {"p1": ["kratom", "insomnia"], "p2": ["covid"]})
    c = combine_theme_runs([a, b])
    assert c.predictions == {"p1": ["heroin", "kratom", "insomnia"], "p2": ["covid"]}


def test_prediction_count_stats():
    assert prediction_count_stats([["a", "b"], ["a", "b", "c", "d"]]) == (3.0, 1.0)
    with pytest.raises(ValueError):
        prediction_count_stats([])
