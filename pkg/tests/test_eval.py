import random
from fractions import Fraction

import pytest

from conftest import DATA, theme_miss_fixture
from oracles import prf_fractions
from themekp.corpus import AnnotatedPost, load_annotations
from themekp.evaluation import (avg_jaccard, evaluate_at_k, f1_at_k, f1_at_k_table, format_percent,
                                gold_set, jaccard, prf, prf_table, theme_miss_analysis)
from themekp.normalize import Theme
from themekp.rankers import RankedKeyphrase


def test_prf_examples():
    r = prf({"a", "b", "c"}, {"a", "b", "d", "e"})
    assert (r.precision_q, r.recall_q) == (Fraction(2, 3), Fraction(1, 2))
    assert r.f1_q == Fraction(4, 7)
    assert (r.support, r.n_pred, r.n_correct) == (4, 3, 2)


@pytest.mark.parametrize("pred,gold,expected", [
    (set(), set(), (1, 1, 1)),
    (set(), {"a"}, (0, 0, 0)),
    ({"a"}, set(), (0, 0, 0)),
    ({"x"}, {"a"}, (0, 0, 0)),
])
def test_prf_edge_cases(pred, gold, expected):
    r = prf(pred, gold)
    assert (r.precision_q, r.recall_q, r.f1_q) == expected


def test_prf_matches_oracle_and_duality():
    rng = random.Random(0)
    universe = list("abcdefgh")
    for _ in range(200):
        a = set(rng.sample(universe, rng.randint(0, 8)))
        b = set(rng.sample(universe, rng.randint(0, 8)))
        r = prf(a, b)
        assert (r.precision_q, r.recall_q, r.f1_q) == prf_fractions(a, b)
        assert prf(a, b).recall_q == prf(b, a).precision_q


def test_f1_at_k():
    ranked = [RankedKeyphrase(p, 1.0 / i, i) for i, p in enumerate(["a", "x", "b", "y"], start=1)]
    assert f1_at_k(ranked, {"a", "b"}, 1).precision_q == 1
    r2 = f1_at_k(ranked, {"a", "b"}, 3)
    assert (r2.precision_q, r2.recall_q) == (Fraction(2, 3), 1)
    assert f1_at_k(["a", "b"], {"a", "b"}, 10).precision_q == 1     # fewer than k predictions
    with pytest.raises(ValueError):
        f1_at_k(ranked, {"a"}, 0)


def test_recall_monotone_in_k():
    rng = random.Random(1)
    for _ in range(200):
        ranked = rng.sample(list("abcdefghij"), rng.randint(0, 10))
        gold = set(rng.sample(list("abcdefghij"), rng.randint(0, 10)))
        recalls = [f1_at_k(ranked, gold, k).recall_q for k in range(1, 12)]
        assert recalls == sorted(recalls)


def test_jaccard_table_rows():
    assert jaccard({"craving", "heroin", "clean", "suboxone"}, {"suboxone", "craving", "heroin"}) == 0.75
    assert jaccard({"suboxone", "taper", "withdrawal"}, {"suboxone", "taper", "withdrawal"}) == 1.0
    assert jaccard(set(), set()) == 1.0
    assert jaccard({"a"}, set()) == 0.0


def test_agreement_average():
    rep = avg_jaccard(load_annotations(DATA / "agreement_example.jsonl"))
    assert rep.per_post_ji == [0.75, 1.0]
    assert abs(rep.average - 0.875) < 1e-12


def test_agreement_skips_single_annotator(caplog):
    posts = [AnnotatedPost("a", [frozenset({"x"})]), AnnotatedPost("b", [frozenset({"x"}), frozenset({"x"})])]
    rep = avg_jaccard(posts)
    assert rep.skipped == ["a"] and rep.average == 1.0
    with pytest.raises(ValueError):
        avg_jaccard(posts[:1])


def test_agreement_with_normalization(table):
    post = AnnotatedPost("p", [frozenset({"dope", "Cravings"}), frozenset({"heroin", "craving"})])
    assert avg_jaccard([post], table).average == 1.0
    assert avg_jaccard([post]).average == 0.0


def test_gold_modes(table):
    post = AnnotatedPost("p", [frozenset({"dope", "kratom"}), frozenset({"heroin"})])
    assert gold_set(post, "union", table) == {"heroin", "kratom"}
    assert gold_set(post, "intersection", table) == {"heroin"}
    with pytest.raises(ValueError):
        gold_set(post, "majority")


def test_evaluate_at_k_macro_average(table):
    gold = {"p1": {"heroin", "kratom"}, "p2": {"suboxone"}}
    preds = {"p1": ["dope", "tea", "kratom"], "p2": [], "extra": ["x"]}
    res = evaluate_at_k(preds, gold, ks=(1, 3), table=table)
    assert res[1].precision_q == Fraction(1, 2)
    assert res[3].recall_q == Fraction(1, 2)
    text = f1_at_k_table({"tfidf": res})
    assert "F1@1" in text and "tfidf" in text
    assert "tfidf" in prf_table({"tfidf": res[3]})


def test_theme_miss_percentages():
    annotated, predictions = theme_miss_fixture()
    rep = theme_miss_analysis(predictions, annotated)
    assert format_percent(rep.row(Theme.MedicalHistory).relative_error) == "53.15"
    assert format_percent(rep.row(Theme.PsychophysicalEffects).relative_error) == "41.91"
    assert rep.row(Theme.TreatmentOptions).relative_error == 0.0
    assert rep.row(Theme.Others).relative_error is None
    assert rep.to_dict()["MedicalHistory"] == {"gold": 111, "missed": 59, "relative_error": "53.15"}
    assert "53.15" in rep.to_text()
