import random

import pytest
from hypothesis import given, settings, strategies as st

from themekp.normalize import (NormalizationTable, TableError, Theme, assign_theme, clean,
                               load_table, normalize_list, normalize_phrase, normalize_set)


@pytest.mark.parametrize("variant,canonical", [
    ("dope", "heroin"), ("pwd", "precipitated withdrawal"), ("PWD", "precipitated withdrawal"),
    ("cravings", "craving"), ("sub", "suboxone"), ("subs", "suboxone"), ("h", "heroin"),
    ("Detoxing", "detox"), ("withdrawals", "withdrawal"), ("  Dope ", "heroin"),
    ("precipitated withdrawals", "precipitated withdrawal"), ("sublocade", "sublocade"),
    ("relapsed", "relapse"), ("online clinic", "clinic"),
])
def test_seed_mappings(table, variant, canonical):
    assert normalize_phrase(variant, table) == (canonical, False)


@pytest.mark.parametrize("phrase,theme", [
    ("naloxone", Theme.TreatmentOptions), ("fentanyl", Theme.SubstanceDependencyRecovery),
    ("panic attack", Theme.PsychophysicalEffects), ("covid", Theme.MedicalHistory),
    ("scam", Theme.Others), ("never heard of it", Theme.Others),
])
def test_seed_themes(table, phrase, theme):
    assert assign_theme(phrase, table) == theme


def test_other_phrases_are_flagged_and_dropped(table):
    assert normalize_phrase("accidentally", table) == ("accidentally", True)
    assert normalize_set(["dope", "accidentally", "heroin"], table) == {"heroin"}
    assert normalize_set(["accidentally"], table, drop_other=False) == {"accidentally"}


def test_normalize_list_keeps_order(table):
    assert normalize_list(["subs", "dope", "heroin", "sub"], table) == ["suboxone", "heroin"]


def test_theme_parse():
    assert Theme.parse("Treatment Options") is Theme.TreatmentOptions
    assert Theme.parse("MedicalHistory") is Theme.MedicalHistory
    with pytest.raises(ValueError):
        Theme.parse("Astrology")


def test_clean():
    assert clean("  Kratom\t TEA ") == "kratom tea"


def test_chain_rejected():
    with pytest.raises(TableError, match="fixed points"):
        NormalizationTable({"a": "b", "b": "c"}, frozenset(), {"c": Theme.Others})


def test_other_and_theme_conflict_rejected():
    with pytest.raises(TableError):
        NormalizationTable({}, frozenset({"x"}), {"x": Theme.MedicalHistory})


def test_unthemed_canonical_rejected():
    with pytest.raises(TableError, match="no theme"):
        NormalizationTable({"dope": "heroin"}, frozenset(), {})


def test_load_table_reports_line_numbers(tmp_path):
    p = tmp_path / "t.tsv"
    p.write_text("# comment\nmap\tdope\theroin\nmap\tdope\tfentanyl\ntheme\theroin\tSubstanceDependencyRecovery\n"
                 "theme\tfentanyl\tSubstanceDependencyRecovery\nbogus line\n")
    with pytest.raises(TableError) as exc:
        load_table(p)
    text = str(exc.value)
    assert "line 3" in text and "line 2" in text and "line 6" in text


def test_load_table_conflicting_themes(tmp_path):
    p = tmp_path / "t.tsv"
    p.write_text("theme\tdoctor\tTreatmentOptions\ntheme\tdoctor\tOthers\n")
    with pytest.raises(TableError, match="line 2"):
        load_table(p)


def test_identity_rows_only_declare_canonicals(tmp_path):
    p = tmp_path / "t.tsv"
    p.write_text("map\theroin\theroin\ntheme\theroin\tSubstanceDependencyRecovery\n")
    t = load_table(p)
    assert t.semantic_map == {} and "heroin" in t.canonicals


def fuzz_phrases(table, rng, n):
    words = sorted({w for p in table.canonicals | set(table.semantic_map) for w in p.split()})
    extras = ["s", "es", "ing", "ed", ""]
    out = []
    for _ in range(n):
        k = rng.randint(1, 3)
        ph = " ".join(rng.choice(words) + rng.choice(extras) for _ in range(k))
        out.append(ph.upper() if rng.random() < 0.2 else ph)
    return out


def test_idempotence_on_fuzzed_sets(table):
    rng = random.Random(3)
    for _ in range(500):
        phrases = fuzz_phrases(table, rng, rng.randint(0, 6))
        once = normalize_set(phrases, table)
        assert normalize_set(once, table) == once
        for ph in phrases:
            c, _ = normalize_phrase(ph, table)
            assert normalize_phrase(c, table)[0] == c


@settings(max_examples=300, deadline=None)
@given(st.lists(st.text(alphabet="abcdefghijklmnopqrstuvwxyz ", max_size=20), max_size=5))
def test_idempotence_on_arbitrary_text(phrases):
    from themekp.normalize import seed_table
    t = seed_table()
    once = normalize_set(phrases, t)
    assert normalize_set(once, t) == once
