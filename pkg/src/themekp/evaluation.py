"""Exact-match metrics, annotator agreement, theme miss analysis and reports.

Metric values are carried as ``fractions.Fraction`` so that averages over
posts and runs are exact; the float properties are what reports print.
"""

from __future__ import annotations

import json
import logging
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .normalize import NormalizationTable, Theme, normalize_list, normalize_set

logger = logging.getLogger(__name__)

GOLD_MODES = ("union", "intersection")


@dataclass(frozen=True)
class MetricReport:
    precision_q: Fraction
    recall_q: Fraction
    f1_q: Fraction
    support: int = 0       # gold phrases (summed when averaged)
    n_pred: int = 0
    n_correct: int = 0

    @property
    def precision(self) -> float:
        return float(self.precision_q)

    @property
    def recall(self) -> float:
        return float(self.recall_q)

    @property
    def f1(self) -> float:
        return float(self.f1_q)

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1,
                "support": self.support, "n_pred": self.n_pred, "n_correct": self.n_correct}


def harmonic(p: Fraction, r: Fraction) -> Fraction:
    return Fraction(0) if p + r == 0 else 2 * p * r / (p + r)


def prf(pred, gold) -> MetricReport:
    """Set-level precision/recall/F1 by exact string match.

    An empty prediction scores P = 1 against an empty gold set and 0
    otherwise; recall mirrors this for an empty gold set.
    """
    pred, gold = set(pred), set(gold)
    tp = len(pred & gold)
    if pred:
        p = Fraction(tp, len(pred))
    else:
        p = Fraction(1 if not gold else 0)
    if gold:
        r = Fraction(tp, len(gold))
    else:
        r = Fraction(1 if not pred else 0)
    return MetricReport(p, r, harmonic(p, r), len(gold), len(pred), tp)


def _phrases(ranked) -> list[str]:
    return [getattr(x, "phrase", x) for x in ranked]


def f1_at_k(ranked, gold, k: int) -> MetricReport:
    """prf between the first k ranked phrases (best first) and the gold set."""
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return prf(_phrases(ranked)[:k], gold)


def mean_reports(reports: Iterable[MetricReport]) -> MetricReport:
    """Arithmetic mean of P, R and F1 (each averaged separately)."""
    reports = list(reports)
    if not reports:
        raise ValueError("cannot average zero reports")
    n = len(reports)
    return MetricReport(
        sum((r.precision_q for r in reports), Fraction(0)) / n,
        sum((r.recall_q for r in reports), Fraction(0)) / n,
        sum((r.f1_q for r in reports), Fraction(0)) / n,
        sum(r.support for r in reports),
        sum(r.n_pred for r in reports),
        sum(r.n_correct for r in reports),
    )


# -- agreement -----------------------------------------------------------------

def jaccard_q(a, b) -> Fraction:
    a, b = set(a), set(b)
    union = a | b
    if not union:
        return Fraction(1)
    return Fraction(len(a & b), len(union))


def jaccard(a, b) -> float:
    """|A ∩ B| / |A ∪ B|; two empty sets agree perfectly (1.0)."""
    return float(jaccard_q(a, b))


@dataclass
class AgreementReport:
    per_post_ji: list[float]
    average: float
    post_ids: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"average": self.average,
                "posts": [{"post_id": p, "ji": j} for p, j in zip(self.post_ids, self.per_post_ji)],
                "skipped": self.skipped}


def avg_jaccard(annotated, table: NormalizationTable | None = None) -> AgreementReport:
    """Mean Jaccard index between the first two annotators of each post.

    With a table, both sets are normalized first (Other phrases dropped).
    Posts with a single annotator are skipped and listed in ``skipped``.
    """
    ids, values, skipped = [], [], []
    for ap in annotated:
        if len(ap.annotator_sets) < 2:
            logger.warning("post %s: %d annotator set(s), skipped", ap.post_id, len(ap.annotator_sets))
            skipped.append(ap.post_id)
            continue
        a, b = ap.annotator_sets[0], ap.annotator_sets[1]
        if table is not None:
            a, b = normalize_set(a, table), normalize_set(b, table)
        else:
            a, b = {x.lower().strip() for x in a}, {x.lower().strip() for x in b}
        ids.append(ap.post_id)
        values.append(jaccard_q(a, b))
    if not values:
        raise ValueError("no post has two annotator sets")
    avg = sum(values, Fraction(0)) / len(values)
    return AgreementReport([float(v) for v in values], float(avg), ids, skipped)


# -- gold sets and corpus-level evaluation -------------------------------------

def gold_set(post, mode: str = "union", table: NormalizationTable | None = None) -> set[str]:
    """Combine a post's annotator sets into one gold set."""
    if mode not in GOLD_MODES:
        raise ValueError(f"gold mode must be one of {GOLD_MODES}, got {mode!r}")
    sets = []
    for s in post.annotator_sets:
        sets.append(normalize_set(s, table) if table is not None else {x.lower().strip() for x in s})
    if not sets:
        return set()
    return set.union(*sets) if mode == "union" else set.intersection(*sets)


def prepare_predictions(phrases, table: NormalizationTable | None = None) -> list[str]:
    """Lowercase (and optionally normalize) a ranked list, keeping order and dropping repeats."""
    if table is not None:
        return normalize_list(phrases, table)
    return list(dict.fromkeys(p.lower().strip() for p in phrases))


def evaluate_at_k(predictions: Mapping[str, list], gold: Mapping[str, set], ks=(5, 10, 15),
                  table: NormalizationTable | None = None) -> dict[int, MetricReport]:
    """Macro-averaged F1@k over the posts of ``gold``; missing predictions count as empty."""
    out = {}
    extra = set(predictions) - set(gold)
    if extra:
        logger.warning("%d predicted post(s) have no gold annotations; ignored", len(extra))
    prepared = {pid: prepare_predictions(_phrases(predictions.get(pid, [])), table) for pid in gold}
    for k in ks:
        out[k] = mean_reports(f1_at_k(prepared[pid], gold[pid], k) for pid in gold)
    return out


def evaluate_sets(predictions: Mapping[str, list], gold: Mapping[str, set],
                  table: NormalizationTable | None = None) -> MetricReport:
    """Macro-averaged P/R/F1 of unranked prediction sets."""
    return mean_reports(prf(prepare_predictions(_phrases(predictions.get(pid, [])), table), gold[pid])
                        for pid in gold)


# -- theme misses --------------------------------------------------------------

@dataclass
class ThemeErrorRow:
    theme: Theme
    gold: int
    missed: int

    @property
    def relative_error(self) -> float | None:
        return None if self.gold == 0 else 100.0 * self.missed / self.gold


@dataclass
class ThemeErrorReport:
    rows: list[ThemeErrorRow]

    def row(self, theme: Theme) -> ThemeErrorRow:
        return next(r for r in self.rows if r.theme == theme)

    def to_dict(self) -> dict:
        return {r.theme.name: {"gold": r.gold, "missed": r.missed,
                               "relative_error": format_percent(r.relative_error)}
                for r in self.rows}

    def to_text(self) -> str:
        rows = [[r.theme.label, str(r.gold), str(r.missed), format_percent(r.relative_error) or "-"]
                for r in self.rows]
        return format_table(["Theme", "Gold", "Missed", "Error %"], rows)


def format_percent(x: float | None) -> str | None:
    return None if x is None else "%.2f" % x


def theme_miss_analysis(predictions: Mapping[str, Iterable[str]], annotated,
                        table: NormalizationTable | None = None) -> ThemeErrorReport:
    """Per theme, how many gold occurrences (one per post) the predictions missed."""
    gold = {t: 0 for t in Theme}
    missed = {t: 0 for t in Theme}
    for ap in annotated:
        pred = set(prepare_predictions(_phrases(predictions.get(ap.post_id, [])), table))
        for phrase in sorted(ap.gold_normalized):
            t = ap.theme_of[phrase]
            gold[t] += 1
            if phrase not in pred:
                missed[t] += 1
    return ThemeErrorReport([ThemeErrorRow(t, gold[t], missed[t]) for t in Theme])


def prediction_count_stats(prediction_lists) -> tuple[float, float]:
    """Mean and population standard deviation of the number of predictions per post."""
    counts = [len(p) for p in prediction_lists]
    if not counts:
        raise ValueError("need at least one prediction list")
    return float(statistics.fmean(counts)), float(statistics.pstdev(counts))


# -- report rendering ------------------------------------------------------------

def format_table(headers: list[str], rows: list[list[str]]) -> str:
    """Aligned plain-text columns; first column left-aligned, the rest right-aligned."""
    widths = [max(len(str(x)) for x in col) for col in zip(headers, *rows)]

    def line(cells):
        parts = [str(cells[0]).ljust(widths[0])]
        parts += [str(c).rjust(w) for c, w in zip(cells[1:], widths[1:])]
        return "  ".join(parts).rstrip()

    out = [line(headers), "  ".join("-" * w for w in widths)]
    out += [line(r) for r in rows]
    return "\n".join(out) + "\n"


def f1_at_k_table(results: Mapping[str, Mapping[int, MetricReport]]) -> str:
    """Model x F1@k table, values in percent with two decimals."""
    ks = sorted({k for r in results.values() for k in r})
    rows = [[model] + ["%.2f" % (100 * res[k].f1) for k in ks] for model, res in results.items()]
    return format_table(["Model"] + [f"F1@{k}" for k in ks], rows)


def prf_table(results: Mapping[str, MetricReport]) -> str:
    rows = [[name, "%.2f" % (100 * r.precision), "%.2f" % (100 * r.recall), "%.2f" % (100 * r.f1)]
            for name, r in results.items()]
    return format_table(["Run", "P", "R", "F1"], rows)


def report_json(obj) -> str:
    def default(o):
        if isinstance(o, MetricReport):
            return o.to_dict()
        if isinstance(o, Fraction):
            return float(o)
        if isinstance(o, Theme):
            return o.name
        raise TypeError(f"cannot serialise {type(o).__name__}")
    return json.dumps(obj, indent=2, sort_keys=True, default=default) + "\n"
