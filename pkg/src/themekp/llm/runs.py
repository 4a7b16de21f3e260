"""Repeated extraction runs over a corpus and their aggregation."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

from ..evaluation import MetricReport, evaluate_sets, mean_reports
from .client import LlmClient
from .parse import parse_response
from .templates import PromptTemplate, render_prompt


@dataclass
class ExtractionRun:
    run_index: int
    template_id: str
    predictions: dict[str, list[str]] = field(default_factory=dict)
    transcripts: list[tuple[str, str, int]] = field(default_factory=list)

    def to_records(self) -> list[dict]:
        return [{"post_id": pid, "template_id": self.template_id, "run": self.run_index,
                 "keyphrases": phrases} for pid, phrases in self.predictions.items()]


def example_seed(seed: int, run: int, post_id: str) -> str:
    # random.Random hashes str seeds with sha512, so this is stable across processes
    return f"{seed}:{run}:{post_id}"


def run_extraction(posts, template: PromptTemplate, client: LlmClient, n_runs: int | None = None,
                   seed: int = 0, jobs: int | None = None) -> list[ExtractionRun]:
    """Prompt the model ``n_runs`` times per post; results keep input order."""
    n_runs = client.config.n_runs if n_runs is None else n_runs
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    workers = 1 if client.replay else (jobs or client.config.concurrency)
    runs = []
    for r in range(n_runs):
        def one(post, r=r):
            prompt = render_prompt(template, post, example_seed(seed, r, post.id))
            return post.id, parse_response(client.call(prompt, template.id, post.id, r))

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(one, posts))
        else:
            results = [one(p) for p in posts]
        run = ExtractionRun(r, template.id)
        for pid, phrases in results:
            run.predictions[pid] = phrases
            run.transcripts.append((template.id, pid, r))
        runs.append(run)
    return runs


def combine_theme_runs(runs: list[ExtractionRun], template_id: str = "combined") -> ExtractionRun:
    """Union, per post, of the predictions of several single-theme runs (first-seen order)."""
    if not runs:
        raise ValueError("nothing to combine")
    out = ExtractionRun(runs[0].run_index, template_id)
    for run in runs:
        for pid, phrases in run.predictions.items():
            merged = out.predictions.setdefault(pid, [])
            merged.extend(p for p in phrases if p not in merged)
        out.transcripts.extend(run.transcripts)
    return out


@dataclass
class RunAggregate:
    mean: MetricReport
    per_run: list[MetricReport]


def aggregate_runs(runs: list[ExtractionRun], gold: Mapping[str, set], normalizer=None) -> RunAggregate:
    """Per run, macro P/R/F1 over posts; then the arithmetic mean across runs."""
    if not runs:
        raise ValueError("cannot aggregate zero runs")
    posts = set(runs[0].predictions)
    for run in runs[1:]:
        if set(run.predictions) != posts:
            raise ValueError(f"run {run.run_index} covers different posts than run {runs[0].run_index}")
    per_run = [evaluate_sets(run.predictions, gold, normalizer) for run in runs]
    return RunAggregate(mean_reports(per_run), per_run)
