"""Command line: ingest, rank, llm, normalize, eval, analyze.

Exit codes: 0 success, 1 internal error, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import analysis, evaluation
from .corpus import CorpusError, filter_irrelevant, load_annotations, load_corpus, dumps_corpus
from .normalize import TableError, Theme, load_table, normalize_list, seed_table
from .rankers import METHODS, EmbeddingError, file_vector_provider, http_vector_provider
from .pipeline import RankParams, rank_corpus

logger = logging.getLogger("themekp")


class UsageError(Exception):
    """Bad arguments or configuration; exit code 2."""


# -- config file ----------------------------------------------------------------

CONFIG_KEYS = {
    "k": int, "window": int, "yake_window": int, "damping": float, "threshold": float,
    "alpha": float, "gold_mode": str, "table": str, "vectors": str, "embed_endpoint": str,
    "llm_model": str, "llm_endpoint": str, "temperature": float, "rate_limit": float,
    "max_retries": int, "runs": int, "seed": int, "jobs": int,
}


def read_config(path) -> dict:
    """``key = value`` lines; '#' comments; values may be quoted."""
    out = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        value = value.strip("'\"")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{n}: bad value for {key}: {value!r}") from exc
    return out


def setting(args, name, default=None):
    """Command-line value, else config file value, else default."""
    v = getattr(args, name, None)
    if v is not None:
        return v
    return args.config_values.get(name, default)


# -- output helpers ---------------------------------------------------------------

def write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")


def jsonl(records) -> str:
    return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in records)


def read_jsonl(path) -> list[dict]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    out = []
    for n, line in enumerate(lines, start=1):
        if line.strip():
            try:
                out.append(json.loads(line))
            except ValueError as exc:
                raise UsageError(f"{path}:{n}: invalid JSON: {exc}") from exc
    return out


def _table(args):
    path = setting(args, "table")
    if path is None:
        return None
    if path == "seed":
        return seed_table()
    return load_table(path)


def _load_corpus_strict(path):
    diags = []
    corpus = load_corpus(path, diagnostics=diags)
    return corpus, diags


# -- subcommands ---------------------------------------------------------------------

def cmd_ingest(args) -> int:
    corpus, diags = _load_corpus_strict(args.input)
    for d in diags:
        print(f"{args.input}:{d}", file=sys.stderr)
    if diags and not args.lenient:
        print(f"{len(diags)} malformed record(s); use --lenient to skip them", file=sys.stderr)
        return 2
    kept = filter_irrelevant(corpus)
    summary = f"read {len(corpus)} posts, kept {len(kept)}, dropped {len(corpus) - len(kept)}\n"
    if args.dry_run:
        sys.stdout.write(summary)
        return 0
    if args.out is None:
        raise UsageError("ingest needs --out (or --dry-run)")
    write_text(args.out, dumps_corpus(kept))
    if not args.quiet:
        sys.stderr.write(summary)
    return 0


def _provider(args):
    vectors = setting(args, "vectors")
    endpoint = setting(args, "embed_endpoint")
    if vectors:
        return file_vector_provider(vectors)
    if endpoint:
        if not os.environ.get("EMBED_API_KEY"):
            raise UsageError("EMBED_API_KEY is not set")
        return http_vector_provider(endpoint)
    raise UsageError("--method embed needs --vectors FILE or --embed-endpoint URL")


def cmd_rank(args) -> int:
    method = args.method
    if method not in METHODS:
        raise UsageError(f"unknown method {method!r}")
    k = setting(args, "k", 10)
    if k < 1:
        raise UsageError("--k must be >= 1")
    provider = _provider(args) if method == "embed" else None
    params = RankParams(window=setting(args, "window", 2), yake_window=setting(args, "yake_window", 1),
                        damping=setting(args, "damping", 0.85), threshold=setting(args, "threshold", 0.25),
                        alpha=setting(args, "alpha", 1.1))
    corpus = load_corpus(args.input)
    records = rank_corpus(corpus, method, k, provider=provider, params=params, jobs=args.jobs_value)
    write_text(args.out, jsonl(records))
    return 0


def cmd_llm(args) -> int:
    from .llm import (LlmClient, LlmConfig, TranscriptStore, combine_theme_runs, load_templates,
                      run_extraction)

    templates = load_templates()
    ids = [t.strip() for t in args.template.split(",") if t.strip()]
    unknown = [t for t in ids if t not in templates]
    if unknown:
        raise UsageError(f"unknown template(s) {unknown}; available: {', '.join(sorted(templates))}")
    chosen = []
    for tid in ids:
        t = templates[tid]
        if args.shots is not None:
            if t.random_examples:
                if args.shots > len(t.pool):
                    raise UsageError(f"--shots {args.shots} exceeds the pool of {len(t.pool)} examples")
                t = t.with_shots(args.shots)
            elif args.shots != t.shots:
                raise UsageError(f"template {tid} has {t.shots} fixed examples; --shots {args.shots} given")
        chosen.append(t)

    config = LlmConfig(model_id=setting(args, "llm_model", "gpt-3.5-turbo"),
                       temperature=setting(args, "temperature", 0.0),
                       n_runs=setting(args, "runs", 5),
                       max_retries=setting(args, "max_retries", 4),
                       rate_limit=setting(args, "rate_limit", 1.0),
                       endpoint=setting(args, "llm_endpoint", LlmConfig.endpoint),
                       concurrency=args.jobs_value if args.jobs_value > 1 else 4)
    if args.replay:
        if not os.path.exists(args.replay):
            raise UsageError(f"transcript file {args.replay} not found")
        store = TranscriptStore(args.replay)
        client = LlmClient(config, store, replay=True)
    else:
        if not os.environ.get("LLM_API_KEY"):
            raise UsageError("LLM_API_KEY is not set; pass --replay TRANSCRIPTS to run offline")
        client = LlmClient(config, TranscriptStore(args.transcripts))

    corpus = load_corpus(args.input)
    if args.replay:
        missing = [(t.id, post.id, r) for t in chosen for post in corpus for r in range(config.n_runs)
                   if client.store.get(t.id, post.id, r) is None]
        if missing:
            tid, pid, r = missing[0]
            raise UsageError(f"{args.replay} lacks {len(missing)} transcript(s), "
                             f"first: template {tid}, post {pid}, run {r}")
    seed = args.seed_value
    per_template = [run_extraction(corpus, t, client, config.n_runs, seed=seed, jobs=args.jobs_value)
                    for t in chosen]
    records = []
    for r in range(config.n_runs):
        if len(chosen) > 1:
            run = combine_theme_runs([runs[r] for runs in per_template], "combined:" + "+".join(ids))
            records += run.to_records()
        else:
            records += per_template[0][r].to_records()
    write_text(args.out, jsonl(records))
    return 0


def _phrases_of(rec) -> list[str]:
    return [p["phrase"] if isinstance(p, dict) else p for p in rec.get("keyphrases", [])]


def cmd_normalize(args) -> int:
    table = _table(args) or seed_table()
    out = []
    for rec in read_jsonl(args.input):
        rec = dict(rec)
        if rec.get("keyphrases") and isinstance(rec["keyphrases"][0], dict):
            # keep each canonical once, at its best rank
            seen = {}
            for item in rec["keyphrases"]:
                canon = normalize_list([item["phrase"]], table, drop_other=not args.keep_other)
                if canon and canon[0] not in seen:
                    seen[canon[0]] = dict(item, phrase=canon[0])
            rec["keyphrases"] = [dict(v, rank=i) for i, v in enumerate(seen.values(), start=1)]
        else:
            rec["keyphrases"] = normalize_list(_phrases_of(rec), table, drop_other=not args.keep_other)
        out.append(rec)
    write_text(args.out, jsonl(out))
    return 0


def _gold(args):
    if not os.path.exists(args.gold):
        raise UsageError(f"gold file {args.gold} not found")
    annotated = load_annotations(args.gold)
    mode = setting(args, "gold_mode", "union")
    if mode not in evaluation.GOLD_MODES:
        raise UsageError(f"--gold-mode must be one of {evaluation.GOLD_MODES}")
    table = _table(args)
    return annotated, {a.post_id: evaluation.gold_set(a, mode, table) for a in annotated}, table


def cmd_eval(args) -> int:
    annotated, gold, table = _gold(args)
    records = read_jsonl(args.input)
    try:
        ks = sorted({int(x) for x in args.k.split(",")})
    except ValueError as exc:
        raise UsageError(f"--k expects a comma-separated list of integers, got {args.k!r}") from exc
    if not ks or ks[0] < 1:
        raise UsageError("--k values must be >= 1")

    ranked = {}
    llm_runs: dict[str, dict[int, dict]] = {}
    for rec in records:
        if "method" in rec:
            ranked.setdefault(rec["method"], {})[rec["post_id"]] = _phrases_of(rec)
        elif "template_id" in rec:
            llm_runs.setdefault(rec["template_id"], {}).setdefault(int(rec["run"]), {})[rec["post_id"]] = \
                _phrases_of(rec)
        else:
            raise UsageError("prediction records need a 'method' or a 'template_id'")

    report: dict = {"gold_mode": setting(args, "gold_mode", "union"), "normalized": table is not None}
    text = []
    if ranked:
        res = {m: evaluation.evaluate_at_k(preds, gold, ks, table) for m, preds in ranked.items()}
        report["ranked"] = {m: {f"F1@{k}": r[k].to_dict() for k in ks} for m, r in res.items()}
        text.append(evaluation.f1_at_k_table(res))
    if llm_runs:
        from .llm import ExtractionRun, aggregate_runs
        summary, agg_report = {}, {}
        for tid, runs in llm_runs.items():
            objs = [ExtractionRun(r, tid, preds) for r, preds in sorted(runs.items())]
            agg = aggregate_runs(objs, gold, table)
            mean, sd = evaluation.prediction_count_stats(
                [evaluation.prepare_predictions(p, table) for o in objs for p in o.predictions.values()])
            summary[tid] = agg.mean
            agg_report[tid] = {"mean": agg.mean.to_dict(), "runs": [r.to_dict() for r in agg.per_run],
                               "predictions_per_post": {"mean": mean, "sd": sd}}
        report["llm"] = agg_report
        text.append(evaluation.prf_table(summary))
    if args.format == "json":
        write_text(args.out, evaluation.report_json(report))
    else:
        write_text(args.out, "\n".join(text))
    return 0


def cmd_analyze(args) -> int:
    if not os.path.exists(args.annotations):
        raise UsageError(f"annotation file {args.annotations} not found")
    annotated = load_annotations(args.annotations)
    fmt = args.format
    what = args.what
    if what == "freq":
        theme = Theme.parse(args.theme) if args.theme else None
        t = analysis.frequency(annotated, theme)
        write_text(args.out, t.to_csv() if fmt == "csv" else t.to_json())
    elif what == "cooccur":
        m = analysis.cooccurrence(annotated)
        write_text(args.out, m.to_csv() if fmt == "csv" else m.to_json())
    elif what == "engagement":
        if not args.corpus:
            raise UsageError("--what engagement needs --corpus")
        e = analysis.engagement(annotated, load_corpus(args.corpus))
        write_text(args.out, e.to_csv() if fmt == "csv" else e.to_json())
    elif what == "agreement":
        rep = evaluation.avg_jaccard(annotated, _table(args))
        if fmt == "json":
            write_text(args.out, evaluation.report_json(rep.to_dict()))
        else:
            rows = [[p, "%.4f" % j] for p, j in zip(rep.post_ids, rep.per_post_ji)]
            rows.append(["average", "%.4f" % rep.average])
            write_text(args.out, evaluation.format_table(["post", "JI"], rows))
    elif what == "theme-miss":
        if not args.predictions:
            raise UsageError("--what theme-miss needs --predictions")
        preds: dict[str, list[str]] = {}
        for rec in read_jsonl(args.predictions):
            if args.run is not None and int(rec.get("run", 0)) != args.run:
                continue
            merged = preds.setdefault(rec["post_id"], [])
            merged.extend(p for p in _phrases_of(rec) if p not in merged)
        rep = evaluation.theme_miss_analysis(preds, annotated, _table(args))
        write_text(args.out, evaluation.report_json(rep.to_dict()) if fmt == "json" else rep.to_text())
    return 0


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from resetting a global flag given before it
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--jobs", type=int, help="parallel workers per post (default 1)")
    common.add_argument("--seed", type=int, help="seed for every random choice (default 0)")
    common.add_argument("--quiet", action="store_true")

    p = argparse.ArgumentParser(prog="themekp", parents=[common],
                                description="Theme-driven keyphrase extraction toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", parents=[common], help="filter a raw post dump")
    s.add_argument("input")
    s.add_argument("--out")
    s.add_argument("--dry-run", action="store_true", help="print counts, write nothing")
    s.add_argument("--lenient", action="store_true", help="skip malformed lines instead of failing")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("rank", parents=[common], help="rank candidate keyphrases per post")
    s.add_argument("input")
    s.add_argument("--method", required=True, choices=METHODS)
    s.add_argument("--k", type=int)
    s.add_argument("--out", default="-")
    s.add_argument("--vectors", help="word-vector file for --method embed")
    s.add_argument("--embed-endpoint", help="embedding service URL for --method embed")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("llm", parents=[common], help="prompt a chat model for keyphrases")
    s.add_argument("input")
    s.add_argument("--template", required=True, help="template id, or several joined by commas")
    s.add_argument("--shots", type=int)
    s.add_argument("--runs", type=int)
    s.add_argument("--replay", help="answer from this transcript file; no network")
    s.add_argument("--transcripts", help="append live exchanges to this file")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_llm)

    s = sub.add_parser("normalize", parents=[common], help="normalize predicted keyphrases")
    s.add_argument("input")
    s.add_argument("--table", help="normalization table (default: bundled seed table)")
    s.add_argument("--keep-other", action="store_true")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("eval", parents=[common], help="score predictions against gold annotations")
    s.add_argument("input")
    s.add_argument("--gold", required=True)
    s.add_argument("--k", default="5,10,15")
    s.add_argument("--gold-mode", choices=evaluation.GOLD_MODES)
    s.add_argument("--normalize", dest="table", metavar="TABLE",
                   help="normalize both sides with this table ('seed' for the bundled one)")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("analyze", parents=[common], help="corpus statistics over annotations")
    s.add_argument("annotations")
    s.add_argument("--what", required=True,
                   choices=("freq", "cooccur", "engagement", "agreement", "theme-miss"))
    s.add_argument("--theme")
    s.add_argument("--corpus", help="post file, for engagement")
    s.add_argument("--predictions", help="prediction file, for theme-miss")
    s.add_argument("--run", type=int, help="theme-miss: use only this run (default: all runs merged)")
    s.add_argument("--table", help="normalization table ('seed' for the bundled one)")
    s.add_argument("--format", choices=("csv", "json", "text"), default="json")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_analyze)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.quiet = getattr(args, "quiet", False)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = getattr(args, "config", None)
        args.config_values = read_config(config) if config else {}
        args.jobs_value = setting(args, "jobs", 1)
        args.seed_value = setting(args, "seed", 0)
        if args.jobs_value < 1:
            raise UsageError("--jobs must be >= 1")
        return args.func(args)
    except (UsageError, CorpusError, TableError, FileNotFoundError) as exc:
        print(f"themekp: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        from .llm import LlmConfigError, TemplateError
        if isinstance(exc, (LlmConfigError, TemplateError, ValueError)) and not isinstance(exc, EmbeddingError):
            print(f"themekp: error: {exc}", file=sys.stderr)
            return 2
        logger.exception("internal error")
        return 1


if __name__ == "__main__":
    sys.exit(main())
