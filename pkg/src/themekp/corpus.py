"""Post corpora: data model, JSONL ingestion, relevance filtering, annotations."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .normalize import Theme

logger = logging.getLogger(__name__)

DELETION_MARKERS = frozenset({"[deleted]", "[removed]"})

_URL_RE = re.compile(r"^(?:https?://|www\.)\S+$", re.IGNORECASE)
# markdown link wrappers like <http://..> or [text](http://..)
_MD_LINK_RE = re.compile(r"^\[[^\]]*\]\((?:https?://|www\.)[^)]*\)$", re.IGNORECASE)


class CorpusError(Exception):
    """Raised when a corpus or annotation file cannot be used at all."""


@dataclass(frozen=True)
class Post:
    id: str
    title: str = ""
    body: str = ""
    created_at: int = 0
    num_comments: int = 0
    upvotes: int = 0
    removed_flag: bool = False
    poll_flag: bool = False

    def __post_init__(self):
        if not self.id:
            raise ValueError("post id must be non-empty")
        if self.num_comments < 0:
            raise ValueError(f"post {self.id}: num_comments must be >= 0")

    def to_record(self) -> dict:
        rec = {
            "id": self.id,
            "title": self.title,
            "body": self.body,
            "created_utc": self.created_at,
            "num_comments": self.num_comments,
            "score": self.upvotes,
            "removed": self.removed_flag,
        }
        if self.poll_flag:
            rec["poll"] = True
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "Post":
        if not isinstance(rec, dict):
            raise ValueError("record is not a JSON object")
        pid = rec.get("id")
        if not isinstance(pid, str) or not pid:
            raise ValueError("missing or non-string 'id'")
        title = rec.get("title") or ""
        body = rec.get("body") or ""
        if not isinstance(title, str) or not isinstance(body, str):
            raise ValueError("'title' and 'body' must be strings")
        ints = {}
        for key in ("created_utc", "num_comments", "score"):
            val = rec.get(key, 0)
            if isinstance(val, bool) or not isinstance(val, int):
                raise ValueError(f"'{key}' must be an integer")
            ints[key] = val
        removed = rec.get("removed", False)
        poll = rec.get("poll", False)
        if not isinstance(removed, bool) or not isinstance(poll, bool):
            raise ValueError("'removed' and 'poll' must be booleans")
        return cls(
            id=pid,
            title=title,
            body=body,
            created_at=ints["created_utc"],
            num_comments=ints["num_comments"],
            upvotes=ints["score"],
            removed_flag=removed,
            poll_flag=poll,
        )


@dataclass(frozen=True)
class Corpus:
    posts: tuple[Post, ...] = ()
    source_label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "posts", tuple(self.posts))
        seen = set()
        for p in self.posts:
            if p.id in seen:
                raise ValueError(f"duplicate post id {p.id!r}")
            seen.add(p.id)

    def __len__(self):
        return len(self.posts)

    def __iter__(self) -> Iterator[Post]:
        return iter(self.posts)

    def by_id(self) -> dict[str, Post]:
        return {p.id: p for p in self.posts}


@dataclass
class Diagnostic:
    line: int
    message: str

    def __str__(self):
        return f"line {self.line}: {self.message}"


def document_text(post: Post) -> str:
    """Title and body joined by a newline; this is the text every ranker sees."""
    return f"{post.title}\n{post.body}"


def load_corpus(path, format: str = "jsonl", *, source_label: str | None = None,
                diagnostics: list | None = None) -> Corpus:
    """Read a JSONL post dump.

    Malformed lines (bad JSON, wrong field types, duplicate ids) are skipped;
    one :class:`Diagnostic` per rejected line is appended to ``diagnostics``
    when a list is supplied, and logged either way.
    """
    if format != "jsonl":
        raise CorpusError(f"unsupported corpus format {format!r}")
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc

    posts: list[Post] = []
    seen: set[str] = set()
    diags = diagnostics if diagnostics is not None else []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            post = Post.from_record(json.loads(line))
        except (json.JSONDecodeError, ValueError) as exc:
            diags.append(Diagnostic(lineno, str(exc)))
            logger.warning("%s:%d: skipped record: %s", path, lineno, exc)
            continue
        if post.id in seen:
            diags.append(Diagnostic(lineno, f"duplicate id {post.id!r}"))
            logger.warning("%s:%d: skipped duplicate id %r", path, lineno, post.id)
            continue
        seen.add(post.id)
        posts.append(post)
    label = source_label if source_label is not None else path.name
    return Corpus(tuple(posts), label)


def dumps_corpus(corpus: Corpus) -> str:
    lines = [json.dumps(p.to_record(), ensure_ascii=False, sort_keys=True) for p in corpus]
    return "".join(line + "\n" for line in lines)


def save_corpus(corpus: Corpus, path) -> None:
    Path(path).write_text(dumps_corpus(corpus), encoding="utf-8")


def _is_url(token: str) -> bool:
    token = token.strip("<>")
    return bool(_URL_RE.match(token) or _MD_LINK_RE.match(token))


def is_deleted(text: str) -> bool:
    return text.strip().lower() in DELETION_MARKERS


def is_link_only(text: str) -> bool:
    """True when ``text`` has no tokens besides URLs (empty text included)."""
    return all(_is_url(tok) for tok in text.split())


def is_irrelevant(post: Post) -> bool:
    if post.removed_flag or post.poll_flag:
        return True
    if is_deleted(post.body) or is_deleted(post.title):
        return True
    # a link post: nothing left in the body once URLs are gone
    if is_link_only(post.body):
        return True
    return False


def filter_irrelevant(corpus: Corpus) -> Corpus:
    kept = tuple(p for p in corpus if not is_irrelevant(p))
    return Corpus(kept, corpus.source_label)


# -- annotations -------------------------------------------------------------

@dataclass
class AnnotatedPost:
    post_id: str
    annotator_sets: list[frozenset[str]]
    gold_normalized: frozenset[str] = frozenset()
    theme_of: dict[str, Theme] = field(default_factory=dict)

    def __post_init__(self):
        if not self.annotator_sets:
            raise ValueError(f"post {self.post_id}: at least one annotator set required")
        self.annotator_sets = [frozenset(s) for s in self.annotator_sets]
        self.gold_normalized = frozenset(self.gold_normalized)
        self.theme_of = {k: v if isinstance(v, Theme) else Theme.parse(v)
                         for k, v in self.theme_of.items()}
        missing = [g for g in self.gold_normalized if g not in self.theme_of]
        if missing:
            raise ValueError(f"post {self.post_id}: no theme for {sorted(missing)}")

    def to_record(self) -> dict:
        return {
            "post_id": self.post_id,
            "annotators": [sorted(s) for s in self.annotator_sets],
            "gold": sorted(self.gold_normalized),
            "themes": {k: self.theme_of[k].name for k in sorted(self.theme_of)},
        }

    @classmethod
    def from_record(cls, rec: dict) -> "AnnotatedPost":
        if not isinstance(rec, dict):
            raise ValueError("record is not a JSON object")
        pid = rec.get("post_id")
        if not isinstance(pid, str) or not pid:
            raise ValueError("missing or non-string 'post_id'")
        ann = rec.get("annotators")
        if not isinstance(ann, list) or not all(
                isinstance(s, list) and all(isinstance(x, str) for x in s) for s in ann):
            raise ValueError("'annotators' must be an array of arrays of strings")
        gold = rec.get("gold", [])
        themes = rec.get("themes", {})
        if not isinstance(gold, list) or not isinstance(themes, dict):
            raise ValueError("'gold' must be an array and 'themes' an object")
        return cls(pid, [frozenset(s) for s in ann], frozenset(gold), dict(themes))


def load_annotations(path, diagnostics: list | None = None) -> list[AnnotatedPost]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusError(f"cannot read annotations {path}: {exc}") from exc
    out = []
    diags = diagnostics if diagnostics is not None else []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            out.append(AnnotatedPost.from_record(json.loads(line)))
        except (json.JSONDecodeError, ValueError) as exc:
            diags.append(Diagnostic(lineno, str(exc)))
            logger.warning("%s:%d: skipped annotation: %s", path, lineno, exc)
    return out


def save_annotations(items: Iterable[AnnotatedPost], path) -> None:
    lines = [json.dumps(a.to_record(), ensure_ascii=False) for a in items]
    Path(path).write_text("".join(l + "\n" for l in lines), encoding="utf-8")
