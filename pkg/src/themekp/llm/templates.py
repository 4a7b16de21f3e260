"""Prompt templates and rendering.

Templates live in ``data/templates.json``.  A body template is a
``str.format`` pattern with a ``{post}`` placeholder and, for few-shot
templates, an ``{examples}`` placeholder.  Fixed few-shot templates carry
their own examples; random ones draw ``shots`` examples from a pool.
"""

from __future__ import annotations

import json
import random
import string
from dataclasses import dataclass, replace
from importlib import resources

from ..corpus import Post, document_text
from ..normalize import Theme

STYLES = ("basic", "guided", "theme_specific")
GUIDED_THEMES = ("Treatment Options", "Substance Dependency & Recovery", "Medical History",
                 "Psychophysical Effects")


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class Example:
    title: str
    body: str
    keyphrases: tuple[str, ...]

    def block(self, i: int) -> str:
        return (f"Example {i}\ntitle: {{{self.title}}}\n\nbody: {{\n{self.body}\n}}\n\n"
                f"keyphrases: {list(self.keyphrases)!r}")


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    style: str
    body_template: str
    shots: int = 0
    example_posts: tuple[Example, ...] = ()
    theme: Theme | None = None
    pool: tuple[Example, ...] = ()    # non-empty for randomly drawn examples

    def __post_init__(self):
        validate_template(self)

    @property
    def random_examples(self) -> bool:
        return bool(self.pool)

    def with_shots(self, shots: int) -> "PromptTemplate":
        if not self.random_examples:
            raise TemplateError(f"{self.id}: examples are fixed; shots cannot change")
        return replace(self, shots=shots)


def _fields(pattern: str) -> set[str]:
    try:
        return {f for _, f, _, _ in string.Formatter().parse(pattern) if f is not None}
    except ValueError as exc:
        raise TemplateError(f"malformed template: {exc}") from exc


def validate_template(t: PromptTemplate) -> None:
    if t.style not in STYLES:
        raise TemplateError(f"{t.id}: unknown style {t.style!r}")
    names = _fields(t.body_template)
    if "post" not in names:
        raise TemplateError(f"{t.id}: body template has no {{post}} placeholder")
    if names - {"post", "examples"}:
        raise TemplateError(f"{t.id}: unknown placeholders {sorted(names - {'post', 'examples'})}")
    if t.shots < 0:
        raise TemplateError(f"{t.id}: negative shot count")
    if t.random_examples:
        if t.shots > len(t.pool):
            raise TemplateError(f"{t.id}: {t.shots} shots requested from a pool of {len(t.pool)}")
    elif t.shots != len(t.example_posts):
        raise TemplateError(f"{t.id}: shots={t.shots} but {len(t.example_posts)} examples")
    if t.shots and "examples" not in names:
        raise TemplateError(f"{t.id}: few-shot template has no {{examples}} placeholder")
    if t.style == "guided" and not all(th in t.body_template for th in GUIDED_THEMES):
        raise TemplateError(f"{t.id}: guided template must name all four themes")
    if t.style == "theme_specific" and t.theme is None:
        raise TemplateError(f"{t.id}: theme-specific template without a theme")


def _example(d: dict) -> Example:
    return Example(d["title"], d["body"], tuple(d["keyphrases"]))


def load_templates(path=None) -> dict[str, PromptTemplate]:
    if path is None:
        text = (resources.files("themekp") / "data" / "templates.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    data = json.loads(text)
    pool = tuple(_example(e) for e in data.get("example_pool", []))
    out = {}
    for rec in data["templates"]:
        t = PromptTemplate(
            id=rec["id"],
            style=rec["style"],
            body_template=rec["body_template"],
            shots=int(rec.get("shots", 0)),
            example_posts=tuple(_example(e) for e in rec.get("example_posts", [])),
            theme=Theme[rec["theme"]] if rec.get("theme") else None,
            pool=pool if rec.get("selection") == "random" else (),
        )
        out[t.id] = t
    return out


def choose_examples(template: PromptTemplate, rng_seed: int | None) -> list[Example]:
    if not template.random_examples:
        return list(template.example_posts)
    return random.Random(rng_seed).sample(list(template.pool), template.shots)


def render_prompt(template: PromptTemplate, post: Post, rng_seed: int | None = 0) -> str:
    """Fill the template with the post (title and body) and its examples."""
    examples = choose_examples(template, rng_seed)
    block = "\n\n".join(e.block(i) for i, e in enumerate(examples, start=1))
    return template.body_template.format(post=document_text(post), examples=block)
