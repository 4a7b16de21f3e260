"""Turn a model response into a list of phrases.

The prompts ask for a Python list, so the first attempt is a literal
``[...]`` block.  Otherwise bullet lines, then plain lines, then commas.
"""

from __future__ import annotations

import ast
import logging
import re

logger = logging.getLogger(__name__)

_BRACKETS = re.compile(r"\[[^\[\]]*\]", re.S)
_BULLET = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s+(.*\S)\s*$")
_QUOTES = "'\"`‘’“”"


def _clean(item: str) -> str:
    item = item.strip()
    while len(item) >= 1 and (item[0] in _QUOTES or item[-1] in _QUOTES):
        item = item.strip(_QUOTES).strip()
    return item


def _dedupe(items) -> list[str]:
    out = {}
    for it in items:
        c = _clean(str(it))
        if c:
            out.setdefault(c, None)
    return list(out)


def _literal_list(text: str):
    for m in _BRACKETS.finditer(text):
        block = m.group(0)
        try:
            value = ast.literal_eval(block)
        except (ValueError, SyntaxError, MemoryError, RecursionError):
            inner = block[1:-1].strip()
            if not inner:
                return []
            # unquoted items: [a, b, c]
            return inner.split(",")
        if isinstance(value, (list, tuple)):
            return [v for v in value if isinstance(v, (str, int, float))]
    return None


def parse_response(text: str) -> list[str]:
    """Phrases from a response; never raises, returns [] when nothing list-like is found."""
    try:
        text = text or ""
        items = _literal_list(text)
        if items is not None:
            return _dedupe(items)
        lines = [ln for ln in text.splitlines() if ln.strip()]
        bullets = [m.group(1) for ln in lines if (m := _BULLET.match(ln))]
        if bullets:
            return _dedupe(bullets)
        if len(lines) > 1:
            return _dedupe(lines)
        if len(lines) == 1 and "," in lines[0]:
            return _dedupe(lines[0].split(","))
        logger.warning("no list found in response %r", text[:60])
        return []
    except Exception as exc:  # parsing must never abort a run
        logger.warning("could not parse response: %s", exc)
        return []
