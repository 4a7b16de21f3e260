"""Part-of-speech tagging.

The default tagger is a closed-class lexicon plus suffix heuristics; any
word it cannot place is tagged NOUN so that unseen slang ("subs", "bupe")
stays eligible as a keyphrase candidate.  Anything with a ``tag(tokens)``
method can stand in for it.
"""

from __future__ import annotations

import re
from typing import Protocol

from .tokenize import Token

_DET = """a an the this that these those my your his her its our their some any
no every each all both either neither another such what which whose""".split()

_PRON = """i me you he she it we they them him us myself yourself himself herself
itself ourselves themselves mine yours hers ours theirs someone somebody anyone
anybody everyone everybody something anything nothing everything nobody who
whom one ya y'all u""".split()

_ADP = """in on at of for to from with by about into onto over under after before
between through during without within off up down out around since until till
like than per via against as upon across along among behind beyond near toward
towards""".split()

_CONJ_ETC = """and or but if because while though although whether nor yet so
yes no oh hey hi ok okay please thanks thank lol idk tbh btw""".split()

_AUX_VERB = """am is are was were be been being have has had having do does did
doing done can could will would shall should may might must get gets got
gotten getting go goes went gone going take takes took taken taking make makes
made making feel feels felt know knew known think thought want wanted wants
need needs needed try tried tries start started starts stop stopped stops help
helped helps say said says tell told ask asked see saw seen come came comes
give gave given use used uses keep kept let put seem seems seemed find found
work worked call called wonder hope hoping hoped wait waited waiting look
looked looking read quit quitting jumped jump switch switched switching
prescribe prescribed inducted induct swallow ingest promised wrote write
planned leaving left live lived provide provided buy bought run ran slept
eat ate drink drank dealt deal mean means meant guess appreciate appreciated
understand understood tried trying lost lose losing drop dropped dropping
become became happen happened happens stay stayed staying wish
hit hits settle settles move moved moves carry pick picked kept caught catch miss
missed scare scares tell mix""".split()

# words the suffix rules would get wrong
_NOUN = """withdrawal withdrawals hospital trial referral approval interval
animal journal signal material rehab family supply anxiety ability reply
bupe subs doctor doctors pain pharmacy methadone morning evening
thing things everything day days week weeks month months year years
time times music clinic clinics topic topics logic""".split()

_ADV = """not n't just also very really now still even too again ever never
always only here there then well back already almost often sometimes
maybe probably actually literally finally recently pretty quite rather
soon later today tonight tomorrow yesterday ago else anyway instead
together away once twice everywhere anywhere somewhere nowhere""".split()

_ADJ = """good bad new old high low first last long short little big small same
other different sure able hard worse worst better best full severe mild
chronic early late whole many much more most few several great extreme real
normal regular scary awful horrible happy sick weak strong free fine okay
ok afraid scared terrified tired higher lower major minor next previous
possible impossible certain clear cold hot heavy light nice safe unsafe
stable rough tough huge tiny total due safer safest hardest harder easier
easiest slower faster""".split()

_LEXICON: dict[str, str] = {}
for _words, _tag in ((_AUX_VERB, "VERB"), (_ADJ, "ADJ"), (_ADV, "ADV"),
                     (_NOUN, "NOUN"), (_CONJ_ETC, "OTHER"), (_ADP, "ADP"),
                     (_DET, "DET"), (_PRON, "PRON")):
    for _w in _words:
        _LEXICON[_w] = _tag

_CONTRACTION_RE = re.compile(r"^(\w+)['’](m|s|re|ve|ll|d|t)$")
_NUM_RE = re.compile(r"^\d+(?:[.,:]\d+)*(?:mg|mgs|ml|x)?$", re.IGNORECASE)
_PUNCT_RE = re.compile(r"^[^\w\s]+$")

_ADJ_SUFFIXES = ("ous", "ful", "ive", "able", "ible", "less", "ical", "ic", "ish", "al")
_ADV_SUFFIX = "ly"
_ADV_EXCEPTIONS = frozenset("family supply reply ally belly jelly rally fly july".split())


class Tagger(Protocol):
    def tag(self, tokens: list[Token]) -> list[Token]: ...


def _base_tag(tok: Token, sentence_initial: bool) -> str:
    s = tok.surface
    low = s.lower()
    if _PUNCT_RE.match(s):
        return "PUNCT"
    if _NUM_RE.match(s):
        return "NUM"
    if low in _LEXICON:
        return _LEXICON[low]
    m = _CONTRACTION_RE.match(low)
    if m:
        head, tail = m.groups()
        if tail == "t":
            return "VERB"
        return _LEXICON.get(head, "PRON" if head in _PRON else "NOUN")
    if not sentence_initial and s[:1].isupper():
        return "PROPN"
    if s.isupper() and len(s) > 1:
        return "PROPN"
    if low.endswith(_ADV_SUFFIX) and len(low) > 4 and low not in _ADV_EXCEPTIONS:
        return "ADV"
    if low.endswith(("ed", "ing")) and len(low) > 4:
        return "VERB"
    if low.endswith(_ADJ_SUFFIXES) and len(low) > 4:
        return "ADJ"
    return "NOUN"


class LexiconTagger:
    """Closed-class lexicon + suffix heuristics, NOUN for everything else.

    A second pass treats -ed/-ing words that directly modify a noun after a
    determiner, preposition or adjective (``the precipitated withdrawal``)
    as adjectives, and -ing words following a determiner as nouns.
    """

    def tag(self, tokens: list[Token]) -> list[Token]:
        tags: list[str] = []
        prev_sent = None
        for tok in tokens:
            tags.append(_base_tag(tok, tok.sentence_index != prev_sent))
            prev_sent = tok.sentence_index

        for i, tok in enumerate(tokens):
            low = tok.lower
            if tags[i] != "VERB" or low in _LEXICON or not low.endswith(("ed", "ing")):
                continue
            prev = tags[i - 1] if i > 0 and tokens[i - 1].sentence_index == tok.sentence_index else None
            nxt = tags[i + 1] if i + 1 < len(tokens) and tokens[i + 1].sentence_index == tok.sentence_index else None
            if prev in (None, "DET", "ADP", "ADJ") and nxt in ("NOUN", "PROPN"):
                tags[i] = "ADJ"
            elif low.endswith("ing") and prev == "DET":
                tags[i] = "NOUN"
            elif low.endswith("ing") and prev in (None, "PUNCT") and nxt in (None, "PUNCT"):
                # a bare gerund in a list ("Vomiting, chills, ...")
                tags[i] = "NOUN"
        return [tok.with_pos(t) for tok, t in zip(tokens, tags)]


class PretaggedTagger:
    """Keeps tags already present on tokens (e.g. from :func:`read_pretagged`)."""

    def tag(self, tokens: list[Token]) -> list[Token]:
        return list(tokens)


DEFAULT_TAGGER = LexiconTagger()


def pos_tag(tokens: list[Token], tagger: Tagger | None = None) -> list[Token]:
    return (tagger or DEFAULT_TAGGER).tag(tokens)
