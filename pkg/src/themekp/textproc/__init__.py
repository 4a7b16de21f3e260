from dataclasses import dataclass

from .candidates import NOUN_PHRASE, CandidatePhrase, Grammar, extract_candidates, match_spans
from .stemmer import stem
from .tagger import DEFAULT_TAGGER, LexiconTagger, PretaggedTagger, Tagger, pos_tag
from .tokenize import TAGS, Token, read_pretagged, sentences, tokenize


@dataclass
class Document:
    text: str
    tokens: list
    candidates: list

    @property
    def n_sentences(self) -> int:
        return self.tokens[-1].sentence_index + 1 if self.tokens else 0


def analyze(text: str, tagger=None, grammar: Grammar = NOUN_PHRASE) -> Document:
    """Tokenize, tag and select candidates for one document."""
    tokens = pos_tag(tokenize(text), tagger)
    return Document(text, tokens, extract_candidates(tokens, grammar))


def analyze_tagged(text: str, tokens, grammar: Grammar = NOUN_PHRASE) -> Document:
    return Document(text, list(tokens), extract_candidates(list(tokens), grammar))


__all__ = [
    "TAGS", "Token", "tokenize", "sentences", "read_pretagged",
    "Tagger", "LexiconTagger", "PretaggedTagger", "DEFAULT_TAGGER", "pos_tag",
    "Grammar", "NOUN_PHRASE", "CandidatePhrase", "extract_candidates", "match_spans",
    "stem", "Document", "analyze", "analyze_tagged",
]
