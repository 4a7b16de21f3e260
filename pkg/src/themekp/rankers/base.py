from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class RankedKeyphrase:
    phrase: str        # lowercased surface, the string evaluated against gold
    score: float
    rank: int
    stem_form: str = ""
    surface: str = ""
    first_offset: int = 0

    def to_record(self) -> dict:
        return {"phrase": self.phrase, "score": self.score, "rank": self.rank}


def check_k(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")


# scores equal to this many decimals count as tied, so float noise between
# structurally symmetric candidates cannot override the tie-break
SCORE_DECIMALS = 10


def sort_key(score: float, first_offset: int, phrase: str):
    """Best-first ordering shared by every ranker: score, then position, then text."""
    return (-round(score, SCORE_DECIMALS), first_offset, phrase)


def top_k(candidates, scores, k: int) -> list[RankedKeyphrase]:
    """Rank ``candidates`` by ``scores`` (parallel sequence, higher is better)."""
    check_k(k)
    order = sorted(range(len(candidates)),
                   key=lambda i: sort_key(scores[i], candidates[i].first_offset, candidates[i].phrase))
    out = []
    for rank, i in enumerate(order[:k], start=1):
        c = candidates[i]
        out.append(RankedKeyphrase(c.phrase, float(scores[i]), rank, c.stem_form,
                                   c.surface, c.first_offset))
    return out
