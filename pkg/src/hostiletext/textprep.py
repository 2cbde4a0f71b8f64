"""Text normalization and n-gram expansion shared by every pipeline."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

_URL_PREFIXES = ("http", "www")
# Unicode general categories stripped from tokens: punctuation (P*), symbols
# incl. emoji (S*), and numbers (N*). Letters and combining marks survive, so
# Devanagari keeps its vowel signs while losing digits and danda.
_STRIPPED_CATEGORIES = frozenset("PSN")


@dataclass(frozen=True)
class NgramRange:
    """Inclusive range of n-gram orders, 1 <= lo <= hi."""

    lo: int
    hi: int

    def __post_init__(self):
        if not (isinstance(self.lo, int) and isinstance(self.hi, int)):
            raise TypeError("n-gram bounds must be integers")
        if not 1 <= self.lo <= self.hi:
            raise ValueError(f"invalid n-gram range ({self.lo}, {self.hi})")

    def orders(self) -> range:
        return range(self.lo, self.hi + 1)


def _is_url_like(token: str) -> bool:
    return token.startswith(_URL_PREFIXES)


def normalize(text: str) -> list[str]:
    """Split on whitespace, drop URL tokens, strip punctuation/symbol/number
    characters, lowercase, and drop whatever comes out empty.

    The URL check runs again after stripping so debris like ``(https://...)``
    is removed too; the result is therefore a fixed point of ``normalize``.
    """
    tokens = []
    for raw in text.split():
        if _is_url_like(raw.lower()):
            continue
        stripped = "".join(
            ch for ch in raw if unicodedata.category(ch)[0] not in _STRIPPED_CATEGORIES
        )
        token = stripped.lower()
        if token and not _is_url_like(token):
            tokens.append(token)
    return tokens


def ngrams(tokens, ngram_range: NgramRange) -> list[str]:
    """All contiguous n-grams for each order in the range, space-joined,
    shorter orders first and windows left to right."""
    out: list[str] = []
    count = len(tokens)
    for n in ngram_range.orders():
        if n == 1:
            out.extend(tokens)
        else:
            out.extend(" ".join(tokens[i : i + n]) for i in range(count - n + 1))
    return out
