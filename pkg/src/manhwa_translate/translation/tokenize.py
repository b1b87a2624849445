"""Metric tokenization and a small English stemmer."""

from __future__ import annotations

import unicodedata


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[str]:
    """Casefold, split on whitespace, and peel leading/trailing punctuation into tokens.

    >>> tokenize("Hello, (world)!")
    ['hello', ',', '(', 'world', ')', '!']
    >>> tokenize("don't")
    ["don't"]
    """
    tokens: list[str] = []
    for chunk in text.casefold().split():
        start, end = 0, len(chunk)
        lead = []
        while start < end and _is_punct(chunk[start]):
            lead.append(chunk[start])
            start += 1
        trail = []
        while end > start and _is_punct(chunk[end - 1]):
            trail.append(chunk[end - 1])
            end -= 1
        tokens.extend(lead)
        if start < end:
            tokens.append(chunk[start:end])
        tokens.extend(reversed(trail))
    return tokens


_VOWELS = set("aeiou")


def stem(word: str) -> str:
    """Strip common English inflections (plural, -ed, -ing, -ly, final e).

    Deliberately tiny; it only has to make "walks", "walked" and "walking"
    meet at "walk".
    """
    w = word
    if len(w) <= 3:
        return w
    if w.endswith("ies") and len(w) > 4:
        w = w[:-3] + "y"
    elif w.endswith("sses"):
        w = w[:-2]
    elif w.endswith("s") and not w.endswith(("ss", "us", "is")):
        w = w[:-1]

    for suffix in ("ingly", "edly", "ing", "ed", "ly"):
        if w.endswith(suffix) and len(w) - len(suffix) >= 3:
            base = w[: -len(suffix)]
            if any(c in _VOWELS for c in base):
                w = base
                if len(w) >= 2 and w[-1] == w[-2] and w[-1] not in "lsz":
                    w = w[:-1]
            break

    if w.endswith("e") and len(w) > 3:
        w = w[:-1]
    return w
