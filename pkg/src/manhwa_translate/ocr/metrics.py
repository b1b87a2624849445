"""Character and word error rates."""

from __future__ import annotations

from typing import Sequence


def edit_distance(a: Sequence, b: Sequence) -> int:
    """Levenshtein distance with unit costs; works on strings and token lists."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def words(text: str) -> list[str]:
    # str.split() with no argument splits on Unicode whitespace
    return text.split()


def cer(reference: str, hypothesis: str) -> float:
    if not reference:
        raise ValueError("undefined CER: empty reference")
    return edit_distance(reference, hypothesis) / len(reference)


def wer(reference: str, hypothesis: str) -> float:
    ref = words(reference)
    if not ref:
        raise ValueError("undefined WER: empty reference")
    return edit_distance(ref, words(hypothesis)) / len(ref)


def corpus_error_rates(
    pairs: Sequence[tuple[str, str]], macro: bool = False, casefold: bool = False
) -> dict[str, float]:
    """CER and WER over ``(reference, hypothesis)`` pairs.

    The default micro average divides total edit distance by total reference
    length, so long lines weigh more. ``macro`` averages per-line rates instead.
    """
    if not pairs:
        raise ValueError("no segments to score")
    if casefold:
        pairs = [(r.casefold(), h.casefold()) for r, h in pairs]
    if macro:
        return {
            "cer": sum(cer(r, h) for r, h in pairs) / len(pairs),
            "wer": sum(wer(r, h) for r, h in pairs) / len(pairs),
        }
    char_dist = char_len = word_dist = word_len = 0
    for r, h in pairs:
        char_dist += edit_distance(r, h)
        char_len += len(r)
        word_dist += edit_distance(words(r), words(h))
        word_len += len(words(r))
    if char_len == 0 or word_len == 0:
        raise ValueError("undefined error rate: references are empty")
    return {"cer": char_dist / char_len, "wer": word_dist / word_len}
