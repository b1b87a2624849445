"""Corpus-level BLEU-4 with a single reference per segment."""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Sequence

from .tokenize import tokenize

MAX_ORDER = 4


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def ngram_clipped_precision(hyp: Sequence[str], ref: Sequence[str], n: int) -> tuple[int, int]:
    """Return ``(clipped matches, hypothesis n-gram count)`` for order ``n``."""
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    hyp_counts = _ngrams(hyp, n)
    ref_counts = _ngrams(ref, n)
    clipped = sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
    return clipped, sum(hyp_counts.values())


def corpus_bleu_tokens(pairs: Iterable[tuple[Sequence[str], Sequence[str]]]) -> float:
    pairs = list(pairs)
    if not pairs:
        raise ValueError("BLEU needs at least one segment")
    matches = [0] * MAX_ORDER
    totals = [0] * MAX_ORDER
    hyp_len = ref_len = 0
    for hyp, ref in pairs:
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, MAX_ORDER + 1):
            m, t = ngram_clipped_precision(hyp, ref, n)
            matches[n - 1] += m
            totals[n - 1] += t
    if hyp_len == 0:
        return 0.0

    log_p = 0.0
    for m, t in zip(matches, totals):
        # add-one smoothing only where an order has no matches at all
        if m == 0:
            m, t = 1, t + 1
        log_p += math.log(m / t)
    bp = 1.0 if hyp_len >= ref_len else math.exp(1 - ref_len / hyp_len)
    return bp * math.exp(log_p / MAX_ORDER)


def corpus_bleu(pairs: Iterable[tuple[str, str]]) -> float:
    """BLEU-4 over ``(hypothesis, reference)`` strings, tokenized with :func:`tokenize`."""
    return corpus_bleu_tokens((tokenize(h), tokenize(r)) for h, r in pairs)
