"""METEOR with exact and stem matching stages (no synonym stage).

Each stage aligns the tokens left unaligned by the previous stages. Within a
stage the number of matches is maximal; among maximal alignments the one
with the fewest chunks is chosen by branch and bound.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from typing import Callable, Iterable, Sequence

from .tokenize import stem, tokenize

ALPHA = 0.9
BETA = 3.0
GAMMA = 0.5

# search nodes per stage; past this the best alignment found so far is kept
SEARCH_BUDGET = 5_000

Pair = tuple[int, int]


def count_chunks(pairs: Iterable[Pair]) -> int:
    """Number of maximal runs of pairs adjacent in both hypothesis and reference."""
    pairs = set(pairs)
    return sum((i - 1, j - 1) not in pairs for i, j in pairs)


def _tile(hyp_keys, ref_keys, fixed: dict[int, int]) -> dict[int, int]:
    """Greedy tiling: repeatedly align the longest common run of free tokens.

    Stops only when no key is free on both sides, so the match count is
    already maximal.
    """
    align = dict(fixed)
    used = set(fixed.values())
    while True:
        best_len, best_at = 0, None
        for i in range(len(hyp_keys)):
            if i in align:
                continue
            for j in range(len(ref_keys)):
                if j in used or hyp_keys[i] != ref_keys[j]:
                    continue
                k = 0
                while (
                    i + k < len(hyp_keys)
                    and j + k < len(ref_keys)
                    and i + k not in align
                    and j + k not in used
                    and hyp_keys[i + k] == ref_keys[j + k]
                ):
                    k += 1
                if k > best_len:
                    best_len, best_at = k, (i, j)
        if best_at is None:
            return align
        i, j = best_at
        for k in range(best_len):
            align[i + k] = j + k
            used.add(j + k)


def _stage(
    hyp_keys: Sequence[str],
    ref_keys: Sequence[str],
    fixed: dict[int, int],
) -> dict[int, int]:
    """Add a maximum-cardinality, minimum-chunk set of pairs over free positions."""
    used_ref = set(fixed.values())
    free_ref = defaultdict(list)
    for j, k in enumerate(ref_keys):
        if j not in used_ref:
            free_ref[k].append(j)
    free_hyp = [i for i in range(len(hyp_keys)) if i not in fixed and hyp_keys[i] in free_ref]
    if not free_hyp:
        return dict(fixed)

    initial = _tile(hyp_keys, ref_keys, fixed)
    best: list = [count_chunks(initial.items()), initial]

    hyp_count = Counter(hyp_keys[i] for i in free_hyp)
    # matches each key still has to place to stay maximal
    quota = {k: min(c, len(free_ref[k])) for k, c in hyp_count.items()}
    # hypothesis positions of each key at or after the cursor
    ahead = dict(hyp_count)
    align: dict[int, int] = dict(fixed)
    taken: set[int] = set()
    budget = [SEARCH_BUDGET]
    n_hyp = len(hyp_keys)

    def starts_between(lo: int, hi: int) -> int:
        # chunk starts among pairs with hypothesis index in [lo, hi)
        return sum(
            1 for k in range(lo, hi) if k in align and align.get(k - 1) != align[k] - 1
        )

    def dfs(pos: int, starts: int):
        # starts counts chunk starts among pairs left of free_hyp[pos]; it only grows
        if starts >= best[0] or budget[0] <= 0:
            return
        budget[0] -= 1
        if pos == len(free_hyp):
            return
        i = free_hyp[pos]
        nxt = free_hyp[pos + 1] if pos + 1 < len(free_hyp) else n_hyp
        key = hyp_keys[i]
        ahead[key] -= 1
        options = [j for j in free_ref[key] if j not in taken] if quota[key] > 0 else []
        # extending the chunk that ends at i-1 is tried first, then left to right
        prev = align.get(i - 1)
        options.sort(key=lambda j: (prev is None or j != prev + 1, j))
        for j in options:
            align[i] = j
            taken.add(j)
            quota[key] -= 1
            _descend(pos, starts + starts_between(i, nxt))
            quota[key] += 1
            taken.discard(j)
            del align[i]
        # leaving i unmatched is only allowed if later occurrences can fill the quota
        if ahead[key] >= quota[key]:
            _descend(pos, starts + starts_between(i, nxt))
        ahead[key] += 1

    def _descend(pos: int, starts: int):
        if pos + 1 == len(free_hyp):
            if starts < best[0]:
                best[0], best[1] = starts, dict(align)
            return
        dfs(pos + 1, starts)

    dfs(0, starts_between(0, free_hyp[0]))
    return best[1]


def align(
    hyp: Sequence[str],
    ref: Sequence[str],
    stages: Sequence[Callable[[str], str]] = (lambda w: w, stem),
) -> dict[int, int]:
    """Align hypothesis to reference tokens, one stage per key function."""
    pairs: dict[int, int] = {}
    for key in stages:
        pairs = _stage([key(t) for t in hyp], [key(t) for t in ref], pairs)
    return pairs


def meteor_tokens(hyp: Sequence[str], ref: Sequence[str]) -> float:
    if not ref:
        raise ValueError("METEOR needs a non-empty reference")
    pairs = align(hyp, ref)
    m = len(pairs)
    if m == 0:
        return 0.0
    precision = m / len(hyp)
    recall = m / len(ref)
    fmean = precision * recall / (ALPHA * precision + (1 - ALPHA) * recall)
    penalty = GAMMA * (count_chunks(pairs.items()) / m) ** BETA
    return fmean * (1 - penalty)


def meteor(hypothesis: str, reference: str) -> float:
    return meteor_tokens(tokenize(hypothesis), tokenize(reference))


def corpus_meteor(pairs: Iterable[tuple[str, str]]) -> float:
    """Arithmetic mean of segment METEOR scores over ``(hypothesis, reference)`` pairs."""
    scores = [meteor(h, r) for h, r in pairs]
    if not scores:
        raise ValueError("METEOR needs at least one segment")
    return sum(scores) / len(scores)
