"""Bilingual corpus ingestion and reproducible train/valid/test splits.

The shuffle uses SplitMix64 with unbiased rejection sampling and a
Fisher-Yates pass, so a split can be reproduced from the seed alone in any
language without depending on Python's ``random`` internals.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import MutableSequence, Sequence

log = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1
SPLIT_NAMES = ("train", "valid", "test")


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``."""
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound


def shuffle(items: MutableSequence, seed: int) -> None:
    """In-place Fisher-Yates shuffle driven by SplitMix64."""
    rng = SplitMix64(seed)
    for i in range(len(items) - 1, 0, -1):
        j = rng.below(i + 1)
        items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class CorpusPair:
    source: str
    target: str
    origin: str

    def __post_init__(self):
        if not self.source.strip() or not self.target.strip():
            raise ValueError("corpus pair sides must be non-empty")


def _origin(path: Path) -> str:
    name = path.stem.lower()
    if "identic" in name:
        return "identic"
    if "opensub" in name:
        return "opensubtitles"
    return name


def _read_lines(path: Path) -> list[str]:
    # split on "\n" only: str.splitlines also breaks on U+2028 and friends,
    # which would misalign the two sides
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line.removesuffix("\r") for line in lines]


def read_parallel(src_path: str | Path, tgt_path: str | Path) -> list[CorpusPair]:
    """Read two line-aligned files; pairs with an empty side are dropped."""
    src_path, tgt_path = Path(src_path), Path(tgt_path)
    src, tgt = _read_lines(src_path), _read_lines(tgt_path)
    if len(src) != len(tgt):
        raise ValueError(
            f"misaligned parallel files {src_path} ({len(src)} lines) "
            f"and {tgt_path} ({len(tgt)} lines)"
        )
    origin = _origin(src_path)
    pairs, dropped = [], 0
    for s, t in zip(src, tgt):
        s, t = s.strip(), t.strip()
        if s and t:
            pairs.append(CorpusPair(s, t, origin))
        else:
            dropped += 1
    if dropped:
        log.info("%s: dropped %d pairs with an empty side", src_path, dropped)
    return pairs


def read_tsv(path: str | Path) -> list[CorpusPair]:
    path = Path(path)
    origin = _origin(path)
    pairs = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE), 1):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'source<TAB>target'")
            s, t = row[0].strip(), row[1].strip()
            if s and t:
                pairs.append(CorpusPair(s, t, origin))
    return pairs


def read_sources(paths: Sequence[str | Path]) -> list[CorpusPair]:
    """Read corpus inputs in order: ``.tsv`` files stand alone, other files pair up.

    ``identic.id identic.en subs.tsv`` reads one parallel pair and one TSV.
    """
    pairs: list[CorpusPair] = []
    pending: Path | None = None
    for p in map(Path, paths):
        if p.suffix == ".tsv":
            if pending is not None:
                raise ValueError(f"parallel file {pending} has no partner")
            pairs.extend(read_tsv(p))
        elif pending is None:
            pending = p
        else:
            pairs.extend(read_parallel(pending, p))
            pending = None
    if pending is not None:
        raise ValueError(f"parallel file {pending} has no partner")
    return pairs


def dedupe(pairs: Sequence[CorpusPair]) -> list[CorpusPair]:
    """Drop repeated (source, target) pairs, keeping the first occurrence."""
    seen = set()
    out = []
    for p in pairs:
        key = (p.source, p.target)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def split_sizes(n: int, ratios: Sequence[float]) -> tuple[int, int, int]:
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise ValueError(f"need three positive ratios, got {tuple(ratios)}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {sum(ratios)}")
    # the epsilon keeps e.g. 0.29 * 100 from flooring to 28
    valid = math.floor(ratios[1] * n + 1e-9)
    test = math.floor(ratios[2] * n + 1e-9)
    return n - valid - test, valid, test


def split_pairs(
    pairs: Sequence[CorpusPair], seed: int, ratios: Sequence[float] = (0.8, 0.1, 0.1)
) -> tuple[list[CorpusPair], list[CorpusPair], list[CorpusPair]]:
    """Dedupe, shuffle with ``seed`` and cut into train/valid/test."""
    unique = dedupe(pairs)
    n_train, n_valid, _ = split_sizes(len(unique), ratios)
    shuffle(unique, seed)
    return (
        unique[:n_train],
        unique[n_train : n_train + n_valid],
        unique[n_train + n_valid :],
    )


def prepare_corpus(
    sources: Sequence[str | Path], seed: int, ratios: Sequence[float] = (0.8, 0.1, 0.1)
):
    return split_pairs(read_sources(sources), seed, ratios)


def write_splits(splits, out_dir: str | Path, src_ext: str = "id", tgt_ext: str = "en") -> list[Path]:
    """Write ``train.id``/``train.en``/``valid.*``/``test.*`` line-aligned files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, pairs in zip(SPLIT_NAMES, splits):
        for ext, side in ((src_ext, "source"), (tgt_ext, "target")):
            path = out_dir / f"{name}.{ext}"
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.writelines(getattr(p, side) + "\n" for p in pairs)
            written.append(path)
    return written
