"""Fit translated text into a bubble box: line breaks, font size and placement."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..geometry import Box
from .fonts import FontMetrics


@dataclass(frozen=True)
class FitConstraints:
    margin: float = 4.0
    min_size: float = 10
    max_size: float = 48
    size_step: float = 1

    def __post_init__(self):
        if self.min_size <= 0 or self.min_size > self.max_size:
            raise ValueError(f"need 0 < min_size <= max_size, got {self.min_size}, {self.max_size}")
        if self.size_step <= 0:
            raise ValueError(f"size_step must be positive, got {self.size_step}")
        if self.margin < 0:
            raise ValueError(f"margin must be >= 0, got {self.margin}")

    def sizes(self) -> list[float]:
        """Candidate font sizes, largest first, always ending at ``min_size``."""
        out = []
        k = 0
        while True:
            s = self.max_size - k * self.size_step
            if s < self.min_size - 1e-9:
                break
            out.append(s)
            k += 1
        if out[-1] != self.min_size:
            out.append(self.min_size)
        return out


@dataclass(frozen=True)
class TypesetPlan:
    box: Box
    font_size: float
    lines: list[str] = field(default_factory=list)
    # (horizontal centre, top) of each line in image coordinates
    line_positions: list[tuple[float, float]] = field(default_factory=list)
    overflow: bool = False

    def summary(self) -> dict:
        return {"font_size": self.font_size, "lines": list(self.lines), "overflow": self.overflow}


def wrap_words(words: list[str], metrics: FontMetrics, size: float, max_width: float) -> list[str]:
    """Greedy word wrap; a word wider than the line gets a line of its own."""
    lines: list[str] = []
    current: list[str] = []
    for word in words:
        if metrics.text_width(word, size) > max_width:
            if current:
                lines.append(" ".join(current))
                current = []
            lines.append(word)
            continue
        candidate = " ".join(current + [word])
        if current and metrics.text_width(candidate, size) > max_width:
            lines.append(" ".join(current))
            current = [word]
        else:
            current.append(word)
    if current:
        lines.append(" ".join(current))
    return lines


def _fits(lines: list[str], metrics: FontMetrics, size: float, width: float, height: float) -> bool:
    if len(lines) * metrics.line_height(size) > height:
        return False
    return all(metrics.text_width(line, size) <= width for line in lines)


def _place(box: Box, lines: list[str], metrics: FontMetrics, size: float) -> list[tuple[float, float]]:
    lh = metrics.line_height(size)
    cx, cy = box.center
    top = cy - len(lines) * lh / 2
    return [(cx, top + k * lh) for k in range(len(lines))]


def fit_text(
    text: str, box: Box, metrics: FontMetrics, constraints: FitConstraints | None = None
) -> TypesetPlan:
    """Pick the largest candidate font size at which the wrapped text fits the box.

    The usable area is the box minus ``margin`` on every side. When even
    ``min_size`` does not fit, the ``min_size`` layout is returned with
    ``overflow`` set rather than dropping text.
    """
    c = constraints or FitConstraints()
    words = text.split()
    if not words:
        return TypesetPlan(box, c.max_size)
    width = box.width - 2 * c.margin
    height = box.height - 2 * c.margin
    for size in c.sizes():
        lines = wrap_words(words, metrics, size, width)
        if _fits(lines, metrics, size, width, height):
            return TypesetPlan(box, size, lines, _place(box, lines, metrics, size))
    size = c.min_size
    lines = wrap_words(words, metrics, size, width)
    return TypesetPlan(box, size, lines, _place(box, lines, metrics, size), overflow=True)
