"""Axis-aligned box arithmetic shared by every pipeline stage.

Coordinates are continuous pixels with the origin at the top-left corner,
x growing right and y growing down.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class Box:
    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        coords = (self.x1, self.y1, self.x2, self.y2)
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"box coordinates must be finite: {coords}")
        if min(coords) < 0:
            raise ValueError(f"box coordinates must be >= 0: {coords}")
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise ValueError(f"box must have positive area: {coords}")

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def height(self) -> float:
        return self.y2 - self.y1

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (self.x1 + self.x2) / 2, (self.y1 + self.y2) / 2

    def pixel_bounds(self) -> tuple[int, int, int, int]:
        """Integer raster bounds ``(c0, r0, c1, r1)`` of every pixel the box touches.

        Use as ``image[r0:r1, c0:c1]``.
        """
        return (
            int(math.floor(self.x1)),
            int(math.floor(self.y1)),
            int(math.ceil(self.x2)),
            int(math.ceil(self.y2)),
        )

    def as_dict(self) -> dict:
        return {"x1": self.x1, "y1": self.y1, "x2": self.x2, "y2": self.y2}


@dataclass(frozen=True)
class Detection:
    box: Box
    confidence: float
    class_id: int = 0

    def __post_init__(self):
        if not (0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence must be in [0,1], got {self.confidence}")


def iou(a: Box, b: Box) -> float:
    """Intersection over union of two boxes, 0 when they are disjoint."""
    if a == b:
        return 1.0
    iw = min(a.x2, b.x2) - max(a.x1, b.x1)
    ih = min(a.y2, b.y2) - max(a.y1, b.y1)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    return inter / (a.area + b.area - inter)


def expand(box: Box, pad: float, bounds: tuple[float, float]) -> Box:
    """Grow ``box`` by ``pad`` on every side, clamped to ``[0, width] x [0, height]``.

    Raises:
        ValueError: if ``pad`` is negative, the bounds are not positive, or the
            clamped box has no area left (box lies outside the image).
    """
    width, height = bounds
    if pad < 0:
        raise ValueError(f"pad must be >= 0, got {pad}")
    if width <= 0 or height <= 0:
        raise ValueError(f"bounds must be positive, got {bounds}")
    return Box(
        max(0.0, box.x1 - pad),
        max(0.0, box.y1 - pad),
        min(float(width), box.x2 + pad),
        min(float(height), box.y2 + pad),
    )


def clamp(box: Box, bounds: tuple[float, float]) -> Box:
    return expand(box, 0.0, bounds)


def reading_order(boxes: Sequence[Box], row_tolerance: float = 0.5) -> list[int]:
    """Return indices of ``boxes`` in reading order.

    Boxes whose vertical centres lie within ``row_tolerance`` times the median
    box height of a row's first box share that row. Rows run top to bottom and
    boxes within a row left to right.
    """
    if not boxes:
        return []
    tol = row_tolerance * statistics.median(b.height for b in boxes)

    def value_key(i: int):
        b = boxes[i]
        return (b.center[1], b.x1, b.y1, b.x2, b.y2, i)

    by_center = sorted(range(len(boxes)), key=value_key)
    rows: list[list[int]] = []
    anchor_cy = None
    for i in by_center:
        cy = boxes[i].center[1]
        if anchor_cy is None or cy - anchor_cy > tol:
            rows.append([])
            anchor_cy = cy
        rows[-1].append(i)

    order: list[int] = []
    for row in rows:
        order.extend(sorted(row, key=lambda i: (boxes[i].x1,) + value_key(i)))
    return order
