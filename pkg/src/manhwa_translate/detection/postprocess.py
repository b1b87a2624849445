"""Confidence filtering, non-maximum suppression and bubble cropping."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..geometry import Box, Detection, expand, iou, reading_order

log = logging.getLogger(__name__)


def filter_confidence(dets: Sequence[Detection], tau: float) -> list[Detection]:
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"confidence threshold must be in [0,1], got {tau}")
    return [d for d in dets if d.confidence >= tau]


def _by_confidence(dets: Sequence[Detection]) -> list[int]:
    # stable sort: lower original index wins ties
    return sorted(range(len(dets)), key=lambda i: -dets[i].confidence)


def nms(dets: Sequence[Detection], tau_iou: float) -> list[Detection]:
    """Greedy non-maximum suppression.

    Repeatedly keeps the most confident remaining detection and drops every
    other detection whose IoU with it exceeds ``tau_iou``. The result is
    sorted by descending confidence.
    """
    if not 0.0 <= tau_iou <= 1.0:
        raise ValueError(f"IoU threshold must be in [0,1], got {tau_iou}")
    remaining = _by_confidence(dets)
    kept: list[Detection] = []
    while remaining:
        best = dets[remaining[0]]
        kept.append(best)
        remaining = [i for i in remaining[1:] if iou(best.box, dets[i].box) <= tau_iou]
    return kept


@dataclass(frozen=True)
class Crop:
    index: int  # position in reading order
    detection: Detection
    box: Box  # padded, clamped crop region
    pixels: np.ndarray


@dataclass(frozen=True)
class CropFailure:
    index: int
    detection: Detection
    reason: str


def crop_bubbles(
    image: np.ndarray, dets: Sequence[Detection], pad: float = 0.0, row_tolerance: float = 0.5
) -> tuple[list[Crop], list[CropFailure]]:
    """Cut one padded crop per detection, in reading order.

    A detection whose padded box collapses to zero area after clamping to the
    image is reported in the failure list instead of aborting the batch.
    """
    height, width = image.shape[:2]
    order = reading_order([d.box for d in dets], row_tolerance)
    crops: list[Crop] = []
    failures: list[CropFailure] = []
    for rank, i in enumerate(order):
        det = dets[i]
        try:
            box = expand(det.box, pad, (width, height))
        except ValueError as exc:
            log.warning("skipping bubble %d: %s", rank, exc)
            failures.append(CropFailure(rank, det, str(exc)))
            continue
        c0, r0, c1, r1 = box.pixel_bounds()
        crops.append(Crop(rank, det, box, image[r0:r1, c0:c1].copy()))
    return crops, failures
