"""Crop preprocessing, recognition and text normalization."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .adapters import OcrAdapter


@dataclass(frozen=True)
class OcrConfig:
    language: str = "ind"
    engine_mode: int = 3
    page_seg_mode: int = 6

    def __post_init__(self):
        if self.engine_mode not in range(4):
            raise ValueError(f"engine_mode must be in [0,3], got {self.engine_mode}")
        if self.page_seg_mode not in range(14):
            raise ValueError(f"page_seg_mode must be in [0,13], got {self.page_seg_mode}")
        if not self.language:
            raise ValueError("language must not be empty")


@dataclass(frozen=True)
class OcrResult:
    bubble_index: int
    raw_text: str
    text: str
    mean_confidence: Optional[float] = None


_LUMA = np.array([0.299, 0.587, 0.114])


def preprocess_crop(crop: np.ndarray) -> np.ndarray:
    """Convert a crop to single-channel 8-bit luma; grayscale input passes through."""
    if crop.size == 0 or crop.shape[0] == 0 or crop.shape[1] == 0:
        raise ValueError("cannot preprocess an empty crop")
    if crop.ndim == 2:
        return crop
    if crop.ndim == 3 and crop.shape[2] == 1:
        return crop[..., 0]
    luma = crop[..., :3].astype(np.float64) @ _LUMA
    return np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)


_HYPHEN_BREAK = re.compile(r"-[ \t]*\r?\n[ \t]*")
_LINEBREAK = re.compile(r"\r\n|\r|\n")
_SPACES = re.compile(r"\s+")


def normalize_text(raw: str) -> str:
    """Flatten multi-line OCR output into one line.

    Hyphenated line breaks are joined, other breaks become spaces, whitespace
    runs collapse and the ends are trimmed. Case is preserved.
    """
    text = _HYPHEN_BREAK.sub("", raw)
    text = _LINEBREAK.sub(" ", text)
    return _SPACES.sub(" ", text).strip()


def recognize(
    crop: np.ndarray,
    cfg: OcrConfig,
    adapter: OcrAdapter,
    bubble_index: int = 0,
    crop_id: str | None = None,
) -> OcrResult:
    raw, conf = adapter.image_to_text(crop, cfg, crop_id)
    return OcrResult(bubble_index, raw, normalize_text(raw), conf)
