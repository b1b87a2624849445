"""Bubble interior estimation, clearing, and drawing typeset plans."""

from __future__ import annotations

import numpy as np
from PIL import Image, ImageDraw
from scipy import ndimage

from ..geometry import Box
from .fonts import TrueTypeFont
from .layout import TypesetPlan

LIGHT_THRESHOLD = 230
MIN_FILL_FRACTION = 0.20
FALLBACK_BORDER = 2


def _gray(crop: np.ndarray) -> np.ndarray:
    if crop.ndim == 2:
        return crop
    return crop[..., :3].astype(np.float64) @ np.array([0.299, 0.587, 0.114])


def _fallback_mask(shape: tuple[int, int]) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    b = FALLBACK_BORDER
    mask[b : shape[0] - b, b : shape[1] - b] = True
    return mask


def estimate_bubble_mask(crop: np.ndarray, threshold: float = LIGHT_THRESHOLD) -> np.ndarray:
    """Estimate the bubble interior as the light region around the crop centre.

    The light (>= ``threshold``) 4-connected component holding the centre
    pixel is taken, and enclosed holes such as the original lettering are
    filled in. If the centre pixel sits on lettering, the nearest light pixel
    seeds the fill instead. When the region covers less than 20% of the crop
    the full rectangle minus a 2 px border is returned.
    """
    h, w = crop.shape[:2]
    light = _gray(crop) >= threshold
    if not light.any():
        return _fallback_mask((h, w))
    cy, cx = h // 2, w // 2
    if not light[cy, cx]:
        ys, xs = np.nonzero(light)
        k = np.argmin((ys - cy) ** 2 + (xs - cx) ** 2)
        cy, cx = ys[k], xs[k]
    labels, _ = ndimage.label(light)
    region = labels == labels[cy, cx]
    region = ndimage.binary_fill_holes(region)
    if region.sum() < MIN_FILL_FRACTION * h * w:
        return _fallback_mask((h, w))
    return region


def clear_region(image: np.ndarray, box: Box, mask: np.ndarray) -> np.ndarray:
    """Return a copy of ``image`` with the masked pixels of ``box`` set to white."""
    c0, r0, c1, r1 = box.pixel_bounds()
    if mask.shape != (r1 - r0, c1 - c0):
        raise ValueError(f"mask shape {mask.shape} does not match box region {(r1 - r0, c1 - c0)}")
    out = image.copy()
    out[r0:r1, c0:c1][mask] = 255
    return out


def render_plan(image: np.ndarray, plan: TypesetPlan, font: TrueTypeFont) -> np.ndarray:
    """Draw the plan's lines in black; pixels outside the plan box are never touched."""
    if not plan.lines:
        return image.copy()
    c0, r0, c1, r1 = plan.box.pixel_bounds()
    out = image.copy()
    region = Image.fromarray(np.ascontiguousarray(out[r0:r1, c0:c1]))
    draw = ImageDraw.Draw(region)
    ttf = font.font(plan.font_size)
    ink = 0 if region.mode == "L" else (0,) * len(region.getbands())
    for line, (x, y) in zip(plan.lines, plan.line_positions):
        draw.text((x - c0, y - r0), line, font=ttf, fill=ink, anchor="ma")
    out[r0:r1, c0:c1] = np.asarray(region)
    return out
