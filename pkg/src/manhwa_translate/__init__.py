"""Indonesian-to-English manhwa panel translation: detect, OCR, translate, typeset."""

from .geometry import Box, Detection, expand, iou, reading_order

__version__ = "0.1.0"

__all__ = ["Box", "Detection", "expand", "iou", "reading_order"]
