"""Bubble OCR: preprocessing, engine adapters, normalization and error rates."""

from .adapters import OcrAdapter, StubOcr, TesseractOcr, read_text_table
from .metrics import cer, corpus_error_rates, edit_distance, wer
from .recognize import OcrConfig, OcrResult, normalize_text, preprocess_crop, recognize

__all__ = [
    "OcrAdapter",
    "OcrConfig",
    "OcrResult",
    "StubOcr",
    "TesseractOcr",
    "cer",
    "corpus_error_rates",
    "edit_distance",
    "normalize_text",
    "preprocess_crop",
    "read_text_table",
    "recognize",
    "wer",
]
