"""Font measurement backends for the layout search."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Protocol

from PIL import ImageFont


class FontMetrics(Protocol):
    def text_width(self, text: str, size: float) -> float:
        ...

    def line_height(self, size: float) -> float:
        ...


class LinearMetrics:
    """Monospace stand-in: width = 0.6 * size per character, line height = 1.2 * size."""

    def __init__(self, advance: float = 0.6, leading: float = 1.2):
        self.advance = advance
        self.leading = leading

    def text_width(self, text: str, size: float) -> float:
        return self.advance * size * len(text)

    def line_height(self, size: float) -> float:
        return self.leading * size


class TrueTypeFont:
    """Measures and draws with a TrueType/OpenType font file."""

    def __init__(self, path: str | Path):
        self.path = str(path)
        if not Path(self.path).is_file():
            raise FileNotFoundError(f"font file not found: {self.path}")
        try:
            ImageFont.truetype(self.path, 12)
        except OSError as exc:
            raise OSError(f"cannot load font {self.path}: {exc}") from exc
        self._font = lru_cache(maxsize=64)(self._load)

    def _load(self, size: int) -> ImageFont.FreeTypeFont:
        return ImageFont.truetype(self.path, size)

    def font(self, size: float) -> ImageFont.FreeTypeFont:
        return self._font(max(1, int(round(size))))

    def text_width(self, text: str, size: float) -> float:
        return self.font(size).getlength(text)

    def line_height(self, size: float) -> float:
        ascent, descent = self.font(size).getmetrics()
        return float(ascent + descent)

    def __getstate__(self):
        return {"path": self.path}

    def __setstate__(self, state):
        self.__init__(state["path"])
