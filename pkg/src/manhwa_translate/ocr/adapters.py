"""OCR backends: Tesseract and a replay stub for fixtures."""

from __future__ import annotations

import csv
import json
import shutil
from pathlib import Path
from typing import TYPE_CHECKING, Mapping, Optional, Protocol

import numpy as np

if TYPE_CHECKING:
    from .recognize import OcrConfig


class OcrAdapter(Protocol):
    def image_to_text(
        self, crop: np.ndarray, cfg: "OcrConfig", crop_id: str | None = None
    ) -> tuple[str, Optional[float]]:
        """Return the engine's raw text and its mean word confidence (0-100) if known."""
        ...


def read_text_table(path: str | Path) -> dict[str, str]:
    """Load ``id<TAB>text`` rows, a JSON object, or a directory of ``<id>.txt`` files."""
    path = Path(path)
    if path.is_dir():
        # editors add a final newline; it is not part of the text
        return {p.stem: p.read_text(encoding="utf-8").rstrip("\r\n") for p in sorted(path.glob("*.txt"))}
    if path.suffix == ".json":
        with open(path, encoding="utf-8") as fh:
            return {str(k): str(v) for k, v in json.load(fh).items()}
    table = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE), 1):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'id<TAB>text', got {len(row)} columns")
            key, text = row
            if key in table:
                raise ValueError(f"{path}:{lineno}: duplicate id {key!r}")
            table[key] = text
    return table


class StubOcr:
    """Replays recognised text from a fixture mapping crop id to text.

    Unknown crop ids read as blank crops.
    """

    def __init__(self, fixture: str | Path | Mapping[str, str]):
        self.table = dict(fixture) if isinstance(fixture, Mapping) else read_text_table(fixture)

    def image_to_text(self, crop, cfg, crop_id=None):
        return self.table.get(crop_id or "", ""), None


class TesseractOcr:
    """Runs the ``tesseract`` binary through pytesseract with the configured OEM/PSM."""

    def __init__(self, cmd: str | None = None):
        try:
            import pytesseract
        except ImportError as exc:
            raise RuntimeError(
                "the Tesseract backend needs the 'pytesseract' package (pip install artifact[ocr])"
            ) from exc
        cmd = cmd or shutil.which("tesseract")
        if cmd is None:
            raise RuntimeError("tesseract executable not found on PATH")
        pytesseract.pytesseract.tesseract_cmd = cmd
        self._tess = pytesseract

    def languages(self) -> list[str]:
        return list(self._tess.get_languages(config=""))

    def image_to_text(self, crop, cfg, crop_id=None):
        from PIL import Image

        image = Image.fromarray(crop)
        config = f"--oem {cfg.engine_mode} --psm {cfg.page_seg_mode}"
        raw = self._tess.image_to_string(image, lang=cfg.language, config=config)
        data = self._tess.image_to_data(
            image, lang=cfg.language, config=config, output_type=self._tess.Output.DICT
        )
        confs = [float(c) for c in data.get("conf", []) if float(c) >= 0]
        return raw, (sum(confs) / len(confs) if confs else None)
