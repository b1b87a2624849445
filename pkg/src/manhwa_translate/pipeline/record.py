"""Per-panel sidecar records and their versioned JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from ..geometry import Box, Detection
from ..ocr.recognize import OcrResult
from ..translation.adapters import TranslationUnit

SCHEMA_VERSION = 1
PIPELINE_VERSION = "0.1.0"

STAGES = ("detect", "crop", "ocr", "mt", "typeset")


class SidecarError(ValueError):
    pass


@dataclass
class BubbleEntry:
    index: int
    detection: Detection
    crop: Optional[Box] = None
    ocr: Optional[OcrResult] = None
    mt: Optional[TranslationUnit] = None
    typeset: Optional[dict] = None  # {font_size, lines, overflow}
    errors: list[str] = field(default_factory=list)

    def failed_stages(self) -> set[str]:
        return {e.partition(":")[0] for e in self.errors}


@dataclass
class PanelRecord:
    panel_id: str
    width: int
    height: int
    config_hash: str
    bubbles: list[BubbleEntry] = field(default_factory=list)
    version: str = PIPELINE_VERSION

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "version": self.version,
            "panel_id": self.panel_id,
            "width": self.width,
            "height": self.height,
            "config_hash": self.config_hash,
            "bubbles": [_entry_to_json(b) for b in self.bubbles],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PanelRecord":
        found = _require(data, "schema", "")
        if found != SCHEMA_VERSION:
            raise SidecarError(f"sidecar schema mismatch: expected {SCHEMA_VERSION}, found {found}")
        return cls(
            panel_id=_require(data, "panel_id", ""),
            width=_require(data, "width", ""),
            height=_require(data, "height", ""),
            config_hash=_require(data, "config_hash", ""),
            bubbles=[_entry_from_json(b, f"bubbles[{k}].") for k, b in enumerate(_require(data, "bubbles", ""))],
            version=data.get("version", PIPELINE_VERSION),
        )


def _box_json(box: Box) -> dict:
    # always floats, so a read-write cycle reproduces the file byte for byte
    return {"x1": float(box.x1), "y1": float(box.y1), "x2": float(box.x2), "y2": float(box.y2)}


def _entry_to_json(b: BubbleEntry) -> dict:
    det = b.detection
    return {
        "index": b.index,
        "det": {**_box_json(det.box), "conf": float(det.confidence)},
        "crop": _box_json(b.crop) if b.crop else None,
        "ocr": {"raw": b.ocr.raw_text, "text": b.ocr.text, "conf": b.ocr.mean_confidence} if b.ocr else None,
        "mt": {"src": b.mt.source_text, "tgt": b.mt.target_text} if b.mt else None,
        "typeset": dict(b.typeset) if b.typeset is not None else None,
        "errors": list(b.errors),
    }


def _require(obj: Any, key: str, prefix: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise SidecarError(f"sidecar is missing required field '{prefix}{key}'")
    return obj[key]


def _box_from(obj: Any, prefix: str) -> Box:
    return Box(*(float(_require(obj, k, prefix)) for k in ("x1", "y1", "x2", "y2")))


def _entry_from_json(d: dict, prefix: str) -> BubbleEntry:
    index = _require(d, "index", prefix)
    det = _require(d, "det", prefix)
    errors = list(_require(d, "errors", prefix))
    crop = _require(d, "crop", prefix)
    ocr = _require(d, "ocr", prefix)
    mt = _require(d, "mt", prefix)
    typeset = _require(d, "typeset", prefix)
    mt_error = next((e.partition(": ")[2] for e in errors if e.startswith("mt:")), None)
    return BubbleEntry(
        index=index,
        detection=Detection(_box_from(det, prefix + "det."), float(_require(det, "conf", prefix + "det."))),
        crop=_box_from(crop, prefix + "crop.") if crop is not None else None,
        ocr=OcrResult(
            index,
            _require(ocr, "raw", prefix + "ocr."),
            _require(ocr, "text", prefix + "ocr."),
            _require(ocr, "conf", prefix + "ocr."),
        )
        if ocr is not None
        else None,
        mt=TranslationUnit(
            index, _require(mt, "src", prefix + "mt."), _require(mt, "tgt", prefix + "mt."), mt_error
        )
        if mt is not None
        else None,
        typeset={k: _require(typeset, k, prefix + "typeset.") for k in ("font_size", "lines", "overflow")}
        if typeset is not None
        else None,
        errors=errors,
    )


def dumps_sidecar(record: PanelRecord) -> str:
    return json.dumps(record.to_json(), indent=2, ensure_ascii=False) + "\n"


def write_sidecar(record: PanelRecord, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(dumps_sidecar(record), encoding="utf-8")
    return path


def read_sidecar(path: str | Path) -> PanelRecord:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SidecarError(f"{path}: invalid JSON: {exc}") from None
    return PanelRecord.from_json(data)
