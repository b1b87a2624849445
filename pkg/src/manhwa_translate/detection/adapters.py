"""Detector backends.

Every backend answers the same question: given an RGB panel, which boxes
contain speech bubbles? Outputs are clamped to the image so downstream code
can rely on them.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Protocol

import numpy as np

from ..geometry import Box, Detection, clamp

log = logging.getLogger(__name__)


class DetectorAdapter(Protocol):
    def detect(self, image: np.ndarray, image_id: str) -> list[Detection]:
        ...


def _clamped(raw: list[Detection], image: np.ndarray) -> list[Detection]:
    height, width = image.shape[:2]
    out = []
    for det in raw:
        try:
            out.append(Detection(clamp(det.box, (width, height)), det.confidence, det.class_id))
        except ValueError:
            log.warning("dropping detection outside the image: %s", det.box)
    return out


def detection_from_dict(d: dict) -> Detection:
    conf = d.get("conf", d.get("confidence", 1.0))
    return Detection(
        Box(float(d["x1"]), float(d["y1"]), float(d["x2"]), float(d["y2"])),
        float(conf),
        int(d.get("class_id", 0)),
    )


def detection_to_dict(det: Detection) -> dict:
    return {**det.box.as_dict(), "conf": det.confidence, "class_id": det.class_id}


def load_detections(path: str | Path) -> dict[str, list[Detection]]:
    """Read a detection fixture: ``{image_id: [{x1, y1, x2, y2, conf}, ...]}``."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return {str(k): [detection_from_dict(d) for d in v] for k, v in data.items()}


class StubDetector:
    """Replays detections recorded in a JSON fixture, keyed by image id."""

    def __init__(self, fixture: str | Path | dict[str, list[Detection]]):
        if isinstance(fixture, dict):
            self.table = fixture
        else:
            self.table = load_detections(fixture)

    def detect(self, image: np.ndarray, image_id: str) -> list[Detection]:
        return _clamped(list(self.table.get(image_id, [])), image)


class YoloDetector:
    """Ultralytics YOLO checkpoint (for example a fine-tuned YOLOv5xu ``.pt`` file)."""

    def __init__(self, model_path: str | Path, device: str | None = None):
        try:
            from ultralytics import YOLO
        except ImportError as exc:  # pragma: no cover - optional backend
            raise RuntimeError(
                "the YOLO detector backend needs the 'ultralytics' package "
                "(pip install artifact[detect])"
            ) from exc
        if not Path(model_path).exists():
            raise FileNotFoundError(f"detector model not found: {model_path}")
        self.model = YOLO(str(model_path))
        self.device = device

    def detect(self, image: np.ndarray, image_id: str) -> list[Detection]:  # pragma: no cover
        # thresholds are applied by our own postprocessing, so ask for everything;
        # ultralytics reads numpy input as BGR
        bgr = np.ascontiguousarray(image[..., ::-1])
        result = self.model.predict(bgr, conf=0.001, iou=1.0, device=self.device, verbose=False)[0]
        boxes = result.boxes
        out = []
        for xyxy, conf, cls in zip(boxes.xyxy.tolist(), boxes.conf.tolist(), boxes.cls.tolist()):
            x1, y1, x2, y2 = (max(0.0, v) for v in xyxy)
            if x2 <= x1 or y2 <= y1:
                continue
            out.append(Detection(Box(x1, y1, x2, y2), min(1.0, float(conf)), int(cls)))
        return _clamped(out, image)
