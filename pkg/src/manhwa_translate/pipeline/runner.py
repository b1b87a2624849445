"""Panel and batch orchestration: detect, OCR, translate, typeset."""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image

from ..detection.adapters import DetectorAdapter, StubDetector, YoloDetector
from ..detection.postprocess import crop_bubbles, filter_confidence, nms
from ..ocr.adapters import OcrAdapter, StubOcr, TesseractOcr
from ..ocr.recognize import OcrResult, preprocess_crop, recognize
from ..translation.adapters import (
    DictionaryTranslator,
    HttpTranslator,
    MarianTranslator,
    TranslatorAdapter,
    translate,
)
from ..typeset.fonts import FontMetrics, LinearMetrics, TrueTypeFont
from ..typeset.layout import fit_text
from ..typeset.render import clear_region, estimate_bubble_mask, render_plan
from .config import PipelineConfig
from .record import STAGES, BubbleEntry, PanelRecord, write_sidecar

log = logging.getLogger(__name__)

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")
OUTPUT_SUFFIX = ".translated.png"
SIDECAR_SUFFIX = ".sidecar.json"


@dataclass
class Adapters:
    detector: DetectorAdapter
    ocr: OcrAdapter
    translator: TranslatorAdapter
    font: Optional[TrueTypeFont] = None  # None: plan-only dry run


def build_adapters(cfg: PipelineConfig) -> Adapters:
    """Construct every backend named by the config; any failure is a run-level error."""
    d, o, m = cfg.detector, cfg.ocr, cfg.mt
    if d.detections:
        detector = StubDetector(d.detections)
    elif d.model:
        detector = YoloDetector(d.model)
    else:
        raise ValueError("no detector configured: set detector.model or detector.detections")

    ocr = StubOcr(o.fixture) if o.fixture else TesseractOcr()

    if m.dict:
        translator = DictionaryTranslator(m.dict)
    elif m.url:
        translator = HttpTranslator(m.url)
    elif m.model:
        translator = MarianTranslator(m.model)
    else:
        raise ValueError("no translator configured: set mt.model, mt.url or mt.dict")

    font = TrueTypeFont(cfg.typeset.font) if cfg.typeset.font else None
    return Adapters(detector, ocr, translator, font)


def load_image(path: str | Path) -> np.ndarray:
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"))


def save_png(image: np.ndarray, path: str | Path) -> None:
    Image.fromarray(image).save(path, format="PNG")


def process_panel(
    image: np.ndarray, cfg: PipelineConfig, adapters: Adapters, panel_id: str = "panel"
) -> tuple[np.ndarray, PanelRecord]:
    """Run every stage on one panel.

    A failure inside one bubble is recorded on that bubble, whose region is
    then left untouched; the other bubbles carry on.
    """
    height, width = image.shape[:2]
    record = PanelRecord(panel_id, width, height, cfg.hash())

    dets = adapters.detector.detect(image, panel_id)
    dets = nms(filter_confidence(dets, cfg.detector.conf_tau), cfg.detector.nms_tau)
    crops, failures = crop_bubbles(image, dets, cfg.detector.pad, cfg.detector.row_tolerance)

    entries = {f.index: BubbleEntry(f.index, f.detection, errors=[f"crop: {f.reason}"]) for f in failures}
    metrics: FontMetrics = adapters.font or LinearMetrics()
    ocr_cfg = cfg.ocr.engine_config()
    out = image.copy()

    for crop in crops:
        entry = BubbleEntry(crop.index, crop.detection, crop.box)
        entries[crop.index] = entry
        try:
            gray = preprocess_crop(crop.pixels)
            entry.ocr = recognize(gray, ocr_cfg, adapters.ocr, crop.index, f"{panel_id}:{crop.index}")
        except Exception as exc:
            log.warning("%s bubble %d: OCR failed: %s", panel_id, crop.index, exc)
            entry.errors.append(f"ocr: {type(exc).__name__}: {exc}")
            entry.ocr = OcrResult(crop.index, "", "", None)

        entry.mt = translate(entry.ocr.text, adapters.translator, crop.index)
        if entry.mt.failed:
            entry.errors.append(f"mt: {entry.mt.error}")

        if entry.errors or not entry.mt.target_text:
            continue
        try:
            box = crop.detection.box
            plan = fit_text(entry.mt.target_text, box, metrics, cfg.typeset.constraints())
            if adapters.font is not None:
                c0, r0, c1, r1 = box.pixel_bounds()
                mask = estimate_bubble_mask(image[r0:r1, c0:c1], cfg.typeset.light_threshold)
                out = render_plan(clear_region(out, box, mask), plan, adapters.font)
            entry.typeset = plan.summary()
        except Exception as exc:
            log.warning("%s bubble %d: typesetting failed: %s", panel_id, crop.index, exc)
            entry.errors.append(f"typeset: {type(exc).__name__}: {exc}")

    record.bubbles = [entries[k] for k in sorted(entries)]
    return out, record


@dataclass
class BatchSummary:
    panels: int = 0
    ok: int = 0
    failed: int = 0
    stage_failures: dict[str, int] = field(default_factory=lambda: {s: 0 for s in STAGES})
    panel_errors: dict[str, str] = field(default_factory=dict)
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        return {
            "panels": self.panels,
            "ok": self.ok,
            "failed": self.failed,
            "stage_failures": dict(self.stage_failures),
            "panel_errors": dict(self.panel_errors),
            "wall_time": round(self.wall_time, 3),
        }


def list_panels(input_dir: str | Path) -> list[Path]:
    input_dir = Path(input_dir)
    if not input_dir.is_dir():
        raise FileNotFoundError(f"input directory not found: {input_dir}")
    return sorted(
        p
        for p in input_dir.iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES and not p.name.endswith(OUTPUT_SUFFIX)
    )


def process_file(path: Path, cfg: PipelineConfig, adapters: Adapters) -> tuple[str, Optional[list[set]], Optional[str]]:
    """Process and write one panel; returns ``(name, failed stages per bubble, panel error)``."""
    name = path.stem
    out_dir = Path(cfg.run.out)
    try:
        image = load_image(path)
    except Exception as exc:
        log.error("%s: unreadable image: %s", path, exc)
        return name, None, f"unreadable image: {exc}"
    try:
        out, record = process_panel(image, cfg, adapters, name)
    except Exception as exc:
        log.error("%s: panel failed: %s", path, exc)
        return name, None, f"{type(exc).__name__}: {exc}"
    if adapters.font is not None:
        save_png(out, out_dir / f"{name}{OUTPUT_SUFFIX}")
    write_sidecar(record, out_dir / f"{name}{SIDECAR_SUFFIX}")
    return name, [b.failed_stages() for b in record.bubbles], None


_worker: dict = {}


def _init_worker(cfg: PipelineConfig) -> None:
    _worker["cfg"] = cfg
    _worker["adapters"] = build_adapters(cfg)


def _work(path: Path):
    return process_file(path, _worker["cfg"], _worker["adapters"])


def run_batch(input_dir: str | Path, cfg: PipelineConfig, adapters: Adapters | None = None) -> BatchSummary:
    """Translate every panel image in ``input_dir`` into ``cfg.run.out``.

    Each worker process owns its own backends. Outputs do not depend on the
    worker count as long as the backends are deterministic.
    """
    start = time.perf_counter()
    paths = list_panels(input_dir)
    if not paths:
        raise ValueError(f"no input images in {input_dir}")
    out_dir = Path(cfg.run.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not os.access(out_dir, os.W_OK):
        raise PermissionError(f"output directory is not writable: {out_dir}")
    # fail fast on bad backends before any worker starts
    adapters = adapters or build_adapters(cfg)

    workers = min(cfg.run.workers, len(paths))
    if workers == 1:
        results = [process_file(p, cfg, adapters) for p in paths]
    else:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(cfg,)) as pool:
            results = list(pool.map(_work, paths))

    summary = BatchSummary(panels=len(paths))
    for name, bubble_failures, error in results:
        if error is not None:
            summary.failed += 1
            summary.panel_errors[name] = error
            continue
        summary.ok += 1
        for stages in bubble_failures:
            for stage in stages:
                summary.stage_failures[stage] = summary.stage_failures.get(stage, 0) + 1
    summary.wall_time = time.perf_counter() - start
    return summary
