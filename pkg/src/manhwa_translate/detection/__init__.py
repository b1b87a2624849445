"""Speech-bubble detection: backends, postprocessing and evaluation."""

from .adapters import DetectorAdapter, StubDetector, YoloDetector, load_detections
from .annotations import GroundTruthSet, load_ground_truth
from .evaluate import (
    DetectionReport,
    average_precision,
    detection_report,
    f1_score,
    match_detections,
)
from .postprocess import Crop, crop_bubbles, filter_confidence, nms

__all__ = [
    "Crop",
    "DetectionReport",
    "DetectorAdapter",
    "GroundTruthSet",
    "StubDetector",
    "YoloDetector",
    "average_precision",
    "crop_bubbles",
    "detection_report",
    "f1_score",
    "filter_confidence",
    "load_detections",
    "load_ground_truth",
    "match_detections",
    "nms",
]
