"""Detection metrics: precision, recall, F1 and COCO-style average precision."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..geometry import Box, Detection, iou
from .annotations import GroundTruthSet
from .postprocess import filter_confidence, nms

log = logging.getLogger(__name__)

COCO_IOU_THRESHOLDS = tuple((50 + 5 * k) / 100 for k in range(10))
RECALL_POINTS = 101


@dataclass(frozen=True)
class MatchResult:
    labels: list[bool]  # per detection, in descending-confidence order: True = TP
    detections: list[Detection]  # same order as labels
    fn: int

    @property
    def tp(self) -> int:
        return sum(self.labels)

    @property
    def fp(self) -> int:
        return len(self.labels) - self.tp


@dataclass
class DetectionReport:
    mean_precision: float
    mean_recall: float
    f1: float
    map_50: float
    map_50_95: float
    counts: dict[str, tuple[int, int, int]] = field(default_factory=dict)  # id -> (tp, fp, fn)
    ap_per_iou: dict[float, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "mean_precision": self.mean_precision,
            "mean_recall": self.mean_recall,
            "f1": self.f1,
            "map_50": self.map_50,
            "map_50_95": self.map_50_95,
            "images": {k: {"tp": tp, "fp": fp, "fn": fn} for k, (tp, fp, fn) in self.counts.items()},
        }


def f1_score(precision: float, recall: float) -> float:
    if precision + recall <= 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def match_detections(dets: Sequence[Detection], gts: Sequence[Box], tau_iou: float) -> MatchResult:
    """Greedily match detections to ground truth in descending confidence.

    A detection is a true positive when the unmatched ground-truth box it
    overlaps most has IoU >= ``tau_iou``; that box is then consumed.
    """
    order = sorted(range(len(dets)), key=lambda i: -dets[i].confidence)
    matched = [False] * len(gts)
    labels = []
    for i in order:
        best, best_iou = -1, -1.0
        for j, gt in enumerate(gts):
            if matched[j]:
                continue
            v = iou(dets[i].box, gt)
            if v > best_iou:
                best, best_iou = j, v
        if best >= 0 and best_iou >= tau_iou:
            matched[best] = True
            labels.append(True)
        else:
            labels.append(False)
    return MatchResult(labels, [dets[i] for i in order], matched.count(False))


def average_precision(labels: Sequence[bool], n_gt: int) -> float:
    """101-point interpolated AP of a ranked TP/FP sequence.

    ``labels`` must already be sorted by descending confidence. With no
    ground truth the AP is 1 when there are also no detections, else 0.
    """
    if n_gt == 0:
        return 0.0 if labels else 1.0
    tp_cum = []
    tp = 0
    for lab in labels:
        tp += bool(lab)
        tp_cum.append(tp)
    # precision envelope from the right: best precision at any rank >= k
    envelope = [0.0] * len(labels)
    best = 0.0
    for k in range(len(labels) - 1, -1, -1):
        best = max(best, tp_cum[k] / (k + 1))
        envelope[k] = best

    total = 0.0
    k = 0
    for step in range(RECALL_POINTS):
        # recall >= step/100, compared exactly in integers
        while k < len(labels) and tp_cum[k] * 100 < step * n_gt:
            k += 1
        if k == len(labels):
            break
        total += envelope[k]
    return total / RECALL_POINTS


def _image_pr(tp: int, fp: int, fn: int) -> tuple[float, float]:
    if tp + fp == 0:
        precision = 1.0 if fn == 0 else 0.0
    else:
        precision = tp / (tp + fp)
    recall = 1.0 if tp + fn == 0 else tp / (tp + fn)
    return precision, recall


def ranked_labels(
    predictions: Mapping[str, Sequence[Detection]], gts: GroundTruthSet, tau_iou: float
) -> tuple[list[bool], int]:
    """Match every image, then rank all detections of the dataset by confidence.

    Returns the TP/FP labels in global descending-confidence order (ties keep
    image order, then per-image order) and the total ground-truth count.
    """
    ranked: list[tuple[float, int, int, bool]] = []
    n_gt = 0
    for img_rank, image_id in enumerate(gts.image_ids):
        truth = gts.boxes[image_id]
        n_gt += len(truth)
        m = match_detections(predictions.get(image_id, []), truth, tau_iou)
        for det_rank, (det, lab) in enumerate(zip(m.detections, m.labels)):
            ranked.append((-det.confidence, img_rank, det_rank, lab))
    ranked.sort()
    return [r[3] for r in ranked], n_gt


def dataset_ap(
    predictions: Mapping[str, Sequence[Detection]], gts: GroundTruthSet, tau_iou: float
) -> float:
    return average_precision(*ranked_labels(predictions, gts, tau_iou))


def detection_report(
    predictions: Mapping[str, Sequence[Detection]],
    gts: GroundTruthSet,
    conf_tau: float = 0.25,
    nms_tau: float = 0.45,
    skip_vacuous: bool = False,
) -> DetectionReport:
    """Score raw detector output against ground truth.

    Precision and recall are averaged over images after the confidence cut,
    matching at IoU 0.5. AP uses every post-NMS detection regardless of
    confidence. An image with neither ground truth nor detections counts as
    P = R = 1 unless ``skip_vacuous`` drops it from the means.
    """
    if len(gts) == 0:
        raise ValueError("no images")
    extra = set(predictions) - set(gts.boxes)
    if extra:
        log.warning("ignoring predictions for %d images without ground truth", len(extra))

    suppressed = {k: nms(predictions.get(k, []), nms_tau) for k in gts.image_ids}

    precisions, recalls = [], []
    counts = {}
    for image_id in gts.image_ids:
        kept = filter_confidence(suppressed[image_id], conf_tau)
        m = match_detections(kept, gts.boxes[image_id], 0.5)
        counts[image_id] = (m.tp, m.fp, m.fn)
        if m.tp + m.fp + m.fn == 0:
            if skip_vacuous:
                continue
            log.info("image %s has no boxes and no detections; counted as P=R=1", image_id)
        p, r = _image_pr(m.tp, m.fp, m.fn)
        precisions.append(p)
        recalls.append(r)

    mean_p = sum(precisions) / len(precisions) if precisions else 0.0
    mean_r = sum(recalls) / len(recalls) if recalls else 0.0
    aps = {t: dataset_ap(suppressed, gts, t) for t in COCO_IOU_THRESHOLDS}
    return DetectionReport(
        mean_precision=mean_p,
        mean_recall=mean_r,
        f1=f1_score(mean_p, mean_r),
        map_50=aps[0.5],
        map_50_95=sum(aps.values()) / len(aps),
        counts=counts,
        ap_per_iou=aps,
    )


def precision_recall_curve(
    predictions: Mapping[str, Sequence[Detection]], gts: GroundTruthSet, tau_iou: float = 0.5
) -> tuple[list[float], list[float]]:
    """Raw (uninterpolated) precision/recall points over the confidence ranking."""
    labels, n_gt = ranked_labels(predictions, gts, tau_iou)
    precision, recall = [], []
    tp = 0
    for k, lab in enumerate(labels, 1):
        tp += lab
        precision.append(tp / k)
        recall.append(tp / n_gt if n_gt else 0.0)
    return precision, recall
