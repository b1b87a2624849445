"""Ground-truth bubble annotations in the normalized ``class cx cy w h`` text format."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from PIL import Image

from ..geometry import Box

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


@dataclass
class GroundTruthSet:
    """Ground-truth boxes per image id (single class, so no labels are kept)."""

    boxes: dict[str, list[Box]] = field(default_factory=dict)

    def add(self, image_id: str, boxes: list[Box]) -> None:
        if image_id in self.boxes:
            raise ValueError(f"duplicate image id in ground truth: {image_id}")
        self.boxes[image_id] = list(boxes)

    def __len__(self) -> int:
        return len(self.boxes)

    @property
    def image_ids(self) -> list[str]:
        return list(self.boxes)


def parse_label_line(line: str, size: tuple[int, int], where: str = "") -> Box:
    fields = line.split()
    if len(fields) != 5:
        raise ValueError(f"{where}: expected 5 fields 'class cx cy w h', got {len(fields)}")
    try:
        int(fields[0])
        cx, cy, w, h = (float(v) for v in fields[1:])
    except ValueError as exc:
        raise ValueError(f"{where}: {exc}") from None
    if not all(0.0 <= v <= 1.0 for v in (cx, cy, w, h)):
        raise ValueError(f"{where}: coordinates must be normalized to [0,1]")
    width, height = size
    return Box(
        max(0.0, (cx - w / 2) * width),
        max(0.0, (cy - h / 2) * height),
        min(float(width), (cx + w / 2) * width),
        min(float(height), (cy + h / 2) * height),
    )


def format_label_line(box: Box, size: tuple[int, int], class_id: int = 0) -> str:
    width, height = size
    cx = (box.x1 + box.x2) / 2 / width
    cy = (box.y1 + box.y2) / 2 / height
    return f"{class_id} {cx:.6f} {cy:.6f} {box.width / width:.6f} {box.height / height:.6f}"


def read_label_file(path: str | Path, size: tuple[int, int]) -> list[Box]:
    boxes = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                boxes.append(parse_label_line(line, size, f"{path}:{lineno}"))
    return boxes


def image_sizes(image_dir: str | Path) -> dict[str, tuple[int, int]]:
    sizes = {}
    for p in sorted(Path(image_dir).iterdir()):
        if p.suffix.lower() in IMAGE_SUFFIXES:
            with Image.open(p) as im:
                sizes[p.stem] = im.size
    return sizes


def load_ground_truth(label_dir: str | Path, sizes: Mapping[str, tuple[int, int]]) -> GroundTruthSet:
    """Build a ground-truth set with one entry per image in ``sizes``.

    Images without a label file have no bubbles.
    """
    label_dir = Path(label_dir)
    gts = GroundTruthSet()
    for image_id in sorted(sizes):
        path = label_dir / f"{image_id}.txt"
        gts.add(image_id, read_label_file(path, sizes[image_id]) if path.exists() else [])
    return gts
