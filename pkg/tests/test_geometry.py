import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from manhwa_translate.geometry import Box, Detection, expand, iou, reading_order
from oracles import raster_iou


@st.composite
def int_boxes(draw, hi=40):
    x1 = draw(st.integers(0, hi - 1))
    y1 = draw(st.integers(0, hi - 1))
    x2 = draw(st.integers(x1 + 1, hi))
    y2 = draw(st.integers(y1 + 1, hi))
    return Box(x1, y1, x2, y2)


@st.composite
def float_boxes(draw, hi=500.0):
    x1 = draw(st.floats(0, hi - 1, allow_nan=False))
    y1 = draw(st.floats(0, hi - 1, allow_nan=False))
    w = draw(st.floats(0.5, hi, allow_nan=False))
    h = draw(st.floats(0.5, hi, allow_nan=False))
    return Box(x1, y1, x1 + w, y1 + h)


class TestBox:
    @pytest.mark.parametrize(
        "coords",
        [(0, 0, 0, 5), (5, 0, 1, 5), (-1, 0, 4, 4), (0, 0, math.inf, 3), (0, math.nan, 3, 3)],
    )
    def test_rejects_degenerate(self, coords):
        with pytest.raises(ValueError):
            Box(*coords)

    def test_pixel_bounds_cover_fractional_edges(self):
        assert Box(1.2, 2.7, 5.0, 6.1).pixel_bounds() == (1, 2, 5, 7)

    def test_detection_confidence_range(self):
        with pytest.raises(ValueError):
            Detection(Box(0, 0, 1, 1), 1.2)


class TestIou:
    def test_identity(self):
        assert iou(Box(0, 0, 10, 10), Box(0, 0, 10, 10)) == 1.0

    def test_disjoint(self):
        assert iou(Box(0, 0, 10, 10), Box(20, 20, 30, 30)) == 0.0

    def test_touching_edges_is_zero(self):
        assert iou(Box(0, 0, 10, 10), Box(10, 0, 20, 10)) == 0.0

    def test_partial_overlap_against_raster(self):
        a, b = Box(0, 0, 10, 10), Box(5, 5, 15, 15)
        assert iou(a, b) == pytest.approx(25 / 175, abs=1e-12)
        assert iou(a, b) == pytest.approx(raster_iou((0, 0, 10, 10), (5, 5, 15, 15)), abs=1e-12)

    @settings(max_examples=150, deadline=None)
    @given(int_boxes(), int_boxes())
    def test_matches_raster_oracle(self, a, b):
        ref = raster_iou((a.x1, a.y1, a.x2, a.y2), (b.x1, b.y1, b.x2, b.y2), cells_per_px=2)
        assert iou(a, b) == pytest.approx(ref, abs=1e-9)

    @given(float_boxes(), float_boxes())
    def test_symmetric_and_bounded(self, a, b):
        v = iou(a, b)
        assert 0.0 <= v <= 1.0
        assert v == iou(b, a)

    @given(float_boxes())
    def test_self_is_one(self, a):
        assert iou(a, a) == 1.0


class TestExpand:
    def test_identity(self):
        assert expand(Box(10, 10, 20, 20), 0, (100, 100)) == Box(10, 10, 20, 20)

    def test_interior(self):
        assert expand(Box(10, 10, 20, 20), 5, (100, 100)) == Box(5, 5, 25, 25)

    def test_clamped_each_edge(self):
        assert expand(Box(2, 2, 20, 20), 5, (22, 22)) == Box(0, 0, 22, 22)

    def test_negative_pad(self):
        with pytest.raises(ValueError, match="pad"):
            expand(Box(0, 0, 5, 5), -1, (10, 10))

    def test_outside_image(self):
        with pytest.raises(ValueError):
            expand(Box(50, 50, 60, 60), 0, (10, 10))

    @given(float_boxes(hi=100.0), st.floats(0, 30), st.integers(100, 300), st.integers(100, 300))
    def test_contains_clamped_original(self, box, pad, w, h):
        out = expand(box, pad, (w, h))
        assert 0 <= out.x1 <= min(box.x1, w) and out.x2 <= w and out.y2 <= h
        assert out.x1 <= box.x1 and out.y1 <= box.y1
        assert out.x2 >= min(box.x2, w) and out.y2 >= min(box.y2, h)


class TestReadingOrder:
    def test_empty(self):
        assert reading_order([]) == []

    def test_singleton(self):
        assert reading_order([Box(3, 3, 9, 9)]) == [0]

    def test_row_then_below(self):
        boxes = [Box(0, 0, 10, 10), Box(50, 2, 60, 12), Box(0, 40, 10, 50)]
        assert reading_order(boxes) == [0, 1, 2]

    def test_right_box_listed_first_still_after_left(self):
        boxes = [Box(50, 2, 60, 12), Box(0, 40, 10, 50), Box(0, 0, 10, 10)]
        assert reading_order(boxes) == [2, 0, 1]

    def test_stacked_vertically(self):
        assert reading_order([Box(0, 100, 50, 150), Box(0, 0, 50, 50)]) == [1, 0]

    def test_tolerance_controls_rows(self):
        # centres 5 and 11 apart by 6; median height 10
        boxes = [Box(0, 6, 10, 16), Box(40, 0, 50, 10)]
        assert reading_order(boxes, row_tolerance=0.5) == [1, 0]  # lower box starts a new row
        assert reading_order(boxes, row_tolerance=0.7) == [0, 1]  # same row, left first

    @settings(max_examples=100, deadline=None)
    @given(st.lists(float_boxes(hi=300.0), min_size=1, max_size=12, unique=True), st.randoms())
    def test_permutation_and_input_order_independent(self, boxes, rnd):
        order = reading_order(boxes)
        assert sorted(order) == list(range(len(boxes)))
        shuffled = list(boxes)
        rnd.shuffle(shuffled)
        assert [shuffled[i] for i in reading_order(shuffled)] == [boxes[i] for i in order]

    def test_rows_are_top_to_bottom(self):
        rng = random.Random(3)
        for _ in range(50):
            boxes = [Box(x, y, x + 20, y + 20) for x, y in ((rng.uniform(0, 300), rng.uniform(0, 300)) for _ in range(8))]
            order = reading_order(boxes)
            tops = [boxes[i].center[1] for i in order]
            # a later box is never more than one tolerance band above an earlier one
            for k in range(len(tops)):
                for j in range(k + 1, len(tops)):
                    assert tops[j] >= tops[k] - 10 - 1e-9
