import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from manhwa_translate.ocr import (
    OcrConfig,
    StubOcr,
    cer,
    corpus_error_rates,
    edit_distance,
    normalize_text,
    preprocess_crop,
    read_text_table,
    recognize,
    wer,
)
from oracles import memo_edit_distance, recursive_edit_distance


class TestPreprocess:
    def test_white(self):
        out = preprocess_crop(np.full((4, 5, 3), 255, np.uint8))
        assert out.shape == (4, 5) and out.dtype == np.uint8 and (out == 255).all()

    def test_gray_passthrough(self):
        gray = np.arange(12, dtype=np.uint8).reshape(3, 4)
        assert preprocess_crop(gray) is gray

    def test_red_luma(self):
        assert preprocess_crop(np.array([[[255, 0, 0]]], np.uint8))[0, 0] == 76

    def test_rgba_ignores_alpha(self):
        px = np.array([[[0, 255, 0, 7]]], np.uint8)
        assert preprocess_crop(px)[0, 0] == 150  # 0.587 * 255 = 149.685

    def test_empty(self):
        with pytest.raises(ValueError):
            preprocess_crop(np.zeros((0, 3, 3), np.uint8))


class TestNormalize:
    @pytest.mark.parametrize(
        "raw, text",
        [
            ("", ""),
            ("AKU  PERGI\nKE PASAR", "AKU PERGI KE PASAR"),
            ("BER-\nLARI", "BERLARI"),
            ("HALO\nDUNIA", "HALO DUNIA"),
            ("  A\r\nB \t C\n\n", "A B C"),
            ("ANAK-ANAK", "ANAK-ANAK"),
        ],
    )
    def test_rules(self, raw, text):
        assert normalize_text(raw) == text

    @given(st.text(alphabet="ab -\n\t"))
    def test_idempotent_single_line(self, raw):
        once = normalize_text(raw)
        assert normalize_text(once) == once
        assert "\n" not in once and "  " not in once and once == once.strip()


class TestRecognize:
    cfg = OcrConfig()

    def test_stub_multiline(self):
        r = recognize(np.zeros((5, 5), np.uint8), self.cfg, StubOcr({"c": "HALO\nDUNIA"}), 2, "c")
        assert (r.bubble_index, r.raw_text, r.text) == (2, "HALO\nDUNIA", "HALO DUNIA")

    def test_blank(self):
        r = recognize(np.full((5, 5), 255, np.uint8), self.cfg, StubOcr({}), 0, "missing")
        assert r.text == ""

    @pytest.mark.parametrize("kwargs", [{"engine_mode": 4}, {"page_seg_mode": 14}, {"language": ""}])
    def test_config_ranges(self, kwargs):
        with pytest.raises(ValueError):
            OcrConfig(**kwargs)


class TestTextTables:
    def test_tsv(self, tmp_path):
        p = tmp_path / "t.tsv"
        p.write_text("a\tsatu\nb\tdua \"kata\"\n", encoding="utf-8")
        assert read_text_table(p) == {"a": "satu", "b": 'dua "kata"'}

    def test_tsv_errors(self, tmp_path):
        p = tmp_path / "t.tsv"
        p.write_text("a\tsatu\na\tdua\n", encoding="utf-8")
        with pytest.raises(ValueError, match="duplicate"):
            read_text_table(p)
        p.write_text("only-one-column\n", encoding="utf-8")
        with pytest.raises(ValueError, match=":1:"):
            read_text_table(p)

    def test_directory_strips_final_newline(self, tmp_path):
        (tmp_path / "x.txt").write_text("HALO\nDUNIA\n", encoding="utf-8")
        assert read_text_table(tmp_path) == {"x": "HALO\nDUNIA"}


class TestErrorRates:
    def test_cer_examples(self):
        assert cer("halo dunia", "halo dunia") == 0.0
        assert cer("halo dunia", "helo dunia") == pytest.approx(0.1)
        assert cer("ab", "") == 1.0

    def test_wer_examples(self):
        assert wer("aku pergi ke pasar", "aku pergi ke pasar") == 0.0
        assert wer("aku pergi ke pasar", "aku pergi pasar") == 0.25
        assert wer("a b", "c d e") == 1.5

    def test_empty_reference(self):
        with pytest.raises(ValueError, match="empty reference"):
            cer("", "x")
        with pytest.raises(ValueError, match="empty reference"):
            wer("  ", "x")

    def test_micro_vs_macro(self):
        pairs = [("ab", "ab"), ("abcdefgh", "")]
        assert corpus_error_rates(pairs)["cer"] == pytest.approx(8 / 10)
        assert corpus_error_rates(pairs, macro=True)["cer"] == pytest.approx(0.5)

    def test_casefold(self):
        assert corpus_error_rates([("Halo", "HALO")])["cer"] == 0.75
        assert corpus_error_rates([("Halo", "HALO")], casefold=True)["cer"] == 0.0

    @given(st.text(alphabet="abc", max_size=7), st.text(alphabet="abc", max_size=7))
    def test_distance_matches_recursion(self, a, b):
        assert edit_distance(a, b) == recursive_edit_distance(a, b)

    @given(st.text(max_size=20), st.text(max_size=20), st.text(max_size=20))
    def test_metric_axioms(self, a, b, c):
        d = edit_distance
        assert d(a, b) == d(b, a)
        assert (d(a, b) == 0) == (a == b)
        assert d(a, c) <= d(a, b) + d(b, c)
        assert abs(len(a) - len(b)) <= d(a, b) <= max(len(a), len(b))

    @given(st.lists(st.sampled_from(["x", "y", "z"]), max_size=12), st.lists(st.sampled_from(["x", "y", "z"]), max_size=12))
    def test_token_sequences(self, a, b):
        assert edit_distance(a, b) == memo_edit_distance(a, b)


@given(st.text(min_size=1, max_size=25), st.text(max_size=25))
def test_cer_times_length_is_distance(ref, hyp):
    value = cer(ref, hyp) * len(ref)
    assert abs(value - round(value)) < 1e-9
    assert round(value) == edit_distance(ref, hyp)


@given(st.lists(st.tuples(st.text(min_size=1, max_size=10), st.text(max_size=10)), min_size=1, max_size=5))
def test_identity_hypotheses_score_zero(pairs):
    pairs = [(r, r) for r, _ in pairs if r.split()]
    if pairs:
        assert corpus_error_rates(pairs) == {"cer": 0.0, "wer": 0.0}


@given(st.integers(1, 6), st.integers(1, 6))
def test_preprocess_idempotent_on_gray(h, w):
    gray = preprocess_crop(np.random.default_rng(h * 7 + w).integers(0, 256, (h, w, 3), dtype=np.uint8))
    assert np.array_equal(preprocess_crop(gray), gray)
