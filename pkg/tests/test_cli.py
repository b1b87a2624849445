import json
import subprocess
import sys

import pytest

from manhwa_translate.cli import dispatch
from manhwa_translate.pipeline import read_sidecar
from synth import PANELS, write_fixture_dir


def run_cli(capsys, *argv):
    code = dispatch([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestUsage:
    def test_unknown_verb(self, capsys):
        code, _, err = run_cli(capsys, "bogus")
        assert code == 2
        assert "corpus-prep" in err and "eval-detect" in err

    def test_no_verb(self, capsys):
        assert run_cli(capsys)[0] == 2

    def test_verb_usage_error_prints_verb_help(self, capsys):
        code, _, err = run_cli(capsys, "translate", "HALO")
        assert code == 2
        assert "--mt-dict" in err and "one of --mt-model" in err

    @pytest.mark.parametrize(
        "verb, flags",
        [
            ("run", ["--conf", "--iou-nms", "--pad", "--lang", "--oem", "--psm", "--mt-model", "--font", "--workers", "--config"]),
            ("eval-detect", ["--gt", "--images", "--skip-vacuous", "--plot"]),
            ("eval-ocr", ["--ref", "--hyp", "--casefold", "--macro"]),
            ("corpus-prep", ["--inputs", "--seed", "--ratios", "--out"]),
        ],
    )
    def test_help_lists_flags(self, capsys, verb, flags):
        code, out, _ = run_cli(capsys, verb, "--help")
        assert code == 0
        for flag in flags:
            assert flag in out

    def test_console_script(self):
        proc = subprocess.run(
            [sys.executable, "-c", "from manhwa_translate.cli import main; main()", "--help"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0 and "eval-mt" in proc.stdout


class TestRun:
    def test_happy_path_with_config(self, capsys, tmp_path, font_path):
        paths = write_fixture_dir(tmp_path, font_path)
        cfg = tmp_path / "cfg.toml"
        cfg.write_text(
            "[detector]\ndetections = 'detections.json'\n"
            "[ocr]\nfixture = 'ocr.json'\n"
            "[mt]\ndict = 'dict.tsv'\n"
            f"[typeset]\nfont = '{font_path}'\n"
            f"[run]\nout = '{tmp_path / 'out'}'\n"
        )
        code, out, _ = run_cli(capsys, "run", paths["panels"], "--config", cfg)
        assert code == 0
        summary = json.loads(out)
        assert (summary["panels"], summary["ok"], summary["failed"]) == (3, 3, 0)
        for name, bubbles in PANELS.items():
            assert (tmp_path / "out" / f"{name}.translated.png").is_file()
            assert len(read_sidecar(tmp_path / "out" / f"{name}.sidecar.json").bubbles) == len(bubbles)

    def test_flag_overrides_config(self, capsys, tmp_path, font_path):
        paths = write_fixture_dir(tmp_path, font_path)
        cfg = tmp_path / "cfg.toml"
        cfg.write_text("[detector]\ndetections = 'detections.json'\nconf_tau = 0.5\n[mt]\nurl = 'http://127.0.0.1:9'\n")
        code, _, _ = run_cli(
            capsys, "run", paths["panels"], "--config", cfg, "--conf", "0.95",
            "--ocr-fixture", paths["ocr"], "--mt-dict", paths["dict"], "--out", tmp_path / "o",
        )
        assert code == 0
        # every fixture detection is below 0.95, so nothing survives
        assert read_sidecar(tmp_path / "o" / "p01.sidecar.json").bubbles == []

    def test_bad_config_is_run_error(self, capsys, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text("[detector]\nconf_tau = 1.5\n")
        code, _, err = run_cli(capsys, "run", tmp_path, "--config", cfg)
        assert code == 1
        assert "conf_tau must be in [0,1]" in err

    def test_empty_input_dir(self, capsys, tmp_path):
        (tmp_path / "in").mkdir()
        code, _, err = run_cli(capsys, "run", tmp_path / "in", "--detections", "x.json", "--mt-dict", "d.tsv",
                               "--out", tmp_path / "o")
        assert code == 1 and "no input images" in err


class TestEval:
    def test_eval_ocr(self, capsys, tmp_path):
        (tmp_path / "refs.tsv").write_text("a\thalo dunia\nb\taku pergi ke pasar\n", encoding="utf-8")
        (tmp_path / "hyps.tsv").write_text("a\thelo dunia\nb\taku pergi pasar\n", encoding="utf-8")
        code, out, _ = run_cli(capsys, "eval-ocr", "--ref", tmp_path / "refs.tsv", "--hyp", tmp_path / "hyps.tsv", "--macro")
        assert code == 0
        rates = json.loads(out)
        assert rates["cer"] == pytest.approx((0.1 + 3 / 18) / 2)
        assert rates["wer"] == pytest.approx((0.5 + 0.25) / 2)

    def test_eval_ocr_anchor(self, capsys, tmp_path):
        (tmp_path / "refs.tsv").write_text("s1\tia di ke a\n", encoding="utf-8")
        (tmp_path / "hyps.tsv").write_text("s1\tia du ke a\n", encoding="utf-8")
        plot = tmp_path / "fig" / "ocr.png"
        code, out, _ = run_cli(capsys, "eval-ocr", "--ref", tmp_path / "refs.tsv", "--hyp", tmp_path / "hyps.tsv",
                               "--plot", plot)
        assert code == 0
        assert json.loads(out) == {"cer": 0.1, "wer": 0.25}
        assert plot.stat().st_size > 0

    def test_eval_ocr_pretty(self, capsys, tmp_path):
        (tmp_path / "r.tsv").write_text("a\tabcd\n", encoding="utf-8")
        (tmp_path / "h.tsv").write_text("a\tabce\n", encoding="utf-8")
        code, out, _ = run_cli(capsys, "eval-ocr", "--ref", tmp_path / "r.tsv", "--hyp", tmp_path / "h.tsv", "--pretty")
        assert code == 0 and "Average Character Error Rate" in out and "25.0%" in out

    def test_eval_mt(self, capsys, tmp_path):
        (tmp_path / "ref.txt").write_text("the cat sat\nthe cat sat\n", encoding="utf-8")
        (tmp_path / "hyp.txt").write_text("the cat sat\ncat the sat\n", encoding="utf-8")
        code, out, _ = run_cli(capsys, "eval-mt", "--ref", tmp_path / "ref.txt", "--hyp", tmp_path / "hyp.txt",
                               "--plot", tmp_path / "mt.png")
        assert code == 0
        scores = json.loads(out)
        assert scores["segments"] == 2
        assert scores["meteor"] == pytest.approx((0.5 + 1 - 0.5 / 27) / 2)
        assert (tmp_path / "mt.png").is_file()

    def test_eval_mt_mismatch(self, capsys, tmp_path):
        (tmp_path / "ref.txt").write_text("a\nb\n", encoding="utf-8")
        (tmp_path / "hyp.txt").write_text("a\n", encoding="utf-8")
        code, _, err = run_cli(capsys, "eval-mt", "--ref", tmp_path / "ref.txt", "--hyp", tmp_path / "hyp.txt")
        assert code == 1 and "differ" in err

    def test_eval_detect(self, capsys, tmp_path):
        from PIL import Image

        images, labels = tmp_path / "images", tmp_path / "labels"
        images.mkdir()
        labels.mkdir()
        for name in ("a", "b"):
            Image.new("RGB", (100, 100)).save(images / f"{name}.png")
        (labels / "a.txt").write_text("0 0.5 0.5 0.2 0.2\n")
        (labels / "b.txt").write_text("0 0.25 0.25 0.1 0.1\n")
        dets = {
            "a": [{"x1": 40, "y1": 40, "x2": 60, "y2": 60, "conf": 0.9}],
            "b": [{"x1": 70, "y1": 70, "x2": 90, "y2": 90, "conf": 0.8}],
        }
        (tmp_path / "d.json").write_text(json.dumps(dets))
        code, out, _ = run_cli(capsys, "eval-detect", "--gt", labels, "--images", images,
                               "--detections", tmp_path / "d.json", "--plot", tmp_path / "pr.png")
        assert code == 0
        rep = json.loads(out)
        assert rep["mean_precision"] == 0.5 and rep["mean_recall"] == 0.5
        assert rep["images"]["b"] == {"tp": 0, "fp": 1, "fn": 1}
        assert (tmp_path / "pr.png").is_file()


class TestOtherVerbs:
    def test_translate(self, capsys, tmp_path):
        (tmp_path / "d.tsv").write_text("HALO\tHELLO\n", encoding="utf-8")
        code, out, _ = run_cli(capsys, "translate", "HALO", "", "--mt-dict", tmp_path / "d.tsv")
        assert code == 0
        assert [u["tgt"] for u in json.loads(out)] == ["HELLO", ""]

    def test_typeset_plan(self, capsys):
        code, out, _ = run_cli(capsys, "typeset", "--text", "ABCDEFGHIJ", "--box", 0, 0, 100, 50)
        assert code == 0
        plan = json.loads(out)
        assert plan["font_size"] == 15 and plan["lines"] == ["ABCDEFGHIJ"]

    def test_detect_reading_order(self, capsys, tmp_path):
        dets = {"p": [
            {"x1": 0, "y1": 100, "x2": 40, "y2": 140, "conf": 0.9},
            {"x1": 0, "y1": 0, "x2": 40, "y2": 40, "conf": 0.8},
            {"x1": 0, "y1": 0, "x2": 40, "y2": 41, "conf": 0.7},
        ]}
        (tmp_path / "d.json").write_text(json.dumps(dets))
        code, out, _ = run_cli(capsys, "detect", tmp_path / "p.png", "--detections", tmp_path / "d.json")
        assert code == 0
        boxes = json.loads(out)["p"]
        assert [b["y1"] for b in boxes] == [0, 100]  # duplicate suppressed, top first

    def test_ocr_stub(self, capsys, tmp_path):
        from PIL import Image

        Image.new("RGB", (20, 10), "white").save(tmp_path / "c1.png")
        (tmp_path / "o.json").write_text(json.dumps({"c1": "BER-\nLARI"}))
        code, out, _ = run_cli(capsys, "ocr", tmp_path / "c1.png", "--ocr-fixture", tmp_path / "o.json")
        assert code == 0
        assert json.loads(out)[0]["text"] == "BERLARI"

    def test_corpus_prep(self, capsys, tmp_path):
        (tmp_path / "x.tsv").write_text("".join(f"k{i}\ts{i}\n" for i in range(10)), encoding="utf-8")
        code, out, _ = run_cli(capsys, "corpus-prep", "--inputs", tmp_path / "x.tsv", "--seed", 3, "--out", tmp_path / "o")
        assert code == 0
        res = json.loads(out)
        assert (res["train"], res["valid"], res["test"]) == (8, 1, 1)


def _verbs():
    from manhwa_translate.cli import build_parser

    sub = next(a for a in build_parser()._actions if a.choices and isinstance(a.choices, dict))
    return sub.choices


@pytest.mark.parametrize("verb", sorted(_verbs()))
def test_every_flag_appears_in_verb_help(capsys, verb):
    code, out, _ = run_cli(capsys, verb, "--help")
    assert code == 0
    for action in _verbs()[verb]._actions:
        for flag in action.option_strings:
            assert flag in out, flag
