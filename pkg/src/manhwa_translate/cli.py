"""Command-line entry point.

Machine-readable results (JSON) go to stdout, diagnostics to stderr.
Exit status: 0 success, 1 run-level error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, replace
from pathlib import Path
from typing import Sequence

from . import report
from .detection.adapters import YoloDetector, detection_to_dict, load_detections
from .detection.annotations import image_sizes, load_ground_truth
from .detection.evaluate import detection_report, precision_recall_curve
from .detection.postprocess import filter_confidence, nms
from .geometry import Box, reading_order
from .ocr.adapters import StubOcr, TesseractOcr, read_text_table
from .ocr.metrics import cer, corpus_error_rates, wer
from .ocr.recognize import OcrConfig, preprocess_crop, recognize
from .pipeline.config import ConfigError, MtSettings, load_config
from .pipeline.record import SidecarError
from .pipeline.runner import load_image, run_batch, save_png
from .translation.adapters import DictionaryTranslator, HttpTranslator, MarianTranslator, translate
from .translation.bleu import corpus_bleu
from .translation.corpus import prepare_corpus, write_splits
from .translation.meteor import corpus_meteor, meteor
from .typeset.fonts import LinearMetrics, TrueTypeFont
from .typeset.layout import FitConstraints, fit_text
from .typeset.render import clear_region, estimate_bubble_mask, render_plan

log = logging.getLogger("manhwa_translate")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """Prints the full help of the failing (sub)command on usage errors."""

    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(2, f"\n{self.prog}: error: {message}\n")


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


def _table(rows: list[tuple[str, str]]) -> None:
    width = max(len(k) for k, _ in rows)
    line = "+" + "-" * (width + 2) + "+" + "-" * 10 + "+"
    print(line)
    print(f"| {'Evaluation Metrics':<{width}} | {'Score':>8} |")
    print(line)
    for k, v in rows:
        print(f"| {k:<{width}} | {v:>8} |")
    print(line)


def _pct(x: float) -> str:
    return f"{100 * x:.1f}%"


# ---------------------------------------------------------------- shared flags


def _add_detector_flags(p, thresholds=True):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--model", help="detector checkpoint (YOLO .pt)")
    src.add_argument("--detections", help="JSON fixture of detections per image id (stub backend)")
    if thresholds:
        p.add_argument("--conf", type=float, help="confidence threshold (default 0.25)")
        p.add_argument("--iou-nms", type=float, help="NMS IoU threshold (default 0.45)")


def _add_ocr_flags(p):
    p.add_argument("--lang", help="OCR language code (default ind)")
    p.add_argument("--oem", type=int, help="OCR engine mode (default 3)")
    p.add_argument("--psm", type=int, help="page segmentation mode (default 6)")
    p.add_argument("--ocr-fixture", help="crop id -> text table replayed instead of the OCR engine")


def _add_mt_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--mt-model", help="local MarianMT checkpoint directory")
    g.add_argument("--mt-url", help="HTTP translation endpoint")
    g.add_argument("--mt-dict", help="source<TAB>target dictionary (stub backend)")


def _add_typeset_flags(p):
    p.add_argument("--font", help="TrueType font for rendering; omit for a plan-only dry run")
    p.add_argument("--margin", type=float, help="inner margin in px (default 4)")
    p.add_argument("--min-size", type=float, help="smallest font size (default 10)")
    p.add_argument("--max-size", type=float, help="largest font size (default 48)")


def _translator(args):
    if args.mt_dict:
        return DictionaryTranslator(args.mt_dict)
    if args.mt_url:
        return HttpTranslator(args.mt_url)
    if args.mt_model:
        return MarianTranslator(args.mt_model)
    raise UsageError("one of --mt-model, --mt-url, --mt-dict is required")


# ---------------------------------------------------------------- verbs


def cmd_detect(args) -> int:
    cfg = load_config(args.config, {"detector.conf_tau": args.conf, "detector.nms_tau": args.iou_nms})
    if args.detections:
        table = load_detections(args.detections)
        raw = {Path(p).stem: table.get(Path(p).stem, []) for p in args.images}
    elif args.model:
        detector = YoloDetector(args.model)
        raw = {Path(p).stem: detector.detect(load_image(p), Path(p).stem) for p in args.images}
    else:
        raise UsageError("one of --model or --detections is required")
    out = {}
    for image_id, dets in raw.items():
        kept = nms(filter_confidence(dets, cfg.detector.conf_tau), cfg.detector.nms_tau)
        order = reading_order([d.box for d in kept], cfg.detector.row_tolerance)
        out[image_id] = [detection_to_dict(kept[i]) for i in order]
    _emit(out)
    return 0


def cmd_ocr(args) -> int:
    cfg = OcrConfig(args.lang or "ind", 3 if args.oem is None else args.oem, 6 if args.psm is None else args.psm)
    adapter = StubOcr(args.ocr_fixture) if args.ocr_fixture else TesseractOcr()
    results = []
    for k, path in enumerate(args.crops):
        crop_id = Path(path).stem
        r = recognize(preprocess_crop(load_image(path)), cfg, adapter, k, crop_id)
        results.append({"crop": crop_id, "raw": r.raw_text, "text": r.text, "conf": r.mean_confidence})
    _emit(results)
    return 0


def cmd_translate(args) -> int:
    texts = list(args.text)
    if args.input:
        texts += Path(args.input).read_text(encoding="utf-8").split("\n")
        if texts and texts[-1] == "":
            texts.pop()
    if not texts:
        raise UsageError("nothing to translate: pass TEXT arguments or --input FILE")
    adapter = _translator(args)
    units = [translate(t, adapter, k) for k, t in enumerate(texts)]
    _emit([{"index": u.bubble_index, "src": u.source_text, "tgt": u.target_text, "error": u.error} for u in units])
    return 1 if any(u.failed for u in units) else 0


def cmd_typeset(args) -> int:
    defaults = FitConstraints()
    constraints = FitConstraints(
        defaults.margin if args.margin is None else args.margin,
        defaults.min_size if args.min_size is None else args.min_size,
        defaults.max_size if args.max_size is None else args.max_size,
    )
    box = Box(*args.box)
    font = TrueTypeFont(args.font) if args.font else None
    plan = fit_text(args.text, box, font or LinearMetrics(), constraints)
    payload = asdict(plan)
    if args.image:
        if not (font and args.out):
            raise UsageError("rendering into --image needs --font and --out")
        image = load_image(args.image)
        c0, r0, c1, r1 = box.pixel_bounds()
        mask = estimate_bubble_mask(image[r0:r1, c0:c1])
        save_png(render_plan(clear_region(image, box, mask), plan, font), args.out)
        payload["output"] = str(args.out)
    _emit(payload)
    return 0


def cmd_run(args) -> int:
    overrides = {
        "detector.conf_tau": args.conf,
        "detector.nms_tau": args.iou_nms,
        "detector.pad": args.pad,
        "ocr.lang": args.lang,
        "ocr.oem": args.oem,
        "ocr.psm": args.psm,
        "ocr.fixture": args.ocr_fixture,
        "typeset.font": args.font,
        "typeset.margin": args.margin,
        "typeset.min_size": args.min_size,
        "typeset.max_size": args.max_size,
        "run.out": args.out,
        "run.workers": args.workers,
    }
    cfg = load_config(args.config, overrides)
    # a backend chosen on the command line replaces the config file's choice
    if args.model or args.detections:
        cfg = replace(cfg, detector=replace(cfg.detector, model=args.model, detections=args.detections))
    if args.mt_model or args.mt_url or args.mt_dict:
        cfg = replace(cfg, mt=MtSettings(args.mt_model, args.mt_url, args.mt_dict))
    cfg.validate()
    summary = run_batch(args.input_dir, cfg)
    _emit({**summary.as_dict(), "out": cfg.run.out, "config_hash": cfg.hash()})
    return 0


def cmd_eval_detect(args) -> int:
    sizes = image_sizes(args.images)
    if not sizes:
        raise ValueError("no images")
    gts = load_ground_truth(args.gt, sizes)
    if args.detections:
        preds = load_detections(args.detections)
    elif args.model:
        detector = YoloDetector(args.model)
        preds = {}
        for p in sorted(Path(args.images).iterdir()):
            if p.stem in sizes:
                preds[p.stem] = detector.detect(load_image(p), p.stem)
    else:
        raise UsageError("one of --model or --detections is required")
    conf = 0.25 if args.conf is None else args.conf
    nms_tau = 0.45 if args.iou_nms is None else args.iou_nms
    rep = detection_report(preds, gts, conf, nms_tau, skip_vacuous=args.skip_vacuous)
    if args.plot:
        suppressed = {k: nms(v, nms_tau) for k, v in preds.items()}
        precision, recall = precision_recall_curve(suppressed, gts, 0.5)
        report.plot_precision_recall(precision, recall, args.plot, rep.map_50)
    if args.pretty:
        _table([
            ("Mean Precision", _pct(rep.mean_precision)),
            ("Mean Recall", _pct(rep.mean_recall)),
            ("mAP@0.5", _pct(rep.map_50)),
            ("mAP@0.5:0.95", _pct(rep.map_50_95)),
            ("F1 Score", _pct(rep.f1)),
        ])
    else:
        _emit(rep.as_dict())
    return 0


def _paired(ref_path, hyp_path) -> list[tuple[str, str]]:
    refs, hyps = read_text_table(ref_path), read_text_table(hyp_path)
    missing = [k for k in refs if k not in hyps]
    if missing:
        log.warning("%d reference segments have no hypothesis; scored against empty text", len(missing))
    extra = [k for k in hyps if k not in refs]
    if extra:
        log.warning("ignoring %d hypothesis segments without a reference", len(extra))
    return [(refs[k], hyps.get(k, "")) for k in refs]


def cmd_eval_ocr(args) -> int:
    pairs = _paired(args.ref, args.hyp)
    rates = corpus_error_rates(pairs, macro=args.macro, casefold=args.casefold)
    if args.plot:
        folded = [(r.casefold(), h.casefold()) for r, h in pairs] if args.casefold else pairs
        per_line = {
            "CER": [cer(r, h) for r, h in folded if r],
            "WER": [wer(r, h) for r, h in folded if r.split()],
        }
        report.plot_rate_histogram(per_line, args.plot, "per-segment error rate", "OCR error rates")
    if args.pretty:
        _table([
            ("Average Character Error Rate", _pct(rates["cer"])),
            ("Average Word Error Rate", _pct(rates["wer"])),
        ])
    else:
        _emit(rates)
    return 0


def _read_segments(path) -> dict[str, str]:
    path = Path(path)
    if path.suffix in (".tsv", ".json") or path.is_dir():
        return read_text_table(path)
    lines = path.read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return {str(k): line for k, line in enumerate(lines)}


def cmd_eval_mt(args) -> int:
    refs, hyps = _read_segments(args.ref), _read_segments(args.hyp)
    if set(refs) != set(hyps):
        raise ValueError(f"hypothesis and reference segments differ ({len(hyps)} vs {len(refs)})")
    pairs = [(hyps[k], refs[k]) for k in refs]
    bleu = corpus_bleu(pairs)
    met = corpus_meteor(pairs)
    if args.plot:
        report.plot_rate_histogram(
            {"METEOR": [meteor(h, r) for h, r in pairs]}, args.plot, "segment score", "Translation quality"
        )
    if args.pretty:
        _table([("BLEU", f"{bleu:.2f}"), ("Meteor", f"{met:.2f}")])
    else:
        _emit({"bleu": bleu, "meteor": met, "segments": len(pairs)})
    return 0


def cmd_corpus_prep(args) -> int:
    splits = prepare_corpus(args.inputs, args.seed, tuple(args.ratios))
    written = write_splits(splits, args.out)
    _emit({
        "train": len(splits[0]),
        "valid": len(splits[1]),
        "test": len(splits[2]),
        "files": [str(p) for p in written],
    })
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = Parser(prog="manhwa-translate", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging on stderr")
    sub = parser.add_subparsers(dest="verb", metavar="VERB", parser_class=Parser)
    sub.required = True
    parser.verb_parsers = sub.choices

    p = sub.add_parser("detect", help="detect speech bubbles; prints boxes in reading order")
    p.add_argument("images", nargs="+")
    p.add_argument("--config")
    _add_detector_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("ocr", help="grayscale + OCR bubble crops")
    p.add_argument("crops", nargs="+")
    _add_ocr_flags(p)
    p.set_defaults(func=cmd_ocr)

    p = sub.add_parser("translate", help="translate Indonesian text to English")
    p.add_argument("text", nargs="*")
    p.add_argument("--input", help="file with one segment per line")
    _add_mt_flags(p)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("typeset", help="fit text into a box; renders when --font/--image/--out are given")
    p.add_argument("--text", required=True)
    p.add_argument("--box", type=float, nargs=4, required=True, metavar=("X1", "Y1", "X2", "Y2"))
    p.add_argument("--image")
    p.add_argument("--out")
    _add_typeset_flags(p)
    p.set_defaults(func=cmd_typeset)

    p = sub.add_parser("run", help="translate every panel in a directory")
    p.add_argument("input_dir")
    p.add_argument("--config", help="TOML config file")
    _add_detector_flags(p)
    p.add_argument("--pad", type=float, help="crop padding in px (default 4)")
    _add_ocr_flags(p)
    _add_mt_flags(p)
    _add_typeset_flags(p)
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval-detect", help="precision, recall, F1, mAP@0.5 and mAP@[.5:.95]")
    p.add_argument("--gt", required=True, help="directory of 'class cx cy w h' label files")
    p.add_argument("--images", required=True, help="directory of the evaluated images")
    _add_detector_flags(p)
    p.add_argument("--skip-vacuous", action="store_true", help="drop images with no boxes and no detections")
    p.add_argument("--plot", help="write a precision-recall figure here")
    p.add_argument("--pretty", action="store_true", help="print a table instead of JSON")
    p.set_defaults(func=cmd_eval_detect)

    p = sub.add_parser("eval-ocr", help="character and word error rates")
    p.add_argument("--ref", required=True, help="id<TAB>text file or directory of <id>.txt")
    p.add_argument("--hyp", required=True)
    p.add_argument("--casefold", action="store_true")
    p.add_argument("--macro", action="store_true", help="average per-line rates instead of pooling")
    p.add_argument("--plot", help="write a per-segment error histogram here")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_eval_ocr)

    p = sub.add_parser("eval-mt", help="corpus BLEU-4 and METEOR")
    p.add_argument("--ref", required=True, help="line-aligned text, or id<TAB>text .tsv")
    p.add_argument("--hyp", required=True)
    p.add_argument("--plot", help="write a per-segment METEOR histogram here")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_eval_mt)

    p = sub.add_parser("corpus-prep", help="merge, dedupe and split parallel corpora")
    p.add_argument("--inputs", nargs="+", required=True, help="X.id X.en pairs and/or .tsv files")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ratios", type=float, nargs=3, default=[0.8, 0.1, 0.1], metavar=("TRAIN", "VALID", "TEST"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_corpus_prep)
    return parser


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.verb_parsers[args.verb].print_help(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, SidecarError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())
