"""Pipeline configuration: TOML loading, validation, defaults and hashing."""

from __future__ import annotations

import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..ocr.recognize import OcrConfig
from ..typeset.layout import FitConstraints


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DetectorSettings:
    model: str | None = None
    detections: str | None = None  # JSON fixture replayed by the stub backend
    conf_tau: float = 0.25
    nms_tau: float = 0.45
    pad: float = 4.0
    row_tolerance: float = 0.5


@dataclass(frozen=True)
class OcrSettings:
    lang: str = "ind"
    oem: int = 3
    psm: int = 6
    fixture: str | None = None  # crop id -> text table replayed by the stub backend

    def engine_config(self) -> OcrConfig:
        return OcrConfig(self.lang, self.oem, self.psm)


@dataclass(frozen=True)
class MtSettings:
    model: str | None = None
    url: str | None = None
    dict: str | None = None


@dataclass(frozen=True)
class TypesetSettings:
    font: str | None = None
    margin: float = 4.0
    min_size: float = 10
    max_size: float = 48
    size_step: float = 1
    light_threshold: float = 230

    def constraints(self) -> FitConstraints:
        return FitConstraints(self.margin, self.min_size, self.max_size, self.size_step)


@dataclass(frozen=True)
class RunSettings:
    out: str = "out"
    workers: int = 1


@dataclass(frozen=True)
class PipelineConfig:
    detector: DetectorSettings = field(default_factory=DetectorSettings)
    ocr: OcrSettings = field(default_factory=OcrSettings)
    mt: MtSettings = field(default_factory=MtSettings)
    typeset: TypesetSettings = field(default_factory=TypesetSettings)
    run: RunSettings = field(default_factory=RunSettings)

    def validate(self) -> "PipelineConfig":
        d, o, t, r = self.detector, self.ocr, self.typeset, self.run
        _in_range("conf_tau", d.conf_tau, 0, 1)
        _in_range("nms_tau", d.nms_tau, 0, 1)
        _in_range("oem", o.oem, 0, 3)
        _in_range("psm", o.psm, 0, 13)
        _in_range("light_threshold", t.light_threshold, 0, 255)
        if d.pad < 0:
            raise ConfigError(f"pad must be >= 0, got {d.pad}")
        if d.row_tolerance < 0:
            raise ConfigError(f"row_tolerance must be >= 0, got {d.row_tolerance}")
        if r.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {r.workers}")
        if sum(v is not None for v in (self.mt.model, self.mt.url, self.mt.dict)) > 1:
            raise ConfigError("set only one of mt.model, mt.url, mt.dict")
        try:
            t.constraints()
            o.engine_config()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return self

    def processing_dict(self) -> dict:
        """Every setting that can change a panel's output (not where or how fast)."""
        d = asdict(self)
        del d["run"]
        return d

    def hash(self) -> str:
        blob = json.dumps(self.processing_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def _in_range(name: str, value: float, lo: float, hi: float) -> None:
    if not lo <= value <= hi:
        raise ConfigError(f"{name} must be in [{lo},{hi}]")


SECTIONS = {
    "detector": DetectorSettings,
    "ocr": OcrSettings,
    "mt": MtSettings,
    "typeset": TypesetSettings,
    "run": RunSettings,
}
_PATH_KEYS = {("detector", "model"), ("detector", "detections"), ("ocr", "fixture"),
              ("mt", "model"), ("mt", "dict"), ("typeset", "font"), ("run", "out")}


def _coerce(section: str, key: str, value: Any, cls) -> Any:
    ftype = {f.name: f.type for f in fields(cls)}[key]
    if value is None:
        return None
    if ftype == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{section}.{key} must be a number, got {value!r}")
        return float(value)
    if ftype == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{section}.{key} must be an integer, got {value!r}")
        return value
    if not isinstance(value, str):
        raise ConfigError(f"{section}.{key} must be a string, got {value!r}")
    return value


def apply(cfg: PipelineConfig, data: Mapping[str, Any], base_dir: str | Path | None = None) -> PipelineConfig:
    """Overlay nested ``{section: {key: value}}`` data onto ``cfg``.

    Relative paths are resolved against ``base_dir`` when given. The result
    is not validated.
    """
    for section, values in data.items():
        if section not in SECTIONS:
            raise ConfigError(f"unknown config section [{section}]")
        if not isinstance(values, Mapping):
            raise ConfigError(f"[{section}] must be a table")
        cls = SECTIONS[section]
        known = {f.name for f in fields(cls)}
        updates = {}
        for key, value in values.items():
            if key not in known:
                raise ConfigError(f"unknown key {section}.{key}")
            value = _coerce(section, key, value, cls)
            if base_dir is not None and (section, key) in _PATH_KEYS and value is not None:
                value = os.path.normpath(os.path.join(base_dir, value))
            updates[key] = value
        cfg = replace(cfg, **{section: replace(getattr(cfg, section), **updates)})
    return cfg


def load_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None) -> PipelineConfig:
    """Load a TOML config, then apply ``section.key`` overrides from the command line.

    Missing keys keep their defaults. ``None`` overrides are skipped so unset
    flags do not clobber file values. Paths in the file are relative to the
    file; override paths are relative to the working directory.
    """
    cfg = PipelineConfig()
    if path is not None:
        path = Path(path)
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        cfg = apply(cfg, data, path.parent)
    nested: dict[str, dict[str, Any]] = {}
    for dotted, value in (overrides or {}).items():
        if value is not None:
            section, _, key = dotted.partition(".")
            nested.setdefault(section, {})[key] = value
    return apply(cfg, nested).validate()
