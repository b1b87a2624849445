"""Translator backends and the per-bubble translate step."""

from __future__ import annotations

import json
import logging
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

log = logging.getLogger(__name__)


class TranslatorAdapter(Protocol):
    def translate(self, text: str) -> str:
        ...


@dataclass(frozen=True)
class TranslationUnit:
    bubble_index: int
    source_text: str
    target_text: str
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def translate(text: str, adapter: TranslatorAdapter, bubble_index: int = 0) -> TranslationUnit:
    """Translate one bubble; on backend failure the source text passes through, flagged."""
    if not text:
        return TranslationUnit(bubble_index, text, "")
    try:
        target = adapter.translate(text)
    except Exception as exc:
        log.warning("translation failed for bubble %d: %s", bubble_index, exc)
        return TranslationUnit(bubble_index, text, text, error=f"{type(exc).__name__}: {exc}")
    return TranslationUnit(bubble_index, text, target)


class DictionaryTranslator:
    """Lookup-table translator for fixtures.

    Whole-text entries win; otherwise each whitespace token is looked up and
    unknown tokens pass through unchanged.
    """

    def __init__(self, table: str | Path | dict[str, str]):
        if isinstance(table, dict):
            self.table = dict(table)
        else:
            self.table = {}
            with open(table, encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    line = line.rstrip("\r\n")
                    if not line:
                        continue
                    src, sep, tgt = line.partition("\t")
                    if not sep:
                        raise ValueError(f"{table}:{lineno}: expected 'source<TAB>target'")
                    self.table[src] = tgt

    def translate(self, text: str) -> str:
        if text in self.table:
            return self.table[text]
        return " ".join(self.table.get(tok, tok) for tok in text.split())


class HttpTranslator:
    """POSTs ``{"text": ...}`` to a service and reads ``{"translation": ...}`` back."""

    def __init__(self, url: str, timeout: float = 30.0):
        self.url = url
        self.timeout = timeout

    def translate(self, text: str) -> str:
        body = json.dumps({"text": text}).encode("utf-8")
        req = urllib.request.Request(
            self.url, data=body, headers={"Content-Type": "application/json"}, method="POST"
        )
        with urllib.request.urlopen(req, timeout=self.timeout) as resp:
            payload = json.loads(resp.read().decode("utf-8"))
        if "translation" not in payload:
            raise ValueError(f"response from {self.url} has no 'translation' field")
        return str(payload["translation"])


class MarianTranslator:
    """A local MarianMT checkpoint (e.g. a fine-tuned Helsinki-NLP/opus-mt-id-en)."""

    def __init__(self, model_path: str | Path, max_length: int = 256):
        try:
            from transformers import MarianMTModel, MarianTokenizer
        except ImportError as exc:  # pragma: no cover - optional backend
            raise RuntimeError(
                "the MarianMT backend needs 'transformers' and 'sentencepiece' "
                "(pip install artifact[mt])"
            ) from exc
        self.tokenizer = MarianTokenizer.from_pretrained(str(model_path))
        self.model = MarianMTModel.from_pretrained(str(model_path))
        self.model.eval()
        self.max_length = max_length

    def translate(self, text: str) -> str:  # pragma: no cover - needs a model
        batch = self.tokenizer([text], return_tensors="pt", truncation=True, max_length=self.max_length)
        out = self.model.generate(**batch, max_length=self.max_length)
        return self.tokenizer.decode(out[0], skip_special_tokens=True)
