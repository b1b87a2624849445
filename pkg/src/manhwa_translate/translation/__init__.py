"""Machine translation stage, bilingual corpus splits, BLEU and METEOR."""

from .adapters import (
    DictionaryTranslator,
    HttpTranslator,
    MarianTranslator,
    TranslationUnit,
    TranslatorAdapter,
    translate,
)
from .bleu import corpus_bleu, corpus_bleu_tokens, ngram_clipped_precision
from .corpus import CorpusPair, prepare_corpus, split_pairs, write_splits
from .meteor import corpus_meteor, meteor, meteor_tokens
from .tokenize import stem, tokenize

__all__ = [
    "CorpusPair",
    "DictionaryTranslator",
    "HttpTranslator",
    "MarianTranslator",
    "TranslationUnit",
    "TranslatorAdapter",
    "corpus_bleu",
    "corpus_bleu_tokens",
    "corpus_meteor",
    "meteor",
    "meteor_tokens",
    "ngram_clipped_precision",
    "prepare_corpus",
    "split_pairs",
    "stem",
    "tokenize",
    "translate",
    "write_splits",
]
