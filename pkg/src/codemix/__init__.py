"""Toolkit for generating synthetic code-mixed parallel corpora.

The pipeline: ingest parallel bitext, build a shuffled mixed-language
n-gram corpus, train cross-lingually aligned n-gram embeddings on it,
then produce code-mixed sentences by substituting source n-grams with
their nearest target-language n-grams. Side tools cover romanization,
social-media cleanup, corpus dedup/split, and evaluation metrics
(BLEU, CMI, switch-point fraction).
"""

__version__ = "0.1.0"

from .corpus import BitextRecord, CorpusSplit, LanguageTag
from .ngram_shuffle import NGramUnit, ShuffledSentence, cumulative_ngrams, ngrams
from .embedding import EmbeddingHyperparams, EmbeddingTable
from .generator import GeneratedPair, GeneratorConfig, SubstitutionPlan

__all__ = [
    "BitextRecord",
    "CorpusSplit",
    "LanguageTag",
    "NGramUnit",
    "ShuffledSentence",
    "ngrams",
    "cumulative_ngrams",
    "EmbeddingHyperparams",
    "EmbeddingTable",
    "GeneratorConfig",
    "SubstitutionPlan",
    "GeneratedPair",
]
