"""Translation quality metrics: BLEU, origin splits, significance, fluency."""

from .bleu import (MAX_N, BleuScore, bleu_from_stats, corpus_bleu,
                   ngram_counts, sentence_stats)
from .bootstrap import BootstrapResult, paired_bootstrap
from .fluency import fluency_ppl
from .split import SplitScores, split_eval

__all__ = [
    "MAX_N", "BleuScore", "bleu_from_stats", "corpus_bleu", "ngram_counts",
    "sentence_stats", "BootstrapResult", "paired_bootstrap", "fluency_ppl",
    "SplitScores", "split_eval",
]
