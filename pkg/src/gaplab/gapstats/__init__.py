"""Translationese diagnostics: style LM, content TF-IDF, entity accuracy."""

from .entities import (EntityAccuracy, entity_counts, entity_frequency_table,
                       entity_rate, entity_translation_accuracy)
from .ngram_lm import KneserNeyLM
from .style import StyleGapResult, bt_style_corpus, style_gap
from .tfidf import (ContentSimilarity, content_grid, content_similarity,
                    pooled_stoplist)

__all__ = [
    "EntityAccuracy", "entity_counts", "entity_frequency_table", "entity_rate",
    "entity_translation_accuracy", "KneserNeyLM", "StyleGapResult",
    "bt_style_corpus", "style_gap", "ContentSimilarity", "content_grid",
    "content_similarity", "pooled_stoplist",
]
