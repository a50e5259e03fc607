"""Corpus-level fluency under an external n-gram language model."""

import math


def fluency_ppl(lm, sentences) -> float:
    """Perplexity of a sentence collection under lm.

    The model only needs a corpus_logprob(sentences) -> (total_logp, n_events)
    method; the n-gram models in gapstats provide it.
    """
    if not sentences:
        raise ValueError("cannot score an empty corpus")
    total, n = lm.corpus_logprob(sentences)
    return math.exp(-total / n)
