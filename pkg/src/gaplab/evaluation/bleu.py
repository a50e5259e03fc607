"""Corpus BLEU, matching the classic multi-bleu script.

Unsmoothed modified n-gram precisions up to 4, geometric mean, and the
standard brevity penalty exp(1 - ref/hyp) when the hypothesis side is
shorter. Any zero precision zeroes the whole score. Single reference per
hypothesis. Sentences may be Sentence objects or plain token sequences; token
identity is whatever __eq__/__hash__ says.
"""

import math
from collections import Counter
from dataclasses import dataclass
from typing import Tuple

MAX_N = 4


def _toks(s):
    return tuple(getattr(s, "token_ids", s))


def ngram_counts(toks, n: int) -> Counter:
    return Counter(tuple(toks[i : i + n]) for i in range(len(toks) - n + 1))


def sentence_stats(hyp, ref, max_n: int = MAX_N):
    """(matches[n], totals[n], hyp_len, ref_len) for one sentence pair."""
    h, r = _toks(hyp), _toks(ref)
    matches, totals = [], []
    for n in range(1, max_n + 1):
        hc = ngram_counts(h, n)
        rc = ngram_counts(r, n)
        matches.append(sum(min(c, rc[g]) for g, c in hc.items()))
        totals.append(max(0, len(h) - n + 1))
    return matches, totals, len(h), len(r)


@dataclass(frozen=True)
class BleuScore:
    bleu: float                      # percentage, 0..100
    precisions: Tuple[float, ...]
    brevity_penalty: float
    hyp_len: int
    ref_len: int


def bleu_from_stats(matches, totals, hyp_len, ref_len, max_n: int = MAX_N) -> BleuScore:
    precisions = tuple(
        (matches[n] / totals[n]) if totals[n] > 0 else 0.0 for n in range(max_n)
    )
    if hyp_len == 0 or ref_len == 0:
        return BleuScore(0.0, precisions, 0.0, hyp_len, ref_len)
    bp = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    if any(p == 0.0 for p in precisions):
        return BleuScore(0.0, precisions, bp, hyp_len, ref_len)
    log_mean = sum(math.log(p) for p in precisions) / max_n
    return BleuScore(100.0 * bp * math.exp(log_mean), precisions, bp, hyp_len, ref_len)


def corpus_bleu(hyps, refs, max_n: int = MAX_N) -> BleuScore:
    if len(hyps) != len(refs):
        raise ValueError(f"{len(hyps)} hypotheses vs {len(refs)} references")
    if not hyps:
        raise ValueError("empty evaluation set")
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = ref_len = 0
    for h, r in zip(hyps, refs):
        m, t, hl, rl = sentence_stats(h, r, max_n)
        for n in range(max_n):
            matches[n] += m[n]
            totals[n] += t[n]
        hyp_len += hl
        ref_len += rl
    return bleu_from_stats(matches, totals, hyp_len, ref_len, max_n)
