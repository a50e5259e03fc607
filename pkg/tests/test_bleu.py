"""Corpus BLEU against hand-computed values.

The reference case is worked out from the definition: clipped n-gram
precisions, geometric mean over orders 1..4, brevity penalty
exp(1 - ref_len/hyp_len) when the hypothesis is shorter.
"""

import math

import pytest

from gaplab.evaluation.bleu import BleuScore, corpus_bleu, sentence_stats


class TestHandCase:
    """hyp = a b c d, ref = a b c d e.

    Every hypothesis n-gram occurs in the reference, so the precisions are
    4/4, 3/3, 2/2, 1/1 and the geometric mean is 1. Lengths 4 vs 5 give
    BP = exp(1 - 5/4) = exp(-0.25), hence BLEU = 100 * exp(-0.25) = 77.8801
    to four decimals.
    """

    HYP = [["a", "b", "c", "d"]]
    REF = [["a", "b", "c", "d", "e"]]

    def test_precisions(self):
        s = corpus_bleu(self.HYP, self.REF)
        assert s.precisions == (1.0, 1.0, 1.0, 1.0)

    def test_brevity_penalty(self):
        s = corpus_bleu(self.HYP, self.REF)
        assert abs(s.brevity_penalty - math.exp(-0.25)) < 1e-12
        assert (s.hyp_len, s.ref_len) == (4, 5)

    def test_bleu_to_four_decimals(self):
        s = corpus_bleu(self.HYP, self.REF)
        assert round(s.bleu, 4) == 77.8801
        assert abs(s.bleu - 100.0 * math.exp(-0.25)) < 1e-9


def test_identity_scores_100():
    refs = [["a", "b", "c", "d", "e"], ["f", "g", "h", "i"]]
    s = corpus_bleu(refs, refs)
    assert s.bleu == 100.0
    assert s.brevity_penalty == 1.0


def test_no_fourgram_overlap_scores_zero():
    # unigrams match but no shared 4-gram: unsmoothed BLEU collapses to 0
    hyp = [["a", "x", "b", "y", "c"]]
    ref = [["a", "b", "c", "d", "e"]]
    s = corpus_bleu(hyp, ref)
    assert s.bleu == 0.0
    assert s.precisions[3] == 0.0
    assert s.precisions[0] > 0.0


def test_disjoint_tokens_score_zero():
    s = corpus_bleu([["a", "b", "c", "d"]], [["w", "x", "y", "z"]])
    assert s.bleu == 0.0
    assert s.precisions == (0.0, 0.0, 0.0, 0.0)


def test_clipping_counts_each_ref_ngram_once():
    # "the the the the": ref holds two "the" unigrams, so matches clip at 2
    m, t, hl, rl = sentence_stats(["the"] * 4, ["the", "cat", "the", "mat"])
    assert m[0] == 2 and t[0] == 4
    assert hl == 4 and rl == 4


def test_long_hypothesis_gets_no_length_bonus():
    hyp = [["a", "b", "c", "d", "e", "f"]]
    ref = [["a", "b", "c", "d"]]
    s = corpus_bleu(hyp, ref)
    assert s.brevity_penalty == 1.0


def test_corpus_pooling_not_sentence_average():
    # statistics pool over the corpus before the ratio is taken, so a
    # sentence with zero 4-grams of its own does not zero the corpus score
    hyps = [["a", "b", "c", "d"], ["q", "r"]]
    refs = [["a", "b", "c", "d"], ["r", "q"]]
    s = corpus_bleu(hyps, refs)
    assert s.bleu > 0.0


def test_monotone_on_nested_prefixes():
    ref = [["a", "b", "c", "d", "e", "f"]]
    scores = [corpus_bleu([ref[0][:k]], ref).bleu for k in (4, 5, 6)]
    assert scores[0] < scores[1] < scores[2] == 100.0


def test_bleu_stays_in_range():
    cases = [
        ([["a"]], [["a"]]),
        ([["a", "b", "c", "d", "q"]], [["a", "b", "c", "d"]]),
        ([["z", "z", "z", "z"]], [["a", "b", "c", "d"]]),
    ]
    for hyp, ref in cases:
        s = corpus_bleu(hyp, ref)
        assert 0.0 <= s.bleu <= 100.0


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        corpus_bleu([["a"]], [["a"], ["b"]])
    with pytest.raises(ValueError):
        corpus_bleu([], [])


def test_empty_hypothesis_scores_zero_not_crash():
    s = corpus_bleu([[]], [["a", "b", "c", "d"]])
    assert isinstance(s, BleuScore)
    assert s.bleu == 0.0
