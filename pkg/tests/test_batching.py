"""Token-budget batching."""

from collections import Counter

import numpy as np
import pytest

from gaplab.corpus.batching import BatchingError, make_batches
from gaplab.corpus.types import Sentence


def sents(lengths):
    return [Sentence(tuple(range(i * 100, i * 100 + n)), "aa") for i, n in enumerate(lengths)]


def test_uniform_lengths_pack_exactly():
    corpus = sents([5] * 10)
    batches = make_batches(corpus, 25, np.random.default_rng(0))
    assert len(batches) == 2
    assert sorted(len(b) for b in batches) == [5, 5]


def test_partition_multiset_equality():
    corpus = sents([3, 7, 2, 9, 4, 4, 6, 1, 8])
    batches = make_batches(corpus, 12, np.random.default_rng(1))
    flat = [s for b in batches for s in b]
    assert Counter(s.token_ids for s in flat) == Counter(s.token_ids for s in corpus)


def test_budget_never_exceeded():
    corpus = sents([3, 7, 2, 9, 4, 4, 6, 1, 8, 5, 5])
    for seed in range(5):
        for batch in make_batches(corpus, 11, np.random.default_rng(seed)):
            assert sum(len(s) for s in batch) <= 11


def test_same_rng_state_same_batches():
    corpus = sents([4, 6, 2, 8, 3, 5])
    b1 = make_batches(corpus, 10, np.random.default_rng(7))
    b2 = make_batches(corpus, 10, np.random.default_rng(7))
    assert b1 == b2


def test_batches_are_length_bucketed():
    # lots of equal-length groups: each emitted batch should stay
    # near-homogeneous because packing follows a length sort
    corpus = sents([2] * 8 + [9] * 8)
    for batch in make_batches(corpus, 18, np.random.default_rng(2)):
        lengths = {len(s) for s in batch}
        assert lengths in ({2}, {9}, {2, 9})
        if lengths == {2, 9}:
            # only the boundary batch may mix, and only once
            assert sum(1 for s in batch if len(s) == 9) <= 2


def test_oversized_sentence_error_names_it():
    corpus = sents([3, 15, 2])
    with pytest.raises(BatchingError, match="#1.*15 tokens"):
        make_batches(corpus, 10, np.random.default_rng(0))
