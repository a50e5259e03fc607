"""Style-gap and fluency diagnostics."""

import random

import pytest

from gaplab.evaluation.fluency import fluency_ppl
from gaplab.gapstats.ngram_lm import KneserNeyLM
from gaplab.gapstats.style import StyleGapResult, bt_style_corpus, style_gap
from gaplab.corpus.types import MonoCorpus, Sentence


def structured_corpus(n=60, length=8, seed=0):
    """Sentences that walk token ids in order, so n-gram structure is strong."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        start = rng.randrange(0, 20)
        out.append([f"t{start + i}" for i in range(length)])
    return out


def test_equal_inputs_have_zero_gap():
    corpus = structured_corpus()
    r = style_gap(corpus[:40], corpus[40:], corpus[40:])
    assert isinstance(r, StyleGapResult)
    assert r.ppl_natural == r.ppl_translated
    assert r.gap == 0.0


def test_gap_positive_when_translated_matches_training_style():
    train = structured_corpus(seed=1)
    translated = structured_corpus(seed=2)
    rng = random.Random(3)
    natural = [sorted(s, key=lambda _: rng.random()) for s in structured_corpus(seed=4)]
    r = style_gap(train, natural, translated)
    assert r.ppl_translated < r.ppl_natural
    assert r.gap > 0


def test_fluency_ppl_at_least_one_and_order_sensitive():
    corpus = structured_corpus(seed=5)
    lm = KneserNeyLM(order=4).fit(corpus)
    verbatim = fluency_ppl(lm, corpus[:20])
    rng = random.Random(6)
    shuffled = [sorted(s, key=lambda _: rng.random()) for s in corpus[:20]]
    assert 1.0 <= verbatim < fluency_ppl(lm, shuffled)


def test_fluency_rejects_empty_input():
    lm = KneserNeyLM(order=1).fit([["a"]])
    with pytest.raises(ValueError):
        fluency_ppl(lm, [])


def test_bt_style_corpus_translates_the_whole_pool(tiny_vocab):
    from gaplab.model.decode import DecodeSpec
    from gaplab.model.params import Dims, init_model

    params = init_model(Dims(hidden=4, enc_layers=1, dec_layers=1, max_len=8,
                             dtype="float64"), len(tiny_vocab), seed=0)
    mono = MonoCorpus("bb", [tiny_vocab.encode(["w5", "w6"], "bb"),
                             tiny_vocab.encode(["w7"], "bb"),
                             tiny_vocab.encode(["w3", "w4", "w5"], "bb")])
    out = bt_style_corpus(params, tiny_vocab, mono, "aa", DecodeSpec(max_len=5), chunk=2)
    assert len(out) == 3
    assert all(isinstance(s, Sentence) and s.lang == "aa" for s in out)


def test_bt_style_corpus_validates_mix(tiny_vocab):
    from gaplab.model.decode import DecodeSpec
    from gaplab.model.params import Dims, init_model

    params = init_model(Dims(hidden=4, enc_layers=1, dec_layers=1, max_len=8,
                             dtype="float64"), len(tiny_vocab), seed=0)
    mono = MonoCorpus("bb", [tiny_vocab.encode(["w5"], "bb")])
    with pytest.raises(ValueError):
        bt_style_corpus(params, tiny_vocab, mono, "aa", mix_roundtrip=0.5)
    with pytest.raises(ValueError):
        bt_style_corpus(params, tiny_vocab, mono, "aa", mix_roundtrip=1.5)
