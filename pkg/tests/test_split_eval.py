"""Origin-split evaluation wiring."""

import pytest

from gaplab.corpus.synth import gen_synthetic_pair, make_spec
from gaplab.evaluation.bleu import corpus_bleu
from gaplab.evaluation.split import split_eval
from gaplab.model.decode import DecodeSpec
from gaplab.model.params import Dims, init_model


@pytest.fixture(scope="module")
def setting():
    spec = make_spec(seed=17, n_common=6, n_anchor_common=2, n_content=6,
                     n_entities=4, sentence_length_range=(4, 7))
    data = gen_synthetic_pair(
        spec, {"monoA": 10, "monoB": 10, "test_src_ori": 3, "test_tgt_ori": 2}
    )
    dims = Dims(hidden=6, enc_layers=1, dec_layers=1, max_len=16, dtype="float64")
    params = init_model(dims, len(data.vocab), seed=0)
    return data, params


def test_two_directions_swap_the_natural_split(setting):
    data, params = setting
    spec = DecodeSpec(max_len=8)
    ab = split_eval(params, data.vocab, data.test, ("aa", "bb"), spec)
    ba = split_eval(params, data.vocab, data.test, ("bb", "aa"), spec)
    # 3 pairs are natural on the A side, 2 on the B side
    assert ab.src_original.hyp_len >= 3      # at least one token per sentence
    assert ab.n_decoded == 5 and ba.n_decoded == 5
    assert ab.direction == ("aa", "bb") and ba.direction == ("bb", "aa")


def test_splits_reconstruct_the_overall_score(setting):
    data, params = setting
    spec = DecodeSpec(max_len=8)
    counted = []
    fn_calls = []

    def counting_translate(sents):
        fn_calls.append(len(sents))
        from gaplab.model.decode import greedy_translate

        out = greedy_translate(params, data.vocab, sents, "bb", spec)
        counted.extend(out)
        return out

    r = split_eval(params, data.vocab, data.test, ("aa", "bb"), spec,
                   translate_fn=counting_translate)
    assert fn_calls == [5]  # each source decoded exactly once

    refs = [p.ref for p in data.test.pairs]
    assert r.overall.bleu == corpus_bleu(counted, refs).bleu


def test_single_origin_test_set_rejected(setting):
    data, params = setting
    from gaplab.corpus.types import ParallelSet, Origin

    only_src = ParallelSet([p for p in data.test.pairs if p.origin == Origin.SOURCE_ORIGINAL])
    with pytest.raises(ValueError, match="both origins"):
        split_eval(params, data.vocab, only_src, ("aa", "bb"), DecodeSpec(max_len=8))


def test_wrong_direction_rejected(setting):
    data, params = setting
    with pytest.raises(ValueError):
        split_eval(params, data.vocab, data.test, ("aa", "cc"), DecodeSpec(max_len=8))
