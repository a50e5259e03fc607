"""Offline self-training data generation and the distillation drivers."""

from collections import Counter

import pytest

from gaplab.corpus.synth import gen_synthetic_pair, make_spec
from gaplab.corpus.types import Origin, Provenance
from gaplab.model.decode import DecodeSpec
from gaplab.model.params import Dims, init_model
from gaplab.trainer.config import TrainConfig
from gaplab.trainer.distill import kd_train, offline_st_distill, synthetic_parallel
from gaplab.trainer.schedules import ScheduleSpec

DIMS = Dims(hidden=6, enc_layers=1, dec_layers=1, max_len=16, dtype="float64")


@pytest.fixture(scope="module")
def setting():
    spec = make_spec(seed=23, n_common=6, n_anchor_common=2, n_content=6,
                     n_entities=4, sentence_length_range=(4, 7))
    data = gen_synthetic_pair(
        spec, {"monoA": 8, "monoB": 6, "test_src_ori": 2, "test_tgt_ori": 2}
    )
    teacher = init_model(DIMS, len(data.vocab), seed=3)
    return data, teacher


def test_synthetic_parallel_covers_both_pools(setting):
    data, teacher = setting
    pset = synthetic_parallel(teacher, data.vocab, data.monoA, data.monoB,
                              DecodeSpec(max_len=8), chunk=4)
    assert len(pset.pairs) == len(data.monoA) + len(data.monoB)
    origins = Counter(p.origin for p in pset.pairs)
    assert origins[Origin.SOURCE_ORIGINAL] == len(data.monoA)
    assert origins[Origin.TARGET_ORIGINAL] == len(data.monoB)
    assert all(p.provenance == Provenance.MODEL_TRANSLATED for p in pset.pairs)


def test_synthetic_pairs_keep_the_natural_side(setting):
    data, teacher = setting
    pset = synthetic_parallel(teacher, data.vocab, data.monoA, data.monoB,
                              DecodeSpec(max_len=8))
    nat_a = {s.token_ids for s in data.monoA}
    nat_b = {s.token_ids for s in data.monoB}
    for p in pset.pairs:
        if p.origin == Origin.SOURCE_ORIGINAL:
            assert p.src.token_ids in nat_a
        else:
            assert p.ref.token_ids in nat_b


def test_offline_distill_runs_and_reports(setting):
    data, teacher = setting
    cfg = TrainConfig(seed=0, total_steps=4, tokens_per_batch=64, dims=DIMS,
                      train_decode=DecodeSpec(max_len=8))
    out = offline_st_distill(teacher, data.vocab, data.monoA, data.monoB, cfg)
    assert len(out.synthetic.pairs) == len(data.monoA) + len(data.monoB)
    assert len(out.result.logs) == 4
    assert out.result.logs[0].kind == "supervised"


def test_from_scratch_ignores_teacher_weights(setting):
    data, teacher = setting
    cfg = TrainConfig(seed=0, total_steps=2, tokens_per_batch=64, dims=DIMS,
                      train_decode=DecodeSpec(max_len=8))
    warm = offline_st_distill(teacher, data.vocab, data.monoA, data.monoB, cfg)
    cold = offline_st_distill(teacher, data.vocab, data.monoA, data.monoB, cfg,
                              from_scratch=True)
    w = warm.result.params.arrays["tok_emb"]
    c = cold.result.params.arrays["tok_emb"]
    assert w.shape == c.shape and (w != c).any()


def test_kd_uses_the_fixed_teacher_for_st(setting):
    data, teacher = setting
    cfg = TrainConfig(seed=0, total_steps=3, tokens_per_batch=64, dims=DIMS,
                      schedules=ScheduleSpec(st_start=0.05, st_end=0.1, st_ramp_steps=2),
                      train_decode=DecodeSpec(max_len=8))
    res = kd_train(data.monoA, data.monoB, data.vocab, cfg, teacher)
    # teacher generation doubles the decoding passes of the reused-snapshot path
    batch_sizes = [log.n_generated for log in res.logs]
    assert all(n > 0 and n % 2 == 0 for n in batch_sizes)
