"""Training loops: logging consistency, determinism, model selection."""

import pytest

from gaplab.corpus.synth import gen_synthetic_pair, make_spec
from gaplab.model.checkpoint import state_hash
from gaplab.model.decode import DecodeSpec
from gaplab.model.params import Dims
from gaplab.trainer.config import TrainConfig
from gaplab.trainer.loops import train_supervised, train_unmt
from gaplab.trainer.schedules import ScheduleSpec

DIMS = Dims(hidden=6, enc_layers=1, dec_layers=1, max_len=16, dtype="float64")


@pytest.fixture(scope="module")
def data():
    spec = make_spec(seed=21, n_common=6, n_anchor_common=2, n_content=6,
                     n_entities=4, sentence_length_range=(4, 7))
    return gen_synthetic_pair(
        spec,
        {"monoA": 20, "monoB": 20, "test_src_ori": 2, "test_tgt_ori": 2,
         "valid_src_ori": 3, "valid_tgt_ori": 3, "parallel_train": 10},
    )


def config(**kw):
    args = dict(
        seed=0, total_steps=8, tokens_per_batch=64, dims=DIMS, lr=1e-3,
        schedules=ScheduleSpec(dae_decay_steps=6, st_ramp_steps=6),
        train_decode=DecodeSpec(max_len=10),
    )
    args.update(kw)
    return TrainConfig(**args)


def test_logs_match_schedule_and_count(data):
    cfg = config()
    res = train_unmt(data.monoA, data.monoB, data.vocab, cfg)
    assert len(res.logs) == cfg.total_steps
    assert not res.diverged
    for log in res.logs:
        assert log.step == res.logs.index(log)
        assert log.lambda_dae == cfg.schedules.lambda_dae(log.step)
        assert log.lambda_st == cfg.schedules.lambda_st(log.step)


def test_unmt_runs_are_reproducible(data):
    cfg = config(seed=4)
    r1 = train_unmt(data.monoA, data.monoB, data.vocab, cfg)
    r2 = train_unmt(data.monoA, data.monoB, data.vocab, cfg)
    assert state_hash(r1.params, data.vocab, r1.opt) == state_hash(r2.params, data.vocab, r2.opt)
    assert [l.loss_total for l in r1.logs] == [l.loss_total for l in r2.logs]


def test_distinct_seeds_distinct_trajectories(data):
    r1 = train_unmt(data.monoA, data.monoB, data.vocab, config(seed=1))
    r2 = train_unmt(data.monoA, data.monoB, data.vocab, config(seed=2))
    assert state_hash(r1.params, data.vocab) != state_hash(r2.params, data.vocab)


def test_validation_points_and_best_selection(data):
    cfg = config(total_steps=6, eval_every=2)
    res = train_unmt(data.monoA, data.monoB, data.vocab, cfg, valid=data.valid)
    assert [e.step for e in res.evals] == [2, 4, 6]
    assert res.best_step in {2, 4, 6}
    best = max(res.evals, key=lambda e: e.mean)
    assert res.best_step == best.step


def test_warmup_steps_do_no_decoding(data):
    cfg = config(total_steps=4, warmup_wbw_steps=2)
    res = train_unmt(data.monoA, data.monoB, data.vocab, cfg)
    assert [l.n_generated == 0 for l in res.logs] == [True, True, False, False]


def test_supervised_loss_decreases(data):
    cfg = config(total_steps=60, lr=3e-3)
    res = train_supervised(data.parallel_train, data.vocab, cfg)
    head = sum(l.loss_total for l in res.logs[:10]) / 10
    tail = sum(l.loss_total for l in res.logs[-10:]) / 10
    assert tail < head
    assert res.logs[0].kind == "supervised"


def test_supervised_is_deterministic(data):
    cfg = config(total_steps=5)
    r1 = train_supervised(data.parallel_train, data.vocab, cfg)
    r2 = train_supervised(data.parallel_train, data.vocab, cfg)
    assert state_hash(r1.params, data.vocab) == state_hash(r2.params, data.vocab)


def test_oversized_corpus_rejected_up_front(data):
    small = config(dims=Dims(hidden=6, enc_layers=1, dec_layers=1, max_len=4))
    with pytest.raises(Exception, match="max_len"):
        train_unmt(data.monoA, data.monoB, data.vocab, small)
