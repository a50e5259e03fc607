"""The combined unsupervised step: objective arithmetic, generation reuse,
and the reduction to a BT+DAE baseline when self-training is off.
"""

import numpy as np
import pytest

from gaplab.corpus.synth import gen_synthetic_pair, make_spec
from gaplab.corpus.types import Sentence
from gaplab.model.adam import AdamState
from gaplab.model.checkpoint import state_hash
from gaplab.model.decode import DecodeSpec, greedy_translate
from gaplab.model.network import seq2seq_loss
from gaplab.model.params import Dims, init_model
from gaplab.rng import spawn
from gaplab.trainer.config import TrainConfig
from gaplab.trainer.schedules import ScheduleSpec
from gaplab.trainer.steps import StepLog, unmt_step, word_by_word

DIMS = Dims(hidden=6, enc_layers=1, dec_layers=1, max_len=16, dtype="float64")


@pytest.fixture(scope="module")
def setting():
    spec = make_spec(seed=9, n_common=6, n_anchor_common=2, n_content=6,
                     n_entities=4, sentence_length_range=(4, 7))
    data = gen_synthetic_pair(
        spec, {"monoA": 12, "monoB": 12, "test_src_ori": 2, "test_tgt_ori": 2}
    )
    return data


def fresh(data, **cfg_kw):
    args = dict(
        seed=1, total_steps=10, tokens_per_batch=64, dims=DIMS, lr=1e-3,
        schedules=ScheduleSpec(dae_start=1.0, dae_end=0.5, dae_decay_steps=8,
                               st_start=0.02, st_end=0.1, st_ramp_steps=8),
        train_decode=DecodeSpec(max_len=10),
    )
    args.update(cfg_kw)
    cfg = TrainConfig(**args)
    params = init_model(DIMS, len(data.vocab), seed=cfg.seed)
    return params, AdamState(lr=cfg.lr), cfg


def batches(data, n=6):
    return data.monoA.sentences[:n], data.monoB.sentences[:n]


def test_objective_is_the_weighted_sum_of_parts(setting):
    params, opt, cfg = fresh(setting)
    ba, bb = batches(setting)
    for step in range(6):
        log = unmt_step(params, opt, setting.vocab, ba, bb, cfg, step,
                        spawn(cfg.seed, "noise", str(step)))
        recomposed = log.loss_bt + log.lambda_dae * log.loss_dae + log.lambda_st * log.loss_st
        assert abs(log.loss_total - recomposed) <= 1e-9
        assert log.lambda_dae == cfg.schedules.lambda_dae(step)
        assert log.lambda_st == cfg.schedules.lambda_st(step)
        assert log.loss_bt >= 0 and log.loss_dae >= 0 and log.loss_st >= 0


def test_st_loss_matches_outside_recomputation(setting):
    """The self-training term must equal the NLL of the snapshot generations
    as targets for the natural batch, recomputed here from scratch."""
    params, opt, cfg = fresh(setting)
    ba, bb = batches(setting, n=4)
    before = params.copy()

    log = unmt_step(params, opt, setting.vocab, ba, bb, cfg, step_idx=3,
                    noise_rng=spawn(cfg.seed, "noise", "3"))

    gen_b = greedy_translate(before, setting.vocab, ba, "bb", cfg.train_decode)
    gen_a = greedy_translate(before, setting.vocab, bb, "aa", cfg.train_decode)
    r1 = seq2seq_loss(before, setting.vocab, ba, gen_b, "bb", want_grads=False)
    r2 = seq2seq_loss(before, setting.vocab, bb, gen_a, "aa", want_grads=False)
    expected = (r1.loss * r1.n_tokens + r2.loss * r2.n_tokens) / (r1.n_tokens + r2.n_tokens)
    assert log.loss_st == pytest.approx(expected, abs=1e-9)

    # and the BT term likewise, with the roles of the pair flipped
    s1 = seq2seq_loss(before, setting.vocab, gen_b, ba, "aa", want_grads=False)
    s2 = seq2seq_loss(before, setting.vocab, gen_a, bb, "bb", want_grads=False)
    expected_bt = (s1.loss * s1.n_tokens + s2.loss * s2.n_tokens) / (s1.n_tokens + s2.n_tokens)
    assert log.loss_bt == pytest.approx(expected_bt, abs=1e-9)


def test_zero_lambda_equals_disabled_flag(setting):
    """A zero ST schedule and st_enabled=False must produce bit-identical
    parameter trajectories: the term is skipped, not multiplied by zero."""
    runs = []
    for variant in ("zero_schedule", "disabled"):
        if variant == "zero_schedule":
            params, opt, cfg = fresh(
                setting,
                schedules=ScheduleSpec(dae_start=1.0, dae_end=0.5, dae_decay_steps=8,
                                       st_start=0.0, st_end=0.0, st_ramp_steps=8),
            )
        else:
            params, opt, cfg = fresh(setting, st_enabled=False)
        ba, bb = batches(setting)
        for step in range(5):
            unmt_step(params, opt, setting.vocab, ba, bb, cfg, step,
                      spawn(cfg.seed, "noise", str(step)))
        runs.append(state_hash(params, setting.vocab, opt))
    assert runs[0] == runs[1]


def test_generation_count_unchanged_by_st(setting):
    ba, bb = batches(setting)
    for st_on in (True, False):
        params, opt, cfg = fresh(setting, st_enabled=st_on)
        log = unmt_step(params, opt, setting.vocab, ba, bb, cfg, 5,
                        spawn(0, "noise", "5"))
        assert log.n_generated == len(ba) + len(bb)


def test_kd_teacher_decodes_extra(setting):
    ba, bb = batches(setting)
    params, opt, cfg = fresh(setting)
    teacher = init_model(DIMS, len(setting.vocab), seed=77)
    log = unmt_step(params, opt, setting.vocab, ba, bb, cfg, 5,
                    spawn(0, "noise", "5"), st_params=teacher)
    assert log.n_generated == 2 * (len(ba) + len(bb))


def test_word_by_word_table_replaces_generation(setting):
    ba, bb = batches(setting)
    params, opt, cfg = fresh(setting)
    table = np.arange(len(setting.vocab))
    log = unmt_step(params, opt, setting.vocab, ba, bb, cfg, 0,
                    spawn(0, "noise", "0"), wbw_table=table)
    assert log.n_generated == 0


def test_word_by_word_mapping():
    table = np.array([5, 4, 3, 2, 1, 0])
    out = word_by_word([Sentence((0, 2, 5), "aa")], table, "bb")
    assert out == [Sentence((5, 3, 0), "bb")]


def test_steplog_json_round_trip():
    log = StepLog(step=7, kind="unmt", loss_total=1.25, loss_bt=1.0,
                  loss_dae=0.2, loss_st=0.05, lambda_dae=0.5, lambda_st=0.1,
                  grad_norm=3.5, n_generated=16, n_tokens=140)
    assert StepLog.from_json(log.to_json()) == log
