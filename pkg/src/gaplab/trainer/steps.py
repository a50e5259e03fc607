"""Single optimization steps.

The unsupervised step follows the online recipe: snapshot the current
parameters, greedy-translate each monolingual batch with the snapshot, then
take one gradient step on the combined objective

    L = L_bt + lambda_dae * L_dae + lambda_st * L_st

where L_bt reconstructs the original batch from its generated translation,
L_dae reconstructs it from a noised copy, and L_st treats the generated
translation itself as a target. The generations are produced once and shared
between the bt and st terms; when the st weight is exactly zero that term is
skipped entirely, so a zero schedule and a disabled flag produce bit-identical
training trajectories.

Each loss term is pooled across the two directions as a token-weighted mean
before the weights are applied.
"""

import json
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from ..corpus.noise import apply_noise
from ..corpus.types import Sentence
from ..corpus.vocab import Vocab
from ..model.adam import AdamState, apply_update
from ..model.decode import greedy_translate
from ..model.network import seq2seq_loss
from ..model.params import ModelParams
from .config import TrainConfig


@dataclass
class StepLog:
    step: int
    kind: str                 # "unmt" or "supervised"
    loss_total: float
    loss_bt: float = 0.0
    loss_dae: float = 0.0
    loss_st: float = 0.0
    lambda_dae: float = 0.0
    lambda_st: float = 0.0
    grad_norm: float = 0.0
    n_generated: int = 0      # sentences decoded while building this step
    n_tokens: int = 0         # target tokens that contributed to the update

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "StepLog":
        return cls(**json.loads(line))


def _pool(results):
    """Token-weighted mean of per-batch LossResults, losses and gradients."""
    n = sum(r.n_tokens for r in results)
    loss = sum(r.loss * r.n_tokens for r in results) / n
    grads = {}
    for name in results[0].grads:
        acc = results[0].grads[name] * (results[0].n_tokens / n)
        for r in results[1:]:
            acc = acc + r.grads[name] * (r.n_tokens / n)
        grads[name] = acc
    return loss, n, grads


def _add_scaled(total, grads, w):
    for name, g in grads.items():
        total[name] += w * g


def word_by_word(batch, table: np.ndarray, tgt_lang: str):
    """Map each token through a translation table, preserving order."""
    return [Sentence(tuple(int(table[t]) for t in s.token_ids), tgt_lang)
            for s in batch]


def unmt_step(params: ModelParams, opt: AdamState, vocab: Vocab,
              batch_a, batch_b, cfg: TrainConfig, step_idx: int,
              noise_rng: np.random.Generator,
              st_params: Optional[ModelParams] = None,
              wbw_table: Optional[np.ndarray] = None) -> StepLog:
    """One update from a monolingual batch per language.

    st_params switches the origin of the self-training targets: None reuses
    the snapshot generations (online self-training), a fixed teacher model
    yields knowledge distillation instead. wbw_table, when given, replaces
    model generation with table lookup; the warmup phase uses this to seed
    the loop with a mapping that the untrained model cannot yet produce.
    """
    lang_a, lang_b = batch_a[0].lang, batch_b[0].lang
    lam_d = cfg.schedules.lambda_dae(step_idx)
    lam_s = cfg.schedules.lambda_st(step_idx) if cfg.st_enabled else 0.0

    frozen = params.copy()
    if wbw_table is not None:
        gen_b = word_by_word(batch_a, wbw_table, lang_b)
        gen_a = word_by_word(batch_b, wbw_table, lang_a)
        n_generated = 0
    else:
        gen_b = greedy_translate(frozen, vocab, batch_a, lang_b, cfg.train_decode)
        gen_a = greedy_translate(frozen, vocab, batch_b, lang_a, cfg.train_decode)
        n_generated = len(batch_a) + len(batch_b)

    bt = [
        seq2seq_loss(params, vocab, gen_b, batch_a, lang_a),
        seq2seq_loss(params, vocab, gen_a, batch_b, lang_b),
    ]
    loss_bt, n_bt, total = _pool(bt)

    loss_dae = 0.0
    if lam_d > 0.0:
        noised_a = [apply_noise(s, cfg.noise, noise_rng, vocab.unk_id) for s in batch_a]
        noised_b = [apply_noise(s, cfg.noise, noise_rng, vocab.unk_id) for s in batch_b]
        dae = [
            seq2seq_loss(params, vocab, noised_a, batch_a, lang_a),
            seq2seq_loss(params, vocab, noised_b, batch_b, lang_b),
        ]
        loss_dae, _, g_dae = _pool(dae)
        _add_scaled(total, g_dae, lam_d)

    loss_st = 0.0
    if lam_s > 0.0:
        if st_params is None:
            st_b, st_a = gen_b, gen_a
        else:
            st_b = greedy_translate(st_params, vocab, batch_a, lang_b, cfg.train_decode)
            st_a = greedy_translate(st_params, vocab, batch_b, lang_a, cfg.train_decode)
            n_generated += len(batch_a) + len(batch_b)
        st = [
            seq2seq_loss(params, vocab, batch_a, st_b, lang_b),
            seq2seq_loss(params, vocab, batch_b, st_a, lang_a),
        ]
        loss_st, _, g_st = _pool(st)
        _add_scaled(total, g_st, lam_s)

    norm = apply_update(params, total, opt)
    return StepLog(
        step=step_idx, kind="unmt",
        loss_total=loss_bt + lam_d * loss_dae + lam_s * loss_st,
        loss_bt=loss_bt, loss_dae=loss_dae, loss_st=loss_st,
        lambda_dae=lam_d, lambda_st=lam_s,
        grad_norm=norm, n_generated=n_generated, n_tokens=n_bt,
    )


def supervised_step(params: ModelParams, opt: AdamState, vocab: Vocab,
                    pair_batch, cfg: TrainConfig, step_idx: int) -> StepLog:
    """One bidirectional update from a parallel batch."""
    srcs = [p.src for p in pair_batch]
    refs = [p.ref for p in pair_batch]
    lang_s, lang_r = srcs[0].lang, refs[0].lang
    both = [
        seq2seq_loss(params, vocab, srcs, refs, lang_r),
        seq2seq_loss(params, vocab, refs, srcs, lang_s),
    ]
    loss, n, grads = _pool(both)
    norm = apply_update(params, grads, opt)
    return StepLog(step=step_idx, kind="supervised", loss_total=loss,
                   grad_norm=norm, n_tokens=n)
