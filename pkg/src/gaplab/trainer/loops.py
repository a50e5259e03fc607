"""Training loops for the unsupervised and supervised regimes.

Batching re-shuffles each epoch from a seed derived of (config seed, corpus
tag, epoch), so runs are reproducible regardless of how many epochs the step
budget spans. Validation, when enabled, greedy-decodes both directions and
keeps the parameters with the best mean BLEU; a non-finite gradient aborts
the run and keeps the parameters from before the failing step.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..corpus.batching import make_batches
from ..corpus.types import MonoCorpus, ParallelSet
from ..corpus.vocab import Vocab
from ..model.adam import AdamState, NonFiniteGradient
from ..model.embeddings import cooc_embeddings, induce_word_table
from ..model.network import SequenceTooLong
from ..model.params import ModelParams, init_model
from ..rng import spawn
from ..evaluation.bleu import corpus_bleu
from ..model.decode import greedy_translate
from .config import TrainConfig
from .steps import StepLog, supervised_step, unmt_step


@dataclass
class EvalPoint:
    step: int
    bleu_ab: float
    bleu_ba: float

    @property
    def mean(self) -> float:
        return 0.5 * (self.bleu_ab + self.bleu_ba)


@dataclass
class TrainResult:
    params: ModelParams
    opt: AdamState
    vocab: Vocab
    logs: List[StepLog] = field(default_factory=list)
    evals: List[EvalPoint] = field(default_factory=list)
    best_step: int = -1
    diverged: bool = False


def _mono_stream(corpus: MonoCorpus, tokens_per_batch: int, seed: int, tag: str):
    epoch = 0
    while True:
        rng = spawn(seed, "batch", tag, str(epoch))
        for b in make_batches(corpus.sentences, tokens_per_batch, rng):
            yield b
        epoch += 1


def _pair_stream(pairs, tokens_per_batch: int, seed: int, tag: str):
    """Length-bucketed batches of Pair objects, re-shuffled per epoch."""
    epoch = 0
    cost = [len(p.src.token_ids) + len(p.ref.token_ids) + 2 for p in pairs]
    worst = max(cost)
    if worst > tokens_per_batch:
        raise ValueError(f"a pair of {worst} tokens exceeds tokens_per_batch={tokens_per_batch}")
    while True:
        rng = spawn(seed, "batch", tag, str(epoch))
        order = rng.permutation(len(pairs))
        order = order[np.argsort([cost[i] for i in order], kind="stable")]
        batches, cur, load = [], [], 0
        for i in order:
            if cur and load + cost[i] > tokens_per_batch:
                batches.append(cur)
                cur, load = [], 0
            cur.append(int(i))
            load += cost[i]
        if cur:
            batches.append(cur)
        for j in rng.permutation(len(batches)):
            yield [pairs[i] for i in batches[j]]
        epoch += 1


def _check_fits(corpora, dims):
    longest = max(len(s.token_ids) for c in corpora for s in c)
    if longest + 1 > dims.max_len:
        raise SequenceTooLong(
            f"training sentence of {longest} tokens does not fit max_len={dims.max_len}")


def _validate(params, vocab, valid: ParallelSet, cfg) -> Tuple[float, float]:
    a, b = valid.src_lang, valid.ref_lang
    hyps_ab = greedy_translate(params, vocab, [p.src for p in valid.pairs], b, cfg.train_decode)
    hyps_ba = greedy_translate(params, vocab, [p.ref for p in valid.pairs], a, cfg.train_decode)
    return (
        corpus_bleu(hyps_ab, [p.ref for p in valid.pairs]).bleu,
        corpus_bleu(hyps_ba, [p.src for p in valid.pairs]).bleu,
    )


def _run(step_fn, n_steps, params, opt, vocab, cfg,
         valid: Optional[ParallelSet], log_cb) -> TrainResult:
    result = TrainResult(params=params, opt=opt, vocab=vocab)
    best: Optional[ModelParams] = None
    best_score = -1.0
    for step in range(n_steps):
        try:
            log = step_fn(step)
        except NonFiniteGradient:
            # parameters are untouched by the failing update; stop here
            result.diverged = True
            break
        result.logs.append(log)
        if log_cb is not None:
            log_cb(log)
        if not np.isfinite(log.loss_total):
            result.diverged = True
            break
        if valid is not None and cfg.eval_every > 0 and (step + 1) % cfg.eval_every == 0:
            ab, ba = _validate(params, vocab, valid, cfg)
            point = EvalPoint(step + 1, ab, ba)
            result.evals.append(point)
            if point.mean > best_score:
                best_score = point.mean
                best = params.copy()
                result.best_step = point.step
            if cfg.stop_at_bleu > 0.0 and min(ab, ba) >= cfg.stop_at_bleu:
                break
    if best is not None:
        result.params = best
    return result


def train_unmt(monoA: MonoCorpus, monoB: MonoCorpus, vocab: Vocab,
               cfg: TrainConfig, valid: Optional[ParallelSet] = None,
               st_params: Optional[ModelParams] = None,
               init_params: Optional[ModelParams] = None,
               log_cb: Optional[Callable[[StepLog], None]] = None) -> TrainResult:
    """Unsupervised training from two monolingual pools."""
    _check_fits([monoA.sentences, monoB.sentences], cfg.dims)
    emb = None
    if cfg.emb_init == "anchor_cooc":
        emb = cooc_embeddings([monoA.sentences, monoB.sentences],
                              len(vocab), cfg.dims.hidden, cfg.seed)
    if init_params is not None:
        params = init_params
    else:
        params = init_model(cfg.dims, len(vocab), cfg.seed)
        if emb is not None:
            params.arrays["tok_emb"][:] = emb.astype(cfg.dims.np_dtype)
    table = None
    if cfg.warmup_wbw_steps > 0:
        table = induce_word_table(emb, [monoA.sentences, monoB.sentences])
    opt = AdamState(lr=cfg.lr, beta1=cfg.beta1, beta2=cfg.beta2,
                    eps=cfg.adam_eps, clip_norm=cfg.clip_norm)
    it_a = _mono_stream(monoA, cfg.tokens_per_batch, cfg.seed, f"mono_{monoA.lang}")
    it_b = _mono_stream(monoB, cfg.tokens_per_batch, cfg.seed, f"mono_{monoB.lang}")

    def step_fn(step):
        noise_rng = spawn(cfg.seed, "noise", str(step))
        wbw = table if step < cfg.warmup_wbw_steps else None
        return unmt_step(params, opt, vocab, next(it_a), next(it_b), cfg, step,
                         noise_rng, st_params=st_params, wbw_table=wbw)

    return _run(step_fn, cfg.total_steps, params, opt, vocab, cfg, valid, log_cb)


def train_supervised(parallel: ParallelSet, vocab: Vocab, cfg: TrainConfig,
                     valid: Optional[ParallelSet] = None,
                     init_params: Optional[ModelParams] = None,
                     log_cb: Optional[Callable[[StepLog], None]] = None) -> TrainResult:
    """Bidirectional supervised training on a parallel set."""
    _check_fits([[p.src for p in parallel.pairs], [p.ref for p in parallel.pairs]], cfg.dims)
    params = init_params if init_params is not None else init_model(cfg.dims, len(vocab), cfg.seed)
    opt = AdamState(lr=cfg.lr, beta1=cfg.beta1, beta2=cfg.beta2,
                    eps=cfg.adam_eps, clip_norm=cfg.clip_norm)
    it = _pair_stream(parallel.pairs, cfg.tokens_per_batch, cfg.seed, "parallel")

    def step_fn(step):
        return supervised_step(params, opt, vocab, next(it), cfg, step)

    return _run(step_fn, cfg.total_steps, params, opt, vocab, cfg, valid, log_cb)
