"""Offline self-training and knowledge distillation drivers.

Offline self-training: a fixed model translates both monolingual pools once,
the resulting synthetic parallel set is used for ordinary supervised
fine-tuning. Knowledge distillation reuses the online loop but draws the
self-training targets from a separately trained (usually supervised) teacher
instead of the model's own frozen snapshot.
"""

from dataclasses import dataclass
from typing import Optional

from ..corpus.types import MonoCorpus, Origin, Pair, ParallelSet, Provenance
from ..corpus.vocab import Vocab
from ..model.decode import DecodeSpec, translate
from ..model.params import ModelParams
from .config import TrainConfig
from .loops import TrainResult, train_supervised, train_unmt


def synthetic_parallel(params: ModelParams, vocab: Vocab, monoA: MonoCorpus,
                       monoB: MonoCorpus, spec: DecodeSpec = DecodeSpec(),
                       chunk: int = 128) -> ParallelSet:
    """Translate both pools with a fixed model into one parallel set.

    Pairs built from monoA keep their natural side in the source language and
    are tagged src_ori; monoB pairs end up tgt_ori. Every pair is marked as
    model-translated.
    """
    a, b = monoA.lang, monoB.lang

    def run(sents, tgt):
        out = []
        for i in range(0, len(sents), chunk):
            out.extend(translate(params, vocab, sents[i : i + chunk], tgt, spec))
        return out

    gen_b = run(monoA.sentences, b)
    gen_a = run(monoB.sentences, a)
    pairs = [
        Pair(src, hyp, Origin.SOURCE_ORIGINAL, Provenance.MODEL_TRANSLATED)
        for src, hyp in zip(monoA.sentences, gen_b)
    ]
    pairs += [
        Pair(hyp, ref, Origin.TARGET_ORIGINAL, Provenance.MODEL_TRANSLATED)
        for ref, hyp in zip(monoB.sentences, gen_a)
    ]
    return ParallelSet(pairs)


@dataclass
class DistillResult:
    synthetic: ParallelSet
    result: TrainResult


def offline_st_distill(params: ModelParams, vocab: Vocab, monoA: MonoCorpus,
                       monoB: MonoCorpus, cfg: TrainConfig,
                       valid: Optional[ParallelSet] = None,
                       from_scratch: bool = False) -> DistillResult:
    """Generate synthetic parallel data with params, then fine-tune on it."""
    synth = synthetic_parallel(params, vocab, monoA, monoB, cfg.train_decode)
    init = None if from_scratch else params.copy()
    res = train_supervised(synth, vocab, cfg, valid=valid, init_params=init)
    return DistillResult(synthetic=synth, result=res)


def kd_train(monoA: MonoCorpus, monoB: MonoCorpus, vocab: Vocab,
             cfg: TrainConfig, teacher: ModelParams,
             valid: Optional[ParallelSet] = None) -> TrainResult:
    """Online loop with the self-training targets produced by a fixed teacher."""
    return train_unmt(monoA, monoB, vocab, cfg, valid=valid, st_params=teacher)
