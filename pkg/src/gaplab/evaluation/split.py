"""Origin-split evaluation.

A test set is stored canonically as (side-A sentence, side-B sentence,
origin), where origin says which side is natural text: src_ori means the A
side was written in language A and the B side is a translation of it. When a
system is evaluated in the B->A direction the roles flip: the pairs whose
*input* is natural text are then the tgt_ori ones. split_eval handles that
mapping so "source-original" always means "the system's input side is
natural".

Every input sentence is decoded exactly once; the subsets are index slices of
the same hypothesis list.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from ..corpus.types import Origin, ParallelSet
from ..model.decode import DecodeSpec, translate
from .bleu import BleuScore, corpus_bleu


@dataclass(frozen=True)
class SplitScores:
    direction: Tuple[str, str]
    overall: BleuScore
    src_original: BleuScore
    tgt_original: BleuScore
    n_decoded: int


def split_eval(params, vocab, test: ParallelSet, direction: Tuple[str, str],
               spec: DecodeSpec = DecodeSpec(),
               translate_fn: Optional[Callable] = None) -> SplitScores:
    """Decode the test set in one direction and score BLEU per origin."""
    a_lang, b_lang = test.src_lang, test.ref_lang
    if direction == (a_lang, b_lang):
        inputs = [p.src for p in test.pairs]
        refs = [p.ref for p in test.pairs]
        input_natural = Origin.SOURCE_ORIGINAL
    elif direction == (b_lang, a_lang):
        inputs = [p.ref for p in test.pairs]
        refs = [p.src for p in test.pairs]
        input_natural = Origin.TARGET_ORIGINAL
    else:
        raise ValueError(f"direction {direction} does not match test langs ({a_lang}, {b_lang})")

    fn = translate_fn or (lambda sents: translate(params, vocab, sents, direction[1], spec))
    hyps = fn(inputs)
    if len(hyps) != len(inputs):
        raise ValueError("translator returned a different number of sentences")

    idx_nat = [i for i, p in enumerate(test.pairs) if p.origin == input_natural]
    idx_tr = [i for i in range(len(test.pairs)) if i not in set(idx_nat)]
    if not idx_nat or not idx_tr:
        raise ValueError("split evaluation needs both origins present")
    return SplitScores(
        direction=direction,
        overall=corpus_bleu(hyps, refs),
        src_original=corpus_bleu([hyps[i] for i in idx_nat], [refs[i] for i in idx_nat]),
        tgt_original=corpus_bleu([hyps[i] for i in idx_tr], [refs[i] for i in idx_tr]),
        n_decoded=len(hyps),
    )
