"""Style-gap diagnostic.

Fit an n-gram model on text the translation system itself produced (its
back-translation output side), then compare its perplexity on human-origin
text versus translation-origin text of the same language. A lower perplexity
on the translation-origin side means the system's output distribution is
closer to translationese than to natural text.

The training corpus for the style model can optionally mix in round-trip
translations of natural target-language text; the mix ratio is a knob with
default zero.
"""

from dataclasses import dataclass
from typing import List, Optional

from ..corpus.types import MonoCorpus, Sentence
from ..corpus.vocab import Vocab
from ..model.decode import DecodeSpec, translate
from ..model.params import ModelParams
from .ngram_lm import KneserNeyLM


@dataclass(frozen=True)
class StyleGapResult:
    ppl_natural: float
    ppl_translated: float
    n_train: int
    order: int

    @property
    def gap(self) -> float:
        """Positive when translated text is the better fit."""
        return self.ppl_natural - self.ppl_translated


def bt_style_corpus(params: ModelParams, vocab: Vocab, mono_src: MonoCorpus,
                    tgt_lang: str, spec: DecodeSpec = DecodeSpec(),
                    mono_tgt: Optional[MonoCorpus] = None,
                    mix_roundtrip: float = 0.0, chunk: int = 128) -> List[Sentence]:
    """Model-generated target-language text for fitting the style model.

    The bulk is one-step translations of mono_src. With mix_roundtrip > 0, a
    corresponding fraction of mono_tgt is sent through a round trip
    (tgt -> src -> tgt) and appended, mirroring the usual practice of padding
    style corpora with round-trip text.
    """
    if not 0.0 <= mix_roundtrip <= 1.0:
        raise ValueError("mix_roundtrip must be within [0, 1]")
    if mix_roundtrip > 0.0 and mono_tgt is None:
        raise ValueError("round-trip mixing needs a target-language pool")

    def run(sents, lang):
        out = []
        for i in range(0, len(sents), chunk):
            out.extend(translate(params, vocab, sents[i : i + chunk], lang, spec))
        return out

    corpus = run(mono_src.sentences, tgt_lang)
    if mix_roundtrip > 0.0:
        n_rt = int(round(mix_roundtrip * len(mono_tgt.sentences)))
        pool = mono_tgt.sentences[:n_rt]
        corpus += run(run(pool, mono_src.lang), tgt_lang)
    return corpus


def style_gap(style_train, natural_eval, translated_eval,
              order: int = 4, discount: float = 0.75,
              add_k: float = 0.01) -> StyleGapResult:
    """Fit on style_train, evaluate both origins. All args are sentence lists."""
    lm = KneserNeyLM(order=order, discount=discount, add_k=add_k).fit(style_train)
    return StyleGapResult(
        ppl_natural=lm.perplexity(natural_eval),
        ppl_translated=lm.perplexity(translated_eval),
        n_train=len(style_train),
        order=order,
    )
