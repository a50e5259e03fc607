from .batching import BatchingError, make_batches
from .noise import NoiseSpec, apply_noise
from .synth import (
    GeneratedData,
    OracleError,
    ReorderRule,
    SynthConfigError,
    SynthSpec,
    gen_synthetic_pair,
    make_spec,
    oracle_translate,
    oracle_translate_tokens,
)
from .types import MonoCorpus, Origin, Pair, ParallelSet, Provenance, Sentence
from .vocab import BOS, EOS, PAD, SPECIALS, UNK, Vocab, build_vocab, lang_tag

__all__ = [
    "BatchingError",
    "make_batches",
    "NoiseSpec",
    "apply_noise",
    "GeneratedData",
    "OracleError",
    "ReorderRule",
    "SynthConfigError",
    "SynthSpec",
    "gen_synthetic_pair",
    "make_spec",
    "oracle_translate",
    "oracle_translate_tokens",
    "MonoCorpus",
    "Origin",
    "Pair",
    "ParallelSet",
    "Provenance",
    "Sentence",
    "PAD",
    "BOS",
    "EOS",
    "UNK",
    "SPECIALS",
    "Vocab",
    "build_vocab",
    "lang_tag",
]
