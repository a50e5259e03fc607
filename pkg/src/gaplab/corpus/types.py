"""Core corpus data types: sentences, monolingual pools, origin-tagged test pairs."""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Sequence


class Origin(str, Enum):
    """Which side of a test pair was naturally authored."""

    SOURCE_ORIGINAL = "src_ori"
    TARGET_ORIGINAL = "tgt_ori"


class Provenance(str, Enum):
    NATURAL = "natural"
    ORACLE_TRANSLATED = "oracle_translated"
    MODEL_TRANSLATED = "model_translated"


@dataclass(frozen=True)
class Sentence:
    """A tokenized sentence: vocab ids only, no pad/bos/eos in the body."""

    token_ids: tuple
    lang: str

    def __post_init__(self):
        if len(self.token_ids) < 1:
            raise ValueError("sentence must have at least one token")
        object.__setattr__(self, "token_ids", tuple(int(t) for t in self.token_ids))

    def __len__(self):
        return len(self.token_ids)


@dataclass
class MonoCorpus:
    """Monolingual sentence pool for one language."""

    lang: str
    sentences: List[Sentence]

    def __post_init__(self):
        for s in self.sentences:
            if s.lang != self.lang:
                raise ValueError(f"sentence lang {s.lang!r} != corpus lang {self.lang!r}")

    @property
    def size(self) -> int:
        return len(self.sentences)

    def __len__(self):
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)


@dataclass
class Pair:
    """One aligned test pair. `src` is the canonical source-language side."""

    src: Sentence
    ref: Sentence
    origin: Origin
    provenance: Provenance = Provenance.NATURAL


@dataclass
class ParallelSet:
    """Origin-tagged aligned pairs; src.lang and ref.lang are constant across the set."""

    pairs: List[Pair] = field(default_factory=list)

    def __post_init__(self):
        if self.pairs:
            src_lang = self.pairs[0].src.lang
            ref_lang = self.pairs[0].ref.lang
            if src_lang == ref_lang:
                raise ValueError("src and ref must be different languages")
            for p in self.pairs:
                if p.src.lang != src_lang or p.ref.lang != ref_lang:
                    raise ValueError("inconsistent language pair in ParallelSet")

    @property
    def src_lang(self) -> str:
        return self.pairs[0].src.lang

    @property
    def ref_lang(self) -> str:
        return self.pairs[0].ref.lang

    def subset(self, origin: Origin) -> "ParallelSet":
        return ParallelSet([p for p in self.pairs if p.origin == origin])

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def corpus_tokens(corpus: MonoCorpus) -> Sequence[Sequence[int]]:
    return [s.token_ids for s in corpus.sentences]
