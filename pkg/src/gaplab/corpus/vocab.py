"""Shared vocabulary over surface token strings.

One id space is used for all languages (joint-vocabulary practice): a token
string seen in several corpora gets a single id. Specials occupy the low ids,
followed by one language-tag token per language, then corpus tokens ordered by
frequency (desc) with lexicographic tie-break.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List

from .types import MonoCorpus, Sentence

PAD, BOS, EOS, UNK = "<pad>", "<bos>", "<eos>", "<unk>"
SPECIALS = (PAD, BOS, EOS, UNK)


def lang_tag(lang: str) -> str:
    return f"<2{lang}>"


@dataclass
class Vocab:
    tokens: List[str]
    langs: List[str]
    _index: Dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {t: i for i, t in enumerate(self.tokens)}
        if len(self._index) != len(self.tokens):
            raise ValueError("duplicate token in vocab")
        for sp in SPECIALS:
            if sp not in self._index:
                raise ValueError(f"missing special token {sp!r}")
        for lang in self.langs:
            if lang_tag(lang) not in self._index:
                raise ValueError(f"missing language tag for {lang!r}")

    def __len__(self):
        return len(self.tokens)

    @property
    def pad_id(self) -> int:
        return self._index[PAD]

    @property
    def bos_id(self) -> int:
        return self._index[BOS]

    @property
    def eos_id(self) -> int:
        return self._index[EOS]

    @property
    def unk_id(self) -> int:
        return self._index[UNK]

    def tag_id(self, lang: str) -> int:
        return self._index[lang_tag(lang)]

    def id_of(self, token: str) -> int:
        return self._index.get(token, self._index[UNK])

    def token_of(self, idx: int) -> str:
        return self.tokens[idx]

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def encode(self, tokens: Iterable[str], lang: str) -> Sentence:
        return Sentence(tuple(self.id_of(t) for t in tokens), lang)

    def decode(self, sent: Sentence) -> List[str]:
        return [self.tokens[i] for i in sent.token_ids]

    def decode_corpus(self, corpus: MonoCorpus) -> List[List[str]]:
        return [self.decode(s) for s in corpus.sentences]


def build_vocab(corpora: Iterable[Iterable[List[str]]], langs: List[str], min_count: int = 1) -> Vocab:
    """Build a shared vocab from raw token corpora (lists of token-string sentences).

    Tokens below min_count are dropped and map to <unk> on encode.
    """
    counts: Counter = Counter()
    n_sentences = 0
    for corpus in corpora:
        for sent in corpus:
            counts.update(sent)
            n_sentences += 1
    if n_sentences == 0:
        raise ValueError("cannot build a vocab from empty corpora")
    kept = [t for t, c in counts.items() if c >= min_count]
    kept.sort(key=lambda t: (-counts[t], t))
    tokens = list(SPECIALS) + [lang_tag(l) for l in langs] + kept
    return Vocab(tokens=tokens, langs=list(langs))
