"""Entity frequency and translation-accuracy diagnostics.

Entities form a closed inventory whose surface forms are shared across the
language pair, so "recognizing" one is exact set membership and translation
accuracy reduces to multiset preservation: every entity occurrence on the
source side should reappear in the system output.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Sequence


def _toks(s) -> tuple:
    return tuple(getattr(s, "token_ids", s))


def entity_counts(corpus, inventory) -> Counter:
    inv = set(inventory)
    c: Counter = Counter()
    for s in corpus:
        c.update(t for t in _toks(s) if t in inv)
    return c


def entity_rate(corpus, inventory) -> float:
    """Fraction of tokens that are entities."""
    inv = set(inventory)
    hit = tot = 0
    for s in corpus:
        toks = _toks(s)
        tot += len(toks)
        hit += sum(1 for t in toks if t in inv)
    if tot == 0:
        raise ValueError("empty corpus")
    return hit / tot


@dataclass(frozen=True)
class EntityAccuracy:
    n_source: int       # entity occurrences on the source side
    n_preserved: int    # of those, how many survive into the output (multiset)

    @property
    def accuracy(self) -> float:
        return self.n_preserved / self.n_source if self.n_source else float("nan")


def entity_translation_accuracy(srcs, hyps, inventory) -> EntityAccuracy:
    """Multiset recall of source-side entities in the paired outputs."""
    if len(srcs) != len(hyps):
        raise ValueError("source/output lists must align")
    inv = set(inventory)
    n_src = n_kept = 0
    for s, h in zip(srcs, hyps):
        cs = Counter(t for t in _toks(s) if t in inv)
        ch = Counter(t for t in _toks(h) if t in inv)
        n_src += sum(cs.values())
        n_kept += sum(min(c, ch[t]) for t, c in cs.items())
    return EntityAccuracy(n_src, n_kept)


def entity_frequency_table(corpora: Dict[str, Sequence], inventory) -> Dict[str, Counter]:
    """Per-corpus entity occurrence counts, keyed by the given corpus labels."""
    return {label: entity_counts(corpus, inventory) for label, corpus in corpora.items()}
