"""Interpolated Kneser-Ney n-gram language model.

Highest-order level uses raw counts, every lower level uses continuation
(type) counts, and the unigram base adds a small constant so unseen tokens
keep finite probability. Contexts that were never observed back off one level
without discounting. The conditional distribution at any context sums to one
over the model vocabulary (seen types plus the end marker); querying a token
outside that vocabulary yields the base add-constant mass and is the only way
to leave the simplex.

Sentences are sequences of hashable tokens. Internally each one is padded
with order-1 begin markers and, unless disabled, terminated with an end
marker that counts as a predicted event.
"""

import json
import math
from collections import Counter, defaultdict
from typing import Hashable, List, Sequence, Tuple

FORMAT_VERSION = 1

# private pad/terminator symbols; the \x00 frame keeps them out of the way of
# both string and integer token alphabets
LM_BOS = "\x00bos\x00"
LM_EOS = "\x00eos\x00"


def _toks(s) -> tuple:
    return tuple(getattr(s, "token_ids", s))


class KneserNeyLM:
    def __init__(self, order: int = 4, discount: float = 0.75,
                 add_k: float = 0.01, include_eos: bool = True):
        if order < 1:
            raise ValueError("order must be >= 1")
        if not 0.0 < discount < 1.0:
            raise ValueError("discount must lie in (0, 1)")
        if add_k < 0:
            raise ValueError("add_k must be non-negative")
        self.order = order
        self.discount = discount
        self.add_k = add_k
        self.include_eos = include_eos
        self._fitted = False

    # -- estimation

    def _padded(self, sent) -> tuple:
        out = (LM_BOS,) * (self.order - 1) + _toks(sent)
        if self.include_eos:
            out = out + (LM_EOS,)
        return out

    def fit(self, sentences) -> "KneserNeyLM":
        if not sentences:
            raise ValueError("cannot fit a language model on an empty corpus")
        raw = [Counter() for _ in range(self.order + 1)]  # raw[n]: n-gram counts
        vocab = set()
        for sent in sentences:
            seq = self._padded(sent)
            vocab.update(_toks(sent))
            for n in range(1, self.order + 1):
                for i in range(len(seq) - n + 1):
                    g = seq[i : i + n]
                    if g[-1] != LM_BOS:  # begin markers are context only
                        raw[n][g] += 1
        if self.include_eos:
            vocab.add(LM_EOS)
        self.vocab = vocab

        # numerator counts per level: raw at the top, continuation types below
        num = {self.order: dict(raw[self.order])}
        for n in range(self.order - 1, 0, -1):
            cont = Counter()
            for g in raw[n + 1]:
                cont[g[1:]] += 1
            num[n] = dict(cont)
        if self.order == 1:
            num[1] = dict(raw[1])

        self._ctx_total = {}
        self._ctx_types = {}
        for n in range(2, self.order + 1):
            tot = defaultdict(int)
            typ = defaultdict(int)
            for g, c in num[n].items():
                tot[g[:-1]] += c
                typ[g[:-1]] += 1
            self._ctx_total[n] = dict(tot)
            self._ctx_types[n] = dict(typ)
        self._num = num
        uni_total = sum(num[1].values())
        self._uni_z = uni_total + self.add_k * len(vocab)
        if self._uni_z <= 0:
            raise ValueError("degenerate unigram distribution")
        self._fitted = True
        return self

    # -- scoring

    def prob(self, token: Hashable, context: Sequence[Hashable] = ()) -> float:
        """P(token | context); context longer than order-1 is truncated."""
        if not self._fitted:
            raise RuntimeError("fit() first")
        ctx = tuple(context)[-(self.order - 1):] if self.order > 1 else ()
        return self._p(token, ctx)

    def _p(self, w, ctx) -> float:
        n = len(ctx) + 1
        if n == 1:
            return (self._num[1].get((w,), 0) + self.add_k) / self._uni_z
        total = self._ctx_total[n].get(ctx, 0)
        if total == 0:
            return self._p(w, ctx[1:])
        a = self._num[n].get(ctx + (w,), 0)
        types = self._ctx_types[n][ctx]
        d = self.discount
        return max(a - d, 0.0) / total + d * types / total * self._p(w, ctx[1:])

    def sentence_logprob(self, sent) -> Tuple[float, int]:
        """(log probability, number of scored events) for one sentence."""
        seq = self._padded(sent)
        events = len(seq) - (self.order - 1)
        logp = 0.0
        for i in range(self.order - 1, len(seq)):
            ctx = seq[max(0, i - self.order + 1) : i]
            p = self._p(seq[i], tuple(ctx))
            if p <= 0.0:
                return -math.inf, events
            logp += math.log(p)
        return logp, events

    def corpus_logprob(self, sentences) -> Tuple[float, int]:
        total, events = 0.0, 0
        for s in sentences:
            lp, n = self.sentence_logprob(s)
            total += lp
            events += n
        return total, events

    def perplexity(self, sentences) -> float:
        if not sentences:
            raise ValueError("cannot score an empty corpus")
        total, events = self.corpus_logprob(sentences)
        if not math.isfinite(total):
            return math.inf
        return math.exp(-total / events)

    # -- serialization

    def to_json(self) -> str:
        def enc(d):
            return [[list(k), v] for k, v in sorted(d.items(), key=lambda kv: repr(kv[0]))]

        payload = {
            "format": FORMAT_VERSION,
            "order": self.order,
            "discount": self.discount,
            "add_k": self.add_k,
            "include_eos": self.include_eos,
            "vocab": sorted(self.vocab, key=repr),
            "num": {str(n): enc(d) for n, d in self._num.items()},
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "KneserNeyLM":
        p = json.loads(text)
        if p["format"] != FORMAT_VERSION:
            raise ValueError(f"unsupported model format {p['format']}")
        lm = cls(order=p["order"], discount=p["discount"], add_k=p["add_k"],
                 include_eos=p["include_eos"])
        lm.vocab = set(p["vocab"])
        lm._num = {int(n): {tuple(k): v for k, v in entries}
                   for n, entries in p["num"].items()}
        lm._ctx_total = {}
        lm._ctx_types = {}
        for n in range(2, lm.order + 1):
            tot = defaultdict(int)
            typ = defaultdict(int)
            for g, c in lm._num[n].items():
                tot[g[:-1]] += c
                typ[g[:-1]] += 1
            lm._ctx_total[n] = dict(tot)
            lm._ctx_types[n] = dict(typ)
        uni_total = sum(lm._num[1].values())
        lm._uni_z = uni_total + lm.add_k * len(lm.vocab)
        lm._fitted = True
        return lm
