"""Greedy and beam-search decoding.

Both decoders ban structural tokens (pad, bos, language tags) outright and ban
eos on the very first step, so an output sentence always has at least one
body token. Ties in the next-token choice resolve to the lowest token id; a
beam of size 1 therefore reproduces greedy decoding exactly.
"""

from dataclasses import dataclass

import numpy as np

from ..corpus.types import Sentence
from ..corpus.vocab import Vocab
from .network import decode_logits, encode_batch
from .params import ModelParams


@dataclass(frozen=True)
class DecodeSpec:
    mode: str = "greedy"
    beam_size: int = 1
    max_len: int = 0         # 0 means "model capacity minus the tag slot"
    length_norm: bool = True

    def __post_init__(self):
        if self.mode not in ("greedy", "beam"):
            raise ValueError(f"unknown decode mode {self.mode!r}")
        if self.beam_size < 1:
            raise ValueError("beam_size must be >= 1")


def _banned_ids(vocab: Vocab):
    ids = [vocab.pad_id, vocab.bos_id]
    ids.extend(vocab.tag_id(lang) for lang in vocab.langs)
    return np.array(sorted(set(ids)), dtype=np.int64)


def _cap(spec: DecodeSpec, params: ModelParams) -> int:
    return spec.max_len if spec.max_len > 0 else params.dims.max_len - 1


def greedy_translate(params: ModelParams, vocab: Vocab, srcs, tgt_lang: str,
                     spec: DecodeSpec = DecodeSpec()):
    if not srcs:
        return []
    enc_out, src_valid = encode_batch(params, vocab, srcs)
    n = len(srcs)
    banned = _banned_ids(vocab)
    cap = _cap(spec, params)
    dec = np.full((n, 1), vocab.tag_id(tgt_lang), dtype=np.int64)
    done = np.zeros(n, dtype=bool)
    outs = [[] for _ in range(n)]
    for step in range(cap):
        logits = decode_logits(params, enc_out, src_valid, dec)[:, -1, :]
        logits[:, banned] = -np.inf
        if step == 0:
            logits[:, vocab.eos_id] = -np.inf
        nxt = logits.argmax(axis=-1)
        nxt[done] = vocab.pad_id
        finished_now = (~done) & (nxt == vocab.eos_id)
        for i in np.nonzero(~done & ~finished_now)[0]:
            outs[i].append(int(nxt[i]))
        done |= finished_now
        if done.all():
            break
        dec = np.concatenate([dec, nxt[:, None]], axis=1)
    return [Sentence(tuple(o), tgt_lang) for o in outs]


def _beam_one(params, vocab, enc_row, valid_row, tgt_lang, spec, banned, cap):
    """Beam search for a single source sentence; beams ride the batch axis."""
    k = spec.beam_size
    beams = np.full((1, 1), vocab.tag_id(tgt_lang), dtype=np.int64)
    scores = np.zeros(1)
    finished = []  # (normalized score, insertion order, token list)
    order = 0
    for step in range(cap):
        b = beams.shape[0]
        enc = np.repeat(enc_row[None], b, axis=0)
        val = np.repeat(valid_row[None], b, axis=0)
        logits = decode_logits(params, enc, val, beams)[:, -1, :]
        logits = logits - logits.max(axis=-1, keepdims=True)
        logp = logits - np.log(np.exp(logits).sum(axis=-1, keepdims=True))
        logp[:, banned] = -np.inf
        if step == 0:
            logp[:, vocab.eos_id] = -np.inf
        cand = (scores[:, None] + logp).ravel()
        take = min(k, cand.size)
        top = np.lexsort((np.arange(cand.size), -cand))[:take]
        new_beams, new_scores = [], []
        for flat in top:
            parent, tok = divmod(int(flat), logp.shape[1])
            sc = float(cand[flat])
            if tok == vocab.eos_id:
                body = beams[parent, 1:].tolist()
                norm = sc / (len(body) + 1) if spec.length_norm else sc
                finished.append((norm, order, body))
                order += 1
            else:
                new_beams.append(np.append(beams[parent], tok))
                new_scores.append(sc)
        if not new_beams or len(finished) >= k:
            break
        beams = np.stack(new_beams)
        scores = np.array(new_scores)
    if not finished:
        # ran out of length; fall back to the best unterminated beam
        for i in range(beams.shape[0]):
            body = beams[i, 1:].tolist()
            norm = scores[i] / len(body) if spec.length_norm else scores[i]
            finished.append((float(norm), order, body))
            order += 1
    finished.sort(key=lambda f: (-f[0], f[1]))
    return finished[0][2]


def beam_translate(params: ModelParams, vocab: Vocab, srcs, tgt_lang: str,
                   spec: DecodeSpec):
    if not srcs:
        return []
    enc_out, src_valid = encode_batch(params, vocab, srcs)
    banned = _banned_ids(vocab)
    cap = _cap(spec, params)
    out = []
    for i in range(len(srcs)):
        body = _beam_one(params, vocab, enc_out[i], src_valid[i], tgt_lang,
                         spec, banned, cap)
        out.append(Sentence(tuple(int(t) for t in body), tgt_lang))
    return out


def translate(params: ModelParams, vocab: Vocab, srcs, tgt_lang: str,
              spec: DecodeSpec = DecodeSpec()):
    """Translate a list of sentences into tgt_lang, preserving order."""
    if spec.mode == "greedy":
        return greedy_translate(params, vocab, srcs, tgt_lang, spec)
    return beam_translate(params, vocab, srcs, tgt_lang, spec)
