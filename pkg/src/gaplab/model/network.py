"""Encoder-decoder transformer assembled from the layer primitives.

Pre-LayerNorm blocks, shared token and position embeddings on both sides, an
untied output projection. The decoder is conditioned on the target language by
its first input token (the language tag); the encoder sees the raw sentence
plus a terminating eos.

The public entry points work on lists of Sentence objects and return mean
per-token NLL together with a full gradient dict, or bare logits for the
decoders in decode.py.
"""

from dataclasses import dataclass

import numpy as np

from ..corpus.types import Sentence
from ..corpus.vocab import Vocab
from . import layers as L
from .params import ModelParams


class SequenceTooLong(ValueError):
    pass


def pack_source(batch, vocab: Vocab, max_len: int):
    """Rows of token ids followed by eos then pad; also a validity mask."""
    lens = np.array([len(s.token_ids) + 1 for s in batch])
    t = int(lens.max())
    if t > max_len:
        raise SequenceTooLong(f"source of {t} tokens exceeds max_len={max_len}")
    ids = np.full((len(batch), t), vocab.pad_id, dtype=np.int64)
    for i, s in enumerate(batch):
        ids[i, : lens[i] - 1] = s.token_ids
        ids[i, lens[i] - 1] = vocab.eos_id
    valid = np.arange(t)[None, :] < lens[:, None]
    return ids, valid


def pack_target(batch, vocab: Vocab, tgt_lang: str, max_len: int):
    """Decoder input [tag, tokens...] and shifted output [tokens..., eos]."""
    lens = np.array([len(s.token_ids) + 1 for s in batch])
    t = int(lens.max())
    if t > max_len:
        raise SequenceTooLong(f"target of {t} tokens exceeds max_len={max_len}")
    tag = vocab.tag_id(tgt_lang)
    dec_in = np.full((len(batch), t), vocab.pad_id, dtype=np.int64)
    tgt_out = np.full((len(batch), t), vocab.pad_id, dtype=np.int64)
    dec_in[:, 0] = tag
    for i, s in enumerate(batch):
        n = lens[i] - 1
        dec_in[i, 1 : n + 1] = s.token_ids
        tgt_out[i, :n] = s.token_ids
        tgt_out[i, n] = vocab.eos_id
    valid = np.arange(t)[None, :] < lens[:, None]
    return dec_in, tgt_out, valid


def _key_mask(valid, dtype):
    """(B, 1, T_k) additive mask from a validity matrix."""
    m = np.zeros(valid.shape, dtype=dtype)
    m[~valid] = L.NEG_INF
    return m[:, None, :]


def _causal_mask(t, dtype):
    return (np.triu(np.ones((t, t), dtype=dtype), k=1) * L.NEG_INF)[None, :, :]


def _embed(params: ModelParams, ids):
    e = params.arrays["tok_emb"][ids] + params.arrays["pos_emb"][: ids.shape[1]]
    return e


def _attn_block(a, prefix, x_q, x_kv, mask):
    return L.attention(
        x_q, x_kv,
        a[f"{prefix}.wq"], a[f"{prefix}.wk"], a[f"{prefix}.wv"], a[f"{prefix}.wo"],
        mask,
    )


def _attn_block_backward(grads, prefix, dy, cache):
    dx_q, dx_kv, dwq, dwk, dwv, dwo = L.attention_backward(dy, cache)
    grads[f"{prefix}.wq"] += dwq
    grads[f"{prefix}.wk"] += dwk
    grads[f"{prefix}.wv"] += dwv
    grads[f"{prefix}.wo"] += dwo
    return dx_q, dx_kv

def _mlp_block(a, prefix, x):
    h1, c1 = L.linear(x, a[f"{prefix}.w1"], a[f"{prefix}.b1"])
    h2, c2 = L.gelu(h1)
    y, c3 = L.linear(h2, a[f"{prefix}.w2"], a[f"{prefix}.b2"])
    return y, (c1, c2, c3)


def _mlp_block_backward(grads, prefix, dy, cache):
    c1, c2, c3 = cache
    dh2, dw2, db2 = L.linear_backward(dy, c3)
    dh1 = L.gelu_backward(dh2, c2)
    dx, dw1, db1 = L.linear_backward(dh1, c1)
    grads[f"{prefix}.w1"] += dw1
    grads[f"{prefix}.b1"] += db1
    grads[f"{prefix}.w2"] += dw2
    grads[f"{prefix}.b2"] += db2
    return dx


def _ln_block(a, prefix, x):
    return L.layer_norm(x, a[f"{prefix}.g"], a[f"{prefix}.b"])


def _ln_block_backward(grads, prefix, dy, cache):
    dx, dg, db = L.layer_norm_backward(dy, cache)
    grads[f"{prefix}.g"] += dg
    grads[f"{prefix}.b"] += db
    return dx


def encoder_forward(params: ModelParams, src_ids, src_valid):
    a = params.arrays
    dt = a["tok_emb"].dtype
    kpm = _key_mask(src_valid, dt)
    x = _embed(params, src_ids)
    caches = []
    for i in range(params.dims.enc_layers):
        p = f"enc{i}"
        n1, c_ln1 = _ln_block(a, f"{p}.ln1", x)
        at, c_at = _attn_block(a, f"{p}.attn", n1, n1, kpm)
        x = x + at
        n2, c_ln2 = _ln_block(a, f"{p}.ln2", x)
        ml, c_ml = _mlp_block(a, f"{p}.mlp", n2)
        x = x + ml
        caches.append((c_ln1, c_at, c_ln2, c_ml))
    h, c_fin = _ln_block(a, "enc_ln", x)
    return h, (src_ids, kpm, caches, c_fin)


def encoder_backward(params: ModelParams, grads, dh, cache):
    src_ids, _, caches, c_fin = cache
    dx = _ln_block_backward(grads, "enc_ln", dh, c_fin)
    for i in reversed(range(params.dims.enc_layers)):
        p = f"enc{i}"
        c_ln1, c_at, c_ln2, c_ml = caches[i]
        dn2 = _mlp_block_backward(grads, f"{p}.mlp", dx, c_ml)
        dx = dx + _ln_block_backward(grads, f"{p}.ln2", dn2, c_ln2)
        dq, dkv = _attn_block_backward(grads, f"{p}.attn", dx, c_at)
        dn1 = dq + dkv
        dx = dx + _ln_block_backward(grads, f"{p}.ln1", dn1, c_ln1)
    _embed_backward(params, grads, src_ids, dx)


def _embed_backward(params: ModelParams, grads, ids, dx):
    np.add.at(grads["tok_emb"], ids, dx)
    grads["pos_emb"][: ids.shape[1]] += dx.sum(axis=0)


def decoder_forward(params: ModelParams, dec_in, dec_valid, enc_out, src_valid):
    a = params.arrays
    dt = a["tok_emb"].dtype
    t = dec_in.shape[1]
    self_mask = _causal_mask(t, dt) + _key_mask(dec_valid, dt)
    cross_mask = _key_mask(src_valid, dt)
    y = _embed(params, dec_in)
    caches = []
    for i in range(params.dims.dec_layers):
        p = f"dec{i}"
        n1, c_ln1 = _ln_block(a, f"{p}.ln1", y)
        sa, c_sa = _attn_block(a, f"{p}.self", n1, n1, self_mask)
        y = y + sa
        n2, c_ln2 = _ln_block(a, f"{p}.ln2", y)
        ca, c_ca = _attn_block(a, f"{p}.cross", n2, enc_out, cross_mask)
        y = y + ca
        n3, c_ln3 = _ln_block(a, f"{p}.ln3", y)
        ml, c_ml = _mlp_block(a, f"{p}.mlp", n3)
        y = y + ml
        caches.append((c_ln1, c_sa, c_ln2, c_ca, c_ln3, c_ml))
    d, c_fin = _ln_block(a, "dec_ln", y)
    logits, c_out = L.linear(d, a["out.w"], a["out.b"])
    return logits, (dec_in, caches, c_fin, c_out)


def decoder_backward(params: ModelParams, grads, dlogits, cache):
    """Returns the gradient flowing back into enc_out."""
    dec_in, caches, c_fin, c_out = cache
    dd, dow, dob = L.linear_backward(dlogits, c_out)
    grads["out.w"] += dow
    grads["out.b"] += dob
    dy = _ln_block_backward(grads, "dec_ln", dd, c_fin)
    d_enc = None
    for i in reversed(range(params.dims.dec_layers)):
        p = f"dec{i}"
        c_ln1, c_sa, c_ln2, c_ca, c_ln3, c_ml = caches[i]
        dn3 = _mlp_block_backward(grads, f"{p}.mlp", dy, c_ml)
        dy = dy + _ln_block_backward(grads, f"{p}.ln3", dn3, c_ln3)
        dq, d_enc_i = _attn_block_backward(grads, f"{p}.cross", dy, c_ca)
        d_enc = d_enc_i if d_enc is None else d_enc + d_enc_i
        dy = dy + _ln_block_backward(grads, f"{p}.ln2", dq, c_ln2)
        dsq, dskv = _attn_block_backward(grads, f"{p}.self", dy, c_sa)
        dy = dy + _ln_block_backward(grads, f"{p}.ln1", dsq + dskv, c_ln1)
    _embed_backward(params, grads, dec_in, dy)
    return d_enc


@dataclass
class LossResult:
    loss: float          # mean NLL per target token, natural log
    n_tokens: int        # number of target tokens, eos included
    grads: dict          # gradient of the mean w.r.t. every parameter array


def seq2seq_loss(params: ModelParams, vocab: Vocab, srcs, tgts, tgt_lang: str,
                 want_grads: bool = True) -> LossResult:
    """Teacher-forced NLL of tgts given srcs, with gradients of the mean."""
    if len(srcs) != len(tgts) or not srcs:
        raise ValueError("seq2seq_loss needs equal-length, non-empty batches")
    max_len = params.dims.max_len
    src_ids, src_valid = pack_source(srcs, vocab, max_len)
    dec_in, tgt_out, tgt_valid = pack_target(tgts, vocab, tgt_lang, max_len)
    enc_out, enc_cache = encoder_forward(params, src_ids, src_valid)
    logits, dec_cache = decoder_forward(params, dec_in, tgt_valid, enc_out, src_valid)
    loss, n, dlogits = L.cross_entropy(logits, tgt_out, tgt_valid.astype(logits.dtype))
    if not want_grads:
        return LossResult(float(loss), n, {})
    grads = params.zeros_like()
    d_enc = decoder_backward(params, grads, dlogits, dec_cache)
    encoder_backward(params, grads, d_enc, enc_cache)
    return LossResult(float(loss), n, grads)


def encode_batch(params: ModelParams, vocab: Vocab, srcs):
    """Forward-only encoding for decoding loops."""
    src_ids, src_valid = pack_source(srcs, vocab, params.dims.max_len)
    enc_out, _ = encoder_forward(params, src_ids, src_valid)
    return enc_out, src_valid


def decode_logits(params: ModelParams, enc_out, src_valid, dec_in):
    """Logits over the next token at every position of dec_in.

    Every position counts as a valid key here; rows that already emitted eos
    carry pad filler, but their logits are discarded by the caller anyway.
    """
    valid = np.ones_like(dec_in, dtype=bool)
    logits, _ = decoder_forward(params, dec_in, valid, enc_out, src_valid)
    return logits
