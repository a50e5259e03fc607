"""Checkpoint save/load and a content hash over the full training state.

A checkpoint is a single .npz holding every parameter array, the Adam moments
when present, and a JSON metadata record (dims, step, vocab, optimizer
scalars). Hashing is done over the array contents and the canonical metadata
string rather than the file bytes, because zip members carry wall-clock
timestamps.
"""

import hashlib
import json
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from ..corpus.vocab import Vocab
from .adam import AdamState
from .params import Dims, ModelParams

FORMAT_VERSION = 1


@dataclass
class Checkpoint:
    params: ModelParams
    vocab: Vocab
    opt: Optional[AdamState]
    extra: dict


def _meta(params: ModelParams, vocab: Vocab, opt: Optional[AdamState], extra):
    meta = {
        "format": FORMAT_VERSION,
        "dims": asdict(params.dims),
        "step": params.step,
        "vocab": {"tokens": vocab.tokens, "langs": vocab.langs},
        "extra": extra or {},
    }
    if opt is not None:
        meta["adam"] = {
            "lr": opt.lr, "beta1": opt.beta1, "beta2": opt.beta2,
            "eps": opt.eps, "clip_norm": opt.clip_norm, "t": opt.t,
        }
    return meta


def save_checkpoint(path, params: ModelParams, vocab: Vocab,
                    opt: Optional[AdamState] = None, extra: dict = None):
    arrays = {f"param.{k}": v for k, v in params.arrays.items()}
    if opt is not None:
        arrays.update({f"adam.m.{k}": v for k, v in opt.m.items()})
        arrays.update({f"adam.v.{k}": v for k, v in opt.v.items()})
    meta = json.dumps(_meta(params, vocab, opt, extra), sort_keys=True)
    np.savez(path, __meta__=np.array(meta), **arrays)


def load_checkpoint(path) -> Checkpoint:
    with np.load(path, allow_pickle=False) as z:
        meta = json.loads(str(z["__meta__"]))
        if meta["format"] != FORMAT_VERSION:
            raise ValueError(f"unsupported checkpoint format {meta['format']}")
        dims = Dims(**meta["dims"])
        arrays = {k[len("param."):]: z[k] for k in z.files if k.startswith("param.")}
        params = ModelParams(dims, arrays, step=meta["step"])
        vocab = Vocab(meta["vocab"]["tokens"], meta["vocab"]["langs"])
        opt = None
        if "adam" in meta:
            opt = AdamState(**meta["adam"])
            opt.m = {k[len("adam.m."):]: z[k] for k in z.files if k.startswith("adam.m.")}
            opt.v = {k[len("adam.v."):]: z[k] for k in z.files if k.startswith("adam.v.")}
        return Checkpoint(params, vocab, opt, meta.get("extra", {}))


def state_hash(params: ModelParams, vocab: Vocab,
               opt: Optional[AdamState] = None, extra: dict = None) -> str:
    """Hex digest that changes iff any parameter, moment or metadata changes."""
    h = hashlib.sha256()
    h.update(json.dumps(_meta(params, vocab, opt, extra), sort_keys=True).encode())
    arrays = {f"param.{k}": v for k, v in params.arrays.items()}
    if opt is not None:
        arrays.update({f"adam.m.{k}": v for k, v in opt.m.items()})
        arrays.update({f"adam.v.{k}": v for k, v in opt.v.items()})
    for name in sorted(arrays):
        a = np.ascontiguousarray(arrays[name])
        h.update(name.encode())
        h.update(str(a.dtype).encode())
        h.update(str(a.shape).encode())
        h.update(a.tobytes())
    return h.hexdigest()


def checkpoint_hash(path) -> str:
    ck = load_checkpoint(path)
    return state_hash(ck.params, ck.vocab, ck.opt, ck.extra)
