"""Parameter containers and deterministic initialization.

Parameters live in a flat name -> ndarray dict so the optimizer, checkpointing
and the gradient checker can treat the model as a single pytree-like bag of
arrays without knowing the architecture.
"""

from dataclasses import dataclass, field

import numpy as np

from ..rng import spawn


@dataclass(frozen=True)
class Dims:
    """Architecture sizes. ffn defaults to 2*hidden when left at 0."""

    hidden: int = 64
    enc_layers: int = 2
    dec_layers: int = 2
    ffn: int = 0
    max_len: int = 64
    heads: int = 1
    dtype: str = "float64"

    def __post_init__(self):
        if self.ffn == 0:
            object.__setattr__(self, "ffn", 2 * self.hidden)
        if self.heads != 1:
            raise ValueError("only single-head attention is implemented")
        if self.hidden < 2 or self.max_len < 4:
            raise ValueError(f"degenerate dims: {self}")

    @property
    def np_dtype(self):
        return np.dtype(self.dtype)


def param_count(dims: Dims, vocab_size: int) -> int:
    """Closed-form parameter count; checked against the actual dict in tests.

    Per encoder layer: 4 attention mats (h*h), MLP (h*f + f + f*h + h), two
    LayerNorms (2h each). Decoder layers add a second attention block and a
    third LayerNorm. Embeddings are shared between encoder and decoder; the
    output projection is untied.
    """
    h, f = dims.hidden, dims.ffn
    attn = 4 * h * h
    mlp = h * f + f + f * h + h
    ln = 2 * h
    enc = dims.enc_layers * (attn + mlp + 2 * ln)
    dec = dims.dec_layers * (2 * attn + mlp + 3 * ln)
    emb = vocab_size * h + dims.max_len * h
    out = h * vocab_size + vocab_size
    final_lns = 2 * ln
    return emb + enc + dec + final_lns + out


def param_names(dims: Dims):
    """Canonical ordered list of array names for a model of these dims."""
    names = ["tok_emb", "pos_emb"]
    for i in range(dims.enc_layers):
        p = f"enc{i}"
        names += [f"{p}.ln1.g", f"{p}.ln1.b"]
        names += [f"{p}.attn.{w}" for w in ("wq", "wk", "wv", "wo")]
        names += [f"{p}.ln2.g", f"{p}.ln2.b", f"{p}.mlp.w1", f"{p}.mlp.b1",
                  f"{p}.mlp.w2", f"{p}.mlp.b2"]
    for i in range(dims.dec_layers):
        p = f"dec{i}"
        names += [f"{p}.ln1.g", f"{p}.ln1.b"]
        names += [f"{p}.self.{w}" for w in ("wq", "wk", "wv", "wo")]
        names += [f"{p}.ln2.g", f"{p}.ln2.b"]
        names += [f"{p}.cross.{w}" for w in ("wq", "wk", "wv", "wo")]
        names += [f"{p}.ln3.g", f"{p}.ln3.b", f"{p}.mlp.w1", f"{p}.mlp.b1",
                  f"{p}.mlp.w2", f"{p}.mlp.b2"]
    names += ["enc_ln.g", "enc_ln.b", "dec_ln.g", "dec_ln.b", "out.w", "out.b"]
    return names


def _shape_of(name: str, dims: Dims, vocab_size: int):
    h, f = dims.hidden, dims.ffn
    if name == "tok_emb":
        return (vocab_size, h)
    if name == "pos_emb":
        return (dims.max_len, h)
    if name == "out.w":
        return (h, vocab_size)
    if name == "out.b":
        return (vocab_size,)
    leaf = name.split(".", 1)[1]
    if leaf.startswith("ln") or name.startswith(("enc_ln", "dec_ln")):
        return (h,)
    if leaf in ("mlp.w1",):
        return (h, f)
    if leaf in ("mlp.b1",):
        return (f,)
    if leaf in ("mlp.w2",):
        return (f, h)
    if leaf in ("mlp.b2",):
        return (h,)
    return (h, h)  # attention projections


@dataclass
class ModelParams:
    dims: Dims
    arrays: dict = field(default_factory=dict)
    step: int = 0

    def copy(self) -> "ModelParams":
        """Deep copy; used to freeze the generator model inside a step."""
        return ModelParams(self.dims, {k: v.copy() for k, v in self.arrays.items()}, self.step)

    def zeros_like(self) -> dict:
        return {k: np.zeros_like(v) for k, v in self.arrays.items()}

    @property
    def n_params(self) -> int:
        return sum(int(v.size) for v in self.arrays.values())


def init_model(dims: Dims, vocab_size: int, seed: int) -> ModelParams:
    """Glorot-normal weights, N(0, 0.1) embeddings, identity LayerNorms.

    Arrays are drawn in the canonical name order so the same (dims, vocab,
    seed) triple always yields the same parameters.
    """
    rng = spawn(seed, "init")
    dt = dims.np_dtype
    arrays = {}
    for name in param_names(dims):
        shape = _shape_of(name, dims, vocab_size)
        if name in ("tok_emb", "pos_emb"):
            a = rng.normal(0.0, 0.1, shape)
        elif name.endswith((".g",)):
            a = np.ones(shape)
        elif name.endswith((".b", ".b1", ".b2")) or name == "out.b":
            a = np.zeros(shape)
        else:
            std = np.sqrt(2.0 / (shape[0] + shape[1]))
            a = rng.normal(0.0, std, shape)
        arrays[name] = np.asarray(a, dtype=dt)
    params = ModelParams(dims, arrays)
    expect = param_count(dims, vocab_size)
    if params.n_params != expect:
        raise AssertionError(f"parameter accounting drifted: {params.n_params} != {expect}")
    return params
