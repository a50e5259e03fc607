"""Adam with bias correction and optional global-norm gradient clipping."""

from dataclasses import dataclass, field

import numpy as np


class NonFiniteGradient(RuntimeError):
    """Raised before any parameter is touched when a gradient has NaN/inf."""


@dataclass
class AdamState:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    clip_norm: float = 5.0   # 0 disables clipping
    t: int = 0
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)

    def _ensure(self, arrays):
        for name, a in arrays.items():
            if name not in self.m:
                self.m[name] = np.zeros_like(a)
                self.v[name] = np.zeros_like(a)


def global_norm(grads) -> float:
    total = 0.0
    for g in grads.values():
        total += float((g.astype(np.float64) ** 2).sum())
    return float(np.sqrt(total))


def apply_update(params, grads, state: AdamState) -> float:
    """One Adam step in place. Returns the pre-clip global gradient norm.

    A gradient dict of exact zeros leaves fresh moments at zero and therefore
    the parameters untouched, which the trainer relies on when a loss term is
    switched off.
    """
    for name, g in grads.items():
        if not np.isfinite(g).all():
            raise NonFiniteGradient(f"non-finite gradient in {name!r}")
    state._ensure(params.arrays)
    norm = global_norm(grads)
    scale = 1.0
    if state.clip_norm > 0 and norm > state.clip_norm:
        scale = state.clip_norm / norm
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1**state.t
    c2 = 1.0 - b2**state.t
    for name, a in params.arrays.items():
        g = grads[name] * scale
        m = state.m[name]
        v = state.v[name]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        a -= state.lr * (m / c1) / (np.sqrt(v / c2) + state.eps)
    params.step += 1
    return norm
