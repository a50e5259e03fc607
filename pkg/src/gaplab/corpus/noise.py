"""Input corruption for denoising auto-encoding."""

from dataclasses import dataclass

import numpy as np

from .types import Sentence


@dataclass(frozen=True)
class NoiseSpec:
    drop_prob: float = 0.1
    blank_prob: float = 0.1
    shuffle_window: int = 3

    def __post_init__(self):
        if not (0.0 <= self.drop_prob <= 1.0 and 0.0 <= self.blank_prob <= 1.0):
            raise ValueError("noise probabilities must be in [0, 1]")
        if self.shuffle_window < 0:
            raise ValueError("shuffle_window must be >= 0")


def apply_noise(s: Sentence, noise: NoiseSpec, rng: np.random.Generator, unk_id: int) -> Sentence:
    """Drop, blank and locally shuffle tokens.

    Each token is independently dropped with drop_prob, then replaced by unk
    with blank_prob; survivors are shuffled so nobody moves more than
    shuffle_window positions. If everything got dropped, one uniformly chosen
    token is kept so the result is never empty.
    """
    n = len(s.token_ids)
    keep = rng.random(n) >= noise.drop_prob
    if not keep.any():
        keep[int(rng.integers(n))] = True
    ids = [tid for tid, k in zip(s.token_ids, keep) if k]
    blanks = rng.random(len(ids)) < noise.blank_prob
    ids = [unk_id if b else tid for tid, b in zip(ids, blanks)]
    if noise.shuffle_window > 0 and len(ids) > 1:
        # sort by perturbed position; offsets < 1 apart keep displacement bounded
        scores = np.arange(len(ids)) + rng.uniform(0, noise.shuffle_window + 1, size=len(ids))
        order = np.argsort(scores, kind="stable")
        ids = [ids[i] for i in order]
    return Sentence(tuple(ids), s.lang)
