"""Paired bootstrap resampling for BLEU system comparison.

Per-sentence sufficient statistics (clipped n-gram matches, n-gram totals,
lengths) are resampled with replacement; corpus BLEU is recomputed on each
resample for both systems from the summed statistics, so a sample costs a few
vector sums rather than a rescoring pass. Wins are strict inequalities and
ties are reported separately rather than split.
"""

from dataclasses import dataclass

import numpy as np

from ..rng import spawn
from .bleu import MAX_N, sentence_stats


@dataclass(frozen=True)
class BootstrapResult:
    n_samples: int
    wins_a: int
    wins_b: int
    ties: int
    win_rate_a: float      # wins_a / n_samples; ties count against neither
    p_value: float         # 1 - win_rate_a

    @property
    def significant(self) -> bool:
        return self.p_value < 0.05


def _stats_matrix(hyps, refs):
    n = len(hyps)
    matches = np.zeros((n, MAX_N))
    totals = np.zeros((n, MAX_N))
    lens = np.zeros((n, 2))
    for i, (h, r) in enumerate(zip(hyps, refs)):
        m, t, hl, rl = sentence_stats(h, r)
        matches[i] = m
        totals[i] = t
        lens[i] = (hl, rl)
    return matches, totals, lens


def _bleu_vec(matches, totals, lens):
    """Corpus BLEU for each row of summed statistics. Shape (samples,)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        prec = np.where(totals > 0, matches / np.maximum(totals, 1), 0.0)
        ok = (prec > 0).all(axis=1) & (lens[:, 0] > 0)
        log_mean = np.where(ok, np.log(np.maximum(prec, 1e-300)).mean(axis=1), 0.0)
        hyp, ref = lens[:, 0], lens[:, 1]
        bp = np.where(hyp > ref, 1.0, np.exp(1.0 - ref / np.maximum(hyp, 1)))
    return np.where(ok, 100.0 * bp * np.exp(log_mean), 0.0)


def paired_bootstrap(hyps_a, hyps_b, refs, n_samples: int = 1000,
                     seed: int = 0) -> BootstrapResult:
    if not (len(hyps_a) == len(hyps_b) == len(refs)) or not refs:
        raise ValueError("system outputs and references must align and be non-empty")
    ma, ta, la = _stats_matrix(hyps_a, refs)
    mb, tb, lb = _stats_matrix(hyps_b, refs)
    n = len(refs)
    rng = spawn(seed, "bootstrap")
    idx = rng.integers(0, n, size=(n_samples, n))
    bleu_a = _bleu_vec(ma[idx].sum(axis=1), ta[idx].sum(axis=1), la[idx].sum(axis=1))
    bleu_b = _bleu_vec(mb[idx].sum(axis=1), tb[idx].sum(axis=1), lb[idx].sum(axis=1))
    wins_a = int((bleu_a > bleu_b).sum())
    wins_b = int((bleu_b > bleu_a).sum())
    ties = n_samples - wins_a - wins_b
    win_rate = wins_a / n_samples
    return BootstrapResult(n_samples, wins_a, wins_b, ties, win_rate, 1.0 - win_rate)
