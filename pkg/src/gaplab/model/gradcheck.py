"""Central finite-difference verification of the analytic gradients.

For each parameter array we probe a handful of random coordinates plus the
coordinate with the largest analytic gradient, nudge the parameter by +-eps,
and compare (f(x+eps) - f(x-eps)) / 2 eps against the backward pass. Sampling
keeps a full check cheap enough to run on many random model/batch instances;
the unit tests additionally run one tiny model exhaustively.
"""

from dataclasses import dataclass, field

import numpy as np

from .network import seq2seq_loss


@dataclass
class GradCheckReport:
    worst_rel: float = 0.0
    worst_name: str = ""
    n_coords: int = 0
    per_array: dict = field(default_factory=dict)

    def ok(self, tol: float) -> bool:
        return self.worst_rel <= tol


def _rel_err(a: float, b: float) -> float:
    denom = max(1e-8, abs(a) + abs(b))
    return abs(a - b) / denom


def check_gradients(params, vocab, srcs, tgts, tgt_lang, rng,
                    coords_per_array: int = 2, eps: float = 1e-5,
                    exhaustive: bool = False) -> GradCheckReport:
    res = seq2seq_loss(params, vocab, srcs, tgts, tgt_lang)
    report = GradCheckReport()

    def loss_at():
        return seq2seq_loss(params, vocab, srcs, tgts, tgt_lang,
                            want_grads=False).loss

    for name, a in params.arrays.items():
        g = res.grads[name]
        flat = a.reshape(-1)
        gflat = g.reshape(-1)
        if exhaustive:
            idxs = np.arange(flat.size)
        else:
            picks = rng.choice(flat.size, size=min(coords_per_array, flat.size),
                               replace=False)
            idxs = np.unique(np.append(picks, int(np.abs(gflat).argmax())))
        worst = 0.0
        for i in idxs:
            keep = flat[i]
            flat[i] = keep + eps
            up = loss_at()
            flat[i] = keep - eps
            down = loss_at()
            flat[i] = keep
            fd = (up - down) / (2.0 * eps)
            rel = _rel_err(fd, float(gflat[i]))
            worst = max(worst, rel)
            report.n_coords += 1
        report.per_array[name] = worst
        if worst > report.worst_rel:
            report.worst_rel = worst
            report.worst_name = name
    return report
