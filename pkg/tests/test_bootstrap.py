"""Paired bootstrap against exhaustive enumeration.

With 3 sentences there are only 3^3 = 27 equiprobable resamples, so the true
win rate can be computed exactly by brute force and the sampled estimate has
to land within the usual 2/sqrt(n) Monte Carlo band.
"""

import itertools

import pytest

from gaplab.evaluation.bleu import corpus_bleu
from gaplab.evaluation.bootstrap import BootstrapResult, paired_bootstrap

REFS = [
    ["t1", "t2", "t3", "t4", "t5"],
    ["u1", "u2", "u3", "u4"],
    ["v1", "v2", "v3", "v4"],
]
# system A: two perfect sentences, one rough; system B: the other way around
HYPS_A = [
    ["t1", "t2", "t3", "t4", "t5"],
    ["u1", "u2", "u3", "x"],
    ["v1", "v2", "v3", "v4"],
]
HYPS_B = [
    ["t1", "t2", "t3", "x", "t5"],
    ["u1", "u2", "u3", "u4"],
    ["v1", "v2", "x", "v4"],
]


def enumerate_win_rate(hyps_a, hyps_b, refs):
    """Exact win rate of A over all index resamples, ties counting for neither."""
    n = len(refs)
    wins = ties = 0
    for idx in itertools.product(range(n), repeat=n):
        a = corpus_bleu([hyps_a[i] for i in idx], [refs[i] for i in idx]).bleu
        b = corpus_bleu([hyps_b[i] for i in idx], [refs[i] for i in idx]).bleu
        if a > b:
            wins += 1
        elif a == b:
            ties += 1
    return wins / n**n, ties


def test_matches_exhaustive_enumeration():
    exact, _ = enumerate_win_rate(HYPS_A, HYPS_B, REFS)
    assert 0.0 < exact < 1.0  # the toy set is chosen to be genuinely contested
    n = 3000
    r = paired_bootstrap(HYPS_A, HYPS_B, REFS, n_samples=n, seed=7)
    assert abs(r.win_rate_a - exact) <= 2.0 / n**0.5


def test_seed_determinism():
    r1 = paired_bootstrap(HYPS_A, HYPS_B, REFS, n_samples=500, seed=3)
    r2 = paired_bootstrap(HYPS_A, HYPS_B, REFS, n_samples=500, seed=3)
    assert r1 == r2
    r3 = paired_bootstrap(HYPS_A, HYPS_B, REFS, n_samples=500, seed=4)
    assert (r1.wins_a, r1.wins_b) != (r3.wins_a, r3.wins_b) or r1.ties != r3.ties


def test_identical_systems_tie_everywhere():
    r = paired_bootstrap(HYPS_A, HYPS_A, REFS, n_samples=200, seed=0)
    assert r.wins_a == 0 and r.wins_b == 0
    assert r.ties == 200
    assert r.win_rate_a == 0.0
    assert r.p_value == 1.0
    assert not r.significant


def test_strict_dominance():
    # perfect hypotheses against zero-overlap junk: every resample is a win
    junk = [["z", "z", "z", "z"] for _ in REFS]
    r = paired_bootstrap(REFS, junk, REFS, n_samples=200, seed=1)
    assert (r.wins_a, r.wins_b, r.ties) == (200, 0, 0)
    assert r.p_value == 0.0
    assert r.significant


def test_win_counts_partition_samples():
    r = paired_bootstrap(HYPS_A, HYPS_B, REFS, n_samples=777, seed=9)
    assert r.wins_a + r.wins_b + r.ties == r.n_samples == 777
    assert isinstance(r, BootstrapResult)


def test_misaligned_inputs_rejected():
    with pytest.raises(ValueError):
        paired_bootstrap(HYPS_A[:2], HYPS_B, REFS)
    with pytest.raises(ValueError):
        paired_bootstrap([], [], [])
