"""Cross-lingual embedding initialization from co-occurrence statistics.

Unsupervised translation needs the two languages to start in a loosely shared
representation space; full-scale systems inherit this from large pretrained
models. The desk-scale substitute uses the oldest trick in the bilingual
lexicon literature: tokens whose surface form appears in *both* monolingual
pools (digits, names, punctuation and the like) serve as anchor contexts.
Every token is described by its directional co-occurrence distribution over
those anchors, which is comparable across languages; a low-rank SVD of that
signature (padded with the ordinary PPMI matrix so same-language tokens stay
distinguishable) yields the initial embedding table. No parallel data is
involved.
"""

import numpy as np

from ..rng import spawn

OFFSETS = (-2, -1, 1, 2)


def _directional_counts(corpora, vocab_size):
    counts = {o: np.zeros((vocab_size, vocab_size)) for o in OFFSETS}
    seen = [np.zeros(vocab_size, dtype=bool) for _ in corpora]
    for ci, corpus in enumerate(corpora):
        for sent in corpus:
            ids = tuple(getattr(sent, "token_ids", sent))
            for i, w in enumerate(ids):
                seen[ci][w] = True
                for o in OFFSETS:
                    j = i + o
                    if 0 <= j < len(ids):
                        counts[o][w, ids[j]] += 1.0
    return counts, seen


def _row_normed(m):
    return m / np.maximum(np.linalg.norm(m, axis=1, keepdims=True), 1e-12)


def induce_word_table(emb: np.ndarray, corpora) -> np.ndarray:
    """Nearest-neighbour word translation table from a shared embedding space.

    Returns an int array t of length vocab_size with t[i] = translation of
    token i. Tokens seen in both corpora (or in neither) map to themselves;
    tokens exclusive to one side map to their cosine nearest neighbour among
    the tokens exclusive to the other side. Ties resolve to the lowest id.
    """
    if len(corpora) != 2:
        raise ValueError("word table induction needs exactly two corpora")
    seen = np.zeros((2, emb.shape[0]), dtype=bool)
    for i, corpus in enumerate(corpora):
        for sent in corpus:
            seen[i, list(sent.token_ids)] = True
    table = np.arange(emb.shape[0])
    unit = _row_normed(emb)
    for here, there in ((0, 1), (1, 0)):
        src = seen[here] & ~seen[there]
        tgt = seen[there] & ~seen[here]
        if not src.any():
            continue
        if not tgt.any():
            raise ValueError("one-sided vocabulary: no candidate translations")
        sims = unit[src] @ unit[tgt].T
        table[np.flatnonzero(src)] = np.flatnonzero(tgt)[np.argmax(sims, axis=1)]
    return table


def cooc_embeddings(corpora, vocab_size: int, dim: int, seed: int,
                    ppmi_weight: float = 0.5, target_std: float = 0.1) -> np.ndarray:
    """(vocab_size, dim) float64 embedding table; see the module docstring.

    corpora: one sentence collection per language. Tokens absent from every
    corpus (specials, language tags) get small random vectors from the seed.
    """
    counts, seen_per = _directional_counts(corpora, vocab_size)
    seen = np.logical_or.reduce(seen_per)
    anchors = np.logical_and.reduce(seen_per)
    if not anchors.any():
        raise ValueError("no anchor tokens: the corpora share no surface forms")

    blocks = []
    for o in OFFSETS:
        m = counts[o][:, anchors]
        blocks.append(m / np.maximum(m.sum(axis=1, keepdims=True), 1.0))
    signature = _row_normed(np.concatenate(blocks, axis=1))

    total_counts = sum(counts.values())
    tot = total_counts.sum()
    row = total_counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        pmi = np.log(total_counts * tot / (row * row.T))
    ppmi = np.where(np.isfinite(pmi), np.maximum(pmi, 0.0), 0.0)

    m = np.concatenate([signature, ppmi_weight * _row_normed(ppmi)], axis=1)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    k = min(dim, u.shape[1])
    emb = np.zeros((vocab_size, dim))
    emb[:, :k] = u[:, :k] * np.sqrt(s[:k])
    spread = emb[seen].std()
    if spread > 0:
        emb *= target_std / spread
    rng = spawn(seed, "emb_unseen")
    emb[~seen] = rng.normal(0.0, target_std, (int((~seen).sum()), dim))
    return emb
