"""Content similarity between corpora via chunked TF-IDF vectors.

Both corpora are cut into fixed-size chunks of sentences; each chunk becomes
a TF-IDF vector (idf = ln(N/df) + 1 over the union of chunks, L2-normalized)
after removing the most frequent tokens pooled over both corpora. A corpus is
summarized by its normalized centroid and compared by cosine. Topically
aligned corpora score near one regardless of surface vocabulary overlap in
the common words, because those are exactly the tokens the stoplist removes.
"""

import math
from collections import Counter
from dataclasses import dataclass
from typing import List, Sequence, Tuple


def _toks(s) -> tuple:
    return tuple(getattr(s, "token_ids", s))


def pooled_stoplist(corpora: Sequence[Sequence], n_stop: int = 50) -> set:
    """The n_stop most frequent tokens over all corpora (count desc, then repr)."""
    counts = Counter()
    for corpus in corpora:
        for s in corpus:
            counts.update(_toks(s))
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], repr(kv[0])))
    return {t for t, _ in ranked[:n_stop]}


def _chunks(corpus, chunk_size: int) -> List[Counter]:
    out = []
    for i in range(0, len(corpus), chunk_size):
        c = Counter()
        for s in corpus[i : i + chunk_size]:
            c.update(_toks(s))
        out.append(c)
    return out


def _centroid(chunks: List[Counter], idf: dict, stop: set) -> dict:
    acc: dict = {}
    used = 0
    for c in chunks:
        vec = {t: n * idf[t] for t, n in c.items() if t not in stop and t in idf}
        norm = math.sqrt(sum(v * v for v in vec.values()))
        if norm == 0.0:
            continue
        used += 1
        for t, v in vec.items():
            acc[t] = acc.get(t, 0.0) + v / norm
    if used == 0:
        raise ValueError("corpus reduces to stopwords only")
    norm = math.sqrt(sum(v * v for v in acc.values()))
    return {t: v / norm for t, v in acc.items()}


@dataclass(frozen=True)
class ContentSimilarity:
    cosine: float
    n_chunks_a: int
    n_chunks_b: int
    n_stopwords: int


def content_similarity(corpus_a, corpus_b, chunk_size: int = 100,
                       n_stop: int = 50) -> ContentSimilarity:
    """Cosine between the normalized TF-IDF centroids of two corpora."""
    if not corpus_a or not corpus_b:
        raise ValueError("content similarity needs two non-empty corpora")
    stop = pooled_stoplist([corpus_a, corpus_b], n_stop)
    ca = _chunks(corpus_a, chunk_size)
    cb = _chunks(corpus_b, chunk_size)
    df = Counter()
    for c in ca + cb:
        df.update({t for t in c if t not in stop})
    n = len(ca) + len(cb)
    idf = {t: math.log(n / d) + 1.0 for t, d in df.items()}
    va = _centroid(ca, idf, stop)
    vb = _centroid(cb, idf, stop)
    cos = sum(v * vb[t] for t, v in va.items() if t in vb)
    return ContentSimilarity(cos, len(ca), len(cb), len(stop))


def content_grid(out_src_ori, out_tgt_ori, nat_src_ori, nat_tgt_ori,
                 chunk_size: int = 100, n_stop: int = 50) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """2x2 cosine grid: rows are output splits, columns natural pools.

    Entry [i][j] compares translation outputs for origin split i against the
    natural corpus matched (j == i) or crossed (j != i) with that origin.
    """
    return (
        (content_similarity(out_src_ori, nat_src_ori, chunk_size, n_stop).cosine,
         content_similarity(out_src_ori, nat_tgt_ori, chunk_size, n_stop).cosine),
        (content_similarity(out_tgt_ori, nat_src_ori, chunk_size, n_stop).cosine,
         content_similarity(out_tgt_ori, nat_tgt_ori, chunk_size, n_stop).cosine),
    )
