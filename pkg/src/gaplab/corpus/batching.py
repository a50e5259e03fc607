"""Token-budget batching with length bucketing."""

from typing import List, Sequence

import numpy as np

from .types import Sentence


class BatchingError(ValueError):
    pass


def make_batches(
    sentences: Sequence[Sentence], tokens_per_batch: int, rng: np.random.Generator
) -> List[List[Sentence]]:
    """Partition sentences into batches whose token sums stay under the budget.

    Every sentence appears exactly once. Sentences are shuffled, stably sorted
    by length (so ties keep their shuffled order and batches stay padded-dense),
    greedily packed under tokens_per_batch, and the batch order is shuffled.
    """
    for i, s in enumerate(sentences):
        if len(s) > tokens_per_batch:
            raise BatchingError(
                f"sentence #{i} has {len(s)} tokens, over the {tokens_per_batch}-token batch budget"
            )
    order = rng.permutation(len(sentences))
    shuffled = [sentences[i] for i in order]
    shuffled.sort(key=len)  # stable: equal lengths keep shuffled order
    batches: List[List[Sentence]] = []
    cur: List[Sentence] = []
    cur_tokens = 0
    for s in shuffled:
        if cur and cur_tokens + len(s) > tokens_per_batch:
            batches.append(cur)
            cur, cur_tokens = [], 0
        cur.append(s)
        cur_tokens += len(s)
    if cur:
        batches.append(cur)
    batch_order = rng.permutation(len(batches))
    return [batches[i] for i in batch_order]
