"""Co-occurrence embeddings and the induced word-translation table."""

import numpy as np
import pytest

from gaplab.corpus.synth import gen_synthetic_pair, make_spec
from gaplab.corpus.types import Sentence
from gaplab.model.embeddings import cooc_embeddings, induce_word_table


def sents(lang, rows):
    return [Sentence(tuple(r), lang) for r in rows]


def test_table_maps_shared_and_unseen_tokens_to_themselves():
    emb = np.eye(6)
    corp_a = sents("aa", [[0, 1]])
    corp_b = sents("bb", [[0, 2]])
    table = induce_word_table(emb, [corp_a, corp_b])
    assert table[0] == 0    # seen on both sides
    assert table[4] == 4    # seen on neither
    assert table[5] == 5


def test_exclusive_tokens_map_by_cosine():
    # id 1 is A-only, ids 2 and 3 are B-only; the embedding puts 1 next to 2
    emb = np.array([
        [1.0, 0.0],    # 0: shared anchor
        [0.9, 0.1],    # 1: A-only
        [0.8, 0.2],    # 2: B-only, close to 1
        [0.0, 1.0],    # 3: B-only, far from 1
    ])
    corp_a = sents("aa", [[0, 1, 1]])
    corp_b = sents("bb", [[0, 2], [3]])
    table = induce_word_table(emb, [corp_a, corp_b])
    assert table[1] == 2
    assert table[2] == 1   # the reverse direction has a single candidate anyway
    assert table[3] == 1


def test_corpora_count_validated():
    with pytest.raises(ValueError):
        induce_word_table(np.eye(3), [sents("aa", [[0]])])


def test_one_sided_vocabulary_rejected():
    # B introduces nothing beyond A, so A's exclusive token has no candidates
    emb = np.eye(3)
    corp_a = sents("aa", [[0, 1, 2]])
    corp_b = sents("bb", [[0]])
    with pytest.raises(ValueError, match="one-sided"):
        induce_word_table(emb, [corp_a, corp_b])


@pytest.fixture(scope="module")
def synth():
    spec = make_spec(seed=13, n_common=8, n_anchor_common=4, n_content=10,
                     n_entities=4, sentence_length_range=(4, 9))
    data = gen_synthetic_pair(spec, {"monoA": 400, "monoB": 400,
                                     "test_src_ori": 2, "test_tgt_ori": 2})
    return data


def test_cooc_embeddings_shape_and_determinism(synth):
    corpora = [synth.monoA.sentences, synth.monoB.sentences]
    e1 = cooc_embeddings(corpora, len(synth.vocab), 16, seed=0)
    e2 = cooc_embeddings(corpora, len(synth.vocab), 16, seed=0)
    assert e1.shape == (len(synth.vocab), 16)
    assert np.array_equal(e1, e2)
    assert np.isfinite(e1).all()


def test_induced_table_recovers_entity_identity(synth):
    # entities share surface forms across the pair, so they are anchors and
    # must stay fixed points of the table
    corpora = [synth.monoA.sentences, synth.monoB.sentences]
    emb = cooc_embeddings(corpora, len(synth.vocab), 24, seed=1)
    table = induce_word_table(emb, corpora)
    for name in synth.spec.entity_inventory["aa"]:
        i = synth.vocab.id_of(name)
        assert table[i] == i


def test_induced_table_lands_in_the_right_language(synth):
    # A-exclusive surface forms must map to B-exclusive ids
    corpora = [synth.monoA.sentences, synth.monoB.sentences]
    emb = cooc_embeddings(corpora, len(synth.vocab), 24, seed=1)
    table = induce_word_table(emb, corpora)
    seen_a = {t for s in synth.monoA.sentences for t in s.token_ids}
    seen_b = {t for s in synth.monoB.sentences for t in s.token_ids}
    a_only = seen_a - seen_b
    b_only = seen_b - seen_a
    assert a_only, "fixture should have language-exclusive vocabulary"
    for i in a_only:
        assert table[i] in b_only
