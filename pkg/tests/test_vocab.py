"""Shared vocabulary construction and encoding."""

import pytest

from gaplab.corpus.vocab import SPECIALS, Vocab, build_vocab, lang_tag


def test_ids_are_dense_and_invertible(tiny_vocab):
    v = tiny_vocab
    for i in range(len(v)):
        assert v.id_of(v.token_of(i)) == i
    assert len({v.token_of(i) for i in range(len(v))}) == len(v)


def test_specials_and_tags_present_once(tiny_vocab):
    toks = tiny_vocab.tokens
    for sp in SPECIALS:
        assert toks.count(sp) == 1
    assert toks.count(lang_tag("aa")) == 1
    assert toks.count(lang_tag("bb")) == 1
    assert tiny_vocab.pad_id == 0


def test_shared_surface_forms_share_ids():
    corpus_a = [["commontok", "a-only"]]
    corpus_b = [["commontok", "b-only"]]
    v = build_vocab([corpus_a, corpus_b], ["aa", "bb"])
    assert v.id_of("commontok") == v.id_of("commontok")
    assert len(v) == len(SPECIALS) + 2 + 3  # specials, two tags, three surfaces


def test_frequency_then_lexicographic_order():
    corpus = [["b", "c", "c", "a", "b", "c"]]
    v = build_vocab([corpus], ["aa"])
    words = v.tokens[len(SPECIALS) + 1 :]
    assert words == ["c", "b", "a"]


def test_min_count_drops_hapaxes_to_unk():
    corpus = [["kept", "kept", "rare"]]
    v = build_vocab([corpus], ["aa"], min_count=2)
    assert "kept" in v
    assert "rare" not in v
    enc = v.encode(["kept", "rare"], "aa")
    assert enc.token_ids == (v.id_of("kept"), v.unk_id)


def test_encode_decode_round_trip(tiny_vocab):
    toks = ["w3", "w0", "w7"]
    s = tiny_vocab.encode(toks, "bb")
    assert s.lang == "bb"
    assert tiny_vocab.decode(s) == toks


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        build_vocab([], ["aa"])
    with pytest.raises(ValueError):
        build_vocab([[]], ["aa"])


def test_vocab_validates_required_tokens():
    with pytest.raises(ValueError):
        Vocab(tokens=["just", "words"], langs=["aa"])
