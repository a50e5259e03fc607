"""Synthetic language pairs with a ground-truth oracle translator.

A language is a family of per-topic Markov chains over three word classes:
high-frequency common words (stopword-like), topic content words, and a closed
entity inventory whose surface forms are shared across the two languages (the
same anchoring role that shared subwords play for real joint vocabularies).
Sentences therefore carry both topical content signal and local n-gram
structure, which is what the downstream style/content diagnostics measure.

The oracle translation applies a bijective lexicon, a blockwise local
reordering, and appends a per-language "translated text" marker token. The
marker is involutive: translating a marker-terminated sentence strips the
marker and inverts the transform, so a round trip is the identity.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..rng import spawn
from .types import MonoCorpus, Origin, Pair, ParallelSet, Provenance, Sentence
from .vocab import Vocab, build_vocab

START = "<s>"


class SynthConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ReorderRule:
    """Blockwise local permutation. Incomplete trailing blocks are left in place."""

    window: int = 4
    pattern: Tuple[int, ...] = (1, 0, 2, 3)

    def __post_init__(self):
        if self.window < 1 or sorted(self.pattern) != list(range(self.window)):
            raise SynthConfigError(f"pattern {self.pattern} is not a permutation of range({self.window})")

    @property
    def inverse_pattern(self) -> Tuple[int, ...]:
        inv = [0] * self.window
        for i, p in enumerate(self.pattern):
            inv[p] = i
        return tuple(inv)

    def _apply(self, toks: Sequence, pattern: Sequence[int]) -> List:
        out = list(toks)
        w = self.window
        for start in range(0, len(toks) - w + 1, w):
            block = toks[start : start + w]
            for i, p in enumerate(pattern):
                out[start + i] = block[p]
        return out

    def apply(self, toks: Sequence) -> List:
        return self._apply(toks, self.pattern)

    def invert(self, toks: Sequence) -> List:
        return self._apply(toks, self.inverse_pattern)


@dataclass
class SynthSpec:
    """Generative definition of one synthetic language pair plus its oracle."""

    seed: int
    langs: Tuple[str, str] = ("aa", "bb")
    topic_mixtures: Dict[str, Tuple[float, ...]] = field(default_factory=dict)
    common_words: Dict[str, List[str]] = field(default_factory=dict)
    content_words: Dict[str, List[List[str]]] = field(default_factory=dict)  # [lang][topic]
    entity_inventory: Dict[str, List[str]] = field(default_factory=dict)
    entity_topics: List[int] = field(default_factory=list)
    lexicon: Dict[str, str] = field(default_factory=dict)  # langs[0] surface -> langs[1] surface
    reorder_rule: ReorderRule = field(default_factory=ReorderRule)
    markers: Optional[Dict[str, str]] = None  # suffix rule; None disables
    sentence_length_range: Tuple[int, int] = (4, 20)
    # chain shape knobs
    p_common: float = 0.35
    p_entity: float = 0.12
    chain_strength: float = 0.8
    n_pref: int = 4
    entity_topic_affinity: float = 1.0  # probability mass on in-topic entities

    def __post_init__(self):
        self.validate()
        self._lex_rev = {v: k for k, v in self.lexicon.items()}
        self._chains: Dict[Tuple[str, int], Dict[str, List[str]]] = {}
        self._common_weights: Dict[str, np.ndarray] = {}

    @property
    def n_topics(self) -> int:
        return len(next(iter(self.topic_mixtures.values())))

    def validate(self):
        a, b = self.langs
        for lang in self.langs:
            mix = self.topic_mixtures[lang]
            if abs(sum(mix) - 1.0) > 1e-9:
                raise SynthConfigError(f"topic mixture for {lang} sums to {sum(mix)}")
            if any(m < 0 for m in mix):
                raise SynthConfigError("negative topic weight")
        if len(self.entity_inventory[a]) != len(self.entity_inventory[b]):
            raise SynthConfigError("entity inventories must be aligned 1:1")
        if len(self.entity_topics) != len(self.entity_inventory[a]):
            raise SynthConfigError("entity_topics must cover the inventory")
        if len(set(self.lexicon.values())) != len(self.lexicon):
            raise SynthConfigError("lexicon is not a bijection")
        lo, hi = self.sentence_length_range
        if lo < 1 or hi < lo:
            raise SynthConfigError(f"bad sentence length range [{lo}, {hi}]")
        if not 0.0 <= self.entity_topic_affinity <= 1.0:
            raise SynthConfigError("entity_topic_affinity must lie in [0, 1]")
        # every generatable token must be translatable
        for w in self._all_words(a):
            if w not in self.lexicon:
                raise SynthConfigError(f"token {w!r} missing from lexicon")
        for w in self._all_words(b):
            if w not in self.lexicon.values():
                raise SynthConfigError(f"token {w!r} missing from lexicon range")

    def _all_words(self, lang: str) -> List[str]:
        words = list(self.common_words[lang])
        for pool in self.content_words[lang]:
            words.extend(pool)
        words.extend(self.entity_inventory[lang])
        if self.markers:
            words.append(self.markers[lang])
        return words

    def vocab_size(self, lang: str) -> int:
        return len(set(self._all_words(lang)))

    def topic_entities(self, lang: str, topic: int) -> List[str]:
        inv = self.entity_inventory[lang]
        return [e for e, t in zip(inv, self.entity_topics) if t == topic]

    # -- Markov chain tables, derived lazily and deterministically from the seed

    def _chain(self, lang: str, topic: int) -> Dict[str, List[str]]:
        """Preferred-successor table for one (language, topic) chain.

        The first language's tables are drawn from the seed; the second
        language's are the lexicon image of the first's. The two languages
        therefore share their conditional word statistics (as translations of
        real text do), and differ only in surface forms and topic mixture.
        """
        key = (lang, topic)
        if key not in self._chains:
            a, b = self.langs
            if lang == b:
                base = self._chain(a, topic)
                mirrored = {}
                for w, succ in base.items():
                    bw = w if w == START else self.lexicon[w]
                    mirrored[bw] = [self.lexicon[u] for u in succ]
                self._chains[key] = mirrored
            else:
                rng = spawn(self.seed, "chain", lang, topic)
                pool = list(self.content_words[lang][topic])
                keys = [START] + sorted(set(self.common_words[lang]) | set(pool) | set(self.entity_inventory[lang]))
                n = min(self.n_pref, len(pool))
                self._chains[key] = {w: [pool[i] for i in rng.choice(len(pool), size=n, replace=False)] for w in keys}
        return self._chains[key]

    def _common_dist(self, lang: str) -> np.ndarray:
        if lang not in self._common_weights:
            w = 1.0 / np.arange(1, len(self.common_words[lang]) + 1)
            self._common_weights[lang] = w / w.sum()
        return self._common_weights[lang]

    def _entity_dist(self, topic: int) -> np.ndarray:
        """Inventory-wide entity weights for a sentence of the given topic."""
        topics = np.asarray(self.entity_topics)
        in_topic = topics == topic
        n_in, n_out = int(in_topic.sum()), int((~in_topic).sum())
        if n_in == 0 or n_out == 0:
            return np.full(len(topics), 1.0 / len(topics))
        w = np.where(in_topic, self.entity_topic_affinity / n_in,
                     (1.0 - self.entity_topic_affinity) / n_out)
        return w / w.sum()

    # -- generation

    def gen_sentence(self, lang: str, rng: np.random.Generator) -> List[str]:
        topic = int(rng.choice(self.n_topics, p=np.asarray(self.topic_mixtures[lang], dtype=float)))
        lo, hi = self.sentence_length_range
        length = int(rng.integers(lo, hi + 1))
        chain = self._chain(lang, topic)
        commons = self.common_words[lang]
        contents = self.content_words[lang][topic]
        entities = self.entity_inventory[lang]
        toks: List[str] = []
        prev = START
        for _ in range(length):
            r = rng.random()
            if r < self.p_common:
                tok = commons[int(rng.choice(len(commons), p=self._common_dist(lang)))]
            elif entities and r < self.p_common + self.p_entity:
                tok = entities[int(rng.choice(len(entities), p=self._entity_dist(topic)))]
            else:
                pref = chain.get(prev)
                if pref and rng.random() < self.chain_strength:
                    tok = pref[int(rng.integers(len(pref)))]
                else:
                    tok = contents[int(rng.integers(len(contents)))]
            toks.append(tok)
            prev = tok
        return toks


def make_spec(
    seed: int,
    langs: Tuple[str, str] = ("aa", "bb"),
    n_topics: int = 2,
    n_common: int = 20,
    n_anchor_common: int = 6,
    n_content: int = 28,
    n_entities: int = 8,
    topic_skew: float = 0.85,
    reorder_rule: Optional[ReorderRule] = None,
    use_markers: bool = True,
    sentence_length_range: Tuple[int, int] = (4, 20),
    **knobs,
) -> SynthSpec:
    """Construct a fully explicit SynthSpec from size parameters.

    Language A's mixture puts topic_skew on topic 0, language B on the last
    topic, so the two monolingual pools are topically biased mirror images.
    Entities use identical surface forms in both languages and are assigned to
    topics round-robin. The n_anchor_common most frequent common words also
    share their surface across the pair, playing the role digits and
    punctuation play for real language pairs; the remaining common words map
    rank-to-rank so corpus frequencies agree with the lexicon.
    """
    if n_entities > 0 and n_entities < n_topics:
        raise SynthConfigError("vocab too small: need at least one entity per topic")
    if not 0 <= n_anchor_common <= n_common:
        raise SynthConfigError("n_anchor_common must lie within the common word budget")
    a, b = langs
    common = {
        l: [f"xc{i:02d}" if i < n_anchor_common else f"{l}_c{i:02d}" for i in range(n_common)]
        for l in langs
    }
    content = {l: [[f"{l}_t{t}w{i:02d}" for i in range(n_content)] for t in range(n_topics)] for l in langs}
    entities = [f"Ent{i:02d}" for i in range(n_entities)]
    entity_topics = [i % n_topics for i in range(n_entities)]

    # Common words map rank-to-rank (anchors are fixed points), content words
    # are permuted within their topic. Class and topic are preserved either
    # way, so translation keeps the topic signature of a sentence; the
    # mirrored chains (see SynthSpec._chain) then make corpus statistics
    # consistent with this lexicon.
    rng = spawn(seed, "lexicon")
    lexicon = {}
    for ca, cb in zip(common[a], common[b]):
        lexicon[ca] = cb
    for t in range(n_topics):
        pool_a, pool_b = content[a][t], content[b][t]
        for w, j in zip(pool_a, rng.permutation(len(pool_b))):
            lexicon[w] = pool_b[j]
    for e in entities:
        lexicon[e] = e
    markers = None
    if use_markers:
        markers = {a: f"{a}_xlt", b: f"{b}_xlt"}
        lexicon[markers[a]] = markers[b]

    mix_hi = topic_skew
    mix_lo = (1.0 - topic_skew) / max(1, n_topics - 1)
    mix_a = tuple(mix_hi if t == 0 else mix_lo for t in range(n_topics))
    mix_b = tuple(mix_hi if t == n_topics - 1 else mix_lo for t in range(n_topics))
    return SynthSpec(
        seed=seed,
        langs=langs,
        topic_mixtures={a: mix_a, b: mix_b},
        common_words=common,
        content_words=content,
        entity_inventory={a: list(entities), b: list(entities)},
        entity_topics=entity_topics,
        lexicon=lexicon,
        reorder_rule=reorder_rule or ReorderRule(),
        markers=markers,
        sentence_length_range=sentence_length_range,
        **knobs,
    )


class OracleError(RuntimeError):
    pass


def oracle_translate_tokens(toks: Sequence[str], direction: Tuple[str, str], spec: SynthSpec) -> List[str]:
    """Oracle translation on surface tokens."""
    src, tgt = direction
    if (src, tgt) not in (tuple(spec.langs), tuple(reversed(spec.langs))):
        raise OracleError(f"unknown direction {direction}")
    forward = src == spec.langs[0]
    lex = spec.lexicon if forward else spec._lex_rev

    def map_tok(w: str) -> str:
        try:
            return lex[w]
        except KeyError:
            raise OracleError(f"token {w!r} is outside the oracle lexicon") from None

    if spec.markers and len(toks) > 0 and toks[-1] == spec.markers[src]:
        # translated text going back: strip the marker and invert
        core = spec.reorder_rule.invert(list(toks[:-1]))
        return [map_tok(w) for w in core]
    out = spec.reorder_rule.apply([map_tok(w) for w in toks])
    if spec.markers:
        out.append(spec.markers[tgt])
    return out


def oracle_translate(s: Sentence, direction: Tuple[str, str], spec: SynthSpec, vocab: Vocab) -> Sentence:
    """Oracle translation of an encoded Sentence (tokens round-trip through vocab)."""
    if s.lang != direction[0]:
        raise OracleError(f"sentence lang {s.lang} does not match direction {direction}")
    toks = [vocab.token_of(i) for i in s.token_ids]
    return vocab.encode(oracle_translate_tokens(toks, direction, spec), direction[1])


@dataclass
class GeneratedData:
    """Everything gen_synthetic_pair produces, already encoded over one shared vocab."""

    spec: SynthSpec
    vocab: Vocab
    monoA: MonoCorpus
    monoB: MonoCorpus
    test: ParallelSet
    valid: ParallelSet
    parallel_train: ParallelSet


def _gen_raw(spec: SynthSpec, lang: str, n: int, tag: str) -> List[List[str]]:
    rng = spawn(spec.seed, "corpus", tag)
    return [spec.gen_sentence(lang, rng) for _ in range(n)]


def gen_synthetic_pair(spec: SynthSpec, sizes: Dict[str, int]) -> GeneratedData:
    """Generate mono pools, origin-tagged test/valid sets and an oracle parallel set.

    sizes keys: monoA, monoB, test_src_ori, test_tgt_ori, and optionally
    valid_src_ori, valid_tgt_ori, parallel_train (default 0). Deterministic:
    the same (spec, sizes) always yields identical corpora.
    """
    a, b = spec.langs
    n_mono_a, n_mono_b = sizes["monoA"], sizes["monoB"]
    if min(n_mono_a, n_mono_b, sizes["test_src_ori"], sizes["test_tgt_ori"]) < 1:
        raise SynthConfigError("all core corpus sizes must be >= 1")

    raw_mono_a = _gen_raw(spec, a, n_mono_a, "monoA")
    raw_mono_b = _gen_raw(spec, b, n_mono_b, "monoB")

    def raw_pairs(n_src_ori: int, n_tgt_ori: int, tag: str):
        out = []
        for toks in _gen_raw(spec, a, n_src_ori, f"{tag}_src_ori"):
            out.append((toks, oracle_translate_tokens(toks, (a, b), spec), Origin.SOURCE_ORIGINAL))
        for toks in _gen_raw(spec, b, n_tgt_ori, f"{tag}_tgt_ori"):
            out.append((oracle_translate_tokens(toks, (b, a), spec), toks, Origin.TARGET_ORIGINAL))
        return out

    raw_test = raw_pairs(sizes["test_src_ori"], sizes["test_tgt_ori"], "test")
    raw_valid = raw_pairs(sizes.get("valid_src_ori", 0), sizes.get("valid_tgt_ori", 0), "valid")
    n_par = sizes.get("parallel_train", 0)
    raw_par = raw_pairs(n_par - n_par // 2, n_par // 2, "parallel")

    all_para = raw_test + raw_valid + raw_par
    vocab = build_vocab(
        [raw_mono_a, raw_mono_b, [p[0] for p in all_para], [p[1] for p in all_para]],
        langs=list(spec.langs),
        min_count=1,
    )

    def enc_pairs(raw) -> ParallelSet:
        return ParallelSet(
            [
                Pair(vocab.encode(s, a), vocab.encode(r, b), origin, Provenance.ORACLE_TRANSLATED)
                for s, r, origin in raw
            ]
        )

    return GeneratedData(
        spec=spec,
        vocab=vocab,
        monoA=MonoCorpus(a, [vocab.encode(t, a) for t in raw_mono_a]),
        monoB=MonoCorpus(b, [vocab.encode(t, b) for t in raw_mono_b]),
        test=enc_pairs(raw_test),
        valid=enc_pairs(raw_valid),
        parallel_train=enc_pairs(raw_par),
    )
