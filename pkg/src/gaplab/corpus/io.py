"""File formats: text corpora, origin-tagged TSV pairs, SynthSpec JSON."""

import dataclasses
import json
from pathlib import Path
from typing import List, Optional

from .synth import ReorderRule, SynthSpec
from .types import MonoCorpus, Origin, Pair, ParallelSet, Provenance, Sentence
from .vocab import Vocab


def write_text_corpus(path, sentences: List[List[str]]):
    Path(path).write_text("".join(" ".join(s) + "\n" for s in sentences), encoding="utf-8")


def read_text_corpus(path) -> List[List[str]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [line.split() for line in lines if line.strip()]


def write_mono_corpus(path, corpus: MonoCorpus, vocab: Vocab):
    write_text_corpus(path, vocab.decode_corpus(corpus))


def read_mono_corpus(path, lang: str, vocab: Vocab) -> MonoCorpus:
    return MonoCorpus(lang, [vocab.encode(toks, lang) for toks in read_text_corpus(path)])


TSV_HEADER = "src\tref\torigin"


def write_parallel_tsv(path, pset: ParallelSet, vocab: Vocab):
    lines = [TSV_HEADER]
    for p in pset.pairs:
        lines.append(
            "\t".join([" ".join(vocab.decode(p.src)), " ".join(vocab.decode(p.ref)), p.origin.value])
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_parallel_tsv(path, src_lang: str, ref_lang: str, vocab: Vocab) -> ParallelSet:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != TSV_HEADER:
        raise ValueError(f"{path}: expected header {TSV_HEADER!r}")
    pairs = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{path}:{ln}: expected 3 tab-separated fields")
        src, ref, origin = parts
        pairs.append(
            Pair(
                vocab.encode(src.split(), src_lang),
                vocab.encode(ref.split(), ref_lang),
                Origin(origin),
                Provenance.ORACLE_TRANSLATED,
            )
        )
    return ParallelSet(pairs)


def spec_to_json(spec: SynthSpec) -> str:
    d = dataclasses.asdict(spec)
    d["reorder_rule"] = {"window": spec.reorder_rule.window, "pattern": list(spec.reorder_rule.pattern)}
    return json.dumps(d, indent=2, sort_keys=True)


def spec_from_json(text: str) -> SynthSpec:
    d = json.loads(text)
    rr = d.pop("reorder_rule")
    d["reorder_rule"] = ReorderRule(window=rr["window"], pattern=tuple(rr["pattern"]))
    d["langs"] = tuple(d["langs"])
    d["topic_mixtures"] = {k: tuple(v) for k, v in d["topic_mixtures"].items()}
    d["sentence_length_range"] = tuple(d["sentence_length_range"])
    return SynthSpec(**d)


def write_spec(path, spec: SynthSpec):
    Path(path).write_text(spec_to_json(spec), encoding="utf-8")


def read_spec(path) -> SynthSpec:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"synth spec not found: {p}")
    return spec_from_json(p.read_text(encoding="utf-8"))


def write_vocab(path, vocab: Vocab):
    Path(path).write_text(json.dumps({"tokens": vocab.tokens, "langs": vocab.langs}), encoding="utf-8")


def read_vocab(path) -> Vocab:
    d = json.loads(Path(path).read_text(encoding="utf-8"))
    return Vocab(tokens=d["tokens"], langs=d["langs"])
