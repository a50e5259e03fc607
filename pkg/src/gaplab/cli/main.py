"""Command line entry point.

Subcommands: gen-data, train, translate, evaluate, analyze, distill.
Exit codes: 0 success, 1 usage or config error, 2 runtime failure.
"""

import argparse
import json
import sys
from pathlib import Path

from ..corpus.io import (read_spec, read_text_corpus, write_mono_corpus,
                         write_parallel_tsv, write_spec, write_text_corpus,
                         write_vocab)
from ..corpus.synth import gen_synthetic_pair
from ..corpus.types import Origin, Sentence
from ..evaluation.bootstrap import paired_bootstrap
from ..evaluation.split import split_eval
from ..gapstats.entities import entity_frequency_table, entity_translation_accuracy
from ..gapstats.ngram_lm import KneserNeyLM
from ..gapstats.style import bt_style_corpus, style_gap
from ..gapstats.tfidf import content_grid
from ..model.checkpoint import load_checkpoint, save_checkpoint
from ..model.decode import DecodeSpec, translate
from ..trainer import TrainConfig
from ..trainer.distill import offline_st_distill
from .experiment import (ConfigError, deep_merge, load_data_dir, load_experiment,
                         manifest_checkpoints, read_manifest, train_all,
                         write_manifest)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _decode_spec(cfg_train: dict, mode: str = None, beam: int = None,
                 max_len: int = None) -> DecodeSpec:
    tc = TrainConfig.from_dict(deep_merge(TrainConfig().to_dict(), cfg_train))
    base = tc.eval_decode
    return DecodeSpec(
        mode=mode or base.mode,
        beam_size=beam if beam is not None else base.beam_size,
        max_len=max_len if max_len is not None else base.max_len,
        length_norm=base.length_norm,
    )


def _chunked_translate(params, vocab, sents, tgt, spec, chunk=128):
    out = []
    for i in range(0, len(sents), chunk):
        out.extend(translate(params, vocab, sents[i: i + chunk], tgt, spec))
    return out


# ---------------------------------------------------------------- gen-data

def cmd_gen_data(args) -> int:
    spec = read_spec(args.spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sizes = {"monoA": args.mono, "monoB": args.mono,
             "test_src_ori": args.test, "test_tgt_ori": args.test,
             "valid_src_ori": args.valid, "valid_tgt_ori": args.valid,
             "parallel_train": args.parallel}
    data = gen_synthetic_pair(spec, sizes)
    write_spec(out / "spec.json", spec)
    write_vocab(out / "vocab.json", data.vocab)
    write_mono_corpus(out / "monoA.txt", data.monoA, data.vocab)
    write_mono_corpus(out / "monoB.txt", data.monoB, data.vocab)
    write_parallel_tsv(out / "test.tsv", data.test, data.vocab)
    if len(data.valid):
        write_parallel_tsv(out / "valid.tsv", data.valid, data.vocab)
    if len(data.parallel_train):
        write_parallel_tsv(out / "parallel.tsv", data.parallel_train, data.vocab)
    print(f"wrote {out}: monoA={len(data.monoA)} monoB={len(data.monoB)} "
          f"test={len(data.test)} valid={len(data.valid)} parallel={len(data.parallel_train)}")
    return 0


# ---------------------------------------------------------------- train

def cmd_train(args) -> int:
    cfg = load_experiment(args.config)
    if args.seeds:
        cfg.seeds = tuple(int(s) for s in args.seeds.split(","))
        cfg.effective["seeds"] = list(cfg.seeds)

    def progress(entry):
        status = entry["error"] or f"ok ({entry['wall_time']:.0f}s)"
        print(f"seed {entry['seed']}: {status}", flush=True)

    manifest = train_all(cfg, progress=progress)
    failed = [s for s, e in manifest["seeds"].items() if e.get("error")]
    print(f"manifest: {cfg.out_dir / 'manifest.json'}")
    if failed:
        print(f"{len(failed)} seed(s) aborted: {', '.join(failed)}", file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------- translate

def cmd_translate(args) -> int:
    ckpt = load_checkpoint(args.ckpt)
    sents = [ckpt.vocab.encode(toks, args.src_lang)
             for toks in read_text_corpus(args.input)]
    spec = DecodeSpec(mode=args.mode, beam_size=args.beam_size,
                      max_len=args.max_len or 0)
    hyps = _chunked_translate(ckpt.params, ckpt.vocab, sents, args.tgt_lang, spec)
    write_text_corpus(args.output, [ckpt.vocab.decode(h) for h in hyps])
    print(f"translated {len(hyps)} sentences -> {args.output}")
    return 0


# ---------------------------------------------------------------- evaluate

SPLITS = ("full", "tgt_ori", "src_ori")


def _score_manifest(manifest, manifest_path, data, spec):
    """Per-seed decoded hypotheses and split BLEU, both directions."""
    a, b = data.spec.langs
    out = {}
    for seed, ckpt_path in manifest_checkpoints(manifest, manifest_path).items():
        params = load_checkpoint(ckpt_path).params
        per_dir = {}
        for direction in ((a, b), (b, a)):
            sc = split_eval(params, data.vocab, data.test, direction, spec)
            per_dir["-".join(direction)] = {
                "full": sc.overall.bleu, "src_ori": sc.src_original.bleu,
                "tgt_ori": sc.tgt_original.bleu,
            }
        out[seed] = per_dir
    return out


def _mean_scores(scores):
    dirs = next(iter(scores.values())).keys()
    return {d: {s: sum(scores[k][d][s] for k in scores) / len(scores) for s in SPLITS}
            for d in dirs}


def _pooled_hyps(manifest, manifest_path, data, spec, direction):
    """Hypotheses and refs for one direction, concatenated across seeds."""
    hyps, refs, origins = [], [], []
    a, b = data.spec.langs
    forward = direction == (a, b)
    inputs = [p.src if forward else p.ref for p in data.test.pairs]
    ref_side = [p.ref if forward else p.src for p in data.test.pairs]
    for seed, ckpt_path in manifest_checkpoints(manifest, manifest_path).items():
        params = load_checkpoint(ckpt_path).params
        hyps.extend(_chunked_translate(params, data.vocab, inputs, direction[1], spec))
        refs.extend(ref_side)
        origins.extend(p.origin for p in data.test.pairs)
    return hyps, refs, origins


def _mark(p):
    return "^^" if p < 0.01 else ("^" if p < 0.05 else "")


def cmd_evaluate(args) -> int:
    manifest = read_manifest(args.manifest)
    data = load_data_dir(args.data or manifest["data_dir"])
    splits = tuple(args.splits.split(",")) if args.splits else SPLITS
    for s in splits:
        if s not in SPLITS:
            raise UsageError(f"unknown split {s!r}")
    spec = _decode_spec(manifest["config"].get("train", {}),
                        args.mode, args.beam_size, args.max_len)
    scores = _score_manifest(manifest, args.manifest, data, spec)
    if not scores:
        raise ConfigError("manifest has no usable checkpoints")
    report = {"config_hash": manifest["config_hash"], "variant": manifest["variant"],
              "decode": {"mode": spec.mode, "beam_size": spec.beam_size},
              "seeds": scores, "mean": _mean_scores(scores)}

    lines = []
    a, b = data.spec.langs
    if args.baseline:
        base_man = read_manifest(args.baseline)
        base_scores = _score_manifest(base_man, args.baseline, data, spec)
        report["baseline"] = {"config_hash": base_man["config_hash"],
                              "variant": base_man["variant"],
                              "seeds": base_scores, "mean": _mean_scores(base_scores)}
        report["significance"] = {}
        for direction in ((a, b), (b, a)):
            key = "-".join(direction)
            hyps_s, refs, origins = _pooled_hyps(manifest, args.manifest, data, spec, direction)
            hyps_b, _, _ = _pooled_hyps(base_man, args.baseline, data, spec, direction)
            sig = {}
            for split in splits:
                if split == "full":
                    keep = [True] * len(refs)
                else:
                    keep = [o.value == split for o in origins]
                res = paired_bootstrap([h for h, k in zip(hyps_s, keep) if k],
                                       [h for h, k in zip(hyps_b, keep) if k],
                                       [r for r, k in zip(refs, keep) if k],
                                       n_samples=args.bootstrap, seed=0)
                sig[split] = {"p_value": res.p_value, "win_rate": res.win_rate_a}
            report["significance"][key] = sig

    for direction in ("-".join((a, b)), "-".join((b, a))):
        lines.append(f"### {direction}")
        header = "| seed | " + " | ".join(splits) + " |"
        lines += [header, "|" + "---|" * (len(splits) + 1)]
        for seed in sorted(scores, key=int):
            row = [str(seed)] + [f"{scores[seed][direction][s]:.2f}" for s in splits]
            lines.append("| " + " | ".join(row) + " |")
        mean_cells = []
        for s in splits:
            cell = f"{report['mean'][direction][s]:.2f}"
            if args.baseline:
                delta = report["mean"][direction][s] - report["baseline"]["mean"][direction][s]
                cell += f" ({delta:+.2f}{_mark(report['significance'][direction][s]['p_value'])})"
            mean_cells.append(cell)
        lines.append("| mean | " + " | ".join(mean_cells) + " |")
        lines.append("")

    out = Path(args.out or (Path(args.manifest).parent / "reports"))
    out.mkdir(parents=True, exist_ok=True)
    (out / "eval.json").write_text(json.dumps(report, indent=1, sort_keys=True),
                                   encoding="utf-8")
    (out / "eval.md").write_text("\n".join(lines), encoding="utf-8")
    print("\n".join(lines))
    print(f"reports: {out / 'eval.json'}")
    return 0


# ---------------------------------------------------------------- analyze

def _strip_markers(sents, marker_ids):
    out = []
    for s in sents:
        kept = tuple(t for t in s.token_ids if t not in marker_ids)
        out.append(Sentence(kept, s.lang) if kept else s)
    return out


def _train_spec(manifest) -> DecodeSpec:
    tc = TrainConfig.from_dict(deep_merge(TrainConfig().to_dict(),
                                          manifest["config"].get("train", {})))
    return tc.train_decode


def _marker_ids(data):
    if not data.spec.markers:
        return set()
    return {data.vocab.id_of(m) for m in data.spec.markers.values()}


def _analyze_style(manifest, manifest_path, data, args):
    a, _ = data.spec.langs
    spec = _train_spec(manifest)
    markers = set() if args.keep_markers else _marker_ids(data)
    natural = [p.src for p in data.test.pairs if p.origin == Origin.SOURCE_ORIGINAL]
    translated = [p.src for p in data.test.pairs if p.origin == Origin.TARGET_ORIGINAL]
    report = {"mix_roundtrip": args.mix_roundtrip, "seeds": {}}
    votes = 0
    for seed, ckpt_path in manifest_checkpoints(manifest, manifest_path).items():
        params = load_checkpoint(ckpt_path).params
        style_train = bt_style_corpus(params, data.vocab, data.monoB, a, spec,
                                      mono_tgt=data.monoA,
                                      mix_roundtrip=args.mix_roundtrip)
        res = style_gap(style_train, _strip_markers(natural, markers),
                        _strip_markers(translated, markers))
        report["seeds"][seed] = {"ppl_natural": res.ppl_natural,
                                 "ppl_translated": res.ppl_translated,
                                 "translated_fits_better": res.gap > 0}
        votes += int(res.gap > 0)
    n = len(report["seeds"])
    report["verdict"] = f"translated fits better in {votes}/{n} seeds"
    return report


def _analyze_content(manifest, manifest_path, data, args):
    _, b = data.spec.langs
    spec = _train_spec(manifest)
    nat_src = [p.ref for p in data.test.pairs if p.origin == Origin.SOURCE_ORIGINAL]
    nat_tgt = [p.ref for p in data.test.pairs if p.origin == Origin.TARGET_ORIGINAL]
    in_src = [p.src for p in data.test.pairs if p.origin == Origin.SOURCE_ORIGINAL]
    in_tgt = [p.src for p in data.test.pairs if p.origin == Origin.TARGET_ORIGINAL]
    report = {"chunk_size": args.chunk_size, "seeds": {}}
    for seed, ckpt_path in manifest_checkpoints(manifest, manifest_path).items():
        params = load_checkpoint(ckpt_path).params
        out_src = _chunked_translate(params, data.vocab, in_src, b, spec)
        out_tgt = _chunked_translate(params, data.vocab, in_tgt, b, spec)
        grid = content_grid(out_src, out_tgt, nat_src, nat_tgt,
                            chunk_size=args.chunk_size, n_stop=args.n_stop)
        margin = min(grid[0][0] - grid[0][1], grid[1][1] - grid[1][0])
        report["seeds"][seed] = {"grid": [list(r) for r in grid], "margin": margin}
    return report


def _analyze_entities(manifest, manifest_path, data, args):
    a, b = data.spec.langs
    spec = _train_spec(manifest)
    inventory = data.spec.entity_inventory[a]
    inv_ids = [data.vocab.id_of(e) for e in inventory]
    id_of = dict(zip(inv_ids, inventory))
    natural = [p for p in data.test.pairs if p.origin == Origin.SOURCE_ORIGINAL]
    report = {"seeds": {}, "tables": {}}
    for seed, ckpt_path in manifest_checkpoints(manifest, manifest_path).items():
        params = load_checkpoint(ckpt_path).params
        bt_train = bt_style_corpus(params, data.vocab, data.monoB, a, spec)
        tables = entity_frequency_table(
            {"bt_train": bt_train,
             "test_natural": [p.src for p in natural],
             "test_translated": [p.src for p in data.test.pairs
                                 if p.origin == Origin.TARGET_ORIGINAL]},
            inv_ids)
        hyps = _chunked_translate(params, data.vocab, [p.src for p in natural], b, spec)
        acc = entity_translation_accuracy([p.ref for p in natural], hyps, inv_ids)
        report["seeds"][seed] = {"accuracy": acc.accuracy,
                                 "n_reference_entities": acc.n_source}
        report["tables"][seed] = {
            label: [[id_of[t], c] for t, c in counts.most_common(args.top_k)]
            for label, counts in tables.items()}
    return report


def _analyze_fluency(manifest, manifest_path, data, args):
    from ..evaluation.fluency import fluency_ppl
    _, b = data.spec.langs
    spec = _train_spec(manifest)
    lm = KneserNeyLM(order=4).fit(data.monoB.sentences)
    natural = [p.src for p in data.test.pairs if p.origin == Origin.SOURCE_ORIGINAL]
    report = {"seeds": {}}
    for seed, ckpt_path in manifest_checkpoints(manifest, manifest_path).items():
        params = load_checkpoint(ckpt_path).params
        hyps = _chunked_translate(params, data.vocab, natural, b, spec)
        report["seeds"][seed] = {"ppl": fluency_ppl(lm, hyps)}
    return report


ANALYSES = {"style": _analyze_style, "content": _analyze_content,
            "entities": _analyze_entities, "fluency": _analyze_fluency}


def cmd_analyze(args) -> int:
    manifest = read_manifest(args.manifest)
    data = load_data_dir(args.data or manifest["data_dir"])
    if not manifest_checkpoints(manifest, args.manifest):
        raise ConfigError("manifest has no usable checkpoints; train first")
    report = ANALYSES[args.which](manifest, args.manifest, data, args)
    out = Path(args.out or (Path(args.manifest).parent / "reports"))
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{args.which}.json"
    path.write_text(json.dumps(report, indent=1, sort_keys=True), encoding="utf-8")
    print(json.dumps(report.get("verdict") or report["seeds"], indent=1, sort_keys=True))
    print(f"report: {path}")
    return 0


# ---------------------------------------------------------------- distill

def cmd_distill(args) -> int:
    manifest = read_manifest(args.manifest)
    data = load_data_dir(args.data or manifest["data_dir"])
    tc = TrainConfig.from_dict(deep_merge(TrainConfig().to_dict(),
                                          manifest["config"].get("train", {})))
    if args.steps:
        tc = tc.with_overrides(total_steps=args.steps)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    entries = {}
    for seed, ckpt_path in manifest_checkpoints(manifest, args.manifest).items():
        base = load_checkpoint(ckpt_path).params
        res = offline_st_distill(base, data.vocab, data.monoA, data.monoB,
                                 tc.with_overrides(seed=seed), valid=data.valid,
                                 from_scratch=args.from_scratch)
        sdir = out / f"seed{seed}"
        sdir.mkdir(exist_ok=True)
        save_checkpoint(sdir / "checkpoint.npz", res.result.params, data.vocab,
                        res.result.opt, extra={"variant": "offline_st", "seed": seed})
        write_parallel_tsv(sdir / "synthetic.tsv", res.synthetic, data.vocab)
        entries[str(seed)] = {"checkpoint": f"seed{seed}/checkpoint.npz",
                              "synthetic": f"seed{seed}/synthetic.tsv",
                              "diverged": res.result.diverged, "error": None}
        print(f"seed {seed}: distilled ({len(res.synthetic)} synthetic pairs)")
    student = {"config_hash": manifest["config_hash"], "code_version": manifest["code_version"],
               "variant": "offline_st", "data_dir": str(args.data or manifest["data_dir"]),
               "config": manifest["config"], "seeds": entries, "reports": {}}
    write_manifest(out / "manifest.json", student)
    print(f"manifest: {out / 'manifest.json'}")
    return 0


# ---------------------------------------------------------------- wiring

def build_parser() -> _Parser:
    p = _Parser(prog="gaplab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-data", help="generate a synthetic corpus directory")
    g.add_argument("--spec", required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--mono", type=int, default=4000)
    g.add_argument("--test", type=int, default=60)
    g.add_argument("--valid", type=int, default=30)
    g.add_argument("--parallel", type=int, default=0)
    g.set_defaults(fn=cmd_gen_data)

    t = sub.add_parser("train", help="train every seed of an experiment config")
    t.add_argument("--config", required=True)
    t.add_argument("--seeds", help="comma-separated override of the config seed list")
    t.set_defaults(fn=cmd_train)

    tr = sub.add_parser("translate", help="translate a text file with a checkpoint")
    tr.add_argument("--ckpt", required=True)
    tr.add_argument("--input", required=True)
    tr.add_argument("--output", required=True)
    tr.add_argument("--src-lang", required=True)
    tr.add_argument("--tgt-lang", required=True)
    tr.add_argument("--mode", choices=("greedy", "beam"), default="greedy")
    tr.add_argument("--beam-size", type=int, default=5)
    tr.add_argument("--max-len", type=int, default=0)
    tr.set_defaults(fn=cmd_translate)

    e = sub.add_parser("evaluate", help="score manifest checkpoints on the test set")
    e.add_argument("--manifest", required=True)
    e.add_argument("--baseline", help="second manifest for paired significance")
    e.add_argument("--data", help="data dir override (defaults to the manifest's)")
    e.add_argument("--splits", help=f"comma-separated subset of {','.join(SPLITS)}")
    e.add_argument("--mode", choices=("greedy", "beam"))
    e.add_argument("--beam-size", type=int)
    e.add_argument("--max-len", type=int)
    e.add_argument("--bootstrap", type=int, default=1000)
    e.add_argument("--out")
    e.set_defaults(fn=cmd_evaluate)

    an = sub.add_parser("analyze", help="data-gap diagnostics over a trained manifest")
    an.add_argument("--manifest", required=True)
    an.add_argument("--which", choices=sorted(ANALYSES), required=True)
    an.add_argument("--data")
    an.add_argument("--out")
    an.add_argument("--mix-roundtrip", type=float, default=0.0)
    an.add_argument("--keep-markers", action="store_true",
                    help="score the oracle's translated-text markers too")
    an.add_argument("--chunk-size", type=int, default=25)
    an.add_argument("--n-stop", type=int, default=50)
    an.add_argument("--top-k", type=int, default=10)
    an.set_defaults(fn=cmd_analyze)

    d = sub.add_parser("distill", help="offline self-training from a trained manifest")
    d.add_argument("--manifest", required=True)
    d.add_argument("--out", required=True)
    d.add_argument("--data")
    d.add_argument("--steps", type=int)
    d.add_argument("--from-scratch", action="store_true")
    d.set_defaults(fn=cmd_distill)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except (ConfigError, FileNotFoundError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
