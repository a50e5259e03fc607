"""Experiment configs, run manifests, and per-seed training dispatch.

A config file is JSON with an optional "defaults" block; the remaining top
level is merged over it (top level wins), so one file can hold a shared grid
and each variant file only states what differs. All paths inside a config are
resolved relative to the config file's directory.
"""

import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .. import __version__
from ..corpus.io import read_mono_corpus, read_parallel_tsv, read_spec, read_vocab
from ..corpus.types import MonoCorpus, ParallelSet
from ..corpus.vocab import Vocab
from ..model.checkpoint import load_checkpoint, save_checkpoint
from ..trainer import TrainConfig
from ..trainer.distill import kd_train, offline_st_distill
from ..trainer.loops import TrainResult, train_supervised, train_unmt

VARIANTS = ("unmt", "unmt_st", "snmt", "offline_st", "kd")


class ConfigError(ValueError):
    """Bad experiment config: unknown fields, missing paths, empty seed list."""


def deep_merge(base: dict, over: dict) -> dict:
    out = dict(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = deep_merge(out[k], v)
        else:
            out[k] = v
    return out


def config_hash(effective: dict) -> str:
    blob = json.dumps(effective, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class ExperimentConfig:
    variant: str
    data_dir: Path
    out_dir: Path
    seeds: Tuple[int, ...]
    train: TrainConfig
    teacher: Optional[Path] = None      # kd: checkpoint of the fixed teacher
    base: Optional[str] = None          # offline_st: checkpoint path, may contain {seed}
    effective: dict = field(default_factory=dict)

    @property
    def hash(self) -> str:
        return config_hash(self.effective)


def load_experiment(path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config not found: {path}")
    raw = json.loads(path.read_text(encoding="utf-8"))
    defaults = raw.pop("defaults", {})
    eff = deep_merge(defaults, raw)

    variant = eff.get("variant")
    if variant not in VARIANTS:
        raise ConfigError(f"variant must be one of {VARIANTS}, got {variant!r}")
    seeds = tuple(int(s) for s in eff.get("seeds", []))
    if not seeds:
        raise ConfigError("seed list is empty")
    for key in ("data_dir", "out_dir"):
        if key not in eff:
            raise ConfigError(f"config is missing {key!r}")
    data_dir = (path.parent / eff["data_dir"]).resolve()
    if not data_dir.is_dir():
        raise ConfigError(f"data_dir does not exist: {data_dir}")
    train = TrainConfig.from_dict(deep_merge(TrainConfig().to_dict(), eff.get("train", {})))

    teacher = eff.get("teacher")
    if variant == "kd":
        if not teacher:
            raise ConfigError("kd needs a teacher checkpoint path")
        teacher = (path.parent / teacher).resolve()
        if not teacher.exists():
            raise ConfigError(f"teacher checkpoint not found: {teacher}")
    base = eff.get("base")
    if variant == "offline_st" and not base:
        raise ConfigError("offline_st needs a base checkpoint path (may contain {seed})")

    return ExperimentConfig(
        variant=variant,
        data_dir=data_dir,
        out_dir=(path.parent / eff["out_dir"]).resolve(),
        seeds=seeds,
        train=train,
        teacher=teacher if variant == "kd" else None,
        base=base if variant == "offline_st" else None,
        effective=eff,
    )


@dataclass
class DataBundle:
    spec: object
    vocab: Vocab
    monoA: MonoCorpus
    monoB: MonoCorpus
    test: ParallelSet
    valid: Optional[ParallelSet]
    parallel: Optional[ParallelSet]


def load_data_dir(data_dir) -> DataBundle:
    d = Path(data_dir)
    spec = read_spec(d / "spec.json")
    vocab = read_vocab(d / "vocab.json")
    a, b = spec.langs
    valid = parallel = None
    if (d / "valid.tsv").exists():
        valid = read_parallel_tsv(d / "valid.tsv", a, b, vocab)
    if (d / "parallel.tsv").exists():
        parallel = read_parallel_tsv(d / "parallel.tsv", a, b, vocab)
    return DataBundle(
        spec=spec,
        vocab=vocab,
        monoA=read_mono_corpus(d / "monoA.txt", a, vocab),
        monoB=read_mono_corpus(d / "monoB.txt", b, vocab),
        test=read_parallel_tsv(d / "test.tsv", a, b, vocab),
        valid=valid,
        parallel=parallel,
    )


def run_variant(cfg: ExperimentConfig, data: DataBundle, seed: int) -> TrainResult:
    tc = cfg.train.with_overrides(seed=seed)
    if cfg.variant == "unmt":
        sched = tc.schedules
        if sched.st_start != 0.0 or sched.st_end != 0.0:
            print(f"warning: variant unmt ignores the st schedule "
                  f"({sched.st_start} -> {sched.st_end})", file=sys.stderr)
        tc = tc.with_overrides(st_enabled=False)
        return train_unmt(data.monoA, data.monoB, data.vocab, tc, valid=data.valid)
    if cfg.variant == "unmt_st":
        return train_unmt(data.monoA, data.monoB, data.vocab,
                          tc.with_overrides(st_enabled=True), valid=data.valid)
    if cfg.variant == "snmt":
        if data.parallel is None or len(data.parallel) == 0:
            raise ConfigError("snmt needs parallel.tsv in the data directory")
        return train_supervised(data.parallel, data.vocab, tc, valid=data.valid)
    if cfg.variant == "kd":
        teacher = load_checkpoint(cfg.teacher).params
        return kd_train(data.monoA, data.monoB, data.vocab,
                        tc.with_overrides(st_enabled=True), teacher, valid=data.valid)
    if cfg.variant == "offline_st":
        base_path = Path(str(cfg.base).format(seed=seed))
        if not base_path.exists():
            raise ConfigError(f"base checkpoint not found: {base_path}")
        base = load_checkpoint(base_path).params
        return offline_st_distill(base, data.vocab, data.monoA, data.monoB,
                                  tc, valid=data.valid).result
    raise ConfigError(f"unknown variant {cfg.variant!r}")


def _seed_dir(out_dir: Path, seed: int) -> Path:
    return Path(out_dir) / f"seed{seed}"


def train_one_seed(cfg: ExperimentConfig, data: DataBundle, seed: int) -> dict:
    """Train one seed, write its artifacts, and return its manifest entry."""
    sdir = _seed_dir(cfg.out_dir, seed)
    sdir.mkdir(parents=True, exist_ok=True)
    t0 = time.time()
    try:
        res = run_variant(cfg, data, seed)
    except Exception as e:  # record per-seed aborts, keep the grid going
        return {"seed": seed, "error": f"{type(e).__name__}: {e}",
                "wall_time": time.time() - t0}
    ckpt = sdir / "checkpoint.npz"
    save_checkpoint(ckpt, res.params, data.vocab, res.opt,
                    extra={"variant": cfg.variant, "seed": seed,
                           "config_hash": cfg.hash, "best_step": res.best_step})
    (sdir / "logs.jsonl").write_text(
        "".join(log.to_json() + "\n" for log in res.logs), encoding="utf-8")
    (sdir / "evals.json").write_text(json.dumps(
        [{"step": e.step, "bleu_ab": e.bleu_ab, "bleu_ba": e.bleu_ba}
         for e in res.evals], indent=1), encoding="utf-8")
    return {"seed": seed, "error": None,
            "checkpoint": str(ckpt.relative_to(cfg.out_dir)),
            "logs": "seed%d/logs.jsonl" % seed, "evals": "seed%d/evals.json" % seed,
            "diverged": res.diverged, "best_step": res.best_step,
            "wall_time": time.time() - t0}


def _worker(payload) -> dict:
    cfg_json, seed = payload
    cfg = _config_from_effective(cfg_json)
    data = load_data_dir(cfg.data_dir)
    return train_one_seed(cfg, data, seed)


def _config_from_effective(blob: str) -> ExperimentConfig:
    d = json.loads(blob)
    eff = d["effective"]
    return ExperimentConfig(
        variant=eff["variant"], data_dir=Path(d["data_dir"]), out_dir=Path(d["out_dir"]),
        seeds=tuple(eff["seeds"]), train=TrainConfig.from_dict(d["train"]),
        teacher=Path(d["teacher"]) if d.get("teacher") else None,
        base=eff.get("base"), effective=eff,
    )


def _config_blob(cfg: ExperimentConfig) -> str:
    return json.dumps({
        "effective": cfg.effective, "data_dir": str(cfg.data_dir),
        "out_dir": str(cfg.out_dir), "train": cfg.train.to_dict(),
        "teacher": str(cfg.teacher) if cfg.teacher else None,
    })


def n_workers() -> int:
    cap = os.environ.get("GAPLAB_THREADS", "1")
    try:
        return max(1, int(cap))
    except ValueError:
        return 1


def train_all(cfg: ExperimentConfig, progress=None) -> dict:
    """Run every seed, write <out_dir>/manifest.json and return it."""
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    workers = min(n_workers(), len(cfg.seeds))
    entries: List[dict] = []
    if workers == 1:
        data = load_data_dir(cfg.data_dir)
        for seed in cfg.seeds:
            entries.append(train_one_seed(cfg, data, seed))
            if progress:
                progress(entries[-1])
    else:
        blob = _config_blob(cfg)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for entry in pool.map(_worker, [(blob, s) for s in cfg.seeds]):
                entries.append(entry)
                if progress:
                    progress(entry)
    manifest = {
        "config_hash": cfg.hash,
        "code_version": __version__,
        "variant": cfg.variant,
        "data_dir": str(cfg.data_dir),
        "config": cfg.effective,
        "seeds": {str(e["seed"]): {k: v for k, v in e.items() if k != "seed"}
                  for e in entries},
        "reports": {},
    }
    write_manifest(cfg.out_dir / "manifest.json", manifest)
    return manifest


def write_manifest(path, manifest: dict):
    Path(path).write_text(json.dumps(manifest, indent=1, sort_keys=True), encoding="utf-8")


def read_manifest(path) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"manifest not found: {p}")
    return json.loads(p.read_text(encoding="utf-8"))


def manifest_checkpoints(manifest: dict, manifest_path) -> Dict[int, Path]:
    """Seed -> existing checkpoint path; seeds that aborted are skipped."""
    root = Path(manifest_path).parent
    out = {}
    for seed, entry in sorted(manifest["seeds"].items(), key=lambda kv: int(kv[0])):
        if entry.get("error") or "checkpoint" not in entry:
            continue
        p = root / entry["checkpoint"]
        if p.exists():
            out[int(seed)] = p
    return out
