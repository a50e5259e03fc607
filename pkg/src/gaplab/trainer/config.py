"""Training configuration with JSON round-tripping."""

import json
from dataclasses import asdict, dataclass, field, replace

from ..corpus.noise import NoiseSpec
from ..model.decode import DecodeSpec
from ..model.params import Dims
from .schedules import ScheduleSpec


@dataclass(frozen=True)
class TrainConfig:
    seed: int = 0
    total_steps: int = 1000
    tokens_per_batch: int = 2500
    dims: Dims = field(default_factory=Dims)
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    clip_norm: float = 5.0
    schedules: ScheduleSpec = field(default_factory=ScheduleSpec)
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    st_enabled: bool = True
    emb_init: str = "anchor_cooc"   # or "random"; unsupervised loop only
    warmup_wbw_steps: int = 0       # steps fed word-by-word targets before model generation
    train_decode: DecodeSpec = field(default_factory=DecodeSpec)
    eval_decode: DecodeSpec = field(default_factory=lambda: DecodeSpec(mode="beam", beam_size=5))
    eval_every: int = 0      # 0: evaluate the final model only
    stop_at_bleu: float = 0.0  # stop once both validation directions reach this

    def __post_init__(self):
        if self.total_steps < 1 or self.tokens_per_batch < 8:
            raise ValueError("degenerate training budget")
        if self.emb_init not in ("anchor_cooc", "random"):
            raise ValueError(f"unknown emb_init {self.emb_init!r}")
        if self.warmup_wbw_steps < 0:
            raise ValueError("warmup_wbw_steps must be >= 0")
        if self.warmup_wbw_steps > 0 and self.emb_init != "anchor_cooc":
            raise ValueError("word-by-word warmup needs the co-occurrence embedding init")

    def with_overrides(self, **kw) -> "TrainConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        d = dict(d)
        for key, sub in (("dims", Dims), ("schedules", ScheduleSpec),
                         ("noise", NoiseSpec), ("train_decode", DecodeSpec),
                         ("eval_decode", DecodeSpec)):
            if key in d and isinstance(d[key], dict):
                d[key] = sub(**{k: tuple(v) if isinstance(v, list) else v
                                for k, v in d[key].items()})
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "TrainConfig":
        return cls.from_dict(json.loads(text))
