"""Online training: schedules, step functions, loops, distillation."""

from .config import TrainConfig
from .distill import DistillResult, kd_train, offline_st_distill, synthetic_parallel
from .loops import EvalPoint, TrainResult, train_supervised, train_unmt
from .schedules import ScheduleSpec
from .steps import StepLog, supervised_step, unmt_step

__all__ = [
    "TrainConfig", "DistillResult", "kd_train", "offline_st_distill",
    "synthetic_parallel", "EvalPoint", "TrainResult", "train_supervised",
    "train_unmt", "ScheduleSpec", "StepLog", "supervised_step", "unmt_step",
]
