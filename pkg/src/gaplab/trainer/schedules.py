"""Loss-weight schedules.

The denoising weight starts high and decays linearly; the self-training
weight ramps linearly from a small start value. Both clamp at their end value
once the schedule horizon is passed.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class ScheduleSpec:
    dae_start: float = 1.0
    dae_end: float = 0.1
    dae_decay_steps: int = 1000
    st_start: float = 0.01
    st_end: float = 0.1
    st_ramp_steps: int = 1000

    def __post_init__(self):
        if self.dae_decay_steps < 1 or self.st_ramp_steps < 1:
            raise ValueError("schedule horizons must be >= 1 step")
        for v in (self.dae_start, self.dae_end, self.st_start, self.st_end):
            if v < 0:
                raise ValueError("loss weights must be non-negative")

    def lambda_dae(self, step: int) -> float:
        frac = min(1.0, max(0, step) / self.dae_decay_steps)
        return self.dae_start + (self.dae_end - self.dae_start) * frac

    def lambda_st(self, step: int) -> float:
        frac = min(1.0, max(0, step) / self.st_ramp_steps)
        return self.st_start + (self.st_end - self.st_start) * frac
