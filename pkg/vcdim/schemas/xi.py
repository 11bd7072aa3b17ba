from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class LossProfile(BaseModel):
    """Interval counts of the cross-evaluated squared errors of both halves"""
    model_config = ConfigDict(frozen=True)

    counts_1: List[int]
    counts_2: List[int]
    B: float = Field(..., gt=0)
    m: int = Field(..., ge=1)
    n_l: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_counts(self):
        for counts in (self.counts_1, self.counts_2):
            if len(counts) != self.m:
                raise ValueError("Each count vector must have length m")
            if any(c < 0 for c in counts):
                raise ValueError("Counts must be nonnegative")
            if sum(counts) != self.n_l:
                raise ValueError("Counts must sum to n_l")
        return self


class XiEntry(BaseModel):
    n_l: int
    xi_hat: float = Field(..., ge=0)
    replicates: List[float] = []  # r_{b1,i}(n_l), i = 1..b2


class XiCurve(BaseModel):
    """One xi-hat per design point, outer replicate values kept for diagnostics"""
    entries: List[XiEntry]
    model: List[str] = []
    m: Optional[int] = None
    b1: Optional[int] = None
    b2: Optional[int] = None
    seed: Optional[int] = None

    @property
    def design_points(self) -> List[int]:
        return [e.n_l for e in self.entries]

    @property
    def values(self) -> List[float]:
        return [e.xi_hat for e in self.entries]
