from typing import List, Optional

from pydantic import BaseModel, Field


class FitTraceEntry(BaseModel):
    c: float
    d: float  # minimizer over d for this c
    f: float  # objective at (c, d)


class VcEstimate(BaseModel):
    """Least-squares fit of the bound curve to a xi curve"""
    d_hat: float = Field(..., gt=0)
    c_hat: float = Field(..., gt=0)
    objective: float = Field(..., ge=0)
    degenerate: bool = False  # all xi-hat were zero; d_hat set to 1
    trace: Optional[List[FitTraceEntry]] = None
