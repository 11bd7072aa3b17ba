from pydantic import BaseModel, ConfigDict, Field


class ErmInputs(BaseModel):
    """Plug-in quantities for the penalized empirical risks.

    Range checks live in the criteria service so that violations surface
    as DomainError like every other bound formula.
    """
    model_config = ConfigDict(frozen=True)

    r_emp: float  # mean squared error on the full data
    n: int = Field(..., ge=1)
    m: int = Field(..., ge=1)
    eta: float = 0.05
    d: float  # VC dimension plugged in
