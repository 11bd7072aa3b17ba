from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from vcdim.schemas.config import RunConfig

CRITERIA = ("vcd", "erm1", "erm2", "aic", "bic", "cv")


class NestedModelList(BaseModel):
    """Model q uses the first q ordered columns plus any fixed columns and the intercept"""
    model_config = ConfigDict(frozen=True)

    order: List[str]
    fixed_columns: List[str] = []

    @field_validator("order")
    @classmethod
    def check_order(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("A model list needs at least one column")
        if len(set(value)) != len(value):
            raise ValueError("Duplicate columns in model ordering")
        return value

    @model_validator(mode="after")
    def check_fixed(self):
        if set(self.fixed_columns) & set(self.order):
            raise ValueError("Fixed columns must not appear in the ordering")
        return self

    @property
    def Q(self) -> int:
        return len(self.order)

    def model(self, q: int) -> List[str]:
        return list(self.fixed_columns) + self.order[:q]

    def size(self, q: int) -> int:
        return q + len(self.fixed_columns)


class ModelRecord(BaseModel):
    """One row of the comparison table"""
    q: int
    size: int  # number of covariates, fixed columns included
    added: str  # column entering at this step
    d_hat: float
    c_hat: float
    gap: int  # |size - round(d_hat)|
    erm1: float
    erm2: float
    aic: float
    bic: float
    cv: float
    rss: float


class SelectedModels(BaseModel):
    vcd: int = Field(..., ge=1)
    erm1: int = Field(..., ge=1)
    erm2: int = Field(..., ge=1)
    aic: int = Field(..., ge=1)
    bic: int = Field(..., ge=1)
    cv: int = Field(..., ge=1)


class SelectionReport(BaseModel):
    records: List[ModelRecord]
    selected: SelectedModels
    models: NestedModelList
    config: RunConfig

    @property
    def gaps(self) -> List[int]:
        return [r.gap for r in self.records]


class StudySeed(BaseModel):
    seed: int
    selected: SelectedModels
    d_hat_at_p: Optional[float] = None


class StudyReport(BaseModel):
    """Multi-seed comparison of the selection criteria on simulated data"""
    p: int
    n: int
    decoys: int
    seeds: List[StudySeed]
    hits: Dict[str, int]  # seeds on which each criterion picked q = p
