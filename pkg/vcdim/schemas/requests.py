from typing import List, Optional

from pydantic import BaseModel, Field

from vcdim.core.dataset import Dataset, validate_dataset
from vcdim.schemas.config import CGrid, RunConfig, SelectionConfig, SimulationConfig
from vcdim.schemas.selection import SelectionReport
from vcdim.schemas.xi import XiCurve


class DatasetPayload(BaseModel):
    """A dataset on the wire; X is row-major"""
    columns: List[str]
    X: List[List[float]]
    y: List[float]
    blocks: Optional[List[str]] = None

    def to_dataset(self) -> Dataset:
        X = self.X if self.X else [[] for _ in self.y]
        return validate_dataset(Dataset(y=self.y, X=X, columns=self.columns, blocks=self.blocks))

    @classmethod
    def from_dataset(cls, d: Dataset) -> "DatasetPayload":
        return cls(
            columns=list(d.columns),
            X=d.X.tolist(),
            y=d.y.tolist(),
            blocks=None if d.blocks is None else [str(b) for b in d.blocks],
        )


class XiRequest(BaseModel):
    dataset: DatasetPayload
    model: Optional[List[str]] = None  # default: every column
    config: RunConfig


class FitRequest(BaseModel):
    curve: XiCurve
    c_grid: CGrid = CGrid()
    d_max: Optional[float] = Field(None, gt=0)
    trace: bool = False


class OrderRequest(BaseModel):
    dataset: DatasetPayload
    fixed_columns: List[str] = []


class SweepRequest(BaseModel):
    dataset: DatasetPayload
    config: RunConfig
    order: Optional[List[str]] = None  # default: correlation order after the configured transforms


class ChooseRequest(BaseModel):
    report: SelectionReport
    selection: SelectionConfig = SelectionConfig()


class ChooseResponse(BaseModel):
    q: int
    size: int
    d_hat: float
    gaps: List[int]


class SimulationResponse(BaseModel):
    dataset: DatasetPayload  # standardized
    raw: DatasetPayload
    beta: List[float]  # intercept first, raw scale
    config: SimulationConfig
