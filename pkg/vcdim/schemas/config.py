import logging
from enum import Enum
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from vcdim.core.config import settings
from vcdim.core.errors import InvalidConfigError
from vcdim.core.rng import SEED_MAX

logger = logging.getLogger(__name__)


class BoundPolicy(str, Enum):
    """How the loss upper bound B is obtained"""
    POOLED_MAX = "pooled_max"  # max of the pooled 2*n_l squared errors, per replicate
    FIXED = "fixed"  # user supplied constant


class SelectionRule(str, Enum):
    LOCAL = "local"  # smallest local minimum
    GLOBAL = "global"


class OrderKind(str, Enum):
    CORRELATION = "correlation"
    FILE = "file"
    COLUMN = "column"  # covariates as they appear in the data


class DesignPoints(BaseModel):
    """Subsample sizes n_1 < ... < n_L at which the xi curve is estimated"""
    model_config = ConfigDict(frozen=True)

    points: List[int]

    @field_validator("points")
    @classmethod
    def sort_points(cls, value: List[int]) -> List[int]:
        if any(v < 1 for v in value):
            raise ValueError("Design points must be positive integers")
        cleaned = sorted(set(value))
        if cleaned != list(value):
            logger.warning(f"Design points {list(value)} were deduplicated and sorted to {cleaned}")
        if len(cleaned) < 2:
            raise ValueError("At least two distinct design points are required")
        return cleaned

    @property
    def L(self) -> int:
        return len(self.points)

    def check_against(self, n: int) -> List[str]:
        """Advisory warnings about where the design points sit relative to n.

        Raises when no design point fits inside the sample, since the
        fitted d could then leave the domain of the bounds at n.
        """
        if self.points[0] > n:
            raise InvalidConfigError(
                f"Every design point exceeds the sample size n = {n}", {"points": self.points, "n": n}
            )
        warnings = []
        largest = self.points[-1]
        if 2 * largest > settings.DESIGN_POINT_MAX_MULTIPLE * n:
            warnings.append(
                f"2*n_L = {2 * largest} exceeds {settings.DESIGN_POINT_MAX_MULTIPLE:g}*n = "
                f"{settings.DESIGN_POINT_MAX_MULTIPLE * n:g}; bootstrap halves will repeat rows heavily"
            )
        lower = [p for p in self.points if p <= n / 2]
        upper = [p for p in self.points if n / 2 < p <= n]
        if not lower or not upper:
            warnings.append("Design points should cover both [0, n/2] and [n/2, n]")
        elif len(upper) <= len(lower):
            warnings.append("More design points should lie in [n/2, n] than in [0, n/2]")
        if largest < n / 2:
            warnings.append("Design points do not spread over [0, n]; the largest is below n/2")
        for message in warnings:
            logger.warning(message)
        return warnings


class DiscretizationConfig(BaseModel):
    """Number of loss intervals m and the policy that fixes B"""
    model_config = ConfigDict(frozen=True)

    m: int = Field(10, ge=1)
    bound_policy: BoundPolicy = BoundPolicy.POOLED_MAX
    fixed_b: Optional[float] = None

    @model_validator(mode="after")
    def check_fixed_b(self):
        if self.bound_policy == BoundPolicy.FIXED:
            if self.fixed_b is None or not self.fixed_b > 0:
                raise ValueError("A fixed bound policy needs fixed_b > 0")
        return self


class BootstrapConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    b1: int = Field(50, ge=1)
    b2: int = Field(50, ge=1)
    seed: int = Field(0, ge=0, le=SEED_MAX)
    stratified: bool = False


class CGrid(BaseModel):
    """Grid of scale constants c tried when fitting the bound curve"""
    model_config = ConfigDict(frozen=True)

    c_min: float = Field(0.01, gt=0)
    c_max: float = Field(100.0, gt=0)
    c_step: float = Field(0.01, gt=0)

    @model_validator(mode="after")
    def check_range(self):
        if self.c_min > self.c_max:
            raise ValueError("c_min must not exceed c_max")
        return self

    def values(self):
        count = int(round((self.c_max - self.c_min) / self.c_step)) + 1
        grid = np.round(self.c_min + self.c_step * np.arange(count), 12)
        return grid[grid <= self.c_max * (1 + 1e-12)]


class SelectionConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    t: float = Field(0.0, ge=0)
    rule: SelectionRule = SelectionRule.LOCAL


class SimulationConfig(BaseModel):
    """Linear-model generator: y = b0 + sum_j b_j x_j + eps, plus decoy columns"""
    model_config = ConfigDict(frozen=True)

    p: int = Field(15, ge=1)
    n: int = Field(400, ge=2)
    sigma_eps: float = Field(0.4, gt=0)
    mu_beta: float = 5.0
    sigma_beta: float = Field(3.0, gt=0)
    mu_x: float = 5.0
    sigma_x: float = Field(2.0, gt=0)
    decoys: int = Field(0, ge=0)
    seed: int = Field(0, ge=0, le=SEED_MAX)


class RunConfig(BaseModel):
    """Everything a pipeline run needs besides the data"""
    model_config = ConfigDict(frozen=True)

    design_points: Optional[DesignPoints] = None
    discretization: DiscretizationConfig = DiscretizationConfig()
    bootstrap: BootstrapConfig = BootstrapConfig()
    c_grid: CGrid = CGrid()
    selection: SelectionConfig = SelectionConfig()
    d_max: Optional[float] = Field(None, gt=0)
    eta: float = Field(0.05, gt=0, lt=1)
    folds: int = Field(10, ge=2)
    order: OrderKind = OrderKind.CORRELATION
    standardize: bool = True
    sphere: bool = False
    block_effects: bool = False
    second_order: bool = False

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        try:
            return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))
        except ValidationError as e:
            raise InvalidConfigError(f"Invalid config file {path}", {"errors": e.errors(include_url=False, include_context=False)})

    def dump(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return path

    def require_design_points(self) -> DesignPoints:
        if self.design_points is None:
            raise InvalidConfigError("Design points must be given explicitly")
        return self.design_points
