from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class LinearFit(BaseModel):
    """Least-squares fit with intercept; coefficients[0] is the intercept"""
    model_config = ConfigDict(frozen=True)

    coefficients: List[float]
    column_ids: List[str]
    rank: int = Field(..., ge=0)

    @property
    def intercept(self) -> float:
        return self.coefficients[0]


class Standardizer(BaseModel):
    """Per-column centre and scale, response included"""
    model_config = ConfigDict(frozen=True)

    columns: List[str]
    means: List[float]
    sds: List[float]
    y_mean: float
    y_sd: float

    def transform(self, d):
        """Centre and scale ``d`` with the stored statistics"""
        idx = d.column_indices(self.columns)
        X = (d.X[:, idx] - np.asarray(self.means)) / np.asarray(self.sds)
        y = (d.y - self.y_mean) / self.y_sd
        return d.with_covariates(X, self.columns).with_response(y)

    def inverse(self, d):
        """Undo ``transform``"""
        idx = d.column_indices(self.columns)
        X = d.X[:, idx] * np.asarray(self.sds) + np.asarray(self.means)
        y = d.y * self.y_sd + self.y_mean
        return d.with_covariates(X, self.columns).with_response(y)
