"""Ordinary least squares and the data transforms applied before estimation."""
import logging
from itertools import combinations
from typing import Sequence, Tuple

import numpy as np
from scipy import linalg

from vcdim.core.dataset import Dataset
from vcdim.core.errors import InvalidConfigError, SingularCovarianceError, ZeroVarianceError
from vcdim.schemas.fit import LinearFit, Standardizer

logger = logging.getLogger(__name__)

# Singular values below RCOND * largest are treated as zero
RCOND = 1e-10


def column_scale(values: np.ndarray, name: str) -> Tuple[float, float]:
    mean = float(np.mean(values))
    sd = float(np.std(values, ddof=1)) if values.shape[0] > 1 else 0.0
    if not sd > 1e-12 * max(1.0, abs(mean)):
        raise ZeroVarianceError(name)
    return mean, sd


def standardize(d: Dataset) -> Tuple[Dataset, Standardizer]:
    """Centre and scale every covariate and the response to mean 0, sd 1"""
    y_mean, y_sd = column_scale(d.y, "y")
    means, sds = [], []
    for j, name in enumerate(d.columns):
        mean, sd = column_scale(d.X[:, j], name)
        means.append(mean)
        sds.append(sd)
    standardizer = Standardizer(
        columns=list(d.columns), means=means, sds=sds, y_mean=y_mean, y_sd=y_sd
    )
    return standardizer.transform(d), standardizer


def sphere(d: Dataset) -> Dataset:
    """Whiten the covariates so their sample covariance is the identity.

    Uses the symmetric inverse square root of the covariance, which keeps
    each whitened column as close as possible to the original one, so
    column names are carried over.
    """
    X = d.X - d.X.mean(axis=0)
    cov = np.atleast_2d(np.cov(X, rowvar=False, ddof=1))
    eigvals, eigvecs = linalg.eigh(cov)
    if eigvals[0] <= 1e-10 * max(eigvals[-1], 0.0) or eigvals[-1] <= 0:
        raise SingularCovarianceError(
            "Covariate covariance matrix is not positive definite",
            {"smallest_eigenvalue": float(eigvals[0]), "largest_eigenvalue": float(eigvals[-1])},
        )
    whitening = (eigvecs / np.sqrt(eigvals)) @ eigvecs.T
    return d.with_covariates(X @ whitening, d.columns)


def design_matrix(X: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones(X.shape[0]), X])


def fit_arrays(X: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, int]:
    """Minimum-norm least squares with intercept on raw arrays"""
    coef, _, rank, _ = np.linalg.lstsq(design_matrix(X), y, rcond=RCOND)
    return coef, int(rank)


def predict_arrays(coef: np.ndarray, X: np.ndarray) -> np.ndarray:
    return coef[0] + X @ coef[1:]


def ols_fit(d: Dataset, columns: Sequence[str]) -> LinearFit:
    """Least-squares fit of y on the given columns plus an intercept.

    Rank-deficient designs (duplicated rows from resampling, n < q + 1)
    get the minimum-norm solution; the numerical rank is recorded.
    """
    idx = d.column_indices(columns)
    coef, rank = fit_arrays(d.X[:, idx], d.y)
    return LinearFit(coefficients=coef.tolist(), column_ids=list(columns), rank=rank)


def ols_predict(f: LinearFit, d: Dataset) -> np.ndarray:
    idx = d.column_indices(f.column_ids)
    return predict_arrays(np.asarray(f.coefficients), d.X[:, idx])


def squared_errors(f: LinearFit, d: Dataset) -> np.ndarray:
    return (ols_predict(f, d) - d.y) ** 2


def residual_sum_of_squares(d: Dataset, columns: Sequence[str]) -> float:
    return float(np.sum(squared_errors(ols_fit(d, columns), d)))


def expand_second_order(d: Dataset) -> Dataset:
    """Append squares ("a^2") and pairwise products ("a*b") of every covariate"""
    X = [d.X]
    names = list(d.columns)
    for j, name in enumerate(d.columns):
        X.append(d.X[:, [j]] ** 2)
        names.append(f"{name}^2")
    for a, b in combinations(range(d.p), 2):
        X.append(d.X[:, [a]] * d.X[:, [b]])
        names.append(f"{d.columns[a]}*{d.columns[b]}")
    logger.info(f"Expanded {d.p} covariates to {len(names)} first and second order terms")
    return d.with_covariates(np.hstack(X), names)


def block_indicators(d: Dataset) -> Tuple[Dataset, Sequence[str]]:
    """Append a 0/1 column per block level except the first.

    Returns the extended dataset and the names of the new columns.
    """
    if d.blocks is None:
        raise InvalidConfigError("Block effects requested but the dataset has no block labels")
    levels = d.block_levels
    labels = np.array([str(b) for b in d.blocks])
    names = [f"block[{level}]" for level in levels[1:]]
    if not names:
        return d, []
    indicators = np.column_stack([(labels == level).astype(np.float64) for level in levels[1:]])
    return d.with_covariates(np.hstack([d.X, indicators]), list(d.columns) + names), names
