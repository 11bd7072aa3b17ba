"""Model scores: penalized empirical risks and the AIC / BIC / k-fold CV baselines."""
import logging
import math
from typing import List, Sequence

import numpy as np
from sklearn.model_selection import KFold

from vcdim.core.dataset import Dataset
from vcdim.core.errors import DomainError, InvalidConfigError, TooFewRowsError
from vcdim.core.rng import CV, integer_seed
from vcdim.schemas.criteria import ErmInputs
from vcdim.services.linmod import ols_fit, squared_errors

logger = logging.getLogger(__name__)


def _log_confidence_term(i: ErmInputs) -> float:
    """A = ln((2m/eta) * (2ne/d)^d)"""
    if i.r_emp < 0:
        raise DomainError("Empirical risk must be nonnegative", {"r_emp": i.r_emp})
    if not 0 < i.eta < 1:
        raise DomainError("eta must lie in (0, 1)", {"eta": i.eta})
    if i.d < 1 or 2 * i.n * math.e / i.d < 1:
        raise DomainError(f"d = {i.d} outside [1, 2ne] for n = {i.n}", {"d": i.d, "n": i.n})
    A = math.log(2 * i.m / i.eta) + i.d * math.log(2 * i.n * math.e / i.d)
    if not A > 0:
        raise DomainError("Confidence term must be positive", {"A": A})
    return A


def erm1(i: ErmInputs) -> float:
    """Additive bound: R_emp + m * sqrt(A / n)"""
    A = _log_confidence_term(i)
    return i.r_emp + i.m * math.sqrt(A / i.n)


def erm2(i: ErmInputs) -> float:
    """Multiplicative bound: R_emp + (m^2 A / 2n) * (1 + sqrt(1 + 4n R_emp / (m^2 A)))"""
    A = _log_confidence_term(i)
    m2 = i.m ** 2
    return i.r_emp + m2 * A / (2 * i.n) * (1 + math.sqrt(1 + 4 * i.n * i.r_emp / (m2 * A)))


def aic(rss: float, n: int, k: int) -> float:
    return n * math.log(rss / n) + 2 * k


def bic(rss: float, n: int, k: int) -> float:
    return n * math.log(rss / n) + k * math.log(n)


def fold_assignment(n: int, folds: int, seed: int) -> List[np.ndarray]:
    """Test-row indices of each fold: a seeded shuffle of row indices split into near-equal parts"""
    if folds < 2:
        raise InvalidConfigError("Cross-validation needs at least two folds", {"folds": folds})
    if n < folds:
        raise TooFewRowsError(f"{n} rows cannot be split into {folds} folds", {"n": n, "folds": folds})
    splitter = KFold(n_splits=folds, shuffle=True, random_state=integer_seed(seed, CV))
    return [test for _, test in splitter.split(np.arange(n))]


def kfold_cv(d: Dataset, columns: Sequence[str], folds: int = 10, seed: int = 0) -> float:
    """Mean over folds of the held-out mean squared prediction error"""
    errors = []
    all_rows = np.arange(d.n)
    for test in fold_assignment(d.n, folds, seed):
        train = np.setdiff1d(all_rows, test)
        fit = ols_fit(d.take(train), columns)
        errors.append(float(np.mean(squared_errors(fit, d.take(test)))))
    return float(np.mean(errors))
