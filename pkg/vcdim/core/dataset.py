from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from vcdim.core.errors import (
    EmptyStratumError,
    LengthMismatchError,
    MissingColumnError,
    NonFiniteError,
)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """Response vector, named covariate matrix and optional design blocks.

    Arrays are made read-only on construction so a Dataset can be shared
    between worker threads. Construction does not check the invariants;
    call ``validate_dataset`` on data coming from outside the package.
    """
    y: np.ndarray
    X: np.ndarray
    columns: Tuple[str, ...]
    blocks: Optional[np.ndarray] = None
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        y = np.array(self.y, dtype=np.float64).reshape(-1)
        X = np.array(self.X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, 1) if X.size else np.empty((y.shape[0], 0))
        object.__setattr__(self, "y", _frozen(y))
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "columns", tuple(str(c) for c in self.columns))
        if self.blocks is not None:
            object.__setattr__(self, "blocks", _frozen(np.array(self.blocks, dtype=object).reshape(-1)))
        object.__setattr__(self, "_index", {name: j for j, name in enumerate(self.columns)})

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def block_levels(self) -> List[str]:
        if self.blocks is None:
            return []
        return sorted({str(b) for b in self.blocks})

    def column_indices(self, names: Sequence[str]) -> List[int]:
        indices = []
        for name in names:
            if name not in self._index:
                raise MissingColumnError(name)
            indices.append(self._index[name])
        return indices

    def select(self, names: Sequence[str]) -> "Dataset":
        """Dataset restricted to the named covariates, in the given order"""
        idx = self.column_indices(names)
        return Dataset(y=self.y, X=self.X[:, idx], columns=tuple(names), blocks=self.blocks)

    def take(self, rows: np.ndarray) -> "Dataset":
        """Dataset made of the given row indices (repeats allowed)"""
        blocks = None if self.blocks is None else self.blocks[rows]
        return Dataset(y=self.y[rows], X=self.X[rows], columns=self.columns, blocks=blocks)

    def with_covariates(self, X: np.ndarray, columns: Sequence[str]) -> "Dataset":
        return Dataset(y=self.y, X=X, columns=tuple(columns), blocks=self.blocks)

    def with_response(self, y: np.ndarray) -> "Dataset":
        return Dataset(y=y, X=self.X, columns=self.columns, blocks=self.blocks)


def validate_dataset(d: Dataset) -> Dataset:
    """Return ``d`` unchanged if its invariants hold"""
    n = d.y.shape[0]
    if n < 1:
        raise LengthMismatchError("Dataset has no rows", {"n": n})
    if d.X.shape[0] != n:
        raise LengthMismatchError(
            f"Response has {n} rows but covariates have {d.X.shape[0]}",
            {"y_rows": n, "x_rows": int(d.X.shape[0])},
        )
    if d.X.shape[1] != len(d.columns):
        raise LengthMismatchError(
            f"Covariate matrix has {d.X.shape[1]} columns but {len(d.columns)} names",
            {"x_columns": int(d.X.shape[1]), "names": len(d.columns)},
        )
    if not np.all(np.isfinite(d.y)):
        raise NonFiniteError("Response contains NaN or Inf", {"column": "y"})
    finite = np.isfinite(d.X)
    if not np.all(finite):
        row, col = np.argwhere(~finite)[0]
        raise NonFiniteError(
            f"Covariate '{d.columns[col]}' has a non-finite value at row {row}",
            {"row": int(row), "column": d.columns[col]},
        )
    if d.blocks is not None:
        if d.blocks.shape[0] != n:
            raise LengthMismatchError(
                f"Blocks have {d.blocks.shape[0]} entries but data has {n} rows",
                {"blocks": int(d.blocks.shape[0]), "n": n},
            )
        labels = [b for b in d.blocks if b is None or str(b) == "" or (isinstance(b, float) and np.isnan(b))]
        if labels:
            raise EmptyStratumError("Block labels must be non-empty for every row", {"missing": len(labels)})
    return d
