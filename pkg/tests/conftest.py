import numpy as np
import pytest

from vcdim.core.dataset import Dataset
from vcdim.schemas.config import (
    BootstrapConfig,
    CGrid,
    DesignPoints,
    DiscretizationConfig,
    RunConfig,
)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def linear_dataset(rng):
    """y = 1 + 2 x1 - x2 + noise, with x3 unrelated"""
    n = 60
    X = rng.normal(size=(n, 3))
    y = 1.0 + 2.0 * X[:, 0] - X[:, 1] + rng.normal(scale=0.3, size=n)
    return Dataset(y=y, X=X, columns=("x1", "x2", "x3"))


@pytest.fixture
def blocked_dataset(rng):
    n = 40
    X = rng.normal(size=(n, 2))
    y = X[:, 0] + rng.normal(scale=0.5, size=n)
    blocks = np.array(["a"] * 25 + ["b"] * 15, dtype=object)
    return Dataset(y=y, X=X, columns=("x1", "x2"), blocks=blocks)


@pytest.fixture
def small_run():
    """A run small enough for unit tests"""
    return RunConfig(
        design_points=DesignPoints(points=[10, 20, 30]),
        discretization=DiscretizationConfig(m=5),
        bootstrap=BootstrapConfig(b1=3, b2=3, seed=7),
        c_grid=CGrid(c_min=0.1, c_max=20.0, c_step=0.1),
        folds=5,
    )


@pytest.fixture
def csv_file(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text(
        "y,x1,x2,label,block\n"
        "1.0,0.5,2.0,a,g1\n"
        "2.0,1.5,1.0,b,g1\n"
        "3.5,2.5,0.0,c,g2\n"
        "4.0,3.0,-1.0,d,g2\n"
        "5.5,4.5,-2.5,e,g2\n",
        encoding="utf-8",
    )
    return path
