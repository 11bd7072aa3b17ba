"""Synthetic linear-model data with optional decoy covariates."""
import logging
from dataclasses import dataclass

import numpy as np

from vcdim.core.dataset import Dataset
from vcdim.core.rng import SIMULATION, stream
from vcdim.schemas.config import SimulationConfig
from vcdim.schemas.fit import Standardizer
from vcdim.services.linmod import standardize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Simulation:
    dataset: Dataset  # standardized
    beta: np.ndarray  # raw coefficients, intercept first, zeros for decoys
    raw: Dataset
    standardizer: Standardizer

    @property
    def standardized_beta(self) -> np.ndarray:
        """Slopes expressed on the standardized scale of ``dataset``"""
        sds = np.asarray(self.standardizer.sds)
        return self.beta[1:] * sds / self.standardizer.y_sd


def simulate(cfg: SimulationConfig) -> Simulation:
    """Draw y = b0 + sum_{j<=p} b_j x_j + eps with all draws independent Gaussians.

    Columns x{p+1}.. are decoys with zero true coefficients. The returned
    dataset is centred and scaled, response included.
    """
    rng = stream(cfg.seed, SIMULATION)
    width = cfg.p + cfg.decoys

    beta = rng.normal(cfg.mu_beta, cfg.sigma_beta, size=cfg.p + 1)
    X = rng.normal(cfg.mu_x, cfg.sigma_x, size=(cfg.n, width))
    eps = rng.normal(0.0, cfg.sigma_eps, size=cfg.n)
    y = beta[0] + X[:, : cfg.p] @ beta[1:] + eps

    columns = [f"x{j}" for j in range(1, width + 1)]
    raw = Dataset(y=y, X=X, columns=columns)
    dataset, standardizer = standardize(raw)
    logger.info(f"Simulated n={cfg.n}, p={cfg.p}, decoys={cfg.decoys} (seed {cfg.seed})")

    full_beta = np.concatenate([beta, np.zeros(cfg.decoys)])
    return Simulation(dataset=dataset, beta=full_beta, raw=raw, standardizer=standardizer)
