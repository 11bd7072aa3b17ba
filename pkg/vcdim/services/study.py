"""Repeat simulate -> order -> sweep over seeds and count which criteria find the true size."""
import logging
from typing import Optional, Sequence

from vcdim.schemas.config import BootstrapConfig, RunConfig, SimulationConfig
from vcdim.schemas.selection import CRITERIA, StudyReport, StudySeed
from vcdim.services.modelselect import order_models, sweep
from vcdim.services.simgen import simulate

logger = logging.getLogger(__name__)


def run_study(
    sim: SimulationConfig, seeds: Sequence[int], run: RunConfig, workers: Optional[int] = None
) -> StudyReport:
    """One simulated dataset per seed; the bootstrap seed follows the data seed.

    Models are nested in ``run.order``: column order gives the natural
    nesting x1..xp then the decoys.
    """
    results = []
    for seed in seeds:
        simulation = simulate(sim.model_copy(update={"seed": seed}))
        models = order_models(simulation.dataset, run)
        seeded = run.model_copy(
            update={"bootstrap": BootstrapConfig(**{**run.bootstrap.model_dump(), "seed": seed})}
        )
        report = sweep(simulation.dataset, models, seeded, workers=workers)

        d_hat_at_p = None
        if sim.p <= models.Q:
            d_hat_at_p = report.records[sim.p - 1].d_hat
        results.append(StudySeed(seed=seed, selected=report.selected, d_hat_at_p=d_hat_at_p))
        logger.info(f"Seed {seed}: selected {report.selected.model_dump()}")

    hits = {name: sum(getattr(r.selected, name) == sim.p for r in results) for name in CRITERIA}
    return StudyReport(p=sim.p, n=sim.n, decoys=sim.decoys, seeds=results, hits=hits)
