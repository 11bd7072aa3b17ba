"""Double-bootstrap estimate of the xi curve.

For each design point n_l and outer replicate i, ``b1`` inner replicates
each draw 2*n_l rows with replacement, split them into two halves, fit
the conjectured model on each half, evaluate each fit on the other half,
bin the squared errors into m intervals of [0, B) and record the
interval-wise gap between the two discretized empirical risks. The
interval-wise mean over the inner replicates, summed over intervals, is
r_{b1,i}(n_l); xi-hat(n_l) is the mean of those over the b2 outer
replicates.

Random draws for replicate (l, i, b) come from ``replicate_stream(seed,
l, i, b)``. Within a replicate the stream is consumed in a fixed order:
unstratified, ``integers(0, n, 2*n_l)`` then ``permutation(2*n_l)``;
stratified, the same pair of calls per block level in sorted level order.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.random import Generator

from vcdim.core.config import settings
from vcdim.core.dataset import Dataset
from vcdim.core.errors import InvalidConfigError, LossExceedsBoundError, StratumTooSmallError
from vcdim.core.rng import replicate_stream
from vcdim.schemas.config import BootstrapConfig, BoundPolicy, DesignPoints, DiscretizationConfig
from vcdim.schemas.xi import LossProfile, XiCurve, XiEntry
from vcdim.services.linmod import fit_arrays, predict_arrays

logger = logging.getLogger(__name__)


def allocate_strata(n_l: int, sizes: Sequence[int]) -> List[int]:
    """Rows per half for each block level, proportional to level size, at least one each"""
    sizes = np.asarray(sizes, dtype=np.float64)
    quotas = n_l * sizes / sizes.sum()
    alloc = np.maximum(np.floor(quotas).astype(int), 1)

    # Hand out what is left by largest remainder, ties to the earlier level
    remainders = quotas - np.floor(quotas)
    order = np.argsort(-remainders, kind="stable")
    k = 0
    while alloc.sum() < n_l:
        alloc[order[k % len(order)]] += 1
        k += 1
    # Minimum-of-one bumps can overshoot; take back from the largest levels
    while alloc.sum() > n_l:
        candidates = np.where(alloc > 1)[0]
        alloc[candidates[np.argmax(alloc[candidates])]] -= 1
    return alloc.tolist()


def _split(rows: np.ndarray, half: int, rng: Generator) -> Tuple[np.ndarray, np.ndarray]:
    draws = rows[rng.integers(0, rows.shape[0], size=2 * half)]
    perm = rng.permutation(2 * half)
    return draws[perm[:half]], draws[perm[half:]]


def block_members(d: Dataset) -> List[np.ndarray]:
    """Row indices of each block level, levels in sorted order"""
    if d.blocks is None:
        raise InvalidConfigError("Stratified bootstrap requested but the dataset has no block labels")
    labels = np.array([str(b) for b in d.blocks])
    levels = d.block_levels
    members = [np.flatnonzero(labels == level) for level in levels]
    for level, rows in zip(levels, members):
        if rows.shape[0] < 2:
            raise StratumTooSmallError(
                f"Block level '{level}' has {rows.shape[0]} row(s); at least 2 are needed",
                {"level": level, "rows": int(rows.shape[0])},
            )
    return members


def draw_halves(
    n: int, n_l: int, rng: Generator, members: Optional[List[np.ndarray]] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Row indices of the two halves; ``members`` switches on stratified sampling"""
    if n_l < 1:
        raise InvalidConfigError("Design points must be positive", {"n_l": n_l})
    if members is None:
        return _split(np.arange(n), n_l, rng)

    if n_l < len(members):
        raise StratumTooSmallError(
            f"Design point {n_l} is smaller than the number of block levels ({len(members)})",
            {"n_l": n_l, "levels": len(members)},
        )
    halves_1, halves_2 = [], []
    for rows, half in zip(members, allocate_strata(n_l, [r.shape[0] for r in members])):
        g1, g2 = _split(rows, half, rng)
        halves_1.append(g1)
        halves_2.append(g2)
    return np.concatenate(halves_1), np.concatenate(halves_2)


def bootstrap_pair(
    d: Dataset, n_l: int, rng: Generator, stratified: bool = False
) -> Tuple[Dataset, Dataset]:
    """Draw 2*n_l rows with replacement and split them into two halves of n_l.

    Stratified sampling draws within each block level so every level
    appears in both halves.
    """
    members = block_members(d) if stratified else None
    g1, g2 = draw_halves(d.n, n_l, rng, members)
    return d.take(g1), d.take(g2)


def discretize_losses(se: np.ndarray, m: int, B: float) -> np.ndarray:
    """Counts of losses per interval [jB/m, (j+1)B/m); a loss equal to B goes to the last bin"""
    se = np.asarray(se, dtype=np.float64)
    if not B > 0:
        raise InvalidConfigError("Loss bound B must be positive", {"B": B})
    if se.size and se.max() > B:
        raise LossExceedsBoundError(
            f"Squared error {se.max():g} exceeds the loss bound B = {B:g}",
            {"max_loss": float(se.max()), "B": float(B)},
        )
    bins = np.minimum(np.floor(se * m / B).astype(np.int64), m - 1)
    return np.bincount(bins, minlength=m)


def midpoints(m: int, B: float) -> np.ndarray:
    return (2 * np.arange(m) + 1) * B / (2 * m)


def nu_values(p: LossProfile) -> Tuple[np.ndarray, np.ndarray]:
    """Discretized empirical risks: interval frequency times interval midpoint"""
    weights = midpoints(p.m, p.B)
    nu1 = np.asarray(p.counts_1) / p.n_l * weights
    nu2 = np.asarray(p.counts_2) / p.n_l * weights
    return nu1, nu2


def replicate_gap(p: LossProfile) -> np.ndarray:
    nu1, nu2 = nu_values(p)
    return np.abs(nu1 - nu2)


def loss_bound(se_1: np.ndarray, se_2: np.ndarray, cfg: DiscretizationConfig) -> float:
    if cfg.bound_policy == BoundPolicy.FIXED:
        return float(cfg.fixed_b)
    return float(max(se_1.max(), se_2.max()))


def inner_replicate(
    d: Dataset,
    n_l: int,
    model: Sequence[str],
    cfg: DiscretizationConfig,
    rng: Generator,
    stratified: bool = False,
    members: Optional[List[np.ndarray]] = None,
) -> np.ndarray:
    """One pass of resample, cross-fit, discretize; returns the per-interval gap.

    Works on plain arrays. Pass ``members`` from ``block_members`` to reuse
    the block index across replicates.
    """
    if stratified and members is None:
        members = block_members(d)
    g1, g2 = draw_halves(d.n, n_l, rng, members if stratified else None)
    X = d.X[:, d.column_indices(model)]
    X1, y1, X2, y2 = X[g1], d.y[g1], X[g2], d.y[g2]
    coef_1, _ = fit_arrays(X1, y1)
    coef_2, _ = fit_arrays(X2, y2)
    # each model is scored on the other half
    se_1 = (predict_arrays(coef_1, X2) - y2) ** 2
    se_2 = (predict_arrays(coef_2, X1) - y1) ** 2

    B = loss_bound(se_1, se_2, cfg)
    if B == 0:
        # both halves fitted exactly, nothing to discretize
        return np.zeros(cfg.m)

    weights = midpoints(cfg.m, B)
    counts_1 = discretize_losses(se_1, cfg.m, B)
    counts_2 = discretize_losses(se_2, cfg.m, B)
    return np.abs(counts_1 / n_l * weights - counts_2 / n_l * weights)


def r_b1(
    d: Dataset,
    n_l: int,
    model: Sequence[str],
    cfg: DiscretizationConfig,
    b1: int,
    rng_for: Callable[[int], Generator],
    stratified: bool = False,
) -> float:
    """Interval-wise mean gap over b1 inner replicates, summed over intervals.

    ``rng_for(b)`` supplies the stream of inner replicate ``b``.
    """
    members = block_members(d) if stratified else None
    gaps = np.array(
        [inner_replicate(d, n_l, model, cfg, rng_for(b), stratified, members) for b in range(b1)]
    )
    return float(gaps.mean(axis=0).sum())


def xi_curve(
    d: Dataset,
    model: Sequence[str],
    dp: DesignPoints,
    cfg: DiscretizationConfig,
    bcfg: BootstrapConfig,
    workers: Optional[int] = None,
) -> XiCurve:
    """Estimate xi-hat(n_l) for every design point.

    The (design point, outer replicate) tasks are independent and run on
    a thread pool; results are reduced by index so the curve is the same
    for any worker count.
    """
    model = list(model)
    sub = d.select(model)
    workers = workers or settings.WORKERS

    def task(job: Tuple[int, int]) -> float:
        l, i = job
        return r_b1(
            sub,
            dp.points[l],
            model,
            cfg,
            bcfg.b1,
            lambda b: replicate_stream(bcfg.seed, l, i, b),
            bcfg.stratified,
        )

    jobs = [(l, i) for l in range(dp.L) for i in range(bcfg.b2)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(task, jobs))
    else:
        results = [task(job) for job in jobs]

    replicates = np.array(results).reshape(dp.L, bcfg.b2)
    entries = []
    for l, n_l in enumerate(dp.points):
        xi_hat = float(replicates[l].mean())
        logger.debug(f"model size {len(model)}: xi_hat({n_l}) = {xi_hat:.6g}")
        entries.append(XiEntry(n_l=n_l, xi_hat=xi_hat, replicates=replicates[l].tolist()))

    return XiCurve(entries=entries, model=model, m=cfg.m, b1=bcfg.b1, b2=bcfg.b2, seed=bcfg.seed)
