"""Nested model lists, the criteria sweep and the VC selection rule."""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from vcdim.core.config import settings
from vcdim.core.dataset import Dataset
from vcdim.core.errors import InvalidConfigError, NoModelWithinTError
from vcdim.schemas.config import OrderKind, RunConfig, SelectionConfig, SelectionRule
from vcdim.schemas.criteria import ErmInputs
from vcdim.schemas.selection import ModelRecord, NestedModelList, SelectedModels, SelectionReport
from vcdim.services import criteria
from vcdim.services.linmod import column_scale, block_indicators, expand_second_order, residual_sum_of_squares, sphere, standardize
from vcdim.services.vcfit import fit_vc
from vcdim.services.xi import xi_curve

logger = logging.getLogger(__name__)


def absolute_correlations(d: Dataset) -> np.ndarray:
    """|Pearson correlation| of every covariate with the response"""
    column_scale(d.y, "y")
    for j, name in enumerate(d.columns):
        column_scale(d.X[:, j], name)
    xc = d.X - d.X.mean(axis=0)
    yc = d.y - d.y.mean()
    r = (xc.T @ yc) / np.sqrt(np.sum(xc ** 2, axis=0) * np.sum(yc ** 2))
    return np.abs(r)


def corr_order(d: Dataset, fixed_columns: Sequence[str] = ()) -> NestedModelList:
    """Order covariates by decreasing |correlation with y|; ties keep column order"""
    fixed = set(fixed_columns)
    candidates = [name for name in d.columns if name not in fixed]
    r = absolute_correlations(d.select(candidates))
    order = np.argsort(-r, kind="stable")
    return NestedModelList(order=[candidates[j] for j in order], fixed_columns=list(fixed_columns))


def file_order(columns: Sequence[str], d: Dataset, fixed_columns: Sequence[str] = ()) -> NestedModelList:
    """User-supplied inclusion order, taken verbatim"""
    d.column_indices(list(columns) + list(fixed_columns))
    try:
        return NestedModelList(order=list(columns), fixed_columns=list(fixed_columns))
    except ValueError as e:
        raise InvalidConfigError(f"Invalid model ordering: {e}")


def column_order(d: Dataset, fixed_columns: Sequence[str] = ()) -> NestedModelList:
    """Covariates in the order they appear in the data, fixed columns left out"""
    fixed = set(fixed_columns)
    return file_order([name for name in d.columns if name not in fixed], d, fixed_columns)


def order_models(d: Dataset, run: RunConfig, fixed_columns: Sequence[str] = ()) -> NestedModelList:
    """Nested models for the configured order; a file order comes from ``file_order`` instead"""
    if run.order == OrderKind.FILE:
        raise InvalidConfigError("A file order needs its column list")
    if run.order == OrderKind.COLUMN:
        return column_order(d, fixed_columns)
    return corr_order(d, fixed_columns)


def prepare(d: Dataset, run: RunConfig) -> Tuple[Dataset, List[str]]:
    """Apply the configured transforms; returns the data and any fixed columns"""
    if run.second_order:
        d = expand_second_order(d)
    if run.standardize:
        d, _ = standardize(d)
    if run.sphere:
        d = sphere(d)
    fixed: List[str] = []
    if run.block_effects:
        d, fixed = block_indicators(d)
        fixed = list(fixed)
    return d, fixed


def _round_half_even(x: float) -> int:
    return int(round(x))


def gap(size: int, d_hat: float) -> int:
    return abs(size - _round_half_even(d_hat))


def select_from_gaps(g: Sequence[float], cfg: SelectionConfig) -> int:
    """1-based model index chosen from the gap sequence g(q) = |q - round(d_hat_q)|"""
    if not g:
        raise InvalidConfigError("Cannot select from an empty report")
    if cfg.t > 0:
        for q, value in enumerate(g, start=1):
            if value <= cfg.t:
                return q
        raise NoModelWithinTError(f"No model has |q - d_hat| <= {cfg.t}", {"t": cfg.t, "min_gap": min(g)})

    if cfg.rule == SelectionRule.GLOBAL:
        return int(np.argmin(g)) + 1

    # first local minimum, boundaries compared with their single neighbour;
    # the global minimum qualifies, so one always exists
    last = len(g) - 1
    return next(
        k + 1
        for k in range(len(g))
        if (k == 0 or g[k] <= g[k - 1]) and (k == last or g[k] <= g[k + 1])
    )


def select_vc(report: SelectionReport, cfg: SelectionConfig) -> int:
    return select_from_gaps(report.gaps, cfg)


def _argmin(values: Sequence[float]) -> int:
    return int(np.argmin(values)) + 1


def evaluate_model(d: Dataset, models: NestedModelList, q: int, run: RunConfig) -> ModelRecord:
    """d_hat and every criterion for model q"""
    columns = models.model(q)
    dp = run.require_design_points()
    curve = xi_curve(d, columns, dp, run.discretization, run.bootstrap, workers=1)
    estimate = fit_vc(curve, run.c_grid, run.d_max)

    size = models.size(q)
    if estimate.d_hat <= dp.points[0] + 0.5 and size > 1:
        logger.info(f"Model of size {size}: d_hat = {estimate.d_hat:.3f} at the smallest design point")

    rss = residual_sum_of_squares(d, columns)
    # an exact fit would send log(rss) to -inf
    rss = max(rss, np.finfo(np.float64).tiny)
    erm_inputs = ErmInputs(r_emp=rss / d.n, n=d.n, m=run.discretization.m, eta=run.eta, d=estimate.d_hat)
    k = size + 1

    record = ModelRecord(
        q=q,
        size=size,
        added=models.order[q - 1],
        d_hat=estimate.d_hat,
        c_hat=estimate.c_hat,
        gap=gap(size, estimate.d_hat),
        erm1=criteria.erm1(erm_inputs),
        erm2=criteria.erm2(erm_inputs),
        aic=criteria.aic(rss, d.n, k),
        bic=criteria.bic(rss, d.n, k),
        cv=criteria.kfold_cv(d, columns, run.folds, run.bootstrap.seed),
        rss=rss,
    )
    logger.info(f"Model q={q} (size {size}): d_hat = {record.d_hat:.3f}, gap = {record.gap}")
    return record


def sweep(
    d: Dataset, models: NestedModelList, run: RunConfig, workers: Optional[int] = None
) -> SelectionReport:
    """Score every model of the nested list; models run concurrently, assembled by q"""
    if models.Q + len(models.fixed_columns) > d.p:
        raise InvalidConfigError("Model list is longer than the number of covariates", {"Q": models.Q, "P": d.p})
    d.column_indices(models.model(models.Q))
    run.require_design_points().check_against(d.n)
    workers = workers or settings.WORKERS

    qs = list(range(1, models.Q + 1))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(lambda q: evaluate_model(d, models, q, run), qs))
    else:
        records = [evaluate_model(d, models, q, run) for q in qs]

    selected = SelectedModels(
        vcd=select_from_gaps([r.gap for r in records], run.selection),
        erm1=_argmin([r.erm1 for r in records]),
        erm2=_argmin([r.erm2 for r in records]),
        aic=_argmin([r.aic for r in records]),
        bic=_argmin([r.bic for r in records]),
        cv=_argmin([r.cv for r in records]),
    )
    logger.info(f"Selected models: {selected.model_dump()}")
    return SelectionReport(records=records, selected=selected, models=models, config=run)
