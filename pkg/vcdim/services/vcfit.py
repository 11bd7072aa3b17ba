"""Fit the bound curve Phi(c, d, n) = c * sqrt(d/n * ln(2ne/d)) to a xi curve."""
import logging
import math
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from vcdim.core.errors import AllDomainError, DomainError
from vcdim.schemas.config import CGrid
from vcdim.schemas.vc import FitTraceEntry, VcEstimate
from vcdim.schemas.xi import XiCurve

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

D_TOL = 1e-6
SCAN_POINTS = 65

# Relative slack on the d <= 2ne boundary for rounding in 2*n*e
_EDGE = 1e-12


def _check_domain(d: float, n: float) -> None:
    if n < 1:
        raise DomainError(f"Sample size must be at least 1, got {n}", {"n": n})
    if d < 1 or d > 2 * n * math.e * (1 + _EDGE):
        raise DomainError(
            f"d = {d} outside [1, 2ne] for n = {n}", {"d": d, "n": n, "upper": 2 * n * math.e}
        )


def _shape(d, n):
    """sqrt(d/n * ln(2ne/d)), vectorized; the log is clipped at 0 on the boundary"""
    return np.sqrt(d / n * np.maximum(np.log(2 * n * math.e / d), 0.0))


def phi(c: float, d: float, n: int) -> float:
    """Bound curve value; natural logarithm"""
    _check_domain(d, n)
    return float(c * _shape(float(d), float(n)))


def objective_f(curve: XiCurve, c: float, d: float) -> float:
    """Sum of squared residuals between xi-hat and Phi(c, d, .) over the design points"""
    n = np.asarray(curve.design_points, dtype=np.float64)
    for n_l in n:
        _check_domain(d, n_l)
    xi = np.asarray(curve.values, dtype=np.float64)
    return float(np.sum((xi - c * _shape(d, n)) ** 2))


def _golden_section(f, a: np.ndarray, b: np.ndarray, tol: float = D_TOL) -> np.ndarray:
    """Golden-section search run on a whole vector of brackets at once.

    ``f`` maps a vector of abscissae (one per bracket) to objective values.
    Returns the midpoint of each final bracket.
    """
    h = b - a
    width = float(h.max())
    if width <= tol:
        return (a + b) / 2

    # Required steps to achieve tolerance
    steps = int(math.ceil(math.log(tol / width) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(steps - 1):
        left = yc < yd
        # minimum in [a, d]
        b = np.where(left, d, b)
        # minimum in [c, b]
        a = np.where(left, a, c)
        h = INV_PHI * h
        new_c = np.where(left, a + INV_PHI_SQUARE * h, d)
        new_d = np.where(left, c, a + INV_PHI * h)
        y_probe = f(np.where(left, new_c, new_d))
        yc, yd = np.where(left, y_probe, yd), np.where(left, yc, y_probe)
        c, d = new_c, new_d

    return np.where(yc < yd, (a + d) / 2, (c + b) / 2)


def fit_vc(
    curve: XiCurve, grid: CGrid, d_max: Optional[float] = None, trace: bool = False
) -> VcEstimate:
    """Minimize the squared distance between xi-hat and Phi over d for every c in the grid.

    d ranges over [1, min(d_max, 2e * min n_l)]. A coarse scan in d brackets
    the minimum for each c, a vectorized golden-section search refines it,
    and the winning c is polished with bounded Brent. Ties on the
    objective go to the smaller d, then the smaller c.
    """
    n = np.asarray(curve.design_points, dtype=np.float64)
    xi = np.asarray(curve.values, dtype=np.float64)
    if n.shape[0] < 2:
        raise DomainError("Fitting the bound curve needs at least two design points", {"L": int(n.shape[0])})

    if not np.any(xi > 0):
        logger.warning("All xi-hat values are zero; reporting d_hat = 1")
        return VcEstimate(d_hat=1.0, c_hat=grid.c_min, objective=0.0, degenerate=True)

    d_max = float(n.max()) if d_max is None else float(d_max)
    upper = min(d_max, 2 * math.e * float(n.min()))
    if upper < 1:
        raise AllDomainError(
            f"No feasible d: upper limit {upper:g} is below 1", {"d_max": d_max, "min_n": float(n.min())}
        )

    cs = grid.values()

    def f(c, d):
        return np.sum((xi - c[:, None] * _shape(d[:, None], n)) ** 2, axis=1)

    # Coarse scan: f(c, d) = sum xi^2 - 2c <xi, g(d)> + c^2 <g(d), g(d)>
    d_scan = np.linspace(1.0, upper, SCAN_POINTS) if upper > 1 else np.array([1.0])
    G = _shape(d_scan[:, None], n)
    F = np.sum(xi ** 2) - 2 * np.outer(cs, G @ xi) + np.outer(cs ** 2, np.sum(G ** 2, axis=1))
    k = np.argmin(F, axis=1)
    lo = d_scan[np.maximum(k - 1, 0)]
    hi = d_scan[np.minimum(k + 1, d_scan.shape[0] - 1)]

    d_best = _golden_section(lambda d: f(cs, d), lo, hi)
    f_best = f(cs, d_best)
    # keep the scan point if the refinement did not improve on it
    f_scan = f(cs, d_scan[k])
    improved = f_best <= f_scan
    d_best = np.where(improved, d_best, d_scan[k])
    f_best = np.where(improved, f_best, f_scan)

    best = np.lexsort((cs, d_best, f_best))[0]
    c_hat, d_hat, f_hat = float(cs[best]), float(d_best[best]), float(f_best[best])

    # Brent polish inside the winning bracket
    if hi[best] > lo[best]:
        res = minimize_scalar(
            lambda d: float(np.sum((xi - c_hat * _shape(d, n)) ** 2)),
            bounds=(float(lo[best]), float(hi[best])),
            method="bounded",
            options={"xatol": D_TOL},
        )
        if res.success and res.fun < f_hat:
            d_hat, f_hat = float(res.x), float(res.fun)

    if cs.shape[0] > 1 and c_hat in (float(cs[0]), float(cs[-1])):
        logger.warning(
            f"c_hat = {c_hat:g} sits on the edge of the c grid [{float(cs[0]):g}, {float(cs[-1]):g}]; "
            f"d_hat = {d_hat:.4f} is not reliable"
        )
    if d_hat - 1 < 1e-3 or upper - d_hat < 1e-3:
        logger.info(f"d_hat = {d_hat:.4f} sits on the feasibility boundary [1, {upper:.4f}]")

    entries = None
    if trace:
        entries = [FitTraceEntry(c=float(c), d=float(d), f=float(v)) for c, d, v in zip(cs, d_best, f_best)]

    return VcEstimate(d_hat=d_hat, c_hat=c_hat, objective=max(f_hat, 0.0), trace=entries)
