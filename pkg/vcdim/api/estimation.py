import logging

from fastapi import APIRouter

from vcdim.schemas.requests import FitRequest, XiRequest
from vcdim.schemas.vc import VcEstimate
from vcdim.schemas.xi import XiCurve
from vcdim.services.modelselect import prepare
from vcdim.services.vcfit import fit_vc
from vcdim.services.xi import xi_curve

logger = logging.getLogger(__name__)

router = APIRouter()


@router.post("/xi", response_model=XiCurve)
def estimate_xi(request: XiRequest):
    """Bootstrap xi curve for one model over the configured design points"""
    run = request.config
    dp = run.require_design_points()
    d = request.dataset.to_dataset()
    if request.model:
        d = d.select(request.model)
    d, _ = prepare(d, run)
    dp.check_against(d.n)
    logger.info(f"xi request: n={d.n}, model size {d.p}, design points {dp.points}")
    return xi_curve(d, d.columns, dp, run.discretization, run.bootstrap)


@router.post("/fit", response_model=VcEstimate)
def fit_curve(request: FitRequest):
    """Fit the bound curve to a xi curve"""
    return fit_vc(request.curve, request.c_grid, request.d_max, trace=request.trace)
