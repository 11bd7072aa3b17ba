import logging

from fastapi import APIRouter

from vcdim.schemas.requests import ChooseRequest, ChooseResponse, OrderRequest, SweepRequest
from vcdim.schemas.selection import NestedModelList, SelectionReport
from vcdim.services.modelselect import corr_order, file_order, order_models, prepare, select_vc, sweep

logger = logging.getLogger(__name__)

router = APIRouter()


@router.post("/order", response_model=NestedModelList)
def order_by_correlation(request: OrderRequest):
    """Covariates by decreasing absolute correlation with the response"""
    return corr_order(request.dataset.to_dataset(), request.fixed_columns)


@router.post("/sweep", response_model=SelectionReport)
def sweep_models(request: SweepRequest):
    """Score the nested models with every criterion"""
    run = request.config
    run.require_design_points()
    d, fixed = prepare(request.dataset.to_dataset(), run)
    if request.order:
        models = file_order(request.order, d, fixed)
    else:
        models = order_models(d, run, fixed)
    logger.info(f"sweep request: n={d.n}, {models.Q} models")
    return sweep(d, models, run)


@router.post("/choose", response_model=ChooseResponse)
def choose_model(request: ChooseRequest):
    """Apply the VC selection rule to an existing report"""
    q = select_vc(request.report, request.selection)
    record = request.report.records[q - 1]
    return ChooseResponse(q=q, size=record.size, d_hat=record.d_hat, gaps=request.report.gaps)
