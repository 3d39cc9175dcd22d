from fastapi import APIRouter, Query, Request
from fastapi.concurrency import run_in_threadpool
from typing import Optional
import logging

from shared.limiter import limiter
from shared.response import success_response, HbmException, ValidationException
from shared.settings import settings
from .manager import API_CELLS, STRETCH_CELLS, solver_manager

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/hbm", tags=["Harmonic Balance"])


def _check_cell(m: int, order: int) -> None:
    if m > settings.api_max_m or order > settings.api_max_order:
        raise ValidationException([
            f"the API serves m <= {settings.api_max_m} and order <= {settings.api_max_order}, "
            f"got m={m}, order={order}"
        ])
    if (m, order) in STRETCH_CELLS or (m, order) not in API_CELLS:
        raise ValidationException([f"cell m={m}, order={order} is CLI only; use `hbm solve`"])


@router.get("/solve", response_model=dict)
@limiter.limit(settings.solve_rate_limit)
async def solve(
    request: Request,
    m: int = Query(..., ge=0),
    order: int = Query(..., ge=1),
    digits: Optional[int] = Query(None, ge=1, le=120),
    strategy: str = Query("auto")
):
    """Solve one harmonic balance approximation"""
    _check_cell(m, order)
    digits = settings.digits if digits is None else digits
    try:
        outcome = await run_in_threadpool(
            solver_manager.solve_hbm, m, order, digits, None, 1, strategy
        )
    except HbmException:
        raise
    except Exception as e:
        logger.error(f"Error solving m={m}, N={order}: {str(e)}")
        raise HbmException("Failed to solve the harmonic balance system")
    return success_response(
        data=outcome.to_dict(digits),
        message=f"m={m}, N={order}: {outcome.status.value}"
    )


@router.get("/table", response_model=dict)
@limiter.limit(settings.solve_rate_limit)
async def table(
    request: Request,
    max_m: int = Query(..., ge=0, le=2),
    max_order: int = Query(..., ge=1),
    decimals: Optional[int] = Query(None, ge=0, le=12)
):
    """Relative period errors against the weak solution"""
    for m in range(max_m + 1):
        for n in range(1, max_order + 1):
            _check_cell(m, n)
    decimals = settings.table_decimals if decimals is None else decimals
    try:
        entries = await run_in_threadpool(solver_manager.error_table, max_m, max_order)
    except HbmException:
        raise
    except Exception as e:
        logger.error(f"Error building the error table: {str(e)}")
        raise HbmException("Failed to build the error table")
    return success_response(
        data=[entry.to_dict(decimals) for entry in entries],
        message="Error table computed successfully",
        meta={"cells": len(entries)}
    )
