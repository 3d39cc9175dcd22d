from fastapi import APIRouter, Query, Request
from fastapi.concurrency import run_in_threadpool
from typing import Optional
import logging

from shared.limiter import limiter
from shared.response import success_response, HbmException, ValidationException
from shared.settings import settings
from shared.utils import parse_rational
from .manager import reference_manager
from .models import PeriodMethod

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/reference", tags=["Reference"])


@router.get("/period", response_model=dict)
@limiter.limit(settings.solve_rate_limit)
async def period(
    request: Request,
    amplitude: str = Query("1"),
    k: Optional[str] = Query(None),
    method: PeriodMethod = Query(PeriodMethod.CLOSED_FORM),
    digits: int = Query(20, ge=1, le=60)
):
    """Reference period by closed form, quadrature or ODE simulation"""
    a = parse_rational(amplitude, "amplitude")
    if method != PeriodMethod.CLOSED_FORM and k is None:
        raise ValidationException([f"k is required for the {method.value} method"])
    try:
        if method == PeriodMethod.CLOSED_FORM:
            result = reference_manager.exact_period(a)
        elif method == PeriodMethod.QUADRATURE:
            result = await run_in_threadpool(
                reference_manager.regularized_period_quadrature, a, parse_rational(k, "k")
            )
        else:
            result = await run_in_threadpool(
                reference_manager.regularized_period_ode, a, parse_rational(k, "k")
            )
    except HbmException:
        raise
    except Exception as e:
        logger.error(f"Error computing the reference period: {str(e)}")
        raise HbmException("Failed to compute the reference period")
    return success_response(
        data=result.to_dict(digits),
        message="Reference period computed successfully"
    )


@router.get("/weak-solution", response_model=dict)
async def weak_solution(
    t: str = Query(...),
    amplitude: str = Query("1"),
    digits: int = Query(20, ge=1, le=60)
):
    """Value and velocity of the weak periodic solution at time t"""
    time_value = parse_rational(t, "t")
    a = parse_rational(amplitude, "amplitude")
    x = reference_manager.weak_solution(time_value, a)
    y = reference_manager.weak_velocity(time_value, a)
    return success_response(
        data={
            "t": str(time_value),
            "amplitude": str(a),
            "x": reference_manager.format(x, digits),
            "y": reference_manager.format(y, digits)
        },
        message="Weak solution evaluated successfully"
    )
