from typing import Any, Optional, Dict, List
from fastapi import status
from fastapi.responses import JSONResponse
import logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID_INPUT = 2
EXIT_BUDGET_EXHAUSTED = 3
EXIT_IO_ERROR = 4


def success_response(
    data: Any = None,
    message: str = "Success",
    meta: Optional[Dict[str, Any]] = None
) -> Dict[str, Any]:
    """Create a success response"""
    return {
        "success": True,
        "message": message,
        "data": data,
        "meta": meta
    }


def error_response(
    message: str = "An error occurred",
    errors: Optional[List[str]] = None,
    error_code: Optional[str] = None,
    status_code: int = status.HTTP_400_BAD_REQUEST,
    meta: Optional[Dict[str, Any]] = None
) -> JSONResponse:
    """Create an error response"""
    response_data = {
        "success": False,
        "message": message,
        "errors": errors or [message],
        "error_code": error_code,
        "meta": meta
    }
    return JSONResponse(
        status_code=status_code,
        content=response_data
    )


# Custom exceptions
class HbmException(Exception):
    """Base exception; carries both an HTTP status and a CLI exit code"""
    status_code: int = status.HTTP_400_BAD_REQUEST
    exit_code: int = EXIT_FAILURE
    error_code: str = "HBM_ERROR"

    def __init__(
        self,
        message: str,
        errors: Optional[List[str]] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.errors = errors or [message]
        self.details = details or {}
        super().__init__(message)

    def to_response(self) -> JSONResponse:
        return error_response(
            message=self.message,
            errors=self.errors,
            error_code=self.error_code,
            status_code=self.status_code,
            meta=self.details or None
        )


class ValidationException(HbmException):
    """Invalid user input"""
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    exit_code = EXIT_INVALID_INPUT
    error_code = "VALIDATION_ERROR"

    def __init__(self, errors: List[str]):
        super().__init__("Validation failed: " + "; ".join(errors), errors=errors)


class ArithmeticException(HbmException):
    """Exact-arithmetic precondition violated"""
    error_code = "ARITHMETIC_ERROR"


class BudgetExhaustedException(HbmException):
    """Groebner computation hit its S-pair or coefficient-size cap"""
    status_code = status.HTTP_503_SERVICE_UNAVAILABLE
    exit_code = EXIT_BUDGET_EXHAUSTED
    error_code = "BUDGET_EXHAUSTED"

    def __init__(self, message: str, stats: Optional[Dict[str, Any]] = None):
        super().__init__(message, details={"stats": stats or {}})
        self.stats = stats or {}


class NotZeroDimensionalException(HbmException):
    """No univariate eliminant exists in the basis"""
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    error_code = "NOT_ZERO_DIMENSIONAL"

    def __init__(self, message: str = "ideal not zero-dimensional or wrong order"):
        super().__init__(message)


class EndpointRootException(HbmException):
    """Sturm counting requested with an interval endpoint that is a root"""
    error_code = "ENDPOINT_ROOT"

    def __init__(self, endpoint: Any):
        super().__init__(
            f"interval endpoint {endpoint} is a root; perturb the endpoint and retry",
            details={"endpoint": str(endpoint)}
        )


class InconsistentBranchException(HbmException):
    """A frequency root admits no real completion of the triangular system"""
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    error_code = "INCONSISTENT_BRANCH"


class IntegrationException(HbmException):
    """ODE integration failed (step-size underflow or no event found)"""
    status_code = status.HTTP_500_INTERNAL_SERVER_ERROR
    error_code = "INTEGRATION_ERROR"


class OutputException(HbmException):
    """Writing results failed"""
    status_code = status.HTTP_500_INTERNAL_SERVER_ERROR
    exit_code = EXIT_IO_ERROR
    error_code = "IO_ERROR"

    def __init__(self, path: str, reason: str):
        super().__init__(f"cannot write {path}: {reason}", details={"path": str(path)})
        self.path = path
