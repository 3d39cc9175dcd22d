import logging
import os
import time
from contextlib import asynccontextmanager
from fastapi import FastAPI, Request, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from slowapi import _rate_limit_exceeded_handler
from slowapi.errors import RateLimitExceeded
from slowapi.middleware import SlowAPIMiddleware

from shared.limiter import limiter
from shared.response import error_response, HbmException
from shared.settings import configure_logging, settings
from modules.solver.router import router as solver_router
from modules.reference.router import router as reference_router

# Configure logging
os.makedirs("logs", exist_ok=True)
configure_logging(handlers=[
    logging.FileHandler("logs/app.log"),
    logging.StreamHandler()
])
logger = logging.getLogger(__name__)

SERVICE_NAME = "HBM Period API"
VERSION = "1.0.0"
CORS_ORIGINS = settings.cors_origins.split(",")
ENVIRONMENT = settings.environment


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan events"""
    logger.info(f"Starting {SERVICE_NAME}...")
    logger.info(
        f"Budgets: {settings.budget_spairs} S-pairs, {settings.budget_coefficient_bits} coefficient bits; "
        f"API caps m <= {settings.api_max_m}, order <= {settings.api_max_order}"
    )
    yield
    logger.info(f"Shutting down {SERVICE_NAME}...")

# Create FastAPI application
app = FastAPI(
    title=SERVICE_NAME,
    description="Harmonic balance periods of x^(m+1) x'' + x^m = 0 with certified exact arithmetic",
    version=VERSION,
    docs_url="/docs" if ENVIRONMENT == "development" else None,
    redoc_url="/redoc" if ENVIRONMENT == "development" else None,
    lifespan=lifespan
)

# Add rate limiting middleware
app.state.limiter = limiter
app.add_exception_handler(RateLimitExceeded, _rate_limit_exceeded_handler)
app.add_middleware(SlowAPIMiddleware)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["GET", "OPTIONS"],
    allow_headers=["*"],
)


@app.middleware("http")
async def log_requests(request: Request, call_next):
    """Log method, path, status and duration of every request"""
    start = time.perf_counter()
    response = await call_next(request)
    elapsed = (time.perf_counter() - start) * 1000
    logger.info(f"{request.method} {request.url.path} -> {response.status_code} ({elapsed:.1f} ms)")
    return response


@app.exception_handler(HbmException)
async def hbm_exception_handler(request: Request, exc: HbmException):
    logger.warning(f"{exc.error_code} on {request.url.path}: {exc.message}")
    return exc.to_response()


@app.exception_handler(RequestValidationError)
async def validation_exception_handler(request: Request, exc: RequestValidationError):
    errors = [f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in exc.errors()]
    return error_response(
        message="Validation failed",
        errors=errors,
        error_code="VALIDATION_ERROR",
        status_code=422
    )

# Global exception handler
@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    """Global exception handler for unhandled errors"""
    logger.error(f"Unhandled exception: {exc}", exc_info=True)

    if isinstance(exc, HTTPException):
        return error_response(exc.detail, status_code=exc.status_code)

    # Don't expose internal errors in production
    if ENVIRONMENT == "production":
        return error_response("Internal server error", status_code=500)
    return error_response(f"Internal server error: {str(exc)}", status_code=500)

# Health check endpoint
@app.get("/health", tags=["Health"])
@limiter.limit("10/minute")
async def health_check(request: Request):
    """Health check endpoint"""
    return {
        "status": "healthy",
        "service": SERVICE_NAME,
        "version": VERSION,
        "environment": ENVIRONMENT
    }

# Root endpoint
@app.get("/", tags=["Root"])
@limiter.limit("30/minute")
async def root(request: Request):
    """Root endpoint with API information"""
    return {
        "message": f"Welcome to the {SERVICE_NAME}",
        "version": VERSION,
        "docs": "/docs" if ENVIRONMENT == "development" else "Documentation not available in production",
        "health": "/health"
    }

# API version prefix
API_V1_PREFIX = "/api/v1"

# Include routers
app.include_router(solver_router, prefix=API_V1_PREFIX)
app.include_router(reference_router, prefix=API_V1_PREFIX)
