import logging
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class HbmSettings(BaseSettings):
    """Runtime configuration, overridable through HBM_* environment variables"""
    model_config = SettingsConfigDict(env_prefix="HBM_", extra="ignore")

    # Groebner budgets
    budget_spairs: int = 1_000_000
    budget_coefficient_bits: int = 100_000_000
    stretch_budget_multiplier: int = 10

    # Precision
    digits: int = 30
    refine_digit_cap: int = 120
    table_decimals: int = 2

    # Reference computations
    quadrature_dps: int = 30
    quadrature_tolerance: float = 1e-10
    ode_rtol: float = 1e-12
    ode_atol: float = 1e-14
    energy_tolerance: float = 1e-8
    event_tolerance: float = 1e-12

    # Execution
    table_workers: int = 1
    log_level: str = "INFO"

    # HTTP surface
    environment: str = "development"
    cors_origins: str = "http://localhost:3000"
    solve_rate_limit: str = "10/minute"
    api_max_m: int = 2
    api_max_order: int = 4


settings = HbmSettings()


def configure_logging(level: str = None, handlers: list = None) -> None:
    """Install the project log format on the root logger"""
    logging.basicConfig(
        level=getattr(logging, (level or settings.log_level).upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True
    )
