from fractions import Fraction
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from shared.response import ValidationException
from shared.settings import settings
from shared.utils import parse_rational

# k values used for the three phase portraits of the regularized system
FIGURE3_K_VALUES = (Fraction(1), Fraction(1, 50), Fraction(1, 1000))


def _rational(value, name: str) -> Fraction:
    try:
        return parse_rational(value, name)
    except ValidationException as e:
        raise ValueError(e.errors[0])


class RunConfig(BaseModel):
    """Validated command-line configuration"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    command: Literal["solve", "table", "period", "emit"]
    emit_kind: Optional[Literal["trajectory", "weaksol", "waveform", "orbit"]] = None

    m: int = 0
    order: int = 1
    max_m: int = 0
    max_order: int = 1

    amplitude: Fraction = Fraction(1)
    k: List[Fraction] = []
    methods: List[Literal["exact", "quadrature", "ode"]] = ["exact"]

    digits: int = settings.digits
    decimals: int = settings.table_decimals
    budget_spairs: Optional[int] = None
    budget_bits: Optional[int] = None
    strategy: Literal["auto", "direct", "fglm"] = "auto"
    workers: Optional[int] = None

    t_max: Fraction = Fraction(20)
    start: Fraction = Fraction(-8)
    stop: Fraction = Fraction(8)
    step: Fraction = Fraction(1, 100)
    samples: Optional[int] = None

    format: Literal["text", "json", "csv"] = "text"
    out: Optional[str] = None
    log_level: str = settings.log_level

    @field_validator("amplitude", "t_max", "start", "stop", "step", mode="before")
    @classmethod
    def parse_scalar(cls, value, info):
        return _rational(value, info.field_name)

    @field_validator("k", mode="before")
    @classmethod
    def parse_k(cls, value):
        if value is None:
            return []
        return [_rational(v, "k") for v in value]

    @model_validator(mode="after")
    def check_ranges(self) -> "RunConfig":
        errors = []
        if self.amplitude <= 0:
            errors.append(f"amplitude must be positive, got {self.amplitude}")
        if any(k <= 0 for k in self.k):
            errors.append("k must be positive")
        if self.digits < 1:
            errors.append(f"digits must be >= 1, got {self.digits}")
        if self.decimals < 0:
            errors.append(f"decimals must be >= 0, got {self.decimals}")
        if self.command in ("solve", "emit") and self.m < 0:
            errors.append(f"m must be >= 0, got {self.m}")
        if self.command in ("solve", "emit") and self.order < 1:
            errors.append(f"order must be >= 1, got {self.order}")
        if self.command == "period" and any(m != "exact" for m in self.methods) and not self.k:
            errors.append("k is required for the quadrature and ode methods")
        if self.command == "emit":
            if self.emit_kind is None:
                errors.append("emit needs one of trajectory, weaksol, waveform, orbit")
            if self.emit_kind == "trajectory" and not self.k:
                errors.append("emit trajectory needs --k or --k-sweep")
            if self.step <= 0:
                errors.append(f"step must be positive, got {self.step}")
            if self.stop < self.start:
                errors.append("the sampling range is empty")
            if self.t_max <= 0:
                errors.append(f"t-max must be positive, got {self.t_max}")
            if self.out is None:
                errors.append("emit needs --out")
        for name in ("budget_spairs", "budget_bits", "workers", "samples"):
            value = getattr(self, name)
            if value is not None and value < 1:
                errors.append(f"{name.replace('_', '-')} must be >= 1, got {value}")
        if errors:
            raise ValueError("; ".join(errors))
        return self

    def grid(self) -> List[Fraction]:
        """start, start + step, ... up to stop inclusive"""
        count = int((self.stop - self.start) / self.step)
        return [self.start + i * self.step for i in range(count + 1)]
