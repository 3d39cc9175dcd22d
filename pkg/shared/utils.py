import csv
import logging
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence, Union

from shared.response import OutputException, ValidationException

logger = logging.getLogger(__name__)

RationalLike = Union[int, str, float, Fraction, Decimal]


def parse_rational(value: RationalLike, name: str = "value") -> Fraction:
    """Parse '3', '1/2', '0.01' or numbers into an exact Fraction"""
    if isinstance(value, Fraction):
        return value
    try:
        if isinstance(value, float):
            return Fraction(repr(value))
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ValidationException([f"{name} must be a rational number, got {value!r}"])


def format_decimal(value: Fraction, digits: int) -> str:
    """Render an exact rational with `digits` significant digits"""
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = max(1, digits)
        rendered = Decimal(value.numerator) / Decimal(value.denominator)
    return str(rendered)


def format_fixed(value: Fraction, decimals: int) -> str:
    """Render an exact rational with a fixed number of decimals"""
    quantum = Decimal(1).scaleb(-decimals)
    with localcontext() as ctx:
        ctx.prec = 200
        rendered = (Decimal(Fraction(value).numerator) / Decimal(Fraction(value).denominator)).quantize(quantum)
    return f"{rendered:f}"


def format_sample(value: Any) -> str:
    """17 significant digits, the CSV sample format"""
    return f"{float(value):.17g}"


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    """Write a CSV file; returns the number of data rows"""
    count = 0
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow(row)
                count += 1
    except OSError as e:
        raise OutputException(str(path), e.strerror or str(e))
    logger.info(f"Wrote {count} rows to {path}")
    return count
