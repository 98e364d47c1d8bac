"""Exact integer money.

All mechanism arithmetic runs on ticks: signed integer counts of a
scenario-defined minor unit (e.g. one tick = 0.01 billion rubles at
``unit_scale=100``).  Decimal strings appear only at I/O boundaries and
must convert without loss.
"""

from __future__ import annotations

import re

Ticks = int

_DECIMAL_RE = re.compile(r"^(-?)(\d+)(?:\.(\d+))?$")


class PrecisionError(ValueError):
    """A decimal string cannot be represented exactly at the given scale."""


def ticks_from_decimal(text: str, unit_scale: int) -> Ticks:
    """Parse a decimal string into an exact tick count.

    ``unit_scale`` is the number of ticks per whole unit (a positive
    integer, normally a power of ten).  Strings whose fractional part
    does not land on the tick grid are rejected rather than rounded: a
    lossy amount signals a mis-specified scenario.
    """
    if unit_scale <= 0:
        raise ValueError(f"unit_scale must be positive, got {unit_scale}")
    m = _DECIMAL_RE.match(text.strip())
    if m is None:
        raise PrecisionError(f"not a decimal number: {text!r}")
    sign, whole, frac = m.groups()
    frac = frac or ""
    # numerator / 10^len(frac) * unit_scale must be an integer
    numerator = int(whole + frac) * unit_scale
    denominator = 10 ** len(frac)
    if numerator % denominator != 0:
        raise PrecisionError(
            f"{text!r} is not representable at scale {unit_scale} "
            f"(finer than one tick)"
        )
    ticks = numerator // denominator
    return -ticks if sign else ticks


def format_ticks(amount: Ticks, unit_scale: int) -> str:
    """Render ticks as a fixed-point decimal at the scale's precision.

    Round-trips exactly through :func:`ticks_from_decimal`.
    """
    if unit_scale <= 0:
        raise ValueError(f"unit_scale must be positive, got {unit_scale}")
    digits = 0
    scale = unit_scale
    while scale % 10 == 0:
        scale //= 10
        digits += 1
    if scale != 1:
        raise ValueError(f"unit_scale must be a power of ten, got {unit_scale}")
    sign = "-" if amount < 0 else ""
    amount = abs(amount)
    whole, frac = divmod(amount, unit_scale)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"
