"""Exact rationals and the symbolic valuation of a zero truncation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import InputError

Rat = Fraction


def to_rat(x: Union[int, str, Fraction]) -> Fraction:
    """Coerce an int, a Fraction or a "num/den" string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {x!r}") from exc
    raise InputError(f"not a rational: {x!r}")


def fmt_rat(x: Fraction) -> str:
    """Encode as "num/den" (integers keep the "/1" so the format is uniform)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class AtLeast:
    """Valuation of a series that is zero to its known precision."""

    bound: int

    def __str__(self) -> str:
        return f">={self.bound}"

    def to_json(self) -> str:
        return str(self)


def is_determined(v) -> bool:
    return not isinstance(v, AtLeast)
