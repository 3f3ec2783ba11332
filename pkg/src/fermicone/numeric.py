"""Scalar handling: exact rationals by default, tolerant floats on request."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import InvalidArgument

Scalar = Union[Fraction, float]

RATIONAL = "rational"
FLOAT = "float"


@dataclass(frozen=True)
class NumericPolicy:
    """How scalars are represented and compared.

    In rational mode every value is a :class:`fractions.Fraction` and equality
    is exact. In float mode two values are equal when
    ``|a - b| <= tol * max(1, |a|, |b|)``.
    """

    mode: str = RATIONAL
    tol: float = 0.0

    def __post_init__(self):
        if self.mode not in (RATIONAL, FLOAT):
            raise InvalidArgument(f"unknown numeric mode {self.mode!r}")
        if self.mode == FLOAT and not self.tol > 0:
            raise InvalidArgument("float mode requires a positive tolerance")
        if self.tol < 0:
            raise InvalidArgument("tolerance must be nonnegative")

    @classmethod
    def floating(cls, tol: float = 1e-9) -> "NumericPolicy":
        return cls(FLOAT, tol)

    @property
    def exact(self) -> bool:
        return self.mode == RATIONAL

    @property
    def dtype(self):
        return object if self.exact else np.float64

    def coerce(self, x) -> Scalar:
        """Convert ints, floats, Fractions and ``"p/q"`` strings to this policy's scalar."""
        if isinstance(x, bool):
            raise InvalidArgument(f"boolean is not a scalar: {x!r}")
        try:
            if self.exact:
                if isinstance(x, Fraction):
                    return x
                if isinstance(x, (int, np.integer)):
                    return Fraction(int(x))
                if isinstance(x, (float, np.floating)):
                    if not math.isfinite(x):
                        raise InvalidArgument(f"non-finite scalar {x!r}")
                    # decimal reading: 0.1 means 1/10, not the nearest binary double
                    return Fraction(repr(float(x)))
                if isinstance(x, str):
                    return Fraction(x.strip())
            else:
                if isinstance(x, str):
                    x = Fraction(x.strip())
                if isinstance(x, (int, float, Fraction, np.integer, np.floating)):
                    v = float(x)
                    if not math.isfinite(v):
                        raise InvalidArgument(f"non-finite scalar {x!r}")
                    return v
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidArgument(f"cannot parse scalar {x!r}: {exc}") from None
        raise InvalidArgument(f"unsupported scalar type {type(x).__name__}: {x!r}")

    def zero(self) -> Scalar:
        return Fraction(0) if self.exact else 0.0

    def one(self) -> Scalar:
        return Fraction(1) if self.exact else 1.0

    def eq(self, a, b) -> bool:
        if self.exact:
            return a == b
        return abs(a - b) <= self.tol * max(1.0, abs(a), abs(b))

    def cmp(self, a, b) -> int:
        if self.eq(a, b):
            return 0
        return -1 if a < b else 1

    def is_zero(self, a) -> bool:
        return self.eq(a, 0)

    def is_negative(self, a) -> bool:
        return self.cmp(a, 0) < 0

    def is_positive(self, a) -> bool:
        return self.cmp(a, 0) > 0

    def array(self, values) -> np.ndarray:
        if self.exact:
            out = np.empty(len(values), dtype=object)
            out[:] = [self.coerce(v) for v in values]
            return out
        return np.asarray([self.coerce(v) for v in values], dtype=np.float64)


DEFAULT_POLICY = NumericPolicy()


def to_json_scalar(x):
    """Integers stay integers, other rationals become ``"p/q"``, floats stay floats."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (np.integer, int)):
        return int(x)
    return float(x)


def format_scalar(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and x.is_integer():
        return str(int(x))
    return f"{x:.10g}" if isinstance(x, float) else str(x)


def common_denominator(values) -> int:
    return math.lcm(1, *(v.denominator for v in values))
