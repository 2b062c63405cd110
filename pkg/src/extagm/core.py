"""Value types, validation and coordinate conversions shared by the package.

All quantities are dimensionless binary64 floats.  Value types are frozen
dataclasses; every function here is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "AGMError",
    "ValidationError",
    "NonFiniteError",
    "OrderViolation",
    "SumViolation",
    "DomainError",
    "ParamError",
    "NegativeRadicand",
    "NonPositiveRadicand",
    "NonConvergence",
    "SlowConvergence",
    "Triple",
    "RatioPair",
    "ModuliPair",
    "AnglePair",
    "validate_triple",
    "ratios",
    "moduli_to_angles",
    "angles_to_moduli",
    "clamp_radicand",
    "RADICAND_GUARD",
    "EPS",
]

EPS = 2.0 ** -52

# Largest negative rounding residue tolerated in a radicand before sqrt.
RADICAND_GUARD = 1e-14


class AGMError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(AGMError, ValueError):
    """An input triple violates one of the admissibility constraints."""

    constraint = ""


class NonFiniteError(ValidationError):
    constraint = "finite"


class OrderViolation(ValidationError):
    constraint = "a > b > 0, b >= c >= 0"


class SumViolation(ValidationError):
    constraint = "a > b + c"


class DomainError(AGMError, ValueError):
    """Argument outside the domain where the routine is defined."""


class ParamError(AGMError, ValueError):
    """Parameter combination not supported by the routine."""


class NegativeRadicand(AGMError, ArithmeticError):
    pass


class NonPositiveRadicand(AGMError, ArithmeticError):
    pass


class NonConvergence(AGMError, ArithmeticError):
    """An iteration did not reach its tolerance within its step budget.

    ``trace`` carries whatever partial history the caller recorded.
    """

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []


class SlowConvergence(NonConvergence):
    """A series exhausted its term budget before meeting the tolerance."""


@dataclass(frozen=True)
class Triple:
    """Iteration state ``(a, b, c)``.

    Construction does not validate; use :func:`validate_triple` for user input.
    Iterates may sit on the boundary (``a == b``, ``c == 0``) once converged.
    """

    a: float
    b: float
    c: float

    def scaled(self, s: float) -> "Triple":
        return Triple(s * self.a, s * self.b, s * self.c)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class RatioPair:
    """``xi = (b + c) / a`` and ``eta = (b - c) / a``."""

    xi: float
    eta: float


@dataclass(frozen=True)
class ModuliPair:
    """Parameters of the quartic-radicand integral, ``0 <= lambda_ <= kappa < 1``."""

    kappa: float
    lambda_: float


@dataclass(frozen=True)
class AnglePair:
    """``kappa = sin(alpha)**2`` and ``lambda = sin(eps)**2``, in radians."""

    alpha: float
    eps: float


def validate_triple(a: float, b: float, c: float) -> Triple:
    """Return ``Triple(a, b, c)`` if it is an admissible starting point.

    Admissible means ``a > b > 0``, ``b >= c >= 0`` and ``a > b + c``.
    ``c == 0`` is the classic two-variable mean; ``b == c`` is allowed.

    Raises
    ------
    NonFiniteError
        Any argument is NaN or infinite.
    OrderViolation
        ``a <= b``, ``b <= 0``, ``c < 0`` or ``b < c``.
    SumViolation
        ``a <= b + c``.
    """
    a, b, c = float(a), float(b), float(c)
    for name, v in (("a", a), ("b", b), ("c", c)):
        if not math.isfinite(v):
            raise NonFiniteError(f"{name}={v!r} is not finite")
    if b <= 0.0:
        raise OrderViolation(f"b > 0 violated (b={b!r})")
    if c < 0.0:
        raise OrderViolation(f"c >= 0 violated (c={c!r})")
    if a <= b:
        raise OrderViolation(f"a > b violated (a={a!r}, b={b!r})")
    if b < c:
        raise OrderViolation(f"b >= c violated (b={b!r}, c={c!r})")
    if a <= b + c:
        raise SumViolation(f"a > b + c violated (a={a!r}, b + c={b + c!r})")
    return Triple(a, b, c)


def ratios(t: Triple) -> RatioPair:
    return RatioPair((t.b + t.c) / t.a, (t.b - t.c) / t.a)


def clamp_radicand(r: float) -> float:
    """Zero out rounding-level negative radicands; reject real ones."""
    if r >= 0.0:
        return r
    if r >= -RADICAND_GUARD:
        return 0.0
    raise NegativeRadicand(f"radicand {r!r} below -{RADICAND_GUARD:g}")


def moduli_to_angles(m: ModuliPair) -> AnglePair:
    return AnglePair(math.asin(math.sqrt(m.kappa)), math.asin(math.sqrt(m.lambda_)))


def angles_to_moduli(ap: AnglePair) -> ModuliPair:
    return ModuliPair(math.sin(ap.alpha) ** 2, math.sin(ap.eps) ** 2)
