"""Classic two-variable arithmetic-geometric mean and what it buys us.

``agm_mean`` is the plain Gauss iteration; ``elliptic_k`` evaluates the
complete elliptic integral of the first kind through it, and
``landen_descend`` performs one descending Landen step on the modulus.
"""

from __future__ import annotations

import math

from .core import EPS, DomainError, NonConvergence

__all__ = ["MAX_ITER", "DEFAULT_TOL", "agm_mean", "elliptic_k", "landen_descend"]

MAX_ITER = 64
DEFAULT_TOL = 4 * EPS


def _check_tol(tol: float) -> None:
    if not tol >= DEFAULT_TOL:
        raise ValueError(f"tol must be >= 4*eps ({DEFAULT_TOL!r}), got {tol!r}")


def agm_mean(a: float, b: float, tol: float = DEFAULT_TOL) -> float:
    """Arithmetic-geometric mean of two positive numbers.

    The arguments are swapped if ``a < b``.  Iterates
    ``a, b = (a + b) / 2, sqrt(a * b)`` until ``|a - b| <= tol * a`` and
    returns the midpoint of the final pair.

    Raises
    ------
    DomainError
        Either argument is non-positive or not finite.
    NonConvergence
        More than ``MAX_ITER`` steps were needed.
    """
    _check_tol(tol)
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or a <= 0.0 or b <= 0.0:
        raise DomainError(f"agm_mean needs finite positive arguments, got ({a!r}, {b!r})")
    if a < b:
        a, b = b, a
    for _ in range(MAX_ITER + 1):
        if abs(a - b) <= tol * a:
            return (a + b) / 2
        a, b = (a + b) / 2, math.sqrt(a * b)
    raise NonConvergence(f"agm_mean did not converge in {MAX_ITER} steps")


def _complementary(k: float) -> float:
    # sqrt(1 - k^2) without forming k^2 first
    return math.sqrt((1.0 - k) * (1.0 + k))


def _check_modulus(k: float) -> float:
    k = float(k)
    if not (0.0 <= k < 1.0):
        raise DomainError(f"elliptic modulus must satisfy 0 <= k < 1, got {k!r}")
    return k


def elliptic_k(k: float) -> float:
    """Complete elliptic integral of the first kind, ``K(k) = pi / (2 agm(1, k'))``.

    ``k`` is the modulus, not the parameter ``m = k**2``.
    """
    k = _check_modulus(k)
    return math.pi / (2.0 * agm_mean(1.0, _complementary(k)))


def landen_descend(k0: float) -> tuple[float, float]:
    """One descending Landen step.

    Returns ``(k1, factor)`` with ``k1 = (1 - k0') / (1 + k0')`` and
    ``factor = (1 + k0') / 2``, so that ``K(k1) = factor * K(k0)`` and
    equivalently ``K(k0) = (1 + k1) * K(k1)``.
    """
    k0 = _check_modulus(k0)
    kp = _complementary(k0)
    # k0^2 / (1 + k0')^2 equals (1 - k0') / (1 + k0') without the cancellation
    k1 = (k0 / (1.0 + kp)) ** 2
    return k1, (1.0 + kp) / 2.0
