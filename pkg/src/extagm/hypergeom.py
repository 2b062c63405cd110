"""Gauss 2F1 and Appell F1 by direct power series.

Terms are generated by ratio recurrences rather than Pochhammer quotients.
The Appell double series is summed diagonal by diagonal (fixed total degree
``m + n``), which keeps the coupled ``(alpha)_{m+n} / (gamma)_{m+n}`` factor a
single running product.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import EPS, DomainError, ParamError, SlowConvergence

__all__ = [
    "Gauss2F1Params",
    "AppellF1Params",
    "SeriesBudget",
    "DEFAULT_2F1_BUDGET",
    "DEFAULT_F1_BUDGET",
    "MAX_2F1_ARG",
    "MAX_F1_ARG",
    "pochhammer",
    "gauss_2f1",
    "appell_f1",
    "f1_reduce",
    "f1_pde_residual",
]

MAX_2F1_ARG = 0.999
MAX_F1_ARG = 0.95

# Number of consecutive negligible terms (or diagonals) needed to stop.
_QUIET_RUN = 3


def _check_gamma(gamma: float) -> None:
    if gamma <= 0 and gamma == math.floor(gamma):
        raise ParamError(f"gamma={gamma!r} is a non-positive integer")


@dataclass(frozen=True)
class Gauss2F1Params:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        _check_gamma(self.gamma)


@dataclass(frozen=True)
class AppellF1Params:
    alpha: float
    beta: float
    beta_prime: float
    gamma: float

    def __post_init__(self):
        _check_gamma(self.gamma)

    def swapped(self) -> "AppellF1Params":
        return AppellF1Params(self.alpha, self.beta_prime, self.beta, self.gamma)


@dataclass(frozen=True)
class SeriesBudget:
    """Relative stopping tolerance and hard cap on terms (or diagonals)."""

    rel_tol: float = 1e-15
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not self.rel_tol >= EPS:
            raise ValueError(f"rel_tol must be >= machine epsilon, got {self.rel_tol!r}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms!r}")


DEFAULT_2F1_BUDGET = SeriesBudget(1e-15, 1_000_000)
DEFAULT_F1_BUDGET = SeriesBudget(1e-15, 4000)


def pochhammer(x: float, n: int) -> float:
    """Rising factorial ``x (x+1) ... (x+n-1)``, with ``(x)_0 = 1``."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n!r}")
    p = 1.0
    for i in range(n):
        p *= x + i
    if math.isinf(p):
        warnings.warn(f"pochhammer({x!r}, {n}) overflowed", RuntimeWarning, stacklevel=2)
    return p


def gauss_2f1(p: Gauss2F1Params, z: float, budget: SeriesBudget = DEFAULT_2F1_BUDGET) -> float:
    """Gauss hypergeometric series ``sum (alpha)_n (beta)_n / (gamma)_n z^n / n!``.

    Only ``|z| < 0.999`` is accepted; convergence is linear in ``|z|``.  The
    sum stops after three consecutive terms whose geometric tail bound is
    below ``rel_tol * |sum|``.

    Raises
    ------
    DomainError
        ``|z| >= 0.999`` or ``z`` not finite.
    SlowConvergence
        ``budget.max_terms`` terms were summed without meeting the tolerance.
    """
    z = float(z)
    if not abs(z) < MAX_2F1_ARG:
        raise DomainError(f"gauss_2f1 series needs |z| < {MAX_2F1_ARG}, got {z!r}")
    a, b, c = p.alpha, p.beta, p.gamma
    term = 1.0
    total = 1.0
    quiet = 0
    for n in range(budget.max_terms):
        ratio = (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        term *= ratio
        total += term
        if _tail(term, max(abs(ratio), abs(z))) <= budget.rel_tol * abs(total):
            quiet += 1
            if quiet >= _QUIET_RUN:
                return total
        else:
            quiet = 0
    raise SlowConvergence(f"gauss_2f1 did not converge in {budget.max_terms} terms (z={z!r})")


def _tail(term: float, ratio: float) -> float:
    # geometric bound on everything after `term` when later ratios stay below `ratio`
    if term == 0.0:
        return 0.0
    if ratio >= 1.0:
        return math.inf
    return abs(term) / (1.0 - ratio)


def _binomial_series(beta: float, x: float, n: int) -> np.ndarray:
    # coefficients (beta)_m x^m / m! of (1 - x t)^(-beta), m < n
    m = np.arange(n - 1, dtype=float)
    ratios = (beta + m) * x / (m + 1)
    return np.concatenate(([1.0], np.cumprod(ratios)))


def _diagonal_terms(p: AppellF1Params, x: float, y: float, n: int) -> np.ndarray:
    # canonical factor order makes (beta, x) <-> (beta', y) swaps bit-identical
    first, second = sorted([(p.beta, x), (p.beta_prime, y)])
    inner = np.convolve(_binomial_series(*first, n), _binomial_series(*second, n))[:n]
    k = np.arange(n - 1, dtype=float)
    coupled = np.concatenate(([1.0], np.cumprod((p.alpha + k) / (p.gamma + k))))
    return coupled * inner


def appell_f1(
    p: AppellF1Params, x: float, y: float, budget: SeriesBudget = DEFAULT_F1_BUDGET
) -> float:
    """Appell F1 by its double power series.

    The sum runs over diagonals ``m + n = N``; it stops once three consecutive
    diagonals each bound the remaining tail, taken as geometric with ratio
    ``max(|x|, |y|)``, by ``rel_tol * |sum|``.  ``budget.max_terms``
    caps the number of diagonals.  Arguments are limited to
    ``max(|x|, |y|) <= 0.95``.
    """
    x, y = float(x), float(y)
    if not (abs(x) <= MAX_F1_ARG and abs(y) <= MAX_F1_ARG):
        raise DomainError(f"appell_f1 series needs max(|x|, |y|) <= {MAX_F1_ARG}, got ({x!r}, {y!r})")
    rho = max(abs(x), abs(y))
    n = min(64, budget.max_terms)
    while True:
        diag = _diagonal_terms(p, x, y, n)
        total = 0.0
        quiet = 0
        for d in diag.tolist():
            total += d
            if _tail(d, rho) <= budget.rel_tol * abs(total):
                quiet += 1
                if quiet >= _QUIET_RUN:
                    return total
            else:
                quiet = 0
        if n >= budget.max_terms:
            raise SlowConvergence(
                f"appell_f1 did not converge in {budget.max_terms} diagonals at ({x!r}, {y!r})"
            )
        n = min(2 * n, budget.max_terms)


def f1_reduce(
    p: AppellF1Params, x: float, y: float, budget: SeriesBudget = DEFAULT_2F1_BUDGET
) -> float:
    """Appell F1 with ``gamma == beta + beta'`` through a single 2F1.

    For ``y <= x``: ``(1-y)^(-alpha) 2F1(alpha, beta; gamma; (x-y)/(1-y))``;
    otherwise the mirror form with ``x`` and ``y`` (and ``beta``, ``beta'``)
    exchanged.  Requires ``0 <= x, y < 1``.
    """
    if abs(p.gamma - (p.beta + p.beta_prime)) > 1e-14:
        raise ParamError(
            f"f1_reduce needs gamma == beta + beta' (gamma={p.gamma!r}, "
            f"beta + beta'={p.beta + p.beta_prime!r})"
        )
    x, y = float(x), float(y)
    if not (0.0 <= x < 1.0 and 0.0 <= y < 1.0):
        raise DomainError(f"f1_reduce needs 0 <= x, y < 1, got ({x!r}, {y!r})")
    if y <= x:
        z, pre, beta = (x - y) / (1 - y), (1 - y) ** -p.alpha, p.beta
    else:
        z, pre, beta = (y - x) / (1 - x), (1 - x) ** -p.alpha, p.beta_prime
    return pre * gauss_2f1(Gauss2F1Params(p.alpha, beta, p.gamma), z, budget)


def f1_pde_residual(
    p: AppellF1Params, x: float, y: float, h: float = 1e-4
) -> tuple[float, float]:
    """Residuals of the two Appell F1 partial differential equations at ``(x, y)``.

    Derivatives come from central differences of :func:`appell_f1` on a
    3x3 stencil.  Each residual is divided by the largest magnitude among the
    terms of its equation, so values are relative.
    """
    if not (1e-5 <= h <= 1e-3):
        raise ValueError(f"h must lie in [1e-5, 1e-3], got {h!r}")
    if max(abs(x), abs(y)) + 2 * h > MAX_F1_ARG:
        raise DomainError(f"({x!r}, {y!r}) lacks a 2h margin inside the series domain")

    f = [[appell_f1(p, x + (i - 1) * h, y + (j - 1) * h) for j in range(3)] for i in range(3)]
    F = f[1][1]
    Fx = (f[2][1] - f[0][1]) / (2 * h)
    Fy = (f[1][2] - f[1][0]) / (2 * h)
    Fxx = (f[2][1] - 2 * F + f[0][1]) / (h * h)
    Fyy = (f[1][2] - 2 * F + f[1][0]) / (h * h)
    Fxy = (f[2][2] - f[2][0] - f[0][2] + f[0][0]) / (4 * h * h)

    a, b, bp, c = p.alpha, p.beta, p.beta_prime, p.gamma
    t1 = (
        x * (1 - x) * Fxx,
        y * (1 - x) * Fxy,
        (c - (a + b + 1) * x) * Fx,
        -b * y * Fy,
        -a * b * F,
    )
    t2 = (
        y * (1 - y) * Fyy,
        x * (1 - y) * Fxy,
        (c - (a + bp + 1) * y) * Fy,
        -bp * x * Fx,
        -a * bp * F,
    )
    return tuple(math.fsum(t) / max(abs(v) for v in t) for t in (t1, t2))
