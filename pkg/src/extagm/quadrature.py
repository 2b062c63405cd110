"""Gauss-Legendre quadrature and the integral forms of the extended mean.

Both integrals are taken in the angle variable ``u = sin^2(theta)``, which
removes the inverse square-root singularities at ``u = 0`` and ``u = 1`` and
leaves a smooth periodic-like integrand on ``[0, pi/2]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .core import DomainError, ModuliPair, NonConvergence, NonPositiveRadicand, Triple

__all__ = [
    "QuadratureConfig",
    "DEFAULT_CONFIG",
    "legendre_nodes",
    "gauss_legendre",
    "integrate_doubling",
    "integral_u_form",
    "integral_theta_form",
]

BASE_ORDER = 16


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-13
    max_nodes: int = 4096

    def __post_init__(self):
        if not self.rel_tol >= 1e-15:
            raise ValueError(f"rel_tol must be >= 1e-15, got {self.rel_tol!r}")
        if not (BASE_ORDER <= self.max_nodes <= 4096):
            raise ValueError(f"max_nodes must lie in [{BASE_ORDER}, 4096], got {self.max_nodes!r}")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=None)
def legendre_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on ``[-1, 1]``.

    Roots of ``P_n`` are polished by Newton's method from the Chebyshev-like
    initial guess; the returned arrays are read-only and cached.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n!r}")
    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= 2e-16:
            break
    # one extra sweep so the last correction is below rounding
    p, dp = _legendre(n, x)
    x = x - p / dp
    _, dp = _legendre(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x, w = x[::-1].copy(), w[::-1].copy()
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def _legendre(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # three-term recurrence for P_n and its derivative
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, n + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    if n == 1:
        p0 = np.ones_like(x)
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_legendre(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, n: int) -> float:
    """``n``-point Gauss-Legendre estimate of ``int_lo^hi f``; ``f`` must accept arrays."""
    x, w = legendre_nodes(n)
    half = (hi - lo) / 2
    mid = (hi + lo) / 2
    t = mid + half * x
    fx = np.broadcast_to(np.asarray(f(t), dtype=float), t.shape)
    return float(half * np.dot(w, fx))


def integrate_doubling(
    f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """Double the node count from 16 until two estimates agree to ``cfg.rel_tol``."""
    n = BASE_ORDER
    prev = gauss_legendre(f, lo, hi, n)
    while 2 * n <= cfg.max_nodes:
        n *= 2
        cur = gauss_legendre(f, lo, hi, n)
        if abs(cur - prev) <= cfg.rel_tol * abs(cur):
            return cur
        prev = cur
    raise NonConvergence(f"quadrature did not settle within {cfg.max_nodes} nodes")


def integral_u_form(m: ModuliPair, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``(1/pi) int_0^1 du / sqrt(u (1-u)(1 - kappa u)(1 - lambda u))``.

    Evaluated as ``(2/pi) int_0^{pi/2} dtheta / sqrt((1 - kappa s^2)(1 - lambda s^2))``
    with ``s = sin(theta)``.  The integrand is symmetric in the two moduli, so
    their order does not matter here.
    """
    kappa, lam = float(m.kappa), float(m.lambda_)
    if not (0.0 <= kappa < 1.0 and 0.0 <= lam < 1.0):
        raise DomainError(f"integral_u_form needs moduli in [0, 1), got {m}")

    def f(theta):
        s2 = np.sin(theta) ** 2
        return 1.0 / np.sqrt((1.0 - kappa * s2) * (1.0 - lam * s2))

    return 2.0 / math.pi * integrate_doubling(f, 0.0, math.pi / 2, cfg)


def integral_theta_form(t: Triple, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``(2a/pi) int_0^{pi/2} dtheta / sqrt(a^2 cos^2 + b^2 sin^2 - c^2 cos^2 sin^2)``.

    Homogeneous of degree zero in ``(a, b, c)``; equals ``a / M(a, b, c)``.
    """
    a, b, c = t.a, t.b, t.c

    def f(theta):
        s2 = np.sin(theta) ** 2
        c2 = np.cos(theta) ** 2
        rad = a * a * c2 + b * b * s2 - c * c * c2 * s2
        if np.any(rad <= 0.0):
            raise NonPositiveRadicand(f"theta-form radicand not positive for {t}")
        return 1.0 / np.sqrt(rad)

    return 2.0 * a / math.pi * integrate_doubling(f, 0.0, math.pi / 2, cfg)
