"""Three-variable arithmetic-geometric mean.

One step maps ``(a, b, c)`` to ``(a', b', c')`` through the moduli of the
quartic-radicand integral::

    xi, eta        = (b + c) / a, (b - c) / a
    kappa, lambda  = (1 - xi*eta +/- sqrt((1 - xi^2)(1 - eta^2))) / 2
    kappa'         = ((1 - xi*eta) / ((1 + xi)(1 + eta)))^2
    lambda'        = (xi - eta)^2 / (2 (1 + xi)(1 + eta)(xi + eta))
    a'             = a (sqrt(1 - lambda) + sqrt(1 - kappa)) / (2 sqrt(1 - lambda'))
    b'             = a' sqrt((1 - kappa')(1 - lambda'))
    c'             = a' sqrt(kappa' lambda')

The iterates converge to ``a = b = M(a0, b0, c0)`` with ``c -> 0``, and
``a0 / M`` equals ``(1/pi) int_0^1 du / sqrt(u (1-u)(1-kappa u)(1-lambda u))``.
With ``c == 0`` the step is exactly Gauss's two-variable step.

The arithmetic in :func:`step` follows a fixed operation order so that traces
are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .agm import DEFAULT_TOL, MAX_ITER, _check_tol
from .core import (
    DomainError,
    ModuliPair,
    NonConvergence,
    RatioPair,
    Triple,
    clamp_radicand,
    ratios,
    validate_triple,
)

__all__ = [
    "IterationStep",
    "MeanResult",
    "moduli_from_triple",
    "next_moduli",
    "next_moduli_via_angles",
    "step",
    "iterate",
    "extended_mean",
]


@dataclass(frozen=True)
class IterationStep:
    """State ``index`` of an iteration with its moduli and the moduli of the next state."""

    index: int
    triple: Triple
    moduli: ModuliPair
    next_moduli: ModuliPair


@dataclass(frozen=True)
class MeanResult:
    """Converged limit of :func:`extended_mean`.

    ``trace`` holds states ``0 .. iterations`` inclusive, so the last entry is
    the converged triple.
    """

    mean: float
    iterations: int
    trace: tuple[IterationStep, ...]
    converged: bool
    tol: float

    @property
    def start(self) -> Triple:
        return self.trace[0].triple

    @property
    def moduli(self) -> ModuliPair:
        return self.trace[0].moduli


def _moduli(r: RatioPair) -> ModuliPair:
    x, y = r.xi, r.eta
    dum1 = 1 - x * y
    dum2 = math.sqrt(clamp_radicand((1 - x * x) * (1 - y * y)))
    return ModuliPair((dum1 + dum2) / 2, max((dum1 - dum2) / 2, 0.0))


def moduli_from_triple(t: Triple) -> ModuliPair:
    """``(kappa, lambda)`` with ``(1-kappa)(1-lambda) = (b/a)^2`` and ``kappa*lambda = (c/a)^2``.

    The larger root always goes to ``kappa``.
    """
    return _moduli(ratios(t))


def next_moduli(r: RatioPair) -> ModuliPair:
    """Moduli of the next iterate, in closed form from ``xi`` and ``eta``."""
    x, y = r.xi, r.eta
    if x + y == 0:
        raise DomainError("next_moduli is undefined for xi + eta == 0")
    k1 = math.pow((1 - x * y) / ((1 + x) * (1 + y)), 2)
    l1 = (x - y) * (x - y) / (2 * (1 + x) * (1 + y) * (x + y))
    return ModuliPair(k1, l1)


def next_moduli_via_angles(m: ModuliPair) -> ModuliPair:
    """Moduli of the next iterate computed through the angle parametrization.

    With ``kappa = sin^2 alpha`` and ``lambda = sin^2 eps``::

        sin alpha' = (tan^2((alpha+eps)/2) + tan^2((alpha-eps)/2)) / 2
        tan^2 eps' = tan^2 alpha' - sec^2 alpha' tan^2((alpha+eps)/2) tan^2((alpha-eps)/2)

    This is an independent route to :func:`next_moduli`, kept as a check.
    """
    kappa, lam = m.kappa, m.lambda_
    if not (0.0 <= lam <= kappa < 1.0) or kappa == 0.0:
        raise DomainError(f"need 0 <= lambda <= kappa < 1 and kappa > 0, got {m}")
    alpha = math.asin(math.sqrt(kappa))
    eps = math.asin(math.sqrt(lam))
    u, v = (alpha + eps) / 2, (alpha - eps) / 2
    tp, tm = math.tan(u) ** 2, math.tan(v) ** 2
    s = (tp + tm) / 2
    cos2 = 1 - s * s
    # s^2 - tp*tm == ((tp - tm)/2)^2, and tp - tm == sin(alpha) sin(eps) / (cos^2 u cos^2 v)
    half_diff = math.sin(alpha) * math.sin(eps) / (2 * (math.cos(u) * math.cos(v)) ** 2)
    tan2_eps = half_diff * half_diff / cos2
    return ModuliPair(s * s, tan2_eps / (1 + tan2_eps))


def _advance(t: Triple) -> tuple[Triple, ModuliPair, ModuliPair]:
    r = ratios(t)
    m0 = _moduli(r)
    m1 = next_moduli(r)
    a0 = t.a
    if t.c == 0.0:
        # lambda == lambda' == 0: the update collapses to Gauss's step
        return Triple((a0 + t.b) / 2, math.sqrt(a0 * t.b), 0.0), m0, m1
    k0, l0 = m0.kappa, m0.lambda_
    k1, l1 = m1.kappa, m1.lambda_
    dum1 = math.sqrt(1 - l0) + math.sqrt(1 - k0)
    dum2 = 2 * math.sqrt(1 - l1)
    a1 = a0 * dum1 / dum2
    b1 = a1 * math.sqrt((1 - k1) * (1 - l1))
    c1 = a1 * math.sqrt(k1 * l1)
    return Triple(a1, b1, c1), m0, m1


def step(t: Triple) -> Triple:
    """One iteration ``(a, b, c) -> (a', b', c')``. The mean is invariant under it."""
    return _advance(t)[0]


def iterate(t: Triple, steps: int) -> list[IterationStep]:
    """Run exactly ``steps`` iterations with no stopping test.

    Returns ``steps + 1`` entries: the start state through the final one.
    """
    out = []
    cur = t
    for n in range(steps + 1):
        nxt, m0, m1 = _advance(cur)
        out.append(IterationStep(n, cur, m0, m1))
        cur = nxt
    return out


def _converged(t: Triple, tol: float) -> bool:
    return abs(t.a - t.b) <= tol * t.a and t.c <= tol * t.a


def extended_mean(t: Triple, tol: float = DEFAULT_TOL) -> MeanResult:
    """Iterate from ``t`` until ``|a - b| <= tol*a`` and ``c <= tol*a``.

    ``t`` is re-validated.  The reported mean is ``(a + b) / 2`` of the
    converged state.

    Raises
    ------
    NonConvergence
        Not converged after ``MAX_ITER`` steps; the partial trace is attached.
    """
    _check_tol(tol)
    cur = validate_triple(t.a, t.b, t.c)
    trace: list[IterationStep] = []
    for n in range(MAX_ITER + 1):
        nxt, m0, m1 = _advance(cur)
        trace.append(IterationStep(n, cur, m0, m1))
        if _converged(cur, tol):
            return MeanResult(
                mean=(cur.a + cur.b) / 2,
                iterations=n,
                trace=tuple(trace),
                converged=True,
                tol=tol,
            )
        cur = nxt
    raise NonConvergence(f"extended_mean did not converge in {MAX_ITER} steps", trace)
