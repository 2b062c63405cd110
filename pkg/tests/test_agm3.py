import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import reference_trace, random_triples, rel, triple_from_ratios, ulps, valid_triples
from extagm import agm3
from extagm.agm import agm_mean
from extagm.agm3 import (
    extended_mean,
    iterate,
    moduli_from_triple,
    next_moduli,
    next_moduli_via_angles,
    step,
)
from extagm.core import EPS, DomainError, ModuliPair, NonConvergence, RatioPair, Triple, ratios
from extagm.quadrature import integral_u_form

GOLDEN = 0.7250921711406717
# 40-digit reference values (mpmath) for the (1.0, 0.5, 0.2) example
KAPPA0 = 0.7356244266050219716685091952248158162034
LAMBDA0 = 0.05437557339497802833149080477518418379659
KAPPA1 = 0.1277819864458139677729776212608259454147
LAMBDA1 = 0.03619909502262443438914027149321266968326
M_REF = 0.7250921711406716802217167416467890627106


def check_step_identities(s):
    a, b, c = s.triple.as_tuple()
    k, lam = s.moduli.kappa, s.moduli.lambda_
    assert (1 - k) * (1 - lam) == pytest.approx((b / a) ** 2, rel=1e-13)
    assert k * lam == pytest.approx((c / a) ** 2, abs=1e-13)


class TestModuliFromTriple:
    def test_worked_example(self):
        m = moduli_from_triple(Triple(1.0, 0.5, 0.2))
        assert m.kappa == pytest.approx(KAPPA0, rel=1e-15)
        assert m.lambda_ == pytest.approx(LAMBDA0, rel=1e-14)
        assert m.kappa == pytest.approx((0.79 + math.sqrt(0.4641)) / 2, rel=1e-15)
        assert m.kappa * m.lambda_ == pytest.approx(0.04, rel=1e-14)
        assert (1 - m.kappa) * (1 - m.lambda_) == pytest.approx(0.25, rel=1e-14)

    def test_c_zero(self):
        assert moduli_from_triple(Triple(1.0, 0.5, 0.0)) == ModuliPair(0.75, 0.0)

    @given(valid_triples(), st.floats(0.01, 100))
    def test_scale_free(self, t, s):
        m0 = moduli_from_triple(t)
        m1 = moduli_from_triple(t.scaled(s))
        assert m1.kappa == pytest.approx(m0.kappa, rel=1e-14)
        # lambda comes from 1 - xi*eta minus a square root, so its error is absolute
        assert m1.lambda_ == pytest.approx(m0.lambda_, rel=1e-12, abs=4 * EPS)

    @given(valid_triples(), st.integers(-30, 30))
    def test_power_of_two_scale_identical(self, t, e):
        assert moduli_from_triple(t.scaled(2.0 ** e)) == moduli_from_triple(t)

    @given(valid_triples(xi_lo=0.2))
    def test_product_identities(self, t):
        m = moduli_from_triple(t)
        assert 0 <= m.lambda_ <= m.kappa < 1
        assert (1 - m.kappa) * (1 - m.lambda_) == pytest.approx((t.b / t.a) ** 2, rel=1e-13)
        assert m.kappa * m.lambda_ == pytest.approx((t.c / t.a) ** 2, abs=1e-13)


class TestNextModuli:
    def test_worked_example_ratios(self):
        m = next_moduli(RatioPair(0.7, 0.3))
        assert m.kappa == pytest.approx(KAPPA1, rel=1e-15)
        assert m.lambda_ == pytest.approx(LAMBDA1, rel=1e-15)
        assert m.kappa == pytest.approx((0.79 / 2.21) ** 2, rel=1e-15)
        assert m.lambda_ == pytest.approx(0.16 / 4.42, rel=1e-15)

    def test_equal_ratios(self):
        m = next_moduli(RatioPair(0.5, 0.5))
        assert ulps(m.kappa, 1 / 9) <= 1
        assert m.lambda_ == 0.0

    def test_ordering_sweep(self, rng):
        for _ in range(1000):
            xi = rng.uniform(1e-6, 1.0)
            eta = rng.uniform(0.0, xi)
            m = next_moduli(RatioPair(xi, eta))
            assert m.kappa >= m.lambda_ >= 0

    @given(st.floats(1e-6, 0.999), st.floats(0, 1))
    def test_lambda_zero_iff_equal(self, xi, frac):
        eta = xi * frac
        assert (next_moduli(RatioPair(xi, eta)).lambda_ == 0.0) == (xi == eta)

    def test_zero_sum_rejected(self):
        with pytest.raises(DomainError):
            next_moduli(RatioPair(0.0, 0.0))


class TestViaAngles:
    def test_worked_example(self):
        m0 = moduli_from_triple(Triple(1.0, 0.5, 0.2))
        direct = next_moduli(RatioPair(0.7, 0.3))
        angles = next_moduli_via_angles(m0)
        assert angles.kappa == pytest.approx(direct.kappa, rel=1e-12)
        assert angles.lambda_ == pytest.approx(direct.lambda_, rel=1e-12)

    @pytest.mark.parametrize("kappa", [0.01, 0.3, 0.75, 0.95])
    def test_lambda_zero(self, kappa):
        assert abs(next_moduli_via_angles(ModuliPair(kappa, 0.0)).lambda_) <= 1e-15

    def test_grid_against_closed_form(self):
        for kappa in np.linspace(0.0475, 0.95, 20):
            for lam in np.linspace(0.0, kappa, 22)[1:-1]:
                alpha = math.asin(math.sqrt(kappa))
                eps = math.asin(math.sqrt(lam))
                r = RatioPair(math.cos(alpha - eps), math.cos(alpha + eps))
                direct = next_moduli(r)
                angles = next_moduli_via_angles(ModuliPair(float(kappa), float(lam)))
                assert angles.kappa == pytest.approx(direct.kappa, rel=1e-11)
                assert angles.lambda_ == pytest.approx(direct.lambda_, rel=1e-11)

    @pytest.mark.parametrize("m", [ModuliPair(0.3, 0.5), ModuliPair(1.0, 0.2), ModuliPair(0.0, 0.0)])
    def test_domain(self, m):
        with pytest.raises(DomainError):
            next_moduli_via_angles(m)


class TestStep:
    def test_classic_step(self):
        assert step(Triple(1.0, 0.5, 0.0)) == Triple(0.75, math.sqrt(0.5), 0.0)

    def test_first_reference_iterate(self):
        expected = reference_trace(1.0, 0.5, 0.2, steps=1)[1]
        assert step(Triple(1.0, 0.5, 0.2)).as_tuple() == expected

    def test_contracts(self, rng):
        for t in random_triples(rng, 200):
            t1 = step(t)
            assert t.b < t1.a < t.a
            assert t1.a > t1.b >= t1.c >= 0
            assert t1.a > t1.b + t1.c

    def test_preserves_mean(self, rng):
        for t in random_triples(rng, 100):
            assert extended_mean(step(t)).mean == pytest.approx(extended_mean(t).mean, rel=1e-13)

    def test_next_state_matches_next_moduli(self, rng):
        for t in random_triples(rng, 100, xi_lo=0.2):
            t1 = step(t)
            m1 = next_moduli(ratios(t))
            assert (1 - m1.kappa) * (1 - m1.lambda_) == pytest.approx((t1.b / t1.a) ** 2, rel=1e-13)
            assert m1.kappa * m1.lambda_ == pytest.approx((t1.c / t1.a) ** 2, abs=1e-13)


class TestIterate:
    def test_length(self):
        steps = iterate(Triple(1.0, 0.5, 0.2), 10)
        assert [s.index for s in steps] == list(range(11))

    def test_matches_reference_program(self):
        steps = iterate(Triple(1.0, 0.5, 0.2), 10)
        ref = reference_trace(1.0, 0.5, 0.2, steps=10)
        for s, row in zip(steps, ref):
            for got, want in zip(s.triple.as_tuple(), row):
                assert ulps(got, want) <= 1


class TestExtendedMean:
    def test_golden(self):
        r = extended_mean(Triple(1.0, 0.5, 0.2))
        assert r.converged
        assert r.iterations <= 10
        assert rel(r.mean, GOLDEN) <= 1e-13
        assert rel(r.mean, M_REF) <= 2e-16

    def test_reduces_to_gauss(self):
        assert ulps(extended_mean(Triple(1.0, 0.5, 0.0)).mean, agm_mean(1.0, 0.5)) <= 4

    @given(valid_triples(), st.integers(-40, 40))
    def test_homogeneous(self, t, e):
        s = 2.0 ** e
        assert ulps(extended_mean(t.scaled(s)).mean, s * extended_mean(t).mean) <= 4

    @given(valid_triples(), st.sampled_from([3.0, 0.1, 47.0, 1e-3]))
    def test_homogeneous_inexact_scale(self, t, s):
        # rounding of the scaled inputs is amplified near xi -> 1 (observed up to ~9 eps)
        assert rel(extended_mean(t.scaled(s)).mean, s * extended_mean(t).mean) <= 16 * EPS

    @settings(max_examples=50)
    @given(valid_triples())
    def test_integral_identity(self, t):
        r = extended_mean(t)
        assert t.a / r.mean == pytest.approx(integral_u_form(moduli_from_triple(t)), rel=1e-10)

    @given(valid_triples())
    def test_mean_bracketed(self, t):
        r = extended_mean(t)
        assert t.b < r.mean < t.a

    @given(valid_triples())
    def test_final_state_converged(self, t):
        r = extended_mean(t)
        last = r.trace[-1].triple
        assert len(r.trace) == r.iterations + 1
        assert abs(last.a - last.b) <= r.tol * last.a
        assert last.c <= r.tol * last.a

    @given(valid_triples(xi_lo=0.2))
    def test_per_step_identities(self, t):
        for s in extended_mean(t).trace:
            check_step_identities(s)

    @given(valid_triples(xi_lo=0.35))
    def test_c_strictly_decreasing(self, t):
        cs = [s.triple.c for s in extended_mean(t).trace]
        for c0, c1 in zip(cs, cs[1:]):
            if c0 > 0:
                assert c1 < c0

    def test_c_can_grow_on_first_step_when_b_small(self):
        # the third coordinate is not monotone from every start: small xi overshoots once
        t = triple_from_ratios(1.0, 0.2360293648138725, 0.01227855464702383)
        cs = [s.triple.c for s in extended_mean(t).trace]
        assert cs[1] > cs[0]
        assert all(c1 < c0 for c0, c1 in zip(cs[1:], cs[2:]) if c0 > 0)

    @given(valid_triples())
    def test_gap_shrinks_quadratically(self, t):
        tr = extended_mean(t).trace
        gaps = [(s.triple.a - s.triple.b) / s.triple.a for s in tr]
        for g0, g1 in zip(gaps, gaps[1:]):
            if g0 < 0.1:
                # below g0^2 ~ eps the gap is rounding noise
                assert g1 <= max(g0 * g0, 4 * EPS)

    def test_tolerance_floor(self):
        with pytest.raises(ValueError):
            extended_mean(Triple(1.0, 0.5, 0.2), tol=1e-17)

    def test_looser_tolerance(self):
        r = extended_mean(Triple(1.0, 0.5, 0.2), tol=1e-6)
        assert r.iterations < 5
        assert r.mean == pytest.approx(GOLDEN, rel=1e-6)

    def test_revalidates_input(self):
        with pytest.raises(ValueError):
            extended_mean(Triple(1.0, 0.6, 0.5))

    def test_non_convergence_carries_trace(self, monkeypatch):
        monkeypatch.setattr(agm3, "MAX_ITER", 2)
        with pytest.raises(NonConvergence) as info:
            extended_mean(Triple(1.0, 0.5, 0.2))
        assert len(info.value.trace) == 3
        assert info.value.trace[0].triple == Triple(1.0, 0.5, 0.2)
