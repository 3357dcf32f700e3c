import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fdnls import (
    hurwitz_zeta,
    nearest_neighbor_kernel,
    power_law_kernel,
    riemann_zeta,
    table_kernel,
    tail_bound,
)


def brute_zeta(s, a=1.0, terms=10 ** 6):
    """Direct partial sum plus integral tail bracket midpoint."""
    k = np.arange(terms, dtype=float)
    partial = float(np.sum((k + a) ** (-s)))
    # integral comparison: tail between int_{terms}^inf and int_{terms-1}^inf
    lo = (terms + a) ** (1.0 - s) / (s - 1.0)
    hi = (terms - 1.0 + a) ** (1.0 - s) / (s - 1.0)
    return partial + 0.5 * (lo + hi), 0.5 * (hi - lo)


class TestRiemannZeta:
    def test_s2_pi_squared_over_6(self):
        assert abs(riemann_zeta(2.0) - math.pi ** 2 / 6.0) < 1e-12

    def test_s4_pi_fourth_over_90(self):
        assert abs(riemann_zeta(4.0) - math.pi ** 4 / 90.0) < 1e-12

    def test_s25_brute_force(self):
        val, err = brute_zeta(2.5)
        assert abs(riemann_zeta(2.5) - val) < 1e-12 + err

    @pytest.mark.parametrize("s", [1.05, 1.1, 2.0, 3.0, 4.7, 21.0])
    def test_against_mpmath(self, s):
        assert abs(riemann_zeta(s) - float(mpmath.zeta(s))) < 1e-12

    def test_rejects_s_at_most_one(self):
        with pytest.raises(ValueError):
            riemann_zeta(1.0)
        with pytest.raises(ValueError):
            riemann_zeta(0.5)


class TestHurwitzZeta:
    def test_a1_is_riemann(self):
        for s in (1.1, 2.0, 3.0, 4.7):
            assert abs(hurwitz_zeta(s, 1.0) - riemann_zeta(s)) < 1e-12

    def test_half_pi_squared_over_2(self):
        assert abs(hurwitz_zeta(2.0, 0.5) - math.pi ** 2 / 2.0) < 1e-12

    def test_brute_force_23_07(self):
        val, err = brute_zeta(2.3, 0.7)
        assert abs(hurwitz_zeta(2.3, 0.7) - val) < 1e-12 + err

    @pytest.mark.parametrize("s,a", [(1.5, 0.25), (2.0, 3.0), (3.7, 0.01), (1.05, 1.0)])
    def test_against_mpmath(self, s, a):
        truth = float(mpmath.zeta(s, a))
        assert abs(hurwitz_zeta(s, a) - truth) < 1e-12 * max(1.0, abs(truth))

    @settings(max_examples=50, deadline=None)
    @given(
        st.floats(min_value=1.05, max_value=10.0),
        st.floats(min_value=0.05, max_value=10.0),
    )
    def test_shift_identity(self, s, a):
        lhs = hurwitz_zeta(s, a) - hurwitz_zeta(s, a + 1.0)
        assert abs(lhs - a ** (-s)) < 1e-12 * max(1.0, a ** (-s))

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            hurwitz_zeta(0.9, 1.0)
        with pytest.raises(ValueError):
            hurwitz_zeta(2.0, 0.0)


class TestPowerLawKernel:
    def test_basic_coefficients(self):
        k = power_law_kernel(1.0)
        assert k.j(1) == 1.0
        assert k.j(2) == 0.25
        assert abs(k.total - math.pi ** 2 / 6.0) < 1e-12
        assert k.tail_constant == 1.0

    def test_total_decreasing_in_alpha(self):
        totals = [power_law_kernel(a).total for a in (0.5, 1.0, 2.0, 4.0)]
        assert all(x > y for x, y in zip(totals, totals[1:]))

    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(ValueError):
            power_law_kernel(0.0)
        with pytest.raises(ValueError):
            power_law_kernel(-1.0)

    def test_profile_matches_accessor(self):
        k = power_law_kernel(1.5)
        prof = k.profile(20)
        assert np.allclose(prof, [k.j(n) for n in range(1, 21)], rtol=0, atol=0)


class TestNearestNeighborKernel:
    def test_only_first_coefficient(self):
        k = nearest_neighbor_kernel()
        assert k.j(1) == 1.0
        assert k.j(2) == 0.0
        assert k.total == 1.0
        assert tail_bound(k, 1) == 0.0


class TestTailBound:
    def test_alpha1_M1000(self):
        k = power_law_kernel(1.0)
        assert tail_bound(k, 1000) <= 1.002e-3

    def test_dominates_brute_remainder(self):
        for alpha, M in [(1.0, 10), (2.0, 10), (0.5, 100), (1.5, 1000)]:
            k = power_law_kernel(alpha)
            n = np.arange(M + 1, 10 ** 6, dtype=float)
            rem = float(np.sum(n ** (-(1.0 + alpha))))
            assert tail_bound(k, M) >= rem

    def test_monotone_to_zero(self):
        k = power_law_kernel(1.0)
        bounds = [tail_bound(k, M) for M in (1, 10, 100, 1000, 10000)]
        assert all(x > y for x, y in zip(bounds, bounds[1:]))
        assert bounds[-1] < 1e-3


class TestTableKernel:
    def test_wraps_explicit_coefficients(self):
        coeffs = [1.0, 0.25, 1.0 / 9.0]
        k = table_kernel(1.0, coeffs, tail=lambda M: 1.0 / max(M, 3))
        assert k.j(2) == 0.25
        assert k.j(5) == 0.0
        assert abs(k.total - sum(coeffs)) < 1e-15
