import math

import numpy as np
import pytest

from fdnls import (
    boost,
    dnls_offsite,
    dnls_onsite,
    fdnls_offsite,
    fdnls_onsite,
    mass,
    power_law_kernel,
    reflect,
    residual_sup,
    riemann_zeta,
    rho_star,
    tail_diagnostics,
)
from fdnls.modes import dnls_onsite_residual_exact


class TestDnlsClosedForms:
    def test_onsite_peak(self):
        seq = dnls_onsite(100.0, 1.0, 16)
        assert abs(seq.values[0] - math.sqrt(102.0)) < 1e-12

    def test_onsite_ratio(self):
        seq = dnls_onsite(10.0, 1.0, 16)
        rho = 0.1
        ratios = seq.values[1:] / seq.values[:-1]
        assert np.allclose(ratios, rho / (1.0 + 2.0 * rho), rtol=1e-12)

    def test_onsite_small_rho_ratio_vanishes(self):
        seq = dnls_onsite(1e8, 1.0, 4)
        assert seq.values[1] / seq.values[0] < 1e-7

    def test_offsite_peak(self):
        seq = dnls_offsite(100.0, 1.0, 16)
        assert abs(seq.values[1] - math.sqrt(101.0)) < 1e-12

    def test_offsite_ratio(self):
        seq = dnls_offsite(10.0, 1.0, 16)
        rho = 0.1
        assert abs(seq.values[2] / seq.values[1] - rho / (1.0 + 2.0 * rho)) < 1e-12

    def test_onsite_peak_exceeds_offsite(self):
        on = dnls_onsite(100.0, 1.0, 8)
        off = dnls_offsite(100.0, 1.0, 8)
        assert off.values[1] < on.values[0]

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            dnls_onsite(0.0, 1.0, 8)
        with pytest.raises(ValueError):
            dnls_offsite(1.0, -1.0, 8)


class TestFdnlsRecurrences:
    def test_onsite_peak_closed_form(self):
        kern = power_law_kernel(1.0)
        seq = fdnls_onsite(1.0, 1.0, kern, 32)
        assert abs(seq.values[0] - math.sqrt(1.0 + 2.0 * riemann_zeta(2.0))) < 1e-12

    def test_onsite_first_ratio(self):
        w, eps = 2.0, 0.5
        kern = power_law_kernel(1.3)
        seq = fdnls_onsite(w, eps, kern, 16)
        rho = eps / w
        J = kern.total
        expected = rho * kern.j(1) / (1.0 + rho * (2.0 * J - kern.j(2)))
        assert abs(seq.values[1] / seq.values[0] - expected) < 1e-12

    def test_offsite_peak_closed_form(self):
        kern = power_law_kernel(1.0)
        seq = fdnls_offsite(1.0, 1.0, kern, 32)
        assert abs(seq.values[0] - math.sqrt(2.0 * riemann_zeta(2.0))) < 1e-12
        assert seq.values[1] == seq.values[0]

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.5])
    def test_positivity(self, alpha):
        kern = power_law_kernel(alpha)
        assert np.all(fdnls_onsite(1.0, 1.0, kern, 64).values > 0)
        assert np.all(fdnls_offsite(1.0, 1.0, kern, 64).values > 0)

    def test_onsite_leading_coefficient(self):
        # q_n/q_0 divided by rho*J_n approaches 1 as rho -> 0
        kern = power_law_kernel(1.0)
        devs = []
        for w in (1e2, 1e3, 1e4):
            seq = fdnls_onsite(w, 1.0, kern, 16)
            r = seq.values[5] / seq.values[0] / (seq.rho * kern.j(5))
            devs.append(abs(r - 1.0))
        assert devs[0] > devs[1] > devs[2]
        assert devs[2] < 1e-3

    def test_offsite_leading_coefficient(self):
        kern = power_law_kernel(1.0)
        devs = []
        for w in (1e2, 1e3, 1e4):
            seq = fdnls_offsite(w, 1.0, kern, 16)
            r = seq.values[5] / seq.values[0] / (seq.rho * (kern.j(5) + kern.j(4)))
            devs.append(abs(r - 1.0))
        assert devs[0] > devs[1] > devs[2]
        assert devs[2] < 1e-3

    @pytest.mark.parametrize("alpha", [0.5, 1.5])
    def test_uniform_tail_bracket(self, alpha):
        eps1 = 0.1
        kern = power_law_kernel(alpha)
        rstar = rho_star(eps1, kern)
        w = 2.0 / rstar  # rho = eps/w = rstar/2 < rstar
        on = fdnls_onsite(w, 1.0, kern, 128)
        off = fdnls_offsite(w, 1.0, kern, 128)
        n = np.arange(1, 129)
        envelope = on.rho * on.values[0] * n ** -(1.0 + alpha)
        ratio = on.values[1:] / envelope
        assert np.all(ratio >= 1.0 / (1.0 + eps1)) and np.all(ratio <= 1.0 + eps1)
        n = np.arange(2, 129)
        env_off = off.rho * off.values[0] * (n ** -(1.0 + alpha) + (n - 1.0) ** -(1.0 + alpha))
        ratio = off.values[2:] / env_off
        assert np.all(ratio >= 1.0 / (1.0 + eps1)) and np.all(ratio <= 1.0 + eps1)


class TestReflect:
    def test_onsite_even(self):
        seq = dnls_onsite(10.0, 1.0, 8)
        u = reflect(seq, 5)
        assert np.array_equal(u, u[::-1])
        assert u[5] == seq.values[0]

    def test_offsite_pair_symmetry(self):
        seq = dnls_offsite(10.0, 1.0, 8)
        u = reflect(seq, 5)
        s = np.arange(-5, 6)
        # g_s = g_{-(s-1)}: mirror symmetry about the bond between sites 0 and 1
        for i, si in enumerate(s):
            if -5 <= 1 - si <= 5:
                j = int(np.where(s == 1 - si)[0][0])
                assert u[i] == u[j]

    def test_halfwidth_guard(self):
        seq = dnls_onsite(10.0, 1.0, 8)
        with pytest.raises(ValueError):
            reflect(seq, 9)


class TestResidualSup:
    def test_dnls_onsite_matches_exact_formula(self):
        for w in (10.0, 100.0):
            seq = dnls_onsite(w, 1.0, 200)
            rho = 1.0 / w
            sup, tail = residual_sup(seq, window=0)
            assert tail == 0.0
            assert abs(sup - dnls_onsite_residual_exact(rho, 0)) < 1e-12

    @pytest.mark.parametrize("alpha", [0.5, 1.5])
    def test_fdnls_onsite_ladder(self, alpha):
        kern = power_law_kernel(alpha)
        sups = []
        for w in (1e2, 1e3, 1e4):
            seq = fdnls_onsite(w, 1.0, kern, 128)
            sup, _ = residual_sup(seq, window=32)
            sups.append(sup)
        assert sups[0] > sups[1] > sups[2]
        rhos = [1e-2, 1e-3, 1e-4]
        slopes = [s / r for s, r in zip(sups, rhos)]
        assert max(slopes) < 10.0 * min(slopes)

    def test_fdnls_offsite_decreases(self):
        kern = power_law_kernel(1.0)
        sups = []
        for w in (1e2, 1e3):
            seq = fdnls_offsite(w, 1.0, kern, 128)
            sup, _ = residual_sup(seq, window=32)
            sups.append(sup)
        assert sups[1] < sups[0]

    def test_window_guard(self):
        seq = dnls_onsite(10.0, 1.0, 16)
        with pytest.raises(ValueError):
            residual_sup(seq, window=16)


class TestTailDiagnostics:
    def test_fdnls_doubling_ratio(self):
        kern = power_law_kernel(1.5)
        seq = fdnls_onsite(1e3, 1.0, kern, 128)
        rep = tail_diagnostics(seq)
        assert abs(rep["doubling_ratios"][32] / 2.0 ** -2.5 - 1.0) < 0.05

    @pytest.mark.parametrize("alpha", [0.5, 1.5])
    def test_fdnls_exponent(self, alpha):
        kern = power_law_kernel(alpha)
        seq = fdnls_onsite(1e3, 1.0, kern, 256)
        rep = tail_diagnostics(seq)
        assert abs(rep["algebraic_exponent"] - (1.0 + alpha)) < 0.05

    def test_dnls_log_linear(self):
        seq = dnls_onsite(1e2, 1.0, 128)
        rep = tail_diagnostics(seq)
        assert abs(rep["log_linear_slope"] - rep["expected_slope"]) < 1e-8

    def test_needs_long_sequence(self):
        with pytest.raises(ValueError):
            tail_diagnostics(dnls_onsite(10.0, 1.0, 32))


class TestBoost:
    def test_zero_velocity_real_symmetric(self):
        state = boost(dnls_onsite(10.0, 1.0, 16), 0.0)
        u = state.amplitudes
        assert np.all(u.imag == 0.0)
        assert np.array_equal(u, u[::-1])

    def test_modulus_preserved(self):
        seq = dnls_onsite(10.0, 1.0, 16)
        u0 = boost(seq, 0.0).amplitudes
        u1 = boost(seq, 1.3).amplitudes
        assert np.max(np.abs(np.abs(u1) - np.abs(u0))) < 1e-14

    def test_mass_invariant(self):
        seq = fdnls_onsite(2.0, 1.0, power_law_kernel(1.0), 32)
        assert abs(mass(boost(seq, 0.7)) - mass(boost(seq, 0.0))) < 1e-12


class TestRhoStar:
    def test_positive_and_monotone_in_margin(self):
        kern = power_law_kernel(1.0)
        r1 = rho_star(0.1, kern)
        r2 = rho_star(0.2, kern)
        assert 0.0 < r1 < r2

    def test_rejects_bad_margin(self):
        with pytest.raises(ValueError):
            rho_star(0.0, power_law_kernel(1.0))
