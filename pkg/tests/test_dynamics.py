import math

import numpy as np
import pytest
import scipy.linalg

from fdnls import (
    BoundaryCondition,
    DiagnosticsSeries,
    LatticeState,
    NumericalAbort,
    SimConfig,
    build_dirichlet,
    build_periodic,
    dnls_onsite,
    boost,
    energy,
    integrate,
    mass,
    peak_trace,
    power_law_kernel,
    step_rk4,
)


def periodic_state(u):
    return LatticeState(np.asarray(u, dtype=complex), 0.0, BoundaryCondition.PERIODIC)


def dirichlet_state(u):
    return LatticeState(np.asarray(u, dtype=complex), 0.0, BoundaryCondition.DIRICHLET)


class TestMass:
    def test_zero_state(self):
        assert mass(dirichlet_state(np.zeros(5))) == 0.0

    def test_unit_impulse(self):
        u = np.zeros(5)
        u[2] = 1.0
        assert mass(dirichlet_state(u)) == 1.0

    def test_onsite_geometric_series(self):
        w, eps, N = 100.0, 1.0, 50
        state = boost(dnls_onsite(w, eps, N), 0.0)
        rho = eps / w
        r = rho / (1.0 + 2.0 * rho)
        n = np.arange(-N, N + 1)
        expected = float(np.sum(r ** (2 * np.abs(n)) * (w + 2 * eps)))
        assert abs(mass(state) - expected) < 1e-10 * expected


class TestEnergy:
    def test_zero_state(self):
        op = build_dirichlet(2, 1.0, power_law_kernel(1.0))
        assert energy(dirichlet_state(np.zeros(5)), op) == 0.0

    def test_periodic_constant(self):
        N, A = 16, 1.3
        op = build_periodic(N, 1.0, 1.0)
        st = periodic_state(A * np.ones(2 * N))
        assert abs(energy(st, op) + 2 * N * A ** 4 / 4.0) < 1e-10

    def test_kinetic_quadratic_form_identity(self):
        rng = np.random.default_rng(3)
        N, eps = 24, 0.7
        kern = power_law_kernel(1.3)
        op = build_dirichlet(N, eps, kern)
        u = rng.standard_normal(2 * N + 1) + 1j * rng.standard_normal(2 * N + 1)
        st = dirichlet_state(u)
        kin = energy(st, op) + 0.25 * float(np.sum(np.abs(u) ** 4))
        sites = np.arange(-N, N + 1)
        double = 0.0
        for i, n in enumerate(sites):
            for j, m in enumerate(sites):
                if n != m:
                    double += kern.j(abs(n - m)) * abs(u[i] - u[j]) ** 2
        assert abs(kin - eps * double / 4.0) < 1e-10


class TestStepRk4:
    def test_zero_fixed_point(self):
        op = build_dirichlet(4, 1.0, power_law_kernel(1.0))
        cfg = SimConfig(op, dt=1e-3, t_end=1.0)
        out = step_rk4(dirichlet_state(np.zeros(9)), cfg)
        assert np.all(out.amplitudes == 0.0)

    def test_cw_one_step_order(self):
        N, A = 16, 1.0
        op = build_periodic(N, 1.0, 1.0)
        for dt in (1e-2, 5e-3):
            cfg = SimConfig(op, dt=dt, t_end=1.0)
            st = periodic_state(A * np.ones(2 * N))
            out = step_rk4(st, cfg)
            exact = A * np.exp(1j * A ** 2 * dt)
            err = np.max(np.abs(out.amplitudes - exact))
            assert err < 10.0 * dt ** 5

    def test_linear_only_matches_matrix_exponential(self):
        N = 16
        op = build_dirichlet(N, 1.0, power_law_kernel(1.0))
        cfg = SimConfig(op, dt=1e-3, t_end=1.0, nonlin_sign=0)
        u0 = np.zeros(2 * N + 1, dtype=complex)
        u0[N] = 1.0
        final, _ = integrate(dirichlet_state(u0), cfg)
        prop = scipy.linalg.expm(-1j * op.eps * op.dense())
        assert np.max(np.abs(final.amplitudes - prop @ u0)) < 1e-8

    def test_abort_on_nonfinite(self):
        op = build_dirichlet(4, 1.0, power_law_kernel(1.0))
        cfg = SimConfig(op, dt=1e-3, t_end=1.0)
        huge = dirichlet_state(np.full(9, 1e160))
        with pytest.raises(NumericalAbort):
            step_rk4(huge, cfg)


class TestIntegrate:
    def test_cw_conservation(self):
        N = 32
        op = build_periodic(N, 1.0, 1.0)
        cfg = SimConfig(op, dt=1e-3, t_end=2.0, record_every=200)
        final, diag = integrate(periodic_state(np.ones(2 * N)), cfg)
        drift = np.abs(diag.mass - diag.mass[0]) / diag.mass[0]
        assert np.max(drift) < 1e-10

    def test_strang_cross_check(self):
        N = 32
        op = build_periodic(N, 1.0, 1.0)
        rng = np.random.default_rng(5)
        u0 = 0.5 * (rng.standard_normal(2 * N) + 1j * rng.standard_normal(2 * N))
        a, _ = integrate(periodic_state(u0), SimConfig(op, dt=5e-4, t_end=1.0))
        b, _ = integrate(
            periodic_state(u0), SimConfig(op, dt=5e-4, t_end=1.0, method="strang")
        )
        assert np.max(np.abs(a.amplitudes - b.amplitudes)) < 1e-5

    def test_time_reversal(self):
        N = 16
        op = build_dirichlet(N, 1.0, power_law_kernel(2.0))
        rng = np.random.default_rng(7)
        u0 = 0.3 * (rng.standard_normal(2 * N + 1) + 1j * rng.standard_normal(2 * N + 1))
        fwd, _ = integrate(dirichlet_state(u0), SimConfig(op, dt=1e-3, t_end=1.0))
        back, _ = integrate(fwd, SimConfig(op, dt=-1e-3, t_end=1.0))
        assert np.max(np.abs(back.amplitudes - u0)) < 1e-6

    def test_gauge_covariance(self):
        N = 12
        op = build_dirichlet(N, 1.0, power_law_kernel(1.0))
        rng = np.random.default_rng(11)
        u0 = 0.4 * (rng.standard_normal(2 * N + 1) + 1j * rng.standard_normal(2 * N + 1))
        theta = 0.83
        a, _ = integrate(dirichlet_state(u0), SimConfig(op, dt=1e-3, t_end=0.5))
        b, _ = integrate(
            dirichlet_state(np.exp(1j * theta) * u0), SimConfig(op, dt=1e-3, t_end=0.5)
        )
        assert np.max(np.abs(np.abs(a.amplitudes) - np.abs(b.amplitudes))) < 1e-12

    def test_stability_guard(self):
        op = build_dirichlet(8, 1.0, power_law_kernel(0.5))
        with pytest.raises(ValueError):
            SimConfig(op, dt=1.0, t_end=2.0)

    def test_window_mismatch(self):
        op = build_dirichlet(8, 1.0, power_law_kernel(1.0))
        with pytest.raises(ValueError):
            integrate(dirichlet_state(np.zeros(5)), SimConfig(op, dt=1e-3, t_end=0.1))


class TestPeakTrace:
    def test_stationary_profile_constant_peak(self):
        st = boost(dnls_onsite(1.0, 1.0, 32), 0.0)
        op = build_dirichlet(32, 1.0, power_law_kernel(20.0))
        _, diag = integrate(st, SimConfig(op, dt=1e-2, t_end=2.0, record_every=20))
        times, peaks = peak_trace(diag)
        assert np.all(peaks == 0)
        assert np.all(np.diff(times) > 0)

    def test_zero_state_tie_break(self):
        op = build_dirichlet(4, 1.0, power_law_kernel(1.0))
        _, diag = integrate(
            dirichlet_state(np.zeros(9)), SimConfig(op, dt=1e-2, t_end=0.1, record_every=5)
        )
        assert np.all(diag.peak_index == 0)

    def test_csv_header(self, tmp_path):
        d = DiagnosticsSeries(
            times=np.array([0.0]), mass=np.array([1.0]), energy=np.array([0.5]),
            peak_index=np.array([0]), sup_norm=np.array([1.0]),
        )
        path = tmp_path / "diag.csv"
        d.to_csv(path)
        assert path.read_text().splitlines()[0] == "t,mass,energy,peak_index,sup_norm"
