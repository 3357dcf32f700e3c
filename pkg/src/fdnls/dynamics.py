"""Time evolution of i u'_n = eps*L_alpha u_n + mu*|u_n|^(p-1) u_n.

Fixed-step classical RK4 is the default integrator; for periodic windows a
Strang splitting with an exact linear substep (circulant diagonalization) is
available as an independent cross-check.  Mass, energy, peak position and
sup-norm are tracked along the run.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .lattice import BoundaryCondition, DiscreteOperator, LatticeState

__all__ = [
    "NumericalAbort",
    "SimConfig",
    "DiagnosticsSeries",
    "mass",
    "energy",
    "step_rk4",
    "integrate",
    "peak_trace",
]


class NumericalAbort(RuntimeError):
    """Raised when the integration produces non-finite amplitudes."""


@dataclass
class SimConfig:
    operator: DiscreteOperator
    dt: float = 1e-3
    t_end: float = 1.0
    nonlin_sign: int = -1  # mu; -1 reproduces the focusing cubic model
    power: int = 3
    record_every: int = 100
    rng_seed: int = 42
    method: str = "rk4"
    enforce_guard: bool = True

    def __post_init__(self):
        if self.nonlin_sign not in (-1, 0, +1):
            raise ValueError("nonlinearity sign must be -1, 0 or +1")
        if self.power < 3 or self.power % 2 == 0:
            if self.nonlin_sign != 0:
                raise ValueError("nonlinearity power must be odd and >= 3")
        if self.dt == 0 or self.t_end <= 0:
            raise ValueError("dt must be nonzero and t_end positive")
        if self.enforce_guard:
            lam = self.operator.eps * self.operator.norm_bound()
            if abs(self.dt) * lam > 0.1:
                raise ValueError(
                    f"stability guard violated: dt*||op|| = {abs(self.dt) * lam:.3g} > 0.1"
                )


@dataclass
class DiagnosticsSeries:
    times: np.ndarray
    mass: np.ndarray
    energy: np.ndarray
    peak_index: np.ndarray
    sup_norm: np.ndarray

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "mass", "energy", "peak_index", "sup_norm"])
            for row in zip(self.times, self.mass, self.energy, self.peak_index, self.sup_norm):
                writer.writerow([repr(row[0]), repr(row[1]), repr(row[2]), int(row[3]), repr(row[4])])


def mass(state: LatticeState) -> float:
    """Particle number sum |u_n|^2."""
    return float(np.sum(np.abs(state.amplitudes) ** 2))


def energy(state: LatticeState, op: DiscreteOperator) -> float:
    """Hamiltonian (eps/2)<L u, u> + mu/(p+1) sum |u|^(p+1) with mu=-1, p=3.

    The kinetic part goes through the operator's fast apply.
    """
    return _energy(state.amplitudes, op, -1, 3)


def _energy(u: np.ndarray, op: DiscreteOperator, mu: int, p: int) -> float:
    kin = 0.5 * float(np.real(np.vdot(u, op.apply(u))))
    if mu == 0:
        return kin
    return kin + mu / (p + 1.0) * float(np.sum(np.abs(u) ** (p + 1)))


def _rhs(u: np.ndarray, op: DiscreteOperator, mu: int, p: int) -> np.ndarray:
    lin = op.apply(u)
    if mu == 0:
        return -1j * lin
    return -1j * (lin + mu * np.abs(u) ** (p - 1) * u)


def step_rk4(state: LatticeState, config: SimConfig) -> LatticeState:
    """One classical fourth-order step; aborts on non-finite output."""
    u = state.amplitudes
    op, mu, p, dt = config.operator, config.nonlin_sign, config.power, config.dt
    k1 = _rhs(u, op, mu, p)
    k2 = _rhs(u + 0.5 * dt * k1, op, mu, p)
    k3 = _rhs(u + 0.5 * dt * k2, op, mu, p)
    k4 = _rhs(u + dt * k3, op, mu, p)
    out = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise NumericalAbort(f"non-finite amplitudes at t={state.time + dt:g}")
    return LatticeState(out, state.time + dt, state.bc)


def _step_strang(u: np.ndarray, config: SimConfig, phase: np.ndarray) -> np.ndarray:
    """Strang splitting with exact substeps (periodic windows only)."""
    mu, p, dt = config.nonlin_sign, config.power, config.dt
    if mu != 0:
        u = u * np.exp(-1j * mu * (0.5 * dt) * np.abs(u) ** (p - 1))
    u = np.fft.ifft(phase * np.fft.fft(u))
    if mu != 0:
        u = u * np.exp(-1j * mu * (0.5 * dt) * np.abs(u) ** (p - 1))
    if not np.all(np.isfinite(u)):
        raise NumericalAbort("non-finite amplitudes in splitting step")
    return u


def integrate(initial: LatticeState, config: SimConfig):
    """March to t_end, recording diagnostics every record_every steps.

    Returns (final state, DiagnosticsSeries).  The peak index is reported in
    lattice coordinates (site -N..N resp. -N..N-1), lowest site on ties.
    """
    op = config.operator
    if initial.size != op.size:
        raise ValueError("initial state does not match operator window")
    n_steps = int(round(config.t_end / abs(config.dt)))
    offset = -op.N  # window start in lattice coordinates
    phase = None
    if config.method == "strang":
        if op.bc is not BoundaryCondition.PERIODIC:
            raise ValueError("splitting requires the periodic operator")
        phase = np.exp(-1j * config.dt * op.eps * op.eigenvalues())
    elif config.method != "rk4":
        raise ValueError(f"unknown integrator {config.method!r}")

    times, masses, energies, peaks, sups = [], [], [], [], []

    def record(u, t):
        times.append(t)
        masses.append(float(np.sum(np.abs(u) ** 2)))
        energies.append(_energy(u, op, config.nonlin_sign, config.power))
        absu = np.abs(u)
        sup = float(np.max(absu))
        # site 0 for the zero state; otherwise lowest site among the maxima
        peaks.append(int(np.argmax(absu)) + offset if sup > 0.0 else 0)
        sups.append(sup)

    u = initial.amplitudes.copy()
    t = initial.time
    record(u, t)
    state = LatticeState(u, t, initial.bc)
    for step in range(1, n_steps + 1):
        if config.method == "strang":
            u = _step_strang(state.amplitudes, config, phase)
            state = LatticeState(u, state.time + config.dt, state.bc)
        else:
            state = step_rk4(state, config)
        if step % config.record_every == 0 or step == n_steps:
            record(state.amplitudes, state.time)

    diag = DiagnosticsSeries(
        times=np.asarray(times),
        mass=np.asarray(masses),
        energy=np.asarray(energies),
        peak_index=np.asarray(peaks, dtype=int),
        sup_norm=np.asarray(sups),
    )
    return state, diag


def peak_trace(diag: DiagnosticsSeries):
    """(times, peak positions) extracted from a diagnostics series."""
    return diag.times, diag.peak_index
