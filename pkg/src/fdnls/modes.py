"""Asymptotic onsite/offsite stationary profiles and their diagnostics.

The profiles solve -w Q = eps*L Q - Q^3 approximately as rho = eps/w -> 0.
For nearest-neighbor coupling they are explicit geometric sequences; for the
long-range kernel they come from a recurrence in which every new term feeds
on all previous ones, and the tails decay algebraically like J_n itself.

Index conventions: onsite values are q_0..q_N with q_{-n} = q_n; offsite
values are g_0..g_N with g_1 = g_0 and g_{-n} = g_{n+1} (the profile peaks
on the site pair 0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .kernels import Kernel, tail_bound
from .lattice import BoundaryCondition, LatticeState

__all__ = [
    "ModeSequence",
    "dnls_onsite",
    "dnls_offsite",
    "fdnls_onsite",
    "fdnls_offsite",
    "reflect",
    "residual_sup",
    "tail_diagnostics",
    "rho_star",
    "boost",
]


@dataclass(frozen=True)
class ModeSequence:
    kind: str  # "onsite" | "offsite"
    model: str  # "dnls" | "fdnls"
    w: float
    eps: float
    values: np.ndarray  # one-sided, index 0..N
    kernel: Optional[Kernel] = None

    def __post_init__(self):
        if self.kind not in ("onsite", "offsite"):
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if self.model not in ("dnls", "fdnls"):
            raise ValueError(f"unknown model {self.model!r}")

    @property
    def N(self) -> int:
        return self.values.size - 1

    @property
    def rho(self) -> float:
        return self.eps / self.w


def _check_params(w: float, eps: float, N: int) -> None:
    if w <= 0 or eps <= 0:
        raise ValueError("w and eps must be positive")
    if N < 1:
        raise ValueError("N must be >= 1")


def dnls_onsite(w: float, eps: float, N: int) -> ModeSequence:
    """q_n = (eps/(w+2eps))^n * sqrt(w+2eps)."""
    _check_params(w, eps, N)
    ratio = eps / (w + 2.0 * eps)
    vals = math.sqrt(w + 2.0 * eps) * ratio ** np.arange(N + 1)
    return ModeSequence("onsite", "dnls", w, eps, vals)


def dnls_offsite(w: float, eps: float, N: int) -> ModeSequence:
    """g_n = (eps/(w+2eps))^(n-1) * sqrt(w+eps) for n >= 1, g_0 = g_1."""
    _check_params(w, eps, N)
    ratio = eps / (w + 2.0 * eps)
    n = np.arange(N + 1)
    vals = math.sqrt(w + eps) * ratio ** np.maximum(n - 1, 0)
    return ModeSequence("offsite", "dnls", w, eps, vals)


def fdnls_onsite(w: float, eps: float, kernel: Kernel, N: int) -> ModeSequence:
    """Long-range onsite recurrence.

    q_0 = sqrt(w + 2 eps J) and each q_n collects couplings to q_0 and to
    every earlier q_m through both J_{n-m} and J_{n+m}.
    """
    _check_params(w, eps, N)
    J = kernel.total
    prof = kernel.profile(2 * N + 1)  # J_1..J_{2N+1}

    def jj(d):  # J_d for d >= 1
        return prof[d - 1]

    q = np.empty(N + 1)
    q[0] = math.sqrt(w + 2.0 * eps * J)
    for n in range(1, N + 1):
        acc = jj(n) * q[0]
        if n > 1:
            m = np.arange(1, n)
            acc += np.sum((prof[n - m - 1] + prof[n + m - 1]) * q[1:n])
        q[n] = eps * acc / (eps * (2.0 * J - jj(2 * n)) + w)
    return ModeSequence("onsite", "fdnls", w, eps, q, kernel=kernel)


def fdnls_offsite(w: float, eps: float, kernel: Kernel, N: int) -> ModeSequence:
    """Long-range offsite recurrence with the pair anchor g_1 = g_0."""
    _check_params(w, eps, N)
    J = kernel.total
    prof = kernel.profile(2 * N + 1)
    g = np.empty(N + 1)
    g[0] = math.sqrt(w + eps * (2.0 * J - prof[0]))
    if N >= 1:
        g[1] = g[0]
    for n in range(2, N + 1):
        m = np.arange(1, n)
        acc = np.sum((prof[n - m - 1] + prof[n + m - 2]) * g[1:n])
        g[n] = eps * acc / (eps * (2.0 * J - prof[2 * n - 2]) + w)
    return ModeSequence("offsite", "fdnls", w, eps, g, kernel=kernel)


def reflect(seq: ModeSequence, halfwidth: int) -> np.ndarray:
    """Profile u_s on sites -halfwidth..halfwidth via the parity rule."""
    if halfwidth > seq.N - (1 if seq.kind == "offsite" else 0):
        raise ValueError("halfwidth exceeds available one-sided values")
    s = np.arange(-halfwidth, halfwidth + 1)
    if seq.kind == "onsite":
        return seq.values[np.abs(s)]
    idx = np.where(s >= 1, s, 1 - s)  # g_s for s>=1, g_{1-s} for s<=0
    return seq.values[idx]


def _tail_model_coeff(seq: ModeSequence):
    """First-order tail model u_m ~ coeff(m) for m > N (power-law kernels)."""
    rho = seq.rho
    k = seq.kernel
    if seq.model == "dnls" or k is None or not k.is_power_law:
        return None
    if seq.kind == "onsite":
        return lambda m: rho * seq.values[0] * m ** (-(1.0 + k.alpha))
    return lambda m: rho * seq.values[0] * (
        m ** (-(1.0 + k.alpha)) + (m - 1.0) ** (-(1.0 + k.alpha))
    )


def residual_sup(
    seq: ModeSequence,
    window: int,
    w: Optional[float] = None,
    eps: Optional[float] = None,
    kernel: Optional[Kernel] = None,
    tail_terms: int = 20000,
):
    """Sup over |n| <= window of |(-w u_n)/(eps * L u_n - u_n^3) - 1|.

    The operator is applied on the infinite lattice: exact values out to the
    sequence length, then the first-order tail model u_m ~ rho J_m u_0.
    Returns (sup residual, bound on the neglected tail contribution).
    w/eps/kernel default to the sequence's own parameters.
    """
    w = seq.w if w is None else w
    eps = seq.eps if eps is None else eps
    kernel = seq.kernel if kernel is None else kernel
    if seq.model == "dnls":
        from .kernels import nearest_neighbor_kernel

        kernel = nearest_neighbor_kernel()
    N = seq.N - (1 if seq.kind == "offsite" else 0)
    if window > N - 1:
        raise ValueError("window too large for the sequence length")
    u = reflect(seq, N)  # sites -N..N
    prof = kernel.profile(2 * N + tail_terms + 2 * window + 2)
    J = kernel.total
    sites = np.arange(-N, N + 1)
    model = _tail_model_coeff(seq)

    sup = 0.0
    tail_bound_total = 0.0
    for n in range(-window, window + 1):
        dist = np.abs(sites - n)
        mask = dist > 0
        coupling = np.sum(prof[dist[mask] - 1] * u[mask])
        tail = 0.0
        if model is not None:
            m = np.arange(N + 1, N + tail_terms + 1, dtype=float)
            um = model(m)
            tail = float(np.sum(prof[(m - n).astype(int) - 1] * um)
                         + np.sum(prof[(m + n).astype(int) - 1] * um))
            # remainder beyond the modeled range
            rem = model(float(N + tail_terms + 1)) * 2.0 * tail_bound(kernel, tail_terms)
            tail_bound_total = max(tail_bound_total, abs(rem))
        un = u[n + N]
        lhs = -w * un
        denom = eps * (2.0 * J * un - coupling - tail) - un ** 3
        if abs(denom) < 1e-300:
            raise ZeroDivisionError(f"near-zero stationary denominator at site {n}")
        sup = max(sup, abs(lhs / denom - 1.0))
    return sup, tail_bound_total


def dnls_onsite_residual_exact(rho: float, n: int) -> float:
    """Closed-form residual of the nearest-neighbor onsite profile."""
    if n == 0:
        return abs(1.0 / (1.0 + 2.0 * rho ** 2 / (1.0 + 2.0 * rho)) - 1.0)
    return abs(
        1.0 / (1.0 + rho ** 2 / (1.0 + 2.0 * rho) + rho ** (2 * n) * (1.0 + 2.0 * rho) ** (1 - 2 * n))
        - 1.0
    )


def tail_diagnostics(seq: ModeSequence) -> dict:
    """Decay diagnostics: doubling ratios and the fitted tail exponent.

    For long-range kernels the tail is algebraic and the log-log fit over
    n in [N/4, N] estimates the exponent (expected 1+alpha); the
    nearest-neighbor profiles are log-linear instead and the report carries
    the per-step log slope.
    """
    if seq.N < 64:
        raise ValueError("tail diagnostics need N >= 64")
    vals = seq.values
    ratios = {n: float(vals[2 * n] / vals[n]) for n in (8, 16, 32) if 2 * n <= seq.N}
    n_fit = np.arange(seq.N // 4, seq.N + 1)
    n_fit = n_fit[vals[n_fit] > 0.0]  # geometric tails underflow eventually
    if n_fit.size < 8:
        raise ValueError("too few positive tail values for a decay fit")
    y = np.log(vals[n_fit])
    report = {"doubling_ratios": ratios, "model": seq.model}
    if seq.model == "fdnls":
        slope, _ = np.polyfit(np.log(n_fit), y, 1)
        report["algebraic_exponent"] = float(-slope)
    else:
        slope, _ = np.polyfit(n_fit, y, 1)
        report["log_linear_slope"] = float(slope)
        report["expected_slope"] = math.log(seq.rho / (1.0 + 2.0 * seq.rho))
    return report


def rho_star(eps1: float, kernel: Kernel, n_onset: Optional[int] = None) -> float:
    """Smallness threshold for the uniform tail bracket with margin eps1.

    n_onset is the index beyond which J_n tracks its power-law envelope to
    within a factor 3/2; exact power-law kernels satisfy this at n = 1.
    """
    if eps1 <= 0:
        raise ValueError("eps1 must be positive")
    J = kernel.total
    if n_onset is None:
        if kernel.is_power_law:
            n_onset = 1
        else:
            raise ValueError("n_onset must be supplied for non-power-law kernels")
    n = np.arange(2, 2 * n_onset + 1)
    mid = np.inf
    if n.size:
        jn = kernel.profile(2 * n_onset)[n - 1]
        mid = float(np.min(eps1 * jn / (2.0 * (1.0 + eps1) * (n - 1) * J ** 2)))
    last = eps1 / (3.0 * (1.0 + 2.0 ** (2.0 + kernel.alpha)) * (1.0 + eps1) * J)
    return min(eps1 / (2.0 * J), mid, last)


def boost(seq: ModeSequence, v: float, halfwidth: Optional[int] = None) -> LatticeState:
    """Initial data e^{i v n} * profile on a Dirichlet window."""
    if halfwidth is None:
        halfwidth = seq.N - (1 if seq.kind == "offsite" else 0)
    s = np.arange(-halfwidth, halfwidth + 1)
    u = reflect(seq, halfwidth) * np.exp(1j * v * s)
    return LatticeState(u, 0.0, BoundaryCondition.DIRICHLET)
