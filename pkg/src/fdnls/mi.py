"""Modulational instability of the plane-wave state u_n = A exp(i A^2 t).

Linearizing around the plane wave gives the dispersion relation
Omega^2 = 4 eps wt (eps wt - A^2) with wt(k) = sum_m J_m (1 - cos k m);
the wave is unstable exactly where eps*wt(k) < A^2, and for amplitudes
below A0 the most unstable wavenumber solves wt(k) = A^2 / (2 eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import Kernel, riemann_zeta
from .lattice import dispersion_series

__all__ = [
    "MiQuery",
    "w_tilde",
    "phi",
    "omega_squared",
    "is_unstable",
    "threshold_amplitude",
    "amplitude_A0",
    "k_max",
]


@dataclass(frozen=True)
class MiQuery:
    k: float
    A: float
    eps: float
    kernel: Kernel
    tol: float = 1e-10

    def __post_init__(self):
        if abs(self.k) > math.pi + 1e-12:
            raise ValueError(f"wavenumber must lie in [-pi, pi], got {self.k}")
        if self.A <= 0 or self.eps <= 0 or self.tol <= 0:
            raise ValueError("A, eps and tol must be positive")


def w_tilde(k, kernel: Kernel, tol: float = 1e-10):
    """sum_{m>=1} J_m (1 - cos k m); even in k, zero at k = 0."""
    return dispersion_series(k, kernel, tol)


def phi(q: MiQuery) -> float:
    """Instability discriminant eps * wt(k) - A^2 (negative means unstable)."""
    return q.eps * w_tilde(q.k, q.kernel, q.tol) - q.A ** 2


def omega_squared(q: MiQuery) -> float:
    """4 * eps * wt * (eps * wt - A^2); negative values are exponential gain."""
    wt = w_tilde(q.k, q.kernel, q.tol)
    return 4.0 * q.eps * wt * (q.eps * wt - q.A ** 2)


def is_unstable(q: MiQuery) -> bool:
    """Strict instability criterion phi < 0."""
    return phi(q) < 0.0


def threshold_amplitude(k: float, eps: float, kernel: Kernel, tol: float = 1e-10) -> float:
    """Marginal amplitude A(k) = sqrt(eps * wt(k)); k = 0 is degenerate."""
    if k == 0.0:
        raise ValueError("threshold amplitude is degenerate at k = 0")
    if eps <= 0:
        raise ValueError("eps must be positive")
    return math.sqrt(eps * w_tilde(abs(k), kernel, tol))


def amplitude_A0(eps: float, alpha: float) -> float:
    """A0 = sqrt(4 eps (1 - 2^(-(1+alpha))) zeta(1+alpha)).

    Above this amplitude the gain is maximized at the zone edge k = pi.
    """
    if eps <= 0 or alpha <= 0:
        raise ValueError("eps and alpha must be positive")
    return math.sqrt(4.0 * eps * (1.0 - 2.0 ** (-(1.0 + alpha))) * riemann_zeta(1.0 + alpha))


def k_max(A: float, eps: float, kernel: Kernel, tol: float = 1e-10) -> float:
    """Most unstable wavenumber.

    For 0 < A < A0 this is the unique root of wt(k) = A^2/(2 eps) in
    (0, pi), located by bisection to |dk| <= 1e-12 (wt is increasing on
    (0, pi)); for A >= A0 the minimum of Omega^2 sits at the zone edge
    and pi is returned.
    """
    if A <= 0 or eps <= 0:
        raise ValueError("A and eps must be positive")
    target = A ** 2 / (2.0 * eps)
    if w_tilde(math.pi, kernel, tol) <= target:
        return math.pi
    lo, hi = 0.0, math.pi
    # bisection: w_tilde(lo) - target < 0 <= w_tilde(hi) - target
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if w_tilde(mid, kernel, tol) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
